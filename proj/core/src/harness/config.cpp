#include "gibbslab/harness/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "gibbslab/errors.hpp"
#include "gibbslab/numerics/rng.hpp"

namespace gibbslab::harness {

using nlohmann::json;

namespace {

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError("'" + (where.empty() ? std::string("<root>") : where) + "' must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items()) {
        if (!ok.count(k)) throw ConfigError("unknown key '" + join(where, k) + "'");
    }
}

template <class T>
T get(const json& j, const std::string& where, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw ConfigError("");
        } else if constexpr (std::is_arithmetic_v<T>) {
            if (!v.is_number()) throw ConfigError("");
            if constexpr (std::is_unsigned_v<T>) {
                if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError("");
            }
        } else {
            if (!v.is_string()) throw ConfigError("");
        }
        return v.get<T>();
    } catch (const std::exception&) {
        throw ConfigError("key '" + join(where, key) + "' has the wrong type");
    }
}

ThetaUpdate::Kind theta_kind(const std::string& s, const std::string& where) {
    if (s == "auto") return ThetaUpdate::Kind::Auto;
    if (s == "exact") return ThetaUpdate::Kind::Exact;
    if (s == "mh") return ThetaUpdate::Kind::RandomWalkMH;
    if (s == "grid") return ThetaUpdate::Kind::GridInverseCDF;
    throw ConfigError("key '" + where + "' must be one of auto, exact, mh, grid");
}

const char* theta_kind_name(ThetaUpdate::Kind k) {
    switch (k) {
        case ThetaUpdate::Kind::Auto: return "auto";
        case ThetaUpdate::Kind::Exact: return "exact";
        case ThetaUpdate::Kind::RandomWalkMH: return "mh";
        case ThetaUpdate::Kind::GridInverseCDF: return "grid";
    }
    return "auto";
}

LatentUpdate::Kind latent_kind(const std::string& s, const std::string& where) {
    if (s == "auto") return LatentUpdate::Kind::Auto;
    if (s == "exact") return LatentUpdate::Kind::Exact;
    if (s == "mh") return LatentUpdate::Kind::RandomWalkMH;
    if (s == "single_site") return LatentUpdate::Kind::SingleSiteMH;
    throw ConfigError("key '" + where + "' must be one of auto, exact, mh, single_site");
}

const char* latent_kind_name(LatentUpdate::Kind k) {
    switch (k) {
        case LatentUpdate::Kind::Auto: return "auto";
        case LatentUpdate::Kind::Exact: return "exact";
        case LatentUpdate::Kind::RandomWalkMH: return "mh";
        case LatentUpdate::Kind::SingleSiteMH: return "single_site";
    }
    return "auto";
}

}  // namespace

SamplerConfig parse_sampler(const json& j, const std::string& where) {
    only_keys(j, where,
              {"iterations", "burn_in", "thin", "theta0", "direct_aux", "record_functionals", "noncentered_first",
               "pilot_iterations", "theta_update", "x_update"});
    SamplerConfig c;
    c.iterations = get<std::size_t>(j, where, "iterations", c.iterations);
    c.burn_in = get<std::size_t>(j, where, "burn_in", c.burn_in);
    c.thin = get<std::size_t>(j, where, "thin", c.thin);
    if (j.contains("theta0") && !j.at("theta0").is_null()) c.theta0 = get<double>(j, where, "theta0", 0.0);
    c.direct_aux = get<bool>(j, where, "direct_aux", true);
    c.record_functionals = get<bool>(j, where, "record_functionals", c.record_functionals);
    c.noncentered_first = get<bool>(j, where, "noncentered_first", c.noncentered_first);
    c.pilot_iterations = get<std::size_t>(j, where, "pilot_iterations", c.pilot_iterations);
    if (j.contains("theta_update")) {
        const std::string w = join(where, "theta_update");
        const json& t = j.at("theta_update");
        only_keys(t, w, {"kind", "step_sd", "repeats", "grid"});
        c.theta_update.kind = theta_kind(get<std::string>(t, w, "kind", "auto"), join(w, "kind"));
        c.theta_update.step_sd = get<double>(t, w, "step_sd", 0.0);
        c.theta_update.repeats = get<int>(t, w, "repeats", 1);
        if (t.contains("grid") && !t.at("grid").is_null()) {
            const std::string gw = join(w, "grid");
            const json& g = t.at("grid");
            only_keys(g, gw, {"lo", "hi", "points", "hard_lo", "hard_hi"});
            GridSpec spec;
            spec.lo = get<double>(g, gw, "lo", spec.lo);
            spec.hi = get<double>(g, gw, "hi", spec.hi);
            spec.points = get<std::size_t>(g, gw, "points", spec.points);
            spec.hard_lo = get<bool>(g, gw, "hard_lo", false);
            spec.hard_hi = get<bool>(g, gw, "hard_hi", false);
            c.theta_update.grid = spec;
        }
    }
    if (j.contains("x_update")) {
        const std::string w = join(where, "x_update");
        const json& x = j.at("x_update");
        only_keys(x, w, {"kind", "step_sd", "repeats"});
        c.x_update.kind = latent_kind(get<std::string>(x, w, "kind", "auto"), join(w, "kind"));
        c.x_update.step_sd = get<double>(x, w, "step_sd", 0.0);
        c.x_update.repeats = get<int>(x, w, "repeats", 0);
    }
    try {
        c.validate();
    } catch (const Error& e) {
        throw ConfigError("'" + where + "': " + e.what());
    }
    return c;
}

json sampler_to_json(const SamplerConfig& c) {
    json j;
    j["iterations"] = c.iterations;
    j["burn_in"] = c.burn_in;
    j["thin"] = c.thin;
    j["theta0"] = c.theta0 ? json(*c.theta0) : json(nullptr);
    j["direct_aux"] = c.direct_aux;
    j["record_functionals"] = c.record_functionals;
    j["noncentered_first"] = c.noncentered_first;
    j["pilot_iterations"] = c.pilot_iterations;
    json t;
    t["kind"] = theta_kind_name(c.theta_update.kind);
    t["step_sd"] = c.theta_update.step_sd;
    t["repeats"] = c.theta_update.repeats;
    if (c.theta_update.grid) {
        const auto& g = *c.theta_update.grid;
        t["grid"] = {{"lo", g.lo}, {"hi", g.hi}, {"points", g.points}, {"hard_lo", g.hard_lo}, {"hard_hi", g.hard_hi}};
    } else {
        t["grid"] = nullptr;
    }
    j["theta_update"] = t;
    j["x_update"] = {{"kind", latent_kind_name(c.x_update.kind)},
                     {"step_sd", c.x_update.step_sd},
                     {"repeats", c.x_update.repeats}};
    return j;
}

SamplerConfig ExperimentConfig::sampler_for(const Parametrization& p) const {
    json merged = sampler;
    const auto it = sampler_overrides.find(p.label());
    if (it != sampler_overrides.end()) merged.merge_patch(it->second);
    SamplerConfig c = parse_sampler(merged, "sampler");
    c.parametrization = p;
    return c;
}

ExperimentConfig parse_config(const json& doc) {
    only_keys(doc, "", {"model", "data", "parametrizations", "sampler", "sampler_overrides", "grid", "replicates", "seed",
                        "output_dir", "compare"});
    ExperimentConfig cfg;

    if (!doc.contains("model")) throw ConfigError("missing key 'model'");
    const json& m = doc.at("model");
    only_keys(m, "model", {"name", "params"});
    cfg.model.name = get<std::string>(m, "model", "name", "");
    if (cfg.model.name.empty()) throw ConfigError("missing key 'model.name'");
    if (m.contains("params")) {
        if (!m.at("params").is_object()) throw ConfigError("'model.params' must be an object");
        cfg.model.params = m.at("params");
    }

    if (doc.contains("data")) {
        const json& d = doc.at("data");
        only_keys(d, "data", {"source", "theta_star", "seed", "values", "path"});
        const std::string src = get<std::string>(d, "data", "source", "synthetic");
        if (src == "synthetic") {
            cfg.data.kind = DataSource::Kind::Synthetic;
        } else if (src == "inline") {
            cfg.data.kind = DataSource::Kind::Inline;
        } else if (src == "file") {
            cfg.data.kind = DataSource::Kind::File;
        } else {
            throw ConfigError("key 'data.source' must be one of synthetic, inline, file");
        }
        cfg.data.theta_star = get<double>(d, "data", "theta_star", 0.0);
        cfg.data.seed = get<std::uint64_t>(d, "data", "seed", 1);
        if (d.contains("values")) {
            if (!d.at("values").is_array()) throw ConfigError("key 'data.values' must be an array");
            for (const auto& v : d.at("values")) {
                if (!v.is_number()) throw ConfigError("key 'data.values' must hold numbers");
                cfg.data.values.push_back(v.get<double>());
            }
        }
        cfg.data.path = get<std::string>(d, "data", "path", "");
        if (cfg.data.kind == DataSource::Kind::Inline && cfg.data.values.empty()) {
            throw ConfigError("key 'data.values' is required for inline data");
        }
        if (cfg.data.kind == DataSource::Kind::File && cfg.data.path.empty()) {
            throw ConfigError("key 'data.path' is required for file data");
        }
    }

    if (!doc.contains("parametrizations")) throw ConfigError("missing key 'parametrizations'");
    const json& ps = doc.at("parametrizations");
    if (!ps.is_array() || ps.empty()) throw ConfigError("key 'parametrizations' must be a non-empty array");
    for (const auto& p : ps) {
        if (!p.is_string()) throw ConfigError("key 'parametrizations' must hold strings");
        try {
            cfg.parametrizations.push_back(Parametrization::parse(p.get<std::string>()));
        } catch (const Error& e) {
            throw ConfigError(std::string("key 'parametrizations': ") + e.what());
        }
    }

    if (doc.contains("sampler")) cfg.sampler = doc.at("sampler");
    // Parse once to reject bad keys early, then keep the resolved form.
    cfg.sampler = sampler_to_json(parse_sampler(cfg.sampler, "sampler"));
    if (doc.contains("sampler_overrides")) {
        const json& o = doc.at("sampler_overrides");
        if (!o.is_object()) throw ConfigError("'sampler_overrides' must be an object");
        for (const auto& [label, patch] : o.items()) {
            Parametrization p;
            try {
                p = Parametrization::parse(label);
            } catch (const Error&) {
                throw ConfigError("unknown key 'sampler_overrides." + label + "'");
            }
            json merged = cfg.sampler;
            merged.merge_patch(patch);
            (void)parse_sampler(merged, "sampler_overrides." + label);
            cfg.sampler_overrides[p.label()] = patch;
        }
    }

    if (!doc.contains("grid")) throw ConfigError("missing key 'grid'");
    const json& g = doc.at("grid");
    if (!g.is_array() || g.empty()) throw ConfigError("key 'grid' must be a non-empty array");
    for (const auto& v : g) {
        if (!v.is_number_integer() || v.get<long long>() <= 0) throw ConfigError("key 'grid' must hold positive integers");
        cfg.grid.push_back(v.get<std::size_t>());
    }
    cfg.replicates = get<std::size_t>(doc, "", "replicates", cfg.replicates);
    if (cfg.replicates < 1) throw ConfigError("key 'replicates' must be >= 1");
    cfg.seed = get<std::uint64_t>(doc, "", "seed", cfg.seed);
    cfg.output_dir = get<std::string>(doc, "", "output_dir", cfg.output_dir);

    if (doc.contains("compare")) {
        const json& c = doc.at("compare");
        only_keys(c, "compare", {"weights", "interleaved", "escape"});
        if (c.contains("weights")) {
            const json& w = c.at("weights");
            if (!w.is_array()) throw ConfigError("key 'compare.weights' must be an array");
            cfg.compare.weights.clear();
            for (const auto& v : w) {
                if (!v.is_number() || v.get<double>() < 0.0 || v.get<double>() > 1.0) {
                    throw ConfigError("key 'compare.weights' must hold numbers in [0, 1]");
                }
                cfg.compare.weights.push_back(v.get<double>());
            }
        }
        cfg.compare.interleaved = get<bool>(c, "compare", "interleaved", true);
        if (c.contains("escape") && !c.at("escape").is_null()) {
            const json& e = c.at("escape");
            only_keys(e, "compare.escape", {"theta0", "radius", "max_iters", "replicates", "center"});
            EscapeSettings es;
            es.theta0 = get<double>(e, "compare.escape", "theta0", es.theta0);
            es.radius = get<double>(e, "compare.escape", "radius", es.radius);
            es.max_iters = get<std::size_t>(e, "compare.escape", "max_iters", es.max_iters);
            es.replicates = get<std::size_t>(e, "compare.escape", "replicates", es.replicates);
            if (e.contains("center") && !e.at("center").is_null()) es.center = get<double>(e, "compare.escape", "center", 0.0);
            if (es.replicates < 31 || es.replicates % 2 == 0) {
                throw ConfigError("key 'compare.escape.replicates' must be odd and >= 31");
            }
            if (!(es.radius > 0.0)) throw ConfigError("key 'compare.escape.radius' must be positive");
            cfg.compare.escape = es;
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
    json j;
    j["model"] = {{"name", cfg.model.name}, {"params", cfg.model.params}};
    json d;
    switch (cfg.data.kind) {
        case DataSource::Kind::Synthetic:
            d["source"] = "synthetic";
            d["theta_star"] = cfg.data.theta_star;
            d["seed"] = cfg.data.seed;
            break;
        case DataSource::Kind::Inline:
            d["source"] = "inline";
            d["values"] = cfg.data.values;
            break;
        case DataSource::Kind::File:
            d["source"] = "file";
            d["path"] = cfg.data.path;
            break;
    }
    j["data"] = d;
    json ps = json::array();
    for (const auto& p : cfg.parametrizations) ps.push_back(p.label());
    j["parametrizations"] = ps;
    j["sampler"] = cfg.sampler;
    json o = json::object();
    for (const auto& [k, v] : cfg.sampler_overrides) o[k] = v;
    j["sampler_overrides"] = o;
    j["grid"] = cfg.grid;
    j["replicates"] = cfg.replicates;
    j["seed"] = cfg.seed;
    j["output_dir"] = cfg.output_dir;
    json c;
    c["weights"] = cfg.compare.weights;
    c["interleaved"] = cfg.compare.interleaved;
    if (cfg.compare.escape) {
        const auto& e = *cfg.compare.escape;
        c["escape"] = {{"theta0", e.theta0},
                       {"radius", e.radius},
                       {"max_iters", e.max_iters},
                       {"replicates", e.replicates},
                       {"center", e.center ? json(*e.center) : json(nullptr)}};
    } else {
        c["escape"] = nullptr;
    }
    j["compare"] = c;
    return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
    // output_dir is where results go, not what they are, so it stays out of the hash.
    json j = to_json(cfg);
    j.erase("output_dir");
    const std::string text = j.dump();
    std::uint64_t h = 0x6A09E667F3BCC909ULL;
    for (unsigned char ch : text) h = hash_combine(h, ch);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace gibbslab::harness
