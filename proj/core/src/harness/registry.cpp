#include "gibbslab/harness/registry.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "gibbslab/errors.hpp"
#include "gibbslab/models/classification.hpp"
#include "gibbslab/models/discretized_sv.hpp"
#include "gibbslab/models/gaussian_hmm.hpp"
#include "gibbslab/models/gmrf_hybrid.hpp"
#include "gibbslab/models/heavy_tail_hmm.hpp"
#include "gibbslab/models/latent_poisson.hpp"
#include "gibbslab/models/nonregular_scale.hpp"
#include "gibbslab/models/observed_diffusion.hpp"
#include "gibbslab/models/repeated_measurements.hpp"
#include "gibbslab/models/rounded_data.hpp"
#include "gibbslab/models/stick_breaking.hpp"
#include "gibbslab/models/stochastic_frontier.hpp"
#include "gibbslab/models/synthetic.hpp"

namespace gibbslab::harness {

using nlohmann::json;

namespace {

// Typed access to model.params with unknown-key rejection.
class ParamReader {
public:
    ParamReader(const json& j, std::initializer_list<const char*> allowed) : j_(j) {
        const std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& [k, v] : j.items()) {
            if (!ok.count(k)) throw ConfigError("unknown key 'model.params." + k + "'");
        }
    }

    double num(const char* key, double fallback) const {
        if (!j_.contains(key)) return fallback;
        if (!j_.at(key).is_number()) throw ConfigError(std::string("key 'model.params.") + key + "' must be a number");
        return j_.at(key).get<double>();
    }
    std::size_t count(const char* key, std::size_t fallback) const {
        if (!j_.contains(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            throw ConfigError(std::string("key 'model.params.") + key + "' must be a non-negative integer");
        }
        return j_.at(key).get<std::size_t>();
    }
    std::string text(const char* key, const std::string& fallback) const {
        if (!j_.contains(key)) return fallback;
        if (!j_.at(key).is_string()) throw ConfigError(std::string("key 'model.params.") + key + "' must be a string");
        return j_.at(key).get<std::string>();
    }
    bool flag(const char* key, bool fallback) const {
        if (!j_.contains(key)) return fallback;
        if (!j_.at(key).is_boolean()) throw ConfigError(std::string("key 'model.params.") + key + "' must be a boolean");
        return j_.at(key).get<bool>();
    }

private:
    const json& j_;
};

std::vector<double> read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open data file '" + path + "'");
    std::vector<double> v;
    double x = 0.0;
    while (in >> x) v.push_back(x);
    if (!in.eof()) throw ConfigError("data file '" + path + "' holds a non-numeric token");
    if (v.empty()) throw ConfigError("data file '" + path + "' is empty");
    return v;
}

RepeatedMeasurements::Params rm_params(const json& j) {
    ParamReader r(j, {"sigma_x", "sigma_y"});
    return {r.num("sigma_x", 1.0), r.num("sigma_y", 1.0)};
}

GaussianHmm::Params hmm_params(const ParamReader& r) {
    GaussianHmm::Params p;
    p.rho = r.num("rho", p.rho);
    p.sigma_x = r.num("sigma_x", p.sigma_x);
    p.sigma_y = r.num("sigma_y", p.sigma_y);
    return p;
}

StochasticFrontier::Params sf_params(const json& j) {
    ParamReader r(j, {"lambda", "sigma_x"});
    return {r.num("lambda", 1.0), r.num("sigma_x", 1.0)};
}

HeavyTailHmm::Params ht_params(const json& j) {
    ParamReader r(j, {"direction", "sigma_x", "sigma_y", "mh_repeats", "mh_step_sd"});
    const auto dir = HeavyTailHmm::parse_direction(r.text("direction", "cauchy-obs"));
    HeavyTailHmm::Params p = dir == HeavyTailHmm::Direction::CauchyLatent ? HeavyTailHmm::mirrored_defaults()
                                                                          : HeavyTailHmm::Params{};
    p.sigma_x = r.num("sigma_x", p.sigma_x);
    p.sigma_y = r.num("sigma_y", p.sigma_y);
    p.mh_repeats = static_cast<int>(r.count("mh_repeats", static_cast<std::size_t>(p.mh_repeats)));
    p.mh_step_sd = r.num("mh_step_sd", p.mh_step_sd);
    return p;
}

DiscretizedSv::Params sv_params(const json& j, std::size_t n) {
    ParamReader r(j, {"t1", "theta_max", "block_repeats"});
    DiscretizedSv::Params p;
    p.n = n;
    p.t1 = r.num("t1", p.t1);
    p.theta_max = r.num("theta_max", p.theta_max);
    p.block_repeats = static_cast<int>(r.count("block_repeats", static_cast<std::size_t>(p.block_repeats)));
    return p;
}

ObservedDiffusion::Params od_params(const json& j, std::size_t n) {
    ParamReader r(j, {"t1", "theta_max", "grid_points"});
    ObservedDiffusion::Params p;
    p.n = n;
    p.t1 = r.num("t1", p.t1);
    p.theta_max = r.num("theta_max", p.theta_max);
    p.grid_points = r.count("grid_points", p.grid_points);
    return p;
}

LatentPoisson::Params lp_params(const json& j) {
    ParamReader r(j, {"alpha", "beta", "construction"});
    LatentPoisson::Params p;
    p.alpha = r.num("alpha", p.alpha);
    p.beta = r.num("beta", p.beta);
    p.construction = parse_construction(r.text("construction", "rectangle"));
    return p;
}

std::size_t gmrf_observed(const json& j) {
    ParamReader r(j, {"observed"});
    return r.count("observed", 5);
}

double single(const std::vector<double>& v, const std::string& model) {
    if (v.size() != 1) throw ConfigError(model + " takes exactly one observation");
    return v.front();
}

}  // namespace

const std::vector<ModelInfo>& registered_models() {
    static const std::vector<ModelInfo> models = {
        {"repeated_measurements", "observations"},
        {"gaussian_hmm", "observations (or hidden states with no_data)"},
        {"nonregular_scale", "observations"},
        {"stochastic_frontier", "observations"},
        {"rounded_data", "observations"},
        {"classification", "observations"},
        {"heavy_tail_hmm", "observations"},
        {"discretized_sv", "discretization steps"},
        {"stick_breaking", "truncation level"},
        {"latent_poisson", "unused; the count is the data"},
        {"observed_diffusion", "discretization steps"},
        {"gmrf_hybrid", "lattice side (n x n sites)"},
    };
    return models;
}

bool is_registered(const std::string& name) {
    for (const auto& m : registered_models())
        if (m.name == name) return true;
    return false;
}

std::vector<double> make_data(const ModelSpec& spec, const DataSource& data, std::size_t n) {
    if (!is_registered(spec.name)) throw ConfigError("unknown model '" + spec.name + "' in key 'model.name'");
    if (data.kind == DataSource::Kind::Inline) return data.values;
    if (data.kind == DataSource::Kind::File) return read_file(data.path);

    // Where n is a discretization level rather than a sample size, one dataset serves every n.
    const bool fixed_data = spec.name == "observed_diffusion" || spec.name == "latent_poisson";
    RngStream rng(data.seed, fixed_data ? 0 : n);
    const double th = data.theta_star;
    const json& j = spec.params;
    const std::string& m = spec.name;
    if (m == "repeated_measurements") {
        const auto p = rm_params(j);
        return synthetic::repeated_measurements(th, p.sigma_x, p.sigma_y, n, rng);
    }
    if (m == "gaussian_hmm") {
        ParamReader r(j, {"rho", "sigma_x", "sigma_y", "no_data"});
        if (r.flag("no_data", false)) return {};
        return synthetic::gaussian_hmm(th, hmm_params(r), n, rng);
    }
    if (m == "nonregular_scale") return synthetic::nonregular_scale(th, n, rng);
    if (m == "stochastic_frontier") {
        const auto p = sf_params(j);
        return synthetic::stochastic_frontier(th, p.lambda, p.sigma_x, n, rng);
    }
    if (m == "rounded_data") {
        ParamReader r(j, {"sigma_x"});
        return synthetic::rounded_data(th, r.num("sigma_x", 1.0), n, rng);
    }
    if (m == "classification") {
        ParamReader r(j, {"scenario"});
        return synthetic::classification(th, ClassificationMixture::parse_scenario(r.text("scenario", "general")), n,
                                         rng);
    }
    if (m == "heavy_tail_hmm") return synthetic::heavy_tail_hmm(th, ht_params(j), n, rng);
    if (m == "discretized_sv") return {synthetic::discretized_sv(th, sv_params(j, n), rng)};
    if (m == "stick_breaking") return {};
    if (m == "latent_poisson") return {static_cast<double>(synthetic::latent_poisson(th, rng))};
    if (m == "observed_diffusion") return {synthetic::observed_diffusion(th, od_params(j, n).t1, rng)};
    if (m == "gmrf_hybrid") {
        const std::size_t obs = gmrf_observed(j);
        const auto q = car_lattice_precision(n, n);
        return synthetic::gmrf(th, q, spread_sites(n * n, obs), rng);
    }
    throw ConfigError("unknown model '" + m + "' in key 'model.name'");
}

std::unique_ptr<Model> build_model(const ModelSpec& spec, const DataSource& data, std::size_t n) {
    const json& j = spec.params;
    const std::string& m = spec.name;
    if (!is_registered(m)) throw ConfigError("unknown model '" + m + "' in key 'model.name'");
    if (m == "stick_breaking") {
        ParamReader r(j, {"a", "b"});
        StickBreaking::Params p;
        p.n = n;
        p.a = r.num("a", p.a);
        p.b = r.num("b", p.b);
        return std::make_unique<StickBreaking>(p);
    }
    if (m == "gaussian_hmm") {
        ParamReader r(j, {"rho", "sigma_x", "sigma_y", "no_data"});
        if (r.flag("no_data", false)) return std::make_unique<GaussianHmm>(GaussianHmm::without_data(hmm_params(r), n));
        return std::make_unique<GaussianHmm>(hmm_params(r), make_data(spec, data, n));
    }
    auto y = make_data(spec, data, n);
    if (m == "repeated_measurements") return std::make_unique<RepeatedMeasurements>(rm_params(j), std::move(y));
    if (m == "nonregular_scale") {
        ParamReader r(j, {});
        return std::make_unique<NonregularScale>(std::move(y));
    }
    if (m == "stochastic_frontier") return std::make_unique<StochasticFrontier>(sf_params(j), std::move(y));
    if (m == "rounded_data") {
        ParamReader r(j, {"sigma_x"});
        return std::make_unique<RoundedData>(RoundedData::Params{r.num("sigma_x", 1.0)}, std::move(y));
    }
    if (m == "classification") {
        ParamReader r(j, {"scenario"});
        return std::make_unique<ClassificationMixture>(
            ClassificationMixture::parse_scenario(r.text("scenario", "general")), std::move(y));
    }
    if (m == "heavy_tail_hmm") return std::make_unique<HeavyTailHmm>(ht_params(j), std::move(y));
    if (m == "discretized_sv") return std::make_unique<DiscretizedSv>(sv_params(j, n), single(y, m));
    if (m == "latent_poisson") {
        const double c = single(y, m);
        if (!(c >= 0.0) || c != std::floor(c)) throw ConfigError("latent_poisson data must be a non-negative count");
        return std::make_unique<LatentPoisson>(lp_params(j), static_cast<std::size_t>(c));
    }
    if (m == "observed_diffusion") return std::make_unique<ObservedDiffusion>(od_params(j, n), single(y, m));
    if (m == "gmrf_hybrid") {
        const std::size_t obs = gmrf_observed(j);
        if (y.size() != obs) throw ConfigError("gmrf_hybrid needs one observation per observed site");
        return std::make_unique<GmrfHybrid>(car_lattice_precision(n, n), spread_sites(n * n, obs), std::move(y));
    }
    throw ConfigError("unknown model '" + m + "' in key 'model.name'");
}

}  // namespace gibbslab::harness
