#include "gibbslab/harness/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include "gibbslab/diagnostics/escape.hpp"
#include "gibbslab/diagnostics/report.hpp"
#include "gibbslab/harness/output.hpp"
#include "gibbslab/harness/registry.hpp"
#include "gibbslab/numerics/stats_tests.hpp"

namespace gibbslab::harness {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string cell_name(const std::string& scheme, std::size_t n, std::size_t rep) {
    return "cell (" + scheme + ", n=" + std::to_string(n) + ", replicate=" + std::to_string(rep) + ")";
}

double median_of(std::vector<double> v) {
    std::erase_if(v, [](double x) { return std::isnan(x); });
    return v.empty() ? kNaN : median(v);
}

// One model per grid value; instances are immutable and shared across workers.
std::vector<std::unique_ptr<Model>> build_models(const ExperimentConfig& cfg) {
    std::vector<std::unique_ptr<Model>> models;
    for (std::size_t n : cfg.grid) {
        try {
            models.push_back(build_model(cfg.model, cfg.data, n));
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError("model '" + cfg.model.name + "' at n=" + std::to_string(n) + ": " + e.what());
        }
    }
    return models;
}

void fill_diagnostics(const ChainTrace& t, ResultRow& row) {
    const auto d = diagnose(t.theta);
    row.iat = d.iat;
    row.ess = d.ess;
    row.lag1 = d.lag1;
    row.gamma_hat_lower = d.gamma_hat_lower;
    row.latent_acceptance = t.latent_acceptance;
    row.theta_acceptance = t.theta_acceptance;
    row.wall_seconds = t.wall_seconds;
}

json fit_json(const ScalingFit& f) {
    json grid = json::array();
    for (const auto& [n, v] : f.grid) grid.push_back({n, v});
    return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}, {"grid", grid}};
}

}  // namespace

const std::vector<std::string>& result_header() {
    static const std::vector<std::string> h = {"model", "parametrization", "n", "replicate", "seed", "iat", "ess",
                                               "lag1", "gamma_hat_lower", "latent_acceptance", "theta_acceptance"};
    return h;
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& task) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<std::size_t>(count, 1));
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_at = count;
    std::exception_ptr failure;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            {
                std::lock_guard lock(mu);
                if (failed_at < i) return;
            }
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
}

RngStream chain_stream(std::uint64_t seed, std::size_t n, std::size_t replicate) {
    return RngStream(seed, n).derive(replicate);
}

void check_experiment(const ExperimentConfig& cfg) {
    if (!is_registered(cfg.model.name)) throw ConfigError("unknown model '" + cfg.model.name + "' in key 'model.name'");
    const auto models = build_models(cfg);
    for (const auto& p : cfg.parametrizations) {
        if (!models.front()->supports(p)) {
            throw ConfigError("key 'parametrizations': " + cfg.model.name + " does not support " + p.label());
        }
        try {
            cfg.sampler_for(p).validate();
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError("key 'sampler' for " + p.label() + ": " + e.what());
        }
    }
}

RunOutput run_experiment(const ExperimentConfig& cfg, std::size_t threads) {
    check_experiment(cfg);
    const auto models = build_models(cfg);
    const std::size_t np = cfg.parametrizations.size(), ng = cfg.grid.size(), nr = cfg.replicates;

    RunOutput out;
    out.rows.resize(np * ng * nr);
    parallel_for(out.rows.size(), threads, [&](std::size_t idx) {
        const std::size_t r = idx % nr, g = (idx / nr) % ng, p = idx / (nr * ng);
        const auto& par = cfg.parametrizations[p];
        const std::size_t n = cfg.grid[g];
        ResultRow& row = out.rows[idx];
        row.model = cfg.model.name;
        row.parametrization = par.label();
        row.n = n;
        row.replicate = r;
        row.seed = cfg.seed;
        try {
            SamplerConfig sc = cfg.sampler_for(par);
            sc.seed = cfg.seed;
            fill_diagnostics(run_chain(*models[g], sc, chain_stream(cfg.seed, n, r)), row);
        } catch (const std::exception& e) {
            throw CellFailure(cell_name(par.label(), n, r) + ": " + e.what());
        }
    });

    json cells = json::array();
    json scaling = json::object();
    for (std::size_t p = 0; p < np; ++p) {
        std::vector<std::pair<double, double>> grid;
        for (std::size_t g = 0; g < ng; ++g) {
            std::vector<double> iat, ess, lag1, gam, la, ta;
            for (std::size_t r = 0; r < nr; ++r) {
                const auto& row = out.rows[(p * ng + g) * nr + r];
                iat.push_back(row.iat);
                ess.push_back(row.ess);
                lag1.push_back(row.lag1);
                gam.push_back(row.gamma_hat_lower);
                la.push_back(row.latent_acceptance);
                ta.push_back(row.theta_acceptance);
            }
            const double mi = median_of(iat);
            cells.push_back({{"parametrization", cfg.parametrizations[p].label()},
                             {"n", cfg.grid[g]},
                             {"replicates", nr},
                             {"median_iat", mi},
                             {"median_ess", median_of(ess)},
                             {"median_lag1", median_of(lag1)},
                             {"median_gamma_hat_lower", median_of(gam)},
                             {"median_latent_acceptance", median_of(la)},
                             {"median_theta_acceptance", median_of(ta)}});
            if (std::isfinite(mi)) grid.emplace_back(static_cast<double>(cfg.grid[g]), mi);
        }
        try {
            scaling[cfg.parametrizations[p].label()] = fit_json(scaling_fit(grid));
        } catch (const Error&) {
            // fewer than three usable grid points: no fit
        }
    }

    out.summary = {{"config", to_json(cfg)}, {"config_hash", config_hash(cfg)}, {"cells", cells}, {"scaling", scaling},
                   {"gamma_hat_note", "gamma_hat_lower is a lower bound on the maximal correlation"}};
    const auto slope_of = [&](const char* label) -> json {
        return scaling.contains(label) ? scaling.at(label).at("slope") : json(nullptr);
    };
    out.summary["slope_c"] = slope_of("centered");
    out.summary["slope_nc"] = slope_of("noncentered");
    return out;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
    Csv csv(result_header());
    for (const auto& r : rows) {
        csv.cell(r.model).cell(r.parametrization).cell(r.n).cell(r.replicate).cell(std::to_string(r.seed));
        csv.cell(r.iat).cell(r.ess).cell(r.lag1).cell(r.gamma_hat_lower).cell(r.latent_acceptance).cell(r.theta_acceptance);
        csv.end_row();
    }
    return csv.str();
}

std::string timings_csv(const std::vector<ResultRow>& rows) {
    Csv csv({"parametrization", "n", "replicate", "wall_seconds"});
    for (const auto& r : rows) {
        csv.cell(r.parametrization).cell(r.n).cell(r.replicate).cell(r.wall_seconds);
        csv.end_row();
    }
    return csv.str();
}

void write_run(const RunOutput& out, const std::filesystem::path& dir) {
    write_file(dir / "results.csv", results_csv(out.rows));
    write_file(dir / "timings.csv", timings_csv(out.rows));
    write_file(dir / "summary.json", out.summary.dump(2) + "\n");
}

CompareOutput run_compare(const ExperimentConfig& cfg, std::size_t threads) {
    if (!is_registered(cfg.model.name)) throw ConfigError("unknown model '" + cfg.model.name + "' in key 'model.name'");
    const auto models = build_models(cfg);
    const Model& first = *models.front();

    struct Scheme {
        std::string label;
        std::optional<Parametrization> par;  // empty for interleaved
    };
    std::vector<Scheme> schemes;
    const auto add = [&](const Parametrization& p) {
        if (first.supports(p)) schemes.push_back({p.label(), p});
    };
    add(Parametrization::centered());
    add(Parametrization::noncentered());
    for (double w : cfg.compare.weights) add(Parametrization::partial(w));
    for (const auto& p : first.supported())
        if (p.kind == Parametrization::Kind::DataBased) add(p);
    const bool both = first.supports(Parametrization::centered()) && first.supports(Parametrization::noncentered());
    if (cfg.compare.interleaved && both) schemes.push_back({"interleaved", std::nullopt});
    if (first.supported().size() < 2) {
        throw ConfigError("compare needs a model with at least two parametrizations; " + cfg.model.name + " has one");
    }

    const std::size_t ns = schemes.size(), ng = cfg.grid.size(), nr = cfg.replicates;
    const auto sampler_of = [&](const Scheme& s, const Parametrization& fallback) {
        SamplerConfig sc = cfg.sampler_for(s.par ? *s.par : fallback);
        sc.seed = cfg.seed;
        return sc;
    };

    std::vector<ResultRow> runs(ns * ng * nr);
    std::vector<std::string> errors(runs.size());
    parallel_for(runs.size(), threads, [&](std::size_t idx) {
        const std::size_t r = idx % nr, g = (idx / nr) % ng, s = idx / (nr * ng);
        const Scheme& sch = schemes[s];
        const Model& model = *models[g];
        const RngStream rng = chain_stream(cfg.seed, cfg.grid[g], r);
        try {
            ChainTrace t;
            if (sch.par) {
                t = run_chain(model, sampler_of(sch, *sch.par), rng);
            } else {
                t = run_interleaved(model, sampler_of({"centered", Parametrization::centered()}, {}),
                                    sampler_of({"noncentered", Parametrization::noncentered()}, {}), rng);
            }
            fill_diagnostics(t, runs[idx]);
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            // Degenerate or constraint-violating schemes are reported, not fatal.
            errors[idx] = e.what();
        }
    });

    std::vector<EscapeResult> escapes(ns * ng);
    if (cfg.compare.escape) {
        const auto& es = *cfg.compare.escape;
        parallel_for(escapes.size(), threads, [&](std::size_t idx) {
            const std::size_t g = idx % ng, s = idx / ng;
            if (!errors[(s * ng + g) * nr].empty()) return;
            const Scheme& sch = schemes[s];
            const Model& model = *models[g];
            EscapeConfig ec;
            ec.theta0 = es.theta0;
            ec.radius = es.radius;
            ec.max_iters = es.max_iters;
            ec.replicates = es.replicates;
            if (es.center) {
                ec.center = *es.center;
            } else {
                const auto y = model.data();
                ec.center = y.empty() ? 0.0 : median(std::vector<double>(y.begin(), y.end()));
            }
            if (sch.par) {
                ec.sampler = sampler_of(sch, *sch.par);
            } else {
                ec.sampler = sampler_of({"centered", Parametrization::centered()}, {});
                ec.interleave_with = sampler_of({"noncentered", Parametrization::noncentered()}, {});
            }
            try {
                escapes[idx] = escape_time(model, ec, RngStream(cfg.seed, cfg.grid[g]).derive(0xE5CA9Eull));
            } catch (const std::exception& e) {
                throw CellFailure("escape " + cell_name(sch.label, cfg.grid[g], 0) + ": " + e.what());
            }
        });
    }

    CompareOutput out;
    for (std::size_t g = 0; g < ng; ++g) {
        std::size_t first_row = out.rows.size();
        for (std::size_t s = 0; s < ns; ++s) {
            CompareRow row;
            row.model = cfg.model.name;
            row.n = cfg.grid[g];
            row.scheme = schemes[s].label;
            row.replicates = nr;
            std::vector<double> iat, ess, lag1, gam, wall;
            for (std::size_t r = 0; r < nr; ++r) {
                const std::size_t idx = (s * ng + g) * nr + r;
                if (!errors[idx].empty()) {
                    row.error = errors[idx];
                    continue;
                }
                iat.push_back(runs[idx].iat);
                ess.push_back(runs[idx].ess);
                lag1.push_back(runs[idx].lag1);
                gam.push_back(runs[idx].gamma_hat_lower);
                wall.push_back(runs[idx].wall_seconds);
            }
            if (row.error.empty()) {
                row.iat = median_of(iat);
                row.ess = median_of(ess);
                row.lag1 = median_of(lag1);
                row.gamma_hat_lower = median_of(gam);
                row.wall_seconds = median_of(wall);
                row.ess_per_second = row.wall_seconds > 0.0 ? row.ess / row.wall_seconds : kNaN;
            } else {
                row.iat = row.ess = row.lag1 = row.gamma_hat_lower = row.wall_seconds = row.ess_per_second = kNaN;
            }
            if (cfg.compare.escape && row.error.empty()) {
                const auto& e = escapes[s * ng + g];
                row.has_escape = true;
                row.escape_median = e.median;
                row.escape_censored = e.censored_count;
            }
            out.rows.push_back(row);
        }
        std::size_t best = out.rows.size();
        for (std::size_t i = first_row; i < out.rows.size(); ++i) {
            const double v = out.rows[i].ess_per_second;
            if (std::isfinite(v) && (best == out.rows.size() || v > out.rows[best].ess_per_second)) best = i;
        }
        if (best < out.rows.size()) out.rows[best].winner = true;
    }

    json rows = json::array();
    for (const auto& r : out.rows) {
        json j = {{"n", r.n}, {"scheme", r.scheme}, {"iat", r.iat}, {"ess", r.ess}, {"lag1", r.lag1},
                  {"gamma_hat_lower", r.gamma_hat_lower}, {"ess_per_second", r.ess_per_second}, {"winner", r.winner}};
        if (r.has_escape) {
            j["escape_median"] = r.escape_median;
            j["escape_censored"] = r.escape_censored;
        }
        if (!r.error.empty()) j["error"] = r.error;
        rows.push_back(j);
    }
    out.summary = {{"config", to_json(cfg)}, {"config_hash", config_hash(cfg)}, {"rows", rows}};
    return out;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
    Csv csv({"model", "n", "scheme", "replicates", "iat", "ess", "lag1", "gamma_hat_lower", "wall_seconds",
             "ess_per_second", "winner", "escape_median", "escape_censored", "error"});
    for (const auto& r : rows) {
        csv.cell(r.model).cell(r.n).cell(r.scheme).cell(r.replicates);
        csv.cell(r.iat).cell(r.ess).cell(r.lag1).cell(r.gamma_hat_lower).cell(r.wall_seconds).cell(r.ess_per_second);
        csv.cell(std::string(r.winner ? "1" : "0"));
        if (r.has_escape) {
            csv.cell(r.escape_median).cell(r.escape_censored);
        } else {
            csv.cell(std::string()).cell(std::string());
        }
        csv.quoted(r.error);
        csv.end_row();
    }
    return csv.str();
}

void write_compare(const CompareOutput& out, const std::filesystem::path& dir) {
    write_file(dir / "compare.csv", compare_csv(out.rows));
    write_file(dir / "summary.json", out.summary.dump(2) + "\n");
}

}  // namespace gibbslab::harness
