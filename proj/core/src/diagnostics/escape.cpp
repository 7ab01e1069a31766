#include "gibbslab/diagnostics/escape.hpp"

#include <cmath>
#include <vector>

#include "gibbslab/errors.hpp"
#include "gibbslab/numerics/stats_tests.hpp"

namespace gibbslab {

EscapeResult escape_time(const Model& model, const EscapeConfig& cfg, const RngStream& rng) {
    if (cfg.replicates < 31 || cfg.replicates % 2 == 0) {
        throw InvalidParameter("escape_time: replicates must be odd and at least 31");
    }
    if (!(cfg.radius > 0.0) || cfg.max_iters == 0) throw InvalidParameter("escape_time: bad radius or max_iters");
    EscapeResult out;
    out.iterations.reserve(cfg.replicates);
    out.censored.reserve(cfg.replicates);
    const auto inside = [&](double t) { return std::fabs(t - cfg.center) < cfg.radius; };
    for (std::size_t r = 0; r < cfg.replicates; ++r) {
        if (inside(cfg.theta0)) {
            out.iterations.push_back(0.0);
            out.censored.push_back(false);
            continue;
        }
        SamplerConfig sc = cfg.sampler;
        sc.theta0 = cfg.theta0;
        const RngStream chain_rng = rng.derive(r);
        auto sampler = [&] {
            if (cfg.interleave_with) {
                SamplerConfig nc = *cfg.interleave_with;
                nc.theta0 = cfg.theta0;
                return Sampler::interleaved(model, sc, nc, chain_rng);
            }
            return sc.parametrization.is_centered() ? Sampler::centered(model, sc, chain_rng)
                                                    : Sampler::noncentered(model, sc, chain_rng);
        }();
        std::size_t it = 0;
        bool escaped = false;
        while (it < cfg.max_iters) {
            sampler.step();
            ++it;
            if (inside(sampler.theta())) {
                escaped = true;
                break;
            }
        }
        out.iterations.push_back(static_cast<double>(it));
        out.censored.push_back(!escaped);
        if (!escaped) ++out.censored_count;
    }
    out.median = median(out.iterations);
    return out;
}

EscapeResult escape_time(const Model& model, const Parametrization& p, double theta0, double radius,
                         std::size_t max_iters, std::size_t replicates, const RngStream& rng) {
    EscapeConfig cfg;
    cfg.theta0 = theta0;
    const auto y = model.data();
    cfg.center = y.empty() ? 0.0 : median(std::vector<double>(y.begin(), y.end()));
    cfg.radius = radius;
    cfg.max_iters = max_iters;
    cfg.replicates = replicates;
    cfg.sampler.parametrization = p;
    cfg.sampler.pilot_iterations = 0;
    return escape_time(model, cfg, rng);
}

}  // namespace gibbslab
