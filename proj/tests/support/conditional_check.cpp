#include "conditional_check.hpp"

#include <algorithm>
#include <cmath>

#include "gibbslab/errors.hpp"
#include "oracles.hpp"

namespace oracle {

using namespace gibbslab;

namespace {

double cdf_point(const DistSpec& law, double p, double start) {
    double lo = start - 1.0, hi = start + 1.0;
    while (cdf(law, lo) > p) lo = start - 2.0 * (start - lo);
    while (cdf(law, hi) < p) hi = start + 2.0 * (hi - start);
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        (cdf(law, mid) < p ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace

double law_grid_distance(const DistSpec& law, const std::function<double(double)>& logf, double start) {
    if (const auto* b = std::get_if<Bernoulli>(&law)) {
        const double l0 = logf(0.0), l1 = logf(1.0);
        const double top = std::max(l0, l1);
        const double p1 = std::exp(l1 - top) / (std::exp(l0 - top) + std::exp(l1 - top));
        return std::fabs(p1 - b->p);
    }
    const double lo = cdf_point(law, 1e-10, start);
    const double hi = cdf_point(law, 1.0 - 1e-10, start);
    const double iqr = cdf_point(law, 0.75, start) - cdf_point(law, 0.25, start);
    if (hi - lo > 1e3 * iqr) {
        // Heavy tail: integrate in u = asinh((x - c) / s), density f(x) s cosh(u), so
        // the grid is fine near the bulk and log-spaced far out.
        const double c = cdf_point(law, 0.5, start), sc = iqr;
        const auto x_of = [=](double u) { return c + sc * std::sinh(u); };
        const double a = std::asinh((lo - c) / sc), b = std::asinh((hi - c) / sc);
        return grid_cdf_distance([&](double u) { return logf(x_of(u)) + std::log(sc * std::cosh(u)); },
                                 [&](double u) { return cdf(law, x_of(u)); }, a, b,
                                 std::min(1e-3, (b - a) / 200000.0));
    }
    const double h = std::max(std::min(1e-3, (hi - lo) / 200000.0), (hi - lo) / 2000000.0);
    return grid_cdf_distance(logf, [&](double v) { return cdf(law, v); }, lo, hi, h);
}

std::vector<ConditionalCheck> exact_conditionals(const Model& m, RngStream& rng, int states) {
    std::vector<ConditionalCheck> out;
    for (int rep = 0; rep < states; ++rep) {
        ChainState start = m.initial_state(m.default_theta0(), rng);
        for (int k = 0; k < 3 + rep; ++k) m.update_latent(start, LatentUpdate{}, rng);

        for (const auto& p : m.supported()) {
            ChainState st = start;
            std::optional<DistSpec> law;
            try {
                if (!p.is_centered()) m.to_aux(st, p, rng);
                law = m.theta_law(st, p);
            } catch (const DegenerateConditional&) {
                continue;
            } catch (const ConstraintViolation&) {
                continue;
            }
            if (!law) continue;
            out.push_back({"theta | " + p.label() + " " + describe(*law),
                           law_grid_distance(*law, [&](double t) { return m.log_joint(st, p, t); }, st.theta)});
        }

        const auto centered = Parametrization::centered();
        for (std::size_t i = 0; i < start.x.size(); ++i) {
            const auto law = m.latent_coordinate_law(start, i);
            if (!law) continue;
            ChainState st = start;
            const auto logf = [&](double v) {
                st.x[i] = v;
                return m.log_joint(st, centered, st.theta);
            };
            out.push_back({"x[" + std::to_string(i) + "] " + describe(*law), law_grid_distance(*law, logf, start.x[i])});
        }
    }
    return out;
}

}  // namespace oracle
