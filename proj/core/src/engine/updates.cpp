#include "gibbslab/engine/updates.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gibbslab/errors.hpp"

namespace gibbslab {

MhResult mh_step(const std::function<double(double)>& log_target, double current, double step_sd, RngStream& rng) {
    return mh_step(log_target, current, log_target(current), step_sd, rng);
}

MhResult mh_step(const std::function<double(double)>& log_target, double current, double current_log_target,
                 double step_sd, RngStream& rng) {
    if (!std::isfinite(current_log_target)) throw NonFiniteTarget("mh_step: log target not finite at current value");
    if (!(step_sd > 0.0) || !std::isfinite(step_sd)) throw InvalidParameter("mh_step: step sd must be positive");
    const double proposal = current + step_sd * rng.normal();
    const double lp = log_target(proposal);
    const double log_u = std::log(rng.uniform_open());
    if (lp - current_log_target >= log_u && !std::isnan(lp)) return {proposal, lp, true};
    return {current, current_log_target, false};
}

double grid_inverse_cdf_update(const std::function<double(double)>& log_density, std::span<const double> nodes,
                               RngStream& rng, bool hard_lo, bool hard_hi) {
    const std::size_t k = nodes.size();
    if (k < 2) throw InvalidParameter("grid_inverse_cdf_update: need at least two nodes");
    std::vector<double> logd(k);
    double mx = -kInf;
    for (std::size_t i = 0; i < k; ++i) {
        if (i > 0 && !(nodes[i] > nodes[i - 1])) throw InvalidParameter("grid_inverse_cdf_update: grid not increasing");
        logd[i] = log_density(nodes[i]);
        if (std::isnan(logd[i])) throw NonFiniteTarget("grid_inverse_cdf_update: NaN density");
        mx = std::max(mx, logd[i]);
    }
    if (!std::isfinite(mx)) throw SupportNotCovered("grid_inverse_cdf_update: density vanishes on the grid");
    const double tiny = std::log(1e-12);
    if ((!hard_lo && logd.front() - mx >= tiny) || (!hard_hi && logd.back() - mx >= tiny)) {
        throw SupportNotCovered("grid_inverse_cdf_update: grid ends carry non-negligible density");
    }
    std::vector<double> d(k);
    for (std::size_t i = 0; i < k; ++i) d[i] = std::exp(logd[i] - mx);
    std::vector<double> cum(k - 1);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        acc += 0.5 * (d[i] + d[i + 1]) * (nodes[i + 1] - nodes[i]);
        cum[i] = acc;
    }
    const double target = rng.uniform() * acc;
    std::size_t c = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin());
    c = std::min(c, k - 2);
    const double before = c == 0 ? 0.0 : cum[c - 1];
    const double h = nodes[c + 1] - nodes[c];
    const double a = d[c];
    const double b = d[c + 1];
    const double cell = 0.5 * (a + b) * h;
    const double u = cell > 0.0 ? std::clamp((target - before) / cell, 0.0, 1.0) : rng.uniform();
    // Invert a*s + (b-a) s^2 / (2h) = u (a+b) h / 2 in a cancellation-free form.
    const double denom = a + std::sqrt(a * a + u * (b * b - a * a));
    const double s = denom > 0.0 ? h * u * (a + b) / denom : u * h;
    return nodes[c] + std::clamp(s, 0.0, h);
}

double grid_inverse_cdf_update(const std::function<double(double)>& log_density, const GridSpec& grid,
                               RngStream& rng) {
    const auto nodes = grid.nodes();
    return grid_inverse_cdf_update(log_density, nodes, rng, grid.hard_lo, grid.hard_hi);
}

}  // namespace gibbslab
