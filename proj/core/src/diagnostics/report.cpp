#include "gibbslab/diagnostics/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gibbslab/diagnostics/autocorrelation.hpp"
#include "gibbslab/errors.hpp"
#include "gibbslab/numerics/stats_tests.hpp"

namespace gibbslab {

namespace {

std::vector<double> apply(std::span<const double> chain, const std::function<double(double)>& f) {
    std::vector<double> out(chain.size());
    std::transform(chain.begin(), chain.end(), out.begin(), f);
    return out;
}

}  // namespace

std::vector<NamedFunctional> default_functionals() {
    return {{"identity", [](double t) { return t; }}, {"square", [](double t) { return t * t; }}};
}

double gamma_hat(std::span<const double> chain, const std::vector<NamedFunctional>& functionals) {
    if (chain.size() < 3) throw InsufficientLength("gamma_hat: chain too short");
    if (functionals.empty()) throw InvalidParameter("gamma_hat: empty functional dictionary");
    double best = 0.0;
    for (const auto& fn : functionals) {
        const auto v = apply(chain, fn.f);
        best = std::max(best, lag1_autocorrelation(v));
    }
    return std::min(best, std::nextafter(1.0, 0.0));
}

double fraction_missing_info(std::span<const double> theta, std::span<const double> conditional_variance) {
    if (theta.size() != conditional_variance.size()) throw LengthMismatch("fraction_missing_info: length mismatch");
    if (theta.size() < 2) throw InsufficientLength("fraction_missing_info: chain too short");
    double mean_cond = 0.0;
    for (double v : conditional_variance) {
        if (std::isnan(v)) throw OracleUnavailable("fraction_missing_info: Theta block has no analytic variance");
        mean_cond += v;
    }
    mean_cond /= static_cast<double>(conditional_variance.size());
    const double marginal = sample_variance(theta);
    if (!(marginal > 0.0)) return mean_cond > 0.0 ? 0.0 : 1.0;
    return std::clamp(1.0 - mean_cond / marginal, 0.0, 1.0);
}

double fraction_missing_info(const ChainTrace& trace) {
    const auto it = trace.functionals.find("theta_cond_var");
    if (it == trace.functionals.end()) {
        throw OracleUnavailable("fraction_missing_info: trace has no conditional variances");
    }
    return fraction_missing_info(trace.theta, it->second);
}

double mixing_time(double gamma) {
    if (std::isnan(gamma) || gamma <= 0.0 || gamma > 1.0) {
        throw InvalidParameter("mixing_time: gamma must lie in (0, 1)");
    }
    if (gamma >= 1.0 - 1e-12) return std::numeric_limits<double>::infinity();
    return -1.0 / std::log(gamma);
}

ScalingFit scaling_fit(std::vector<std::pair<double, double>> grid) {
    std::set<double> distinct;
    for (const auto& [n, v] : grid) {
        if (!(n > 0.0)) throw InvalidParameter("scaling_fit: n must be positive");
        if (!(v >= 1.0) || !std::isfinite(v)) throw InvalidParameter("scaling_fit: iat must be finite and >= 1");
        distinct.insert(n);
    }
    if (distinct.size() < 3) throw InsufficientLength("scaling_fit: needs at least three distinct n");
    const double k = static_cast<double>(grid.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [n, v] : grid) {
        sx += std::log(n);
        sy += std::log(v);
    }
    const double mx = sx / k, my = sy / k;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [n, v] : grid) {
        const double dx = std::log(n) - mx, dy = std::log(v) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    ScalingFit fit;
    fit.grid = std::move(grid);
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

DiagnosticsReport diagnose(std::span<const double> chain, const std::vector<NamedFunctional>& functionals) {
    DiagnosticsReport r;
    r.iat = iat(chain);
    r.ess = static_cast<double>(chain.size()) / r.iat;
    r.lag1 = lag1_autocorrelation(chain);
    r.gamma_hat_lower = gamma_hat(chain, functionals);
    r.tau_hat = r.gamma_hat_lower > 0.0 ? mixing_time(r.gamma_hat_lower) : 0.0;
    for (const auto& fn : functionals) {
        const auto v = apply(chain, fn.f);
        FunctionalSummary s;
        s.iat = iat(v);
        s.ess = static_cast<double>(v.size()) / s.iat;
        s.lag1 = lag1_autocorrelation(v);
        r.functionals[fn.name] = s;
    }
    return r;
}

}  // namespace gibbslab
