#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gibbslab/engine/sampler.hpp"

namespace gibbslab {

struct NamedFunctional {
    std::string name;
    std::function<double(double)> f;
};

// Identity and square, the default dictionary for gamma_hat.
std::vector<NamedFunctional> default_functionals();

// Largest lag-1 autocorrelation over the dictionary. This is only a lower bound on
// the maximal correlation, which is a supremum over all square-integrable f.
double gamma_hat(std::span<const double> chain, const std::vector<NamedFunctional>& functionals);

// 1 - mean(Var(Theta | X*, Y)) / Var(Theta), clipped to [0, 1]. The conditional
// variances come from exact Theta draws; any NaN means the block was not exact.
double fraction_missing_info(std::span<const double> theta, std::span<const double> conditional_variance);
// Reads the "theta_cond_var" series recorded when record_functionals is set.
double fraction_missing_info(const ChainTrace& trace);

// -1 / log(gamma); +inf for gamma in [1 - 1e-12, 1].
double mixing_time(double gamma);

struct ScalingFit {
    std::vector<std::pair<double, double>> grid;  // (n, iat)
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

// Least squares of log iat on log n; needs at least three distinct n.
ScalingFit scaling_fit(std::vector<std::pair<double, double>> grid);

struct FunctionalSummary {
    double iat = 1.0;
    double ess = 0.0;
    double lag1 = 0.0;
};

struct DiagnosticsReport {
    double iat = 1.0;
    double ess = 0.0;
    double lag1 = 0.0;
    double gamma_hat_lower = 0.0;  // in [0, 1)
    double tau_hat = 0.0;
    std::map<std::string, FunctionalSummary> functionals;
};

DiagnosticsReport diagnose(std::span<const double> chain,
                           const std::vector<NamedFunctional>& functionals = default_functionals());

}  // namespace gibbslab
