#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "gibbslab/errors.hpp"
#include "gibbslab/numerics/special.hpp"

namespace gibbslab::detail {

inline double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

inline double mean_of(std::span<const double> v) { return v.empty() ? 0.0 : sum(v) / static_cast<double>(v.size()); }

inline double log_normal_pdf(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return -0.5 * z * z - std::log(sd) - kLogSqrt2Pi;
}

inline double log_cauchy_pdf(double x, double location, double scale) {
    const double z = (x - location) / scale;
    return -std::log(kPi * scale) - std::log1p(z * z);
}

inline void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidParameter(what);
}

inline bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

inline void require_finite_data(std::span<const double> y, const std::string& model) {
    for (double v : y) require(std::isfinite(v), model + ": data must be finite");
}

}  // namespace gibbslab::detail
