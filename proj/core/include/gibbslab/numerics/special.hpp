#pragma once

namespace gibbslab {

// Wichura's AS241 rational approximation (about 1e-16 relative accuracy).
double normal_quantile(double p);

double normal_cdf(double z);
// Q(z) = 1 - Phi(z), accurate far into the upper tail.
double normal_upper_tail(double z);
// log Q(z); finite for all finite z.
double log_normal_upper_tail(double z);
double log_normal_cdf(double z);

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;
inline constexpr double kPi = 3.14159265358979323846;

}  // namespace gibbslab
