#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gibbslab {

// Biased (1/N) autocovariance at lags 0..max_lag. Uses blocked FFT correlation so
// memory stays proportional to the block size for very long chains.
std::vector<double> autocovariance(std::span<const double> chain, std::size_t max_lag);

double lag1_autocorrelation(std::span<const double> chain);

// 1 + 2 sum of autocorrelations, truncated by the initial monotone sequence rule.
// Never below 1; +infinity for a constant chain.
double iat(std::span<const double> chain);
double ess(std::span<const double> chain);

}  // namespace gibbslab
