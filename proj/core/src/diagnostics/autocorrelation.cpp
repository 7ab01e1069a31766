#include "gibbslab/diagnostics/autocorrelation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <unsupported/Eigen/FFT>

#include "gibbslab/errors.hpp"

namespace gibbslab {

namespace {

constexpr std::size_t kDirectMaxLag = 32;
constexpr std::size_t kMinIatLength = 1000;

std::size_t next_pow2(std::size_t v) {
    std::size_t p = 1;
    while (p < v) p <<= 1;
    return p;
}

std::vector<double> centered_copy(std::span<const double> chain) {
    double mean = 0.0;
    for (double v : chain) mean += v;
    mean /= static_cast<double>(chain.size());
    std::vector<double> out(chain.size());
    for (std::size_t i = 0; i < chain.size(); ++i) out[i] = chain[i] - mean;
    return out;
}

std::vector<double> autocov_centered(const std::vector<double>& x, std::size_t max_lag) {
    const std::size_t n = x.size();
    std::vector<double> acc(max_lag + 1, 0.0);
    if (max_lag <= kDirectMaxLag) {
        for (std::size_t k = 0; k <= max_lag; ++k) {
            double s = 0.0;
            for (std::size_t t = 0; t + k < n; ++t) s += x[t] * x[t + k];
            acc[k] = s;
        }
    } else {
        const std::size_t block = std::max<std::size_t>(4096, next_pow2(max_lag));
        const std::size_t m = next_pow2(block + max_lag + 1);
        Eigen::FFT<double> fft;
        std::vector<std::complex<double>> a(m);
        std::vector<std::complex<double>> c(m);
        std::vector<std::complex<double>> fa;
        std::vector<std::complex<double>> fc;
        std::vector<std::complex<double>> r;
        for (std::size_t start = 0; start < n; start += block) {
            const std::size_t a_end = std::min(n, start + block);
            const std::size_t c_end = std::min(n, start + block + max_lag);
            std::fill(a.begin(), a.end(), std::complex<double>(0.0));
            std::fill(c.begin(), c.end(), std::complex<double>(0.0));
            for (std::size_t t = start; t < a_end; ++t) a[t - start] = x[t];
            for (std::size_t t = start; t < c_end; ++t) c[t - start] = x[t];
            fft.fwd(fa, a);
            fft.fwd(fc, c);
            for (std::size_t i = 0; i < m; ++i) fc[i] *= std::conj(fa[i]);
            fft.inv(r, fc);
            for (std::size_t k = 0; k <= max_lag; ++k) acc[k] += r[k].real();
        }
    }
    for (auto& v : acc) v /= static_cast<double>(n);
    return acc;
}

}  // namespace

std::vector<double> autocovariance(std::span<const double> chain, std::size_t max_lag) {
    if (max_lag < 1 || chain.size() <= max_lag) {
        throw InsufficientLength("autocovariance: chain length must exceed max_lag >= 1");
    }
    return autocov_centered(centered_copy(chain), max_lag);
}

double lag1_autocorrelation(std::span<const double> chain) {
    const auto g = autocovariance(chain, 1);
    if (g[0] <= 0.0) return 0.0;
    return g[1] / g[0];
}

double iat(std::span<const double> chain) {
    if (chain.size() < kMinIatLength) throw InsufficientLength("iat: chain needs at least 1000 values");
    const auto x = centered_copy(chain);
    const std::size_t n = x.size();
    std::size_t max_lag = std::min<std::size_t>(n - 1, 256);
    for (;;) {
        const auto g = autocov_centered(x, max_lag);
        if (!(g[0] > 0.0)) return std::numeric_limits<double>::infinity();
        // Initial positive sequence of pair sums, then enforce monotone decrease.
        double sum = 0.0;
        double prev = std::numeric_limits<double>::infinity();
        bool terminated = false;
        for (std::size_t m = 0; 2 * m + 1 <= max_lag; ++m) {
            double pair = (g[2 * m] + g[2 * m + 1]) / g[0];
            if (pair <= 0.0) {
                terminated = true;
                break;
            }
            pair = std::min(pair, prev);
            prev = pair;
            sum += pair;
        }
        if (terminated || max_lag >= n - 1) return std::max(1.0, 2.0 * sum - 1.0);
        max_lag = std::min(n - 1, max_lag * 4);
    }
}

double ess(std::span<const double> chain) { return static_cast<double>(chain.size()) / iat(chain); }

}  // namespace gibbslab
