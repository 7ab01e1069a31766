#pragma once

// Reference computations for tests. Nothing here calls the library's own
// density, quantile or integration code; the point is an independent route.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// Uniform-grid brute force: integrate exp(logf) by the trapezoid rule on
// [lo, hi] with spacing h and return the sup distance to the renormalized
// reference CDF on the grid.
double grid_cdf_distance(const std::function<double(double)>& logf, const std::function<double(double)>& cdf,
                         double lo, double hi, double h = 1e-3);

// Tabulated CDF of exp(logf) on [lo, hi] by composite Simpson integration,
// evaluated by linear interpolation between nodes.
class NumericCdf {
public:
    NumericCdf(const std::function<double(double)>& logf, double lo, double hi, std::size_t cells = 200000);
    double operator()(double x) const;

private:
    double lo_, hi_, h_;
    std::vector<double> cum_;
};

double normal_cdf(double x, double mean, double sd);  // via std::erfc
// Gamma(shape, rate) CDF for integer shape, by the Poisson-sum identity.
double gamma_cdf_integer(int shape, double rate, double x);
double poisson_pmf(int k, double mean);
double chi_square_quantile(double dof, double p);  // Boost.Math
double ks_critical_one_sample(std::size_t n, double alpha);

// Sup distance between an empirical CDF and a reference CDF, coded directly.
double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf);

// AR(1) with unit innovation variance scaled to marginal variance 1, from std::mt19937_64.
std::vector<double> ar1(double rho, std::size_t n, std::uint64_t seed);

// Every `step`-th element, to reduce autocorrelation before a KS test.
std::vector<double> thin(const std::vector<double>& xs, std::size_t step);

}  // namespace oracle
