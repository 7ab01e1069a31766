#pragma once

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "gibbslab/numerics/rng.hpp"

namespace gibbslab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Normal {
    double mean = 0.0;
    double sd = 1.0;
};

struct Uniform {
    double lo = 0.0;
    double hi = 1.0;
};

struct Exponential {
    double rate = 1.0;
};

struct Beta {
    double a = 1.0;
    double b = 1.0;
};

struct Cauchy {
    double location = 0.0;
    double scale = 1.0;
};

struct Gamma {
    double shape = 1.0;
    double rate = 1.0;
};

struct TruncatedNormal {
    double mean = 0.0;
    double sd = 1.0;
    double lo = -kInf;
    double hi = kInf;
};

// Density proportional to exp(-rate * x) on [lo, hi]; hi may be infinite.
struct TruncatedExponential {
    double rate = 1.0;
    double lo = 0.0;
    double hi = kInf;
};

// Density shape * scale^shape / x^(shape + 1) on x > scale.
struct Pareto {
    double scale = 1.0;
    double shape = 1.0;
};

// Law of phi^(-1/2) where phi ~ Gamma(shape, rate), restricted to values <= upper.
// Density proportional to x^(-2 shape - 1) exp(-rate / x^2).
struct InverseRootGamma {
    double shape = 1.0;
    double rate = 1.0;
    double upper = kInf;
};

// Mixture of uniforms on [breaks[k], breaks[k+1]) with masses proportional to
// exp(log_weights[k]) * (breaks[k+1] - breaks[k]); i.e. a piecewise-constant density
// whose log level on cell k is log_weights[k].
struct PiecewiseUniform {
    std::vector<double> breaks;
    std::vector<double> log_weights;
};

struct Bernoulli {
    double p = 0.5;
};

using DistSpec = std::variant<Normal, Uniform, Exponential, Beta, Cauchy, Gamma, TruncatedNormal,
                              TruncatedExponential, Pareto, InverseRootGamma, PiecewiseUniform,
                              Bernoulli>;

void validate(const DistSpec& spec);
double draw(const DistSpec& spec, RngStream& rng);
double log_density(const DistSpec& spec, double x);
double cdf(const DistSpec& spec, double x);
// Throws UnsupportedSpec for laws without an implemented quantile.
double inverse_cdf(const DistSpec& spec, double u);
bool has_inverse_cdf(const DistSpec& spec);
double mean(const DistSpec& spec);      // may be +inf or NaN when undefined
double variance(const DistSpec& spec);  // may be +inf or NaN when undefined
std::string describe(const DistSpec& spec);

// Standard-normal draw restricted to [a, b] with a sampler whose expected cost is bounded.
double draw_std_truncated_normal(double a, double b, RngStream& rng);
double draw_gamma(double shape, RngStream& rng);  // unit rate

}  // namespace gibbslab
