#include "gibbslab/numerics/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gibbslab/errors.hpp"
#include "gibbslab/numerics/special.hpp"

namespace gibbslab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTailMass = 1e-6;

void require(bool ok, const char* what) {
    if (!ok) throw InvalidParameter(what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

double log_phi(double z) { return -0.5 * z * z - kLogSqrt2Pi; }

// log(exp(x) - exp(y)) for x >= y.
double log_diff_exp(double x, double y) {
    if (y == -kInf) return x;
    return x + std::log(-std::expm1(y - x));
}

// z with log Q(z) = lq, for lq <= log 0.5.
double upper_tail_quantile_from_log(double lq) {
    if (lq > -700.0) return -normal_quantile(std::exp(lq));
    double z = std::sqrt(-2.0 * lq);
    for (int it = 0; it < 50; ++it) {
        const double lqz = log_normal_upper_tail(z);
        const double slope = -std::exp(log_phi(z) - lqz);
        const double step = (lqz - lq) / slope;
        z -= step;
        if (std::fabs(step) < 1e-14 * z) break;
    }
    return z;
}

// log of the standard-normal mass on [a, b].
double log_std_mass(double a, double b) {
    if (a >= 0.0) return log_diff_exp(log_normal_upper_tail(a), log_normal_upper_tail(b));
    if (b <= 0.0) return log_diff_exp(log_normal_upper_tail(-b), log_normal_upper_tail(-a));
    return std::log(normal_cdf(b) - normal_cdf(a));
}

// Standard truncated normal cdf at z within [a, b].
double std_trunc_cdf(double a, double b, double z) {
    if (z <= a) return 0.0;
    if (z >= b) return 1.0;
    if (a >= 0.0) {
        const double la = log_normal_upper_tail(a);
        const double num = -std::expm1(log_normal_upper_tail(z) - la);
        const double den = -std::expm1(log_normal_upper_tail(b) - la);
        return num / den;
    }
    if (b <= 0.0) return 1.0 - std_trunc_cdf(-b, -a, -z);
    return (normal_cdf(z) - normal_cdf(a)) / (normal_cdf(b) - normal_cdf(a));
}

double std_trunc_quantile(double a, double b, double u) {
    if (b <= 0.0) return -std_trunc_quantile(-b, -a, 1.0 - u);
    double z;
    if (a >= 0.0) {
        const double la = log_normal_upper_tail(a);
        const double lb = log_normal_upper_tail(b);
        // Q(z) = Q(a) - u (Q(a) - Q(b))
        const double frac = -std::expm1(lb - la);
        z = upper_tail_quantile_from_log(la + std::log1p(-u * frac));
    } else {
        const double pa = normal_cdf(a);
        const double pb = normal_cdf(b);
        z = normal_quantile(pa + u * (pb - pa));
    }
    return std::clamp(z, a, b);
}

void check_truncated_normal(const TruncatedNormal& d) {
    require(positive(d.sd), "TruncatedNormal: sd must be positive");
    require(std::isfinite(d.mean), "TruncatedNormal: mean must be finite");
    require(!std::isnan(d.lo) && !std::isnan(d.hi) && d.lo < d.hi, "TruncatedNormal: need lo < hi");
}

struct PiecewiseMasses {
    std::vector<double> cumulative;  // normalized, size = cells
    double log_norm = 0.0;
};

PiecewiseMasses piecewise_masses(const PiecewiseUniform& d) {
    const std::size_t k = d.log_weights.size();
    std::vector<double> lm(k, -kInf);
    double mx = -kInf;
    for (std::size_t i = 0; i < k; ++i) {
        const double len = d.breaks[i + 1] - d.breaks[i];
        if (len > 0.0 && d.log_weights[i] > -kInf) {
            lm[i] = d.log_weights[i] + std::log(len);
            mx = std::max(mx, lm[i]);
        }
    }
    if (mx == -kInf) throw DegenerateSupport("PiecewiseUniform: no cell carries mass");
    PiecewiseMasses out;
    out.cumulative.resize(k);
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        acc += lm[i] == -kInf ? 0.0 : std::exp(lm[i] - mx);
        out.cumulative[i] = acc;
    }
    for (auto& c : out.cumulative) c /= acc;
    out.log_norm = mx + std::log(acc);
    return out;
}

double inverse_root_gamma_upper_mass(const InverseRootGamma& d) {
    if (!std::isfinite(d.upper)) return 1.0;
    return boost::math::gamma_q(d.shape, d.rate / (d.upper * d.upper));
}

// E[theta^k] for the (possibly truncated) inverse-root-gamma law.
double inverse_root_gamma_moment(const InverseRootGamma& d, double k) {
    const double s = d.shape - 0.5 * k;
    if (s <= 0.0) return kInf;
    double m = std::exp(0.5 * k * std::log(d.rate) + std::lgamma(s) - std::lgamma(d.shape));
    if (std::isfinite(d.upper)) {
        const double phi_min = 1.0 / (d.upper * d.upper);
        m *= boost::math::gamma_q(s, d.rate * phi_min) /
             boost::math::gamma_q(d.shape, d.rate * phi_min);
    }
    return m;
}

}  // namespace

double draw_gamma(double shape, RngStream& rng) {
    if (shape < 1.0) {
        const double g = draw_gamma(shape + 1.0, rng);
        return g * std::exp(std::log(rng.uniform_open()) / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = rng.normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = rng.uniform_open();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
}

double draw_std_truncated_normal(double a, double b, RngStream& rng) {
    if (!(a < b)) throw InvalidParameter("truncated normal: need lo < hi");
    if (b <= 0.0) return -draw_std_truncated_normal(-b, -a, rng);
    if (a < 0.0 || log_std_mass(a, b) >= std::log(kTailMass)) {
        return std_trunc_quantile(a, b, rng.uniform_open());
    }
    // Far upper tail: bounded-cost rejection samplers.
    if (b - a <= 1.0 / a) {
        for (;;) {
            const double z = a + (b - a) * rng.uniform();
            if (std::log(rng.uniform_open()) <= -0.5 * (z - a) * (z + a)) return z;
        }
    }
    const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
    const double cap = std::isfinite(b) ? -std::expm1(-alpha * (b - a)) : 1.0;
    for (;;) {
        const double e = -std::log1p(-cap * rng.uniform()) / alpha;
        const double z = std::min(a + e, b);
        const double dz = z - alpha;
        if (std::log(rng.uniform_open()) <= -0.5 * dz * dz) return z;
    }
}

void validate(const DistSpec& spec) {
    std::visit(overloaded{
                   [](const Normal& d) {
                       require(std::isfinite(d.mean), "Normal: mean must be finite");
                       require(positive(d.sd), "Normal: sd must be positive");
                   },
                   [](const Uniform& d) {
                       require(std::isfinite(d.lo) && std::isfinite(d.hi) && d.lo < d.hi,
                               "Uniform: need finite lo < hi");
                   },
                   [](const Exponential& d) { require(positive(d.rate), "Exponential: rate must be positive"); },
                   [](const Beta& d) { require(positive(d.a) && positive(d.b), "Beta: a and b must be positive"); },
                   [](const Cauchy& d) {
                       require(std::isfinite(d.location), "Cauchy: location must be finite");
                       require(positive(d.scale), "Cauchy: scale must be positive");
                   },
                   [](const Gamma& d) {
                       require(positive(d.shape) && positive(d.rate), "Gamma: shape and rate must be positive");
                   },
                   [](const TruncatedNormal& d) {
                       check_truncated_normal(d);
                       const double a = (d.lo - d.mean) / d.sd;
                       const double b = (d.hi - d.mean) / d.sd;
                       if (!(log_std_mass(a, b) > -kInf)) {
                           throw DegenerateSupport("TruncatedNormal: interval has zero mass");
                       }
                   },
                   [](const TruncatedExponential& d) {
                       require(positive(d.rate), "TruncatedExponential: rate must be positive");
                       require(std::isfinite(d.lo) && !std::isnan(d.hi) && d.lo < d.hi,
                               "TruncatedExponential: need finite lo < hi");
                   },
                   [](const Pareto& d) {
                       require(positive(d.scale) && positive(d.shape), "Pareto: scale and shape must be positive");
                   },
                   [](const InverseRootGamma& d) {
                       require(positive(d.shape) && positive(d.rate),
                               "InverseRootGamma: shape and rate must be positive");
                       require(d.upper > 0.0, "InverseRootGamma: upper bound must be positive");
                   },
                   [](const PiecewiseUniform& d) {
                       require(d.breaks.size() >= 2 && d.log_weights.size() + 1 == d.breaks.size(),
                               "PiecewiseUniform: need k+1 breaks for k weights");
                       for (std::size_t i = 0; i + 1 < d.breaks.size(); ++i) {
                           require(std::isfinite(d.breaks[i]) && d.breaks[i] <= d.breaks[i + 1],
                                   "PiecewiseUniform: breaks must be finite and nondecreasing");
                       }
                       require(d.breaks.front() < d.breaks.back(), "PiecewiseUniform: empty range");
                   },
                   [](const Bernoulli& d) { require(d.p >= 0.0 && d.p <= 1.0, "Bernoulli: p outside [0,1]"); },
               },
               spec);
}

double draw(const DistSpec& spec, RngStream& rng) {
    validate(spec);
    return std::visit(
        overloaded{
            [&](const Normal& d) { return d.mean + d.sd * rng.normal(); },
            [&](const Uniform& d) { return d.lo + (d.hi - d.lo) * rng.uniform(); },
            [&](const Exponential& d) { return rng.exponential() / d.rate; },
            [&](const Beta& d) {
                if (d.a == 1.0) return -std::expm1(std::log(rng.uniform_open()) / d.b);
                if (d.b == 1.0) return std::exp(std::log(rng.uniform_open()) / d.a);
                const double x = draw_gamma(d.a, rng);
                const double y = draw_gamma(d.b, rng);
                return x / (x + y);
            },
            [&](const Cauchy& d) { return d.location + d.scale * std::tan(kPi * (rng.uniform_open() - 0.5)); },
            [&](const Gamma& d) { return draw_gamma(d.shape, rng) / d.rate; },
            [&](const TruncatedNormal& d) {
                const double a = (d.lo - d.mean) / d.sd;
                const double b = (d.hi - d.mean) / d.sd;
                return std::clamp(d.mean + d.sd * draw_std_truncated_normal(a, b, rng), d.lo, d.hi);
            },
            [&](const TruncatedExponential& d) {
                const double cap = std::isfinite(d.hi) ? -std::expm1(-d.rate * (d.hi - d.lo)) : 1.0;
                const double x = d.lo - std::log1p(-cap * rng.uniform()) / d.rate;
                return std::min(x, d.hi);
            },
            [&](const Pareto& d) { return d.scale * std::exp(-std::log(rng.uniform_open()) / d.shape); },
            [&](const InverseRootGamma& d) {
                double phi;
                const double q = inverse_root_gamma_upper_mass(d);
                if (q >= 0.25) {
                    const double phi_min = std::isfinite(d.upper) ? 1.0 / (d.upper * d.upper) : 0.0;
                    do {
                        phi = draw_gamma(d.shape, rng) / d.rate;
                    } while (phi < phi_min);
                } else {
                    if (!(q > 0.0)) throw DegenerateSupport("InverseRootGamma: truncation has zero mass");
                    phi = boost::math::gamma_q_inv(d.shape, rng.uniform_open() * q) / d.rate;
                }
                return std::min(1.0 / std::sqrt(phi), d.upper);
            },
            [&](const PiecewiseUniform& d) {
                const auto pm = piecewise_masses(d);
                const double u = rng.uniform();
                std::size_t k = static_cast<std::size_t>(
                    std::upper_bound(pm.cumulative.begin(), pm.cumulative.end(), u) - pm.cumulative.begin());
                k = std::min(k, pm.cumulative.size() - 1);
                while (d.breaks[k + 1] <= d.breaks[k] || d.log_weights[k] == -kInf) --k;
                return d.breaks[k] + (d.breaks[k + 1] - d.breaks[k]) * rng.uniform();
            },
            [&](const Bernoulli& d) { return rng.uniform() < d.p ? 1.0 : 0.0; },
        },
        spec);
}

double log_density(const DistSpec& spec, double x) {
    validate(spec);
    return std::visit(
        overloaded{
            [&](const Normal& d) { return log_phi((x - d.mean) / d.sd) - std::log(d.sd); },
            [&](const Uniform& d) { return (x >= d.lo && x <= d.hi) ? -std::log(d.hi - d.lo) : -kInf; },
            [&](const Exponential& d) { return x >= 0.0 ? std::log(d.rate) - d.rate * x : -kInf; },
            [&](const Beta& d) {
                if (x < 0.0 || x > 1.0) return -kInf;
                return (d.a - 1.0) * std::log(x) + (d.b - 1.0) * std::log1p(-x) -
                       (std::lgamma(d.a) + std::lgamma(d.b) - std::lgamma(d.a + d.b));
            },
            [&](const Cauchy& d) {
                const double z = (x - d.location) / d.scale;
                return -std::log(kPi * d.scale) - std::log1p(z * z);
            },
            [&](const Gamma& d) {
                if (x < 0.0) return -kInf;
                return d.shape * std::log(d.rate) + (d.shape - 1.0) * std::log(x) - d.rate * x -
                       std::lgamma(d.shape);
            },
            [&](const TruncatedNormal& d) {
                if (x < d.lo || x > d.hi) return -kInf;
                const double a = (d.lo - d.mean) / d.sd;
                const double b = (d.hi - d.mean) / d.sd;
                return log_phi((x - d.mean) / d.sd) - std::log(d.sd) - log_std_mass(a, b);
            },
            [&](const TruncatedExponential& d) {
                if (x < d.lo || x > d.hi) return -kInf;
                const double cap = std::isfinite(d.hi) ? -std::expm1(-d.rate * (d.hi - d.lo)) : 1.0;
                return std::log(d.rate) - d.rate * (x - d.lo) - std::log(cap);
            },
            [&](const Pareto& d) {
                if (x < d.scale) return -kInf;
                return std::log(d.shape) + d.shape * std::log(d.scale) - (d.shape + 1.0) * std::log(x);
            },
            [&](const InverseRootGamma& d) {
                if (x <= 0.0 || x > d.upper) return -kInf;
                const double phi = 1.0 / (x * x);
                const double lg = d.shape * std::log(d.rate) + (d.shape - 1.0) * std::log(phi) - d.rate * phi -
                                  std::lgamma(d.shape);
                return lg + std::log(2.0) - 3.0 * std::log(x) - std::log(inverse_root_gamma_upper_mass(d));
            },
            [&](const PiecewiseUniform& d) {
                if (x < d.breaks.front() || x > d.breaks.back()) return -kInf;
                const auto pm = piecewise_masses(d);
                std::size_t k = static_cast<std::size_t>(
                    std::upper_bound(d.breaks.begin(), d.breaks.end(), x) - d.breaks.begin());
                k = std::min(k == 0 ? 0 : k - 1, d.log_weights.size() - 1);
                return d.log_weights[k] - pm.log_norm;
            },
            [&](const Bernoulli& d) {
                if (x == 1.0) return std::log(d.p);
                if (x == 0.0) return std::log1p(-d.p);
                return -kInf;
            },
        },
        spec);
}

double cdf(const DistSpec& spec, double x) {
    validate(spec);
    return std::visit(
        overloaded{
            [&](const Normal& d) { return normal_cdf((x - d.mean) / d.sd); },
            [&](const Uniform& d) { return std::clamp((x - d.lo) / (d.hi - d.lo), 0.0, 1.0); },
            [&](const Exponential& d) { return x <= 0.0 ? 0.0 : -std::expm1(-d.rate * x); },
            [&](const Beta& d) {
                if (x <= 0.0) return 0.0;
                if (x >= 1.0) return 1.0;
                return boost::math::ibeta(d.a, d.b, x);
            },
            [&](const Cauchy& d) { return 0.5 + std::atan((x - d.location) / d.scale) / kPi; },
            [&](const Gamma& d) { return x <= 0.0 ? 0.0 : boost::math::gamma_p(d.shape, d.rate * x); },
            [&](const TruncatedNormal& d) {
                return std_trunc_cdf((d.lo - d.mean) / d.sd, (d.hi - d.mean) / d.sd, (x - d.mean) / d.sd);
            },
            [&](const TruncatedExponential& d) {
                if (x <= d.lo) return 0.0;
                if (x >= d.hi) return 1.0;
                const double cap = std::isfinite(d.hi) ? -std::expm1(-d.rate * (d.hi - d.lo)) : 1.0;
                return -std::expm1(-d.rate * (x - d.lo)) / cap;
            },
            [&](const Pareto& d) { return x <= d.scale ? 0.0 : -std::expm1(d.shape * std::log(d.scale / x)); },
            [&](const InverseRootGamma& d) {
                if (x <= 0.0) return 0.0;
                if (x >= d.upper) return 1.0;
                return boost::math::gamma_q(d.shape, d.rate / (x * x)) / inverse_root_gamma_upper_mass(d);
            },
            [&](const PiecewiseUniform& d) {
                if (x <= d.breaks.front()) return 0.0;
                if (x >= d.breaks.back()) return 1.0;
                const auto pm = piecewise_masses(d);
                std::size_t k = static_cast<std::size_t>(
                    std::upper_bound(d.breaks.begin(), d.breaks.end(), x) - d.breaks.begin()) - 1;
                const double below = k == 0 ? 0.0 : pm.cumulative[k - 1];
                const double cell = pm.cumulative[k] - below;
                const double len = d.breaks[k + 1] - d.breaks[k];
                return below + (len > 0.0 ? cell * (x - d.breaks[k]) / len : 0.0);
            },
            [&](const Bernoulli& d) {
                if (x < 0.0) return 0.0;
                if (x < 1.0) return 1.0 - d.p;
                return 1.0;
            },
        },
        spec);
}

bool has_inverse_cdf(const DistSpec& spec) {
    if (std::holds_alternative<Gamma>(spec)) return false;
    if (const auto* b = std::get_if<Beta>(&spec)) return b->a == 1.0;
    return true;
}

double inverse_cdf(const DistSpec& spec, double u) {
    validate(spec);
    if (!(u >= 0.0 && u <= 1.0)) throw InvalidParameter("inverse_cdf: u outside [0,1]");
    if (!has_inverse_cdf(spec)) throw UnsupportedSpec("inverse_cdf: no quantile for " + describe(spec));
    return std::visit(
        overloaded{
            [&](const Normal& d) { return d.mean + d.sd * normal_quantile(u); },
            [&](const Uniform& d) { return d.lo + u * (d.hi - d.lo); },
            [&](const Exponential& d) { return -std::log1p(-u) / d.rate; },
            [&](const Beta& d) { return -std::expm1(std::log1p(-u) / d.b); },
            [&](const Cauchy& d) { return d.location + d.scale * std::tan(kPi * (u - 0.5)); },
            [&](const Gamma&) { return kNaN; },
            [&](const TruncatedNormal& d) {
                const double a = (d.lo - d.mean) / d.sd;
                const double b = (d.hi - d.mean) / d.sd;
                return std::clamp(d.mean + d.sd * std_trunc_quantile(a, b, u), d.lo, d.hi);
            },
            [&](const TruncatedExponential& d) {
                const double cap = std::isfinite(d.hi) ? -std::expm1(-d.rate * (d.hi - d.lo)) : 1.0;
                return std::min(d.lo - std::log1p(-u * cap) / d.rate, d.hi);
            },
            [&](const Pareto& d) { return d.scale * std::exp(-std::log1p(-u) / d.shape); },
            [&](const InverseRootGamma& d) {
                const double q = inverse_root_gamma_upper_mass(d);
                if (u <= 0.0) return 0.0;
                const double phi = boost::math::gamma_q_inv(d.shape, u * q) / d.rate;
                return std::min(1.0 / std::sqrt(phi), d.upper);
            },
            [&](const PiecewiseUniform& d) {
                const auto pm = piecewise_masses(d);
                std::size_t k = static_cast<std::size_t>(
                    std::lower_bound(pm.cumulative.begin(), pm.cumulative.end(), u) - pm.cumulative.begin());
                k = std::min(k, pm.cumulative.size() - 1);
                while (k > 0 && (d.breaks[k + 1] <= d.breaks[k] || d.log_weights[k] == -kInf)) --k;
                const double below = k == 0 ? 0.0 : pm.cumulative[k - 1];
                const double cell = pm.cumulative[k] - below;
                const double frac = cell > 0.0 ? std::clamp((u - below) / cell, 0.0, 1.0) : 0.0;
                return d.breaks[k] + frac * (d.breaks[k + 1] - d.breaks[k]);
            },
            [&](const Bernoulli& d) { return u <= 1.0 - d.p ? 0.0 : 1.0; },
        },
        spec);
}

double mean(const DistSpec& spec) {
    validate(spec);
    return std::visit(
        overloaded{
            [](const Normal& d) { return d.mean; },
            [](const Uniform& d) { return 0.5 * (d.lo + d.hi); },
            [](const Exponential& d) { return 1.0 / d.rate; },
            [](const Beta& d) { return d.a / (d.a + d.b); },
            [](const Cauchy&) { return kNaN; },
            [](const Gamma& d) { return d.shape / d.rate; },
            [](const TruncatedNormal& d) {
                const double a = (d.lo - d.mean) / d.sd;
                const double b = (d.hi - d.mean) / d.sd;
                const double lz = log_std_mass(a, b);
                const double pa = std::isfinite(a) ? std::exp(log_phi(a) - lz) : 0.0;
                const double pb = std::isfinite(b) ? std::exp(log_phi(b) - lz) : 0.0;
                return d.mean + d.sd * (pa - pb);
            },
            [](const TruncatedExponential& d) {
                if (!std::isfinite(d.hi)) return d.lo + 1.0 / d.rate;
                const double w = d.hi - d.lo;
                return d.lo + 1.0 / d.rate - w / std::expm1(d.rate * w);
            },
            [](const Pareto& d) { return d.shape > 1.0 ? d.shape * d.scale / (d.shape - 1.0) : kInf; },
            [](const InverseRootGamma& d) { return inverse_root_gamma_moment(d, 1.0); },
            [](const PiecewiseUniform& d) {
                const auto pm = piecewise_masses(d);
                double m = 0.0;
                for (std::size_t k = 0; k < pm.cumulative.size(); ++k) {
                    const double p = pm.cumulative[k] - (k == 0 ? 0.0 : pm.cumulative[k - 1]);
                    m += p * 0.5 * (d.breaks[k] + d.breaks[k + 1]);
                }
                return m;
            },
            [](const Bernoulli& d) { return d.p; },
        },
        spec);
}

double variance(const DistSpec& spec) {
    validate(spec);
    return std::visit(
        overloaded{
            [](const Normal& d) { return d.sd * d.sd; },
            [](const Uniform& d) { return (d.hi - d.lo) * (d.hi - d.lo) / 12.0; },
            [](const Exponential& d) { return 1.0 / (d.rate * d.rate); },
            [](const Beta& d) {
                const double s = d.a + d.b;
                return d.a * d.b / (s * s * (s + 1.0));
            },
            [](const Cauchy&) { return kInf; },
            [](const Gamma& d) { return d.shape / (d.rate * d.rate); },
            [](const TruncatedNormal& d) {
                const double a = (d.lo - d.mean) / d.sd;
                const double b = (d.hi - d.mean) / d.sd;
                const double lz = log_std_mass(a, b);
                const double pa = std::isfinite(a) ? std::exp(log_phi(a) - lz) : 0.0;
                const double pb = std::isfinite(b) ? std::exp(log_phi(b) - lz) : 0.0;
                const double apa = std::isfinite(a) ? a * pa : 0.0;
                const double bpb = std::isfinite(b) ? b * pb : 0.0;
                const double r = pa - pb;
                return d.sd * d.sd * std::max(0.0, 1.0 + apa - bpb - r * r);
            },
            [](const TruncatedExponential& d) {
                const double r2 = 1.0 / (d.rate * d.rate);
                if (!std::isfinite(d.hi)) return r2;
                const double w = d.hi - d.lo;
                const double e = std::exp(-d.rate * w);
                const double den = -std::expm1(-d.rate * w);
                return r2 - w * w * e / (den * den);
            },
            [](const Pareto& d) {
                if (d.shape <= 2.0) return kInf;
                const double s1 = d.shape - 1.0;
                return d.scale * d.scale * d.shape / (s1 * s1 * (d.shape - 2.0));
            },
            [](const InverseRootGamma& d) {
                const double m1 = inverse_root_gamma_moment(d, 1.0);
                const double m2 = inverse_root_gamma_moment(d, 2.0);
                return std::isfinite(m2) ? std::max(0.0, m2 - m1 * m1) : kInf;
            },
            [](const PiecewiseUniform& d) {
                const auto pm = piecewise_masses(d);
                double m1 = 0.0;
                double m2 = 0.0;
                for (std::size_t k = 0; k < pm.cumulative.size(); ++k) {
                    const double p = pm.cumulative[k] - (k == 0 ? 0.0 : pm.cumulative[k - 1]);
                    const double lo = d.breaks[k];
                    const double hi = d.breaks[k + 1];
                    m1 += p * 0.5 * (lo + hi);
                    m2 += p * (lo * lo + lo * hi + hi * hi) / 3.0;
                }
                return std::max(0.0, m2 - m1 * m1);
            },
            [](const Bernoulli& d) { return d.p * (1.0 - d.p); },
        },
        spec);
}

std::string describe(const DistSpec& spec) {
    std::ostringstream os;
    os.precision(6);
    std::visit(overloaded{
                   [&](const Normal& d) { os << "Normal(" << d.mean << ", " << d.sd << ")"; },
                   [&](const Uniform& d) { os << "Uniform(" << d.lo << ", " << d.hi << ")"; },
                   [&](const Exponential& d) { os << "Exponential(" << d.rate << ")"; },
                   [&](const Beta& d) { os << "Beta(" << d.a << ", " << d.b << ")"; },
                   [&](const Cauchy& d) { os << "Cauchy(" << d.location << ", " << d.scale << ")"; },
                   [&](const Gamma& d) { os << "Gamma(" << d.shape << ", " << d.rate << ")"; },
                   [&](const TruncatedNormal& d) {
                       os << "TruncatedNormal(" << d.mean << ", " << d.sd << ", " << d.lo << ", " << d.hi << ")";
                   },
                   [&](const TruncatedExponential& d) {
                       os << "TruncatedExponential(" << d.rate << ", " << d.lo << ", " << d.hi << ")";
                   },
                   [&](const Pareto& d) { os << "Pareto(" << d.scale << ", " << d.shape << ")"; },
                   [&](const InverseRootGamma& d) {
                       os << "InverseRootGamma(" << d.shape << ", " << d.rate << ", " << d.upper << ")";
                   },
                   [&](const PiecewiseUniform& d) { os << "PiecewiseUniform(" << d.log_weights.size() << " cells)"; },
                   [&](const Bernoulli& d) { os << "Bernoulli(" << d.p << ")"; },
               },
               spec);
    return os.str();
}

}  // namespace gibbslab
