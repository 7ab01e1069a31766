#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "gibbslab/errors.hpp"
#include "gibbslab/numerics/distributions.hpp"
#include "gibbslab/numerics/rng.hpp"
#include "gibbslab/numerics/special.hpp"
#include "gibbslab/numerics/stats_tests.hpp"
#include "oracles.hpp"

using namespace gibbslab;

namespace {

std::vector<double> draws(const DistSpec& spec, std::size_t n, std::uint64_t seed) {
    RngStream rng(seed, 0);
    std::vector<double> xs(n);
    for (auto& x : xs) x = draw(spec, rng);
    return xs;
}

struct Moments {
    double mean, var, se_mean, se_var;
};

// Sample moments with standard errors estimated from the same sample.
Moments moments(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double m = 0.0;
    for (double x : xs) m += x;
    m /= n;
    double v = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d2 = (x - m) * (x - m);
        v += d2;
        m4 += d2 * d2;
    }
    v /= n - 1.0;
    m4 /= n;
    return {m, v, std::sqrt(v / n), std::sqrt(std::max(m4 - v * v, 0.0) / n)};
}

double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double big_phi(double z) { return oracle::normal_cdf(z, 0.0, 1.0); }

}  // namespace

TEST(Rng, SameSeedAndStreamRepeatBitForBit) {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 10000; ++i) ASSERT_EQ(a.next(), b.next());
    RngStream c(42, 7), d(42, 7);
    for (int i = 0; i < 10000; ++i) ASSERT_EQ(c.normal(), d.normal());
}

TEST(Rng, DistinctStreamsLookIndependent) {
    RngStream a(42, 0), b(42, 1);
    std::vector<double> ua(100000), ub(100000);
    for (std::size_t i = 0; i < ua.size(); ++i) {
        ua[i] = a.uniform();
        ub[i] = b.uniform();
    }
    EXPECT_LT(std::fabs(sample_correlation(ua, ub)), 0.015);
    EXPECT_LT(ks_two_sample(ua, ub), ks_two_sample_critical(ua.size(), ub.size(), 1e-3));
}

TEST(Rng, DeriveIsDeterministicAndDiffersFromParent) {
    RngStream a(9, 3);
    auto c1 = a.derive(5), c2 = a.derive(5), c3 = a.derive(6);
    const auto x1 = c1.next(), x2 = c2.next(), x3 = c3.next();
    EXPECT_EQ(x1, x2);
    EXPECT_NE(x1, x3);
    EXPECT_NE(x1, RngStream(9, 3).next());
}

TEST(Rng, UniformRanges) {
    RngStream rng(1, 1);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform(), v = rng.uniform_open();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        ASSERT_GT(v, 0.0);
        ASSERT_LT(v, 1.0);
    }
}

TEST(Draw, UniformInUnitInterval) {
    for (double x : draws(Uniform{0.0, 1.0}, 10000, 3)) {
        ASSERT_GE(x, 0.0);
        ASSERT_LT(x, 1.0);
    }
}

TEST(Draw, TruncatedNormalFarTailStaysInside) {
    for (double x : draws(TruncatedNormal{0.0, 1.0, 5.0, 6.0}, 10000, 4)) {
        ASSERT_GE(x, 5.0);
        ASSERT_LE(x, 6.0);
    }
}

TEST(Draw, ExponentialMean) {
    const auto xs = draws(Exponential{2.0}, 1000000, 5);
    EXPECT_NEAR(sample_mean(xs), 0.5, 0.01);
}

TEST(Draw, InvalidParametersThrow) {
    RngStream rng(1, 0);
    EXPECT_THROW(draw(Normal{0.0, -1.0}, rng), InvalidParameter);
    EXPECT_THROW(draw(Exponential{0.0}, rng), InvalidParameter);
    EXPECT_THROW(draw(Beta{1.0, -2.0}, rng), InvalidParameter);
    EXPECT_THROW(draw(Uniform{2.0, 1.0}, rng), InvalidParameter);
    EXPECT_THROW(draw(TruncatedNormal{0.0, 1.0, 3.0, 3.0}, rng), InvalidParameter);
    EXPECT_THROW(draw(Gamma{0.0, 1.0}, rng), InvalidParameter);
    EXPECT_THROW(log_density(Cauchy{0.0, 0.0}, 1.0), InvalidParameter);
}

TEST(Draw, ZeroMassTruncationIsDegenerate) {
    RngStream rng(1, 0);
    EXPECT_THROW(draw(TruncatedNormal{0.0, 1.0, 1e200, 1e201}, rng), DegenerateSupport);
}

TEST(LogDensity, ClosedFormValues) {
    EXPECT_NEAR(log_density(Normal{0.0, 1.0}, 0.0), -0.9189385, 1e-7);
    EXPECT_NEAR(log_density(Cauchy{0.0, 1.0}, 0.0), -std::log(std::numbers::pi), 1e-14);
    EXPECT_EQ(log_density(Uniform{0.0, 1.0}, 2.0), -kInf);
    EXPECT_EQ(log_density(Exponential{1.0}, -1.0), -kInf);
    EXPECT_NEAR(log_density(Gamma{3.0, 2.0}, 1.5), std::log(4.0 * 2.25 * std::exp(-3.0)), 1e-12);
    EXPECT_NEAR(log_density(Beta{2.0, 3.0}, 0.25), std::log(12.0 * 0.25 * 0.75 * 0.75), 1e-12);
}

TEST(LogDensity, IntegratesToOne) {
    // Trapezoid over each law's effective support.
    struct Case {
        DistSpec spec;
        double lo, hi;
    };
    const std::vector<Case> cases = {
        {Normal{1.0, 2.0}, -20.0, 22.0},
        {Gamma{2.5, 1.5}, 0.0, 40.0},
        {TruncatedNormal{0.0, 1.0, -0.5, 2.0}, -0.5, 2.0},
        {TruncatedExponential{2.0, 1.0, 3.0}, 1.0, 3.0},
        {InverseRootGamma{3.0, 2.0, 4.0}, 1e-6, 4.0},
        {PiecewiseUniform{{0.0, 1.0, 3.0}, {0.0, std::log(0.5)}}, 0.0, 3.0},
    };
    for (const auto& c : cases) {
        const int m = 400000;
        const double h = (c.hi - c.lo) / m;
        double s = 0.0;
        for (int k = 0; k <= m; ++k) {
            const double x = c.lo + h * k;
            double f = std::exp(log_density(c.spec, x));
            if (k == 0 || k == m) f *= 0.5;
            s += f;
        }
        EXPECT_NEAR(s * h, 1.0, 2e-4) << describe(c.spec);
    }
}

TEST(InverseCdf, ClosedFormValues) {
    EXPECT_NEAR(inverse_cdf(Exponential{1.0}, 0.5), std::log(2.0), 1e-15);
    EXPECT_EQ(inverse_cdf(Uniform{3.0, 5.0}, 0.0), 3.0);
    for (double u : {0.01, 0.2, 0.5, 0.77, 0.999}) {
        const double expected = 1.0 - std::sqrt(1.0 - u);
        EXPECT_NEAR(inverse_cdf(Beta{1.0, 2.0}, u), expected, 1e-14);
        // Same value through the stick-breaking form 1 - aux^{1/theta} with aux = 1 - u.
        EXPECT_NEAR(1.0 - std::pow(1.0 - u, 1.0 / 2.0), expected, 1e-14);
    }
}

TEST(InverseCdf, NormalQuantileMatchesErfcInversion) {
    for (int k = 1; k < 1000; ++k) {
        const double u = k / 1000.0;
        const double z = normal_quantile(u);
        EXPECT_NEAR(oracle::normal_cdf(z, 0.0, 1.0), u, 1e-12);
    }
    EXPECT_NEAR(normal_quantile(1e-12), -7.034483825795, 1e-9);
}

TEST(InverseCdf, UnsupportedLawsThrow) {
    EXPECT_THROW(inverse_cdf(Gamma{2.0, 1.0}, 0.5), UnsupportedSpec);
    EXPECT_THROW(inverse_cdf(Beta{2.0, 2.0}, 0.5), UnsupportedSpec);
    EXPECT_FALSE(has_inverse_cdf(Gamma{2.0, 1.0}));
    EXPECT_TRUE(has_inverse_cdf(Beta{1.0, 3.0}));
}

TEST(InverseCdf, MonotoneAndInvertsCdf) {
    const std::vector<DistSpec> laws = {
        Normal{1.0, 2.0},
        Uniform{-1.0, 4.0},
        Exponential{0.7},
        Beta{1.0, 2.5},
        Cauchy{2.0, 0.5},
        TruncatedNormal{0.0, 1.0, -1.0, 2.0},
        TruncatedNormal{0.0, 1.0, 6.0, kInf},
        TruncatedExponential{1.5, 0.5, 4.0},
        Pareto{2.0, 3.0},
        InverseRootGamma{2.0, 1.0, 3.0},
    };
    for (const auto& law : laws) {
        double prev = -kInf;
        for (int k = 1; k <= 1000; ++k) {
            const double u = (k - 0.5) / 1000.0;
            const double x = inverse_cdf(law, u);
            ASSERT_GE(x, prev) << describe(law);
            prev = x;
            const double back = inverse_cdf(law, cdf(law, x));
            ASSERT_NEAR(back, x, 1e-8 * std::max(1.0, std::fabs(x))) << describe(law) << " u=" << u;
        }
    }
}

TEST(Moments, EveryLawWithFiniteMomentsWithinFiveStandardErrors) {
    struct Case {
        DistSpec spec;
        double mean, var;
    };
    const double a = 2.0, b = 5.0;
    // Truncated normal on [lo, hi] for the standard law.
    const double tl = -0.5, th = 1.5;
    const double tz = big_phi(th) - big_phi(tl);
    const double tmean = (phi(tl) - phi(th)) / tz;
    const double tvar = 1.0 + (tl * phi(tl) - th * phi(th)) / tz - tmean * tmean;
    // Exponential rate r truncated to [l, h].
    const double r = 1.5, el = 1.0, eh = 2.0, w = eh - el;
    const double emean = el + 1.0 / r - w / std::expm1(r * w);
    const double evar = 1.0 / (r * r) - w * w * std::exp(r * w) / std::pow(std::expm1(r * w), 2);
    // phi^(-1/2) for phi ~ Gamma(k, rate q): E phi^s = Gamma(k + s) / (Gamma(k) q^s).
    const double k = 4.0, q = 3.0;
    const double imean = std::exp(std::lgamma(k - 0.5) - std::lgamma(k)) * std::sqrt(q);
    const double ivar = q / (k - 1.0) - imean * imean;
    // Piecewise uniform: mass 1 on [0, 1) at level 1, mass 1 on [1, 3) at level 0.5.
    const double pmean = 0.5 * 0.5 + 0.5 * 2.0;
    const double pvar = 0.5 * (1.0 / 3.0) + 0.5 * (13.0 / 3.0) - pmean * pmean;
    const std::vector<Case> cases = {
        {Normal{-1.0, 3.0}, -1.0, 9.0},
        {Uniform{2.0, 6.0}, 4.0, 16.0 / 12.0},
        {Exponential{2.0}, 0.5, 0.25},
        {Beta{a, b}, a / (a + b), a * b / ((a + b) * (a + b) * (a + b + 1.0))},
        {Gamma{0.4, 2.0}, 0.2, 0.1},
        {Gamma{7.5, 0.5}, 15.0, 30.0},
        {TruncatedNormal{0.0, 1.0, tl, th}, tmean, tvar},
        {TruncatedExponential{r, el, eh}, emean, evar},
        {TruncatedExponential{r, el, kInf}, el + 1.0 / r, 1.0 / (r * r)},
        {Pareto{1.0, 6.0}, 6.0 / 5.0, 6.0 / (25.0 * 4.0)},
        {InverseRootGamma{k, q, kInf}, imean, ivar},
        {PiecewiseUniform{{0.0, 1.0, 3.0}, {0.0, std::log(0.5)}}, pmean, pvar},
        {Bernoulli{0.3}, 0.3, 0.21},
    };
    std::uint64_t seed = 100;
    for (const auto& c : cases) {
        const auto m = moments(draws(c.spec, 1000000, seed++));
        EXPECT_NEAR(m.mean, c.mean, 5.0 * m.se_mean) << describe(c.spec);
        EXPECT_NEAR(m.var, c.var, 5.0 * m.se_var) << describe(c.spec);
    }
}

TEST(Truncated, SamplesStayInsideAndMatchRenormalizedLaw) {
    // F is any antiderivative of the untruncated density; differences give bin masses.
    // Upper normal tails use -Q(x) so far-tail masses keep their relative precision.
    struct Case {
        DistSpec spec;
        double lo, hi;          // support
        double bin_lo, bin_hi;  // binned range
        std::function<double(double)> F;
    };
    const auto lower = [](double m, double s) { return [=](double x) { return oracle::normal_cdf(x, m, s); }; };
    const auto upper = [](double m, double s) {
        return [=](double x) { return -0.5 * std::erfc((x - m) / (s * std::sqrt(2.0))); };
    };
    const auto expo = [](double r) { return [=](double x) { return -std::exp(-r * x); }; };
    const std::vector<Case> cases = {
        {TruncatedNormal{0.0, 1.0, 5.0, 6.0}, 5.0, 6.0, 5.0, 6.0, upper(0.0, 1.0)},
        {TruncatedNormal{0.0, 1.0, 9.0, kInf}, 9.0, kInf, 9.0, 11.0, upper(0.0, 1.0)},
        {TruncatedNormal{2.0, 0.5, -1.0, 0.5}, -1.0, 0.5, -1.0, 0.5, lower(2.0, 0.5)},
        {TruncatedNormal{0.0, 1.0, -1.5, 1.0}, -1.5, 1.0, -1.5, 1.0, lower(0.0, 1.0)},
        {TruncatedNormal{0.0, 1.0, -kInf, -8.0}, -kInf, -8.0, -10.0, -8.0, lower(0.0, 1.0)},
        {TruncatedExponential{2.0, 1.0, 3.0}, 1.0, 3.0, 1.0, 3.0, expo(2.0)},
        {TruncatedExponential{0.5, 0.0, kInf}, 0.0, kInf, 0.0, 40.0, expo(0.5)},
    };
    std::uint64_t seed = 200;
    for (const auto& c : cases) {
        const auto xs = draws(c.spec, 100000, seed++);
        for (double x : xs) {
            ASSERT_GE(x, c.lo) << describe(c.spec);
            ASSERT_LE(x, c.hi) << describe(c.spec);
        }
        const int bins = 20;
        std::vector<double> obs(bins, 0.0), expected(bins);
        const double total = c.F(c.hi) - c.F(c.lo);
        const double width = c.bin_hi - c.bin_lo;
        for (int b = 0; b < bins; ++b) {
            // End bins absorb any unbounded remainder.
            const double a0 = b == 0 ? c.lo : c.bin_lo + width * b / bins;
            const double a1 = b == bins - 1 ? c.hi : c.bin_lo + width * (b + 1) / bins;
            expected[b] = static_cast<double>(xs.size()) * (c.F(a1) - c.F(a0)) / total;
        }
        for (double x : xs) {
            const auto b = static_cast<int>(std::floor((x - c.bin_lo) / width * bins));
            obs[std::clamp(b, 0, bins - 1)] += 1.0;
        }
        const auto res = chi_square_gof(obs, expected);
        EXPECT_TRUE(res.passed) << describe(c.spec) << " chi2=" << res.statistic << " crit=" << res.critical;
    }
}

TEST(Ks, QuantileSamplesAreWithinOneStep) {
    const std::size_t n = 999;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = (i + 1.0) / (n + 1.0);
    EXPECT_LE(ks_statistic(xs, [](double x) { return std::clamp(x, 0.0, 1.0); }), 1.0 / (n + 1.0) + 1e-15);
}

TEST(Ks, ConstantSamplesGiveAtLeastOneHalf) {
    std::vector<double> xs(10000, 0.0);
    EXPECT_GE(ks_statistic(xs, [](double x) { return oracle::normal_cdf(x, 0.0, 1.0); }), 0.5);
}

TEST(Ks, SingleSampleAtMedian) {
    std::vector<double> xs{0.0};
    EXPECT_DOUBLE_EQ(ks_statistic(xs, [](double x) { return oracle::normal_cdf(x, 0.0, 1.0); }), 0.5);
}

TEST(Ks, AgreesWithIndependentImplementation) {
    auto xs = draws(Normal{0.3, 1.0}, 5000, 17);
    const auto cdf = [](double x) { return oracle::normal_cdf(x, 0.0, 1.0); };
    EXPECT_NEAR(ks_statistic(xs, cdf), oracle::ks_distance(xs, cdf), 1e-14);
}

TEST(Ks, EmptyInputThrows) {
    std::vector<double> none;
    EXPECT_THROW(ks_statistic(none, [](double) { return 0.5; }), EmptyInput);
    std::vector<double> one{1.0};
    EXPECT_THROW(ks_two_sample(none, one), EmptyInput);
}

TEST(ChiSquare, Examples) {
    std::vector<double> e{5.0, 5.0};
    EXPECT_EQ(chi_square_counts(std::vector<double>{5.0, 5.0}, e), 0.0);
    EXPECT_DOUBLE_EQ(chi_square_counts(std::vector<double>{10.0, 0.0}, e), 10.0);
    std::vector<double> same{3.0, 8.0, 1.5};
    EXPECT_EQ(chi_square_counts(same, same), 0.0);
    EXPECT_THROW(chi_square_counts(std::vector<double>{1.0}, e), LengthMismatch);
    EXPECT_THROW(chi_square_counts(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 0.0}), InvalidParameter);
}

TEST(ChiSquare, QuantileMatchesIncompleteGammaBisection) {
    // Table values for the oracle itself.
    EXPECT_NEAR(oracle::chi_square_quantile(1.0, 0.95), 3.841458820694124, 1e-9);
    EXPECT_NEAR(oracle::chi_square_quantile(10.0, 0.999), 29.58829844507442, 1e-8);
    for (double dof : {1.0, 3.0, 12.0, 50.0})
        for (double p : {0.5, 0.95, 0.999})
            EXPECT_NEAR(chi_square_quantile(dof, p), oracle::chi_square_quantile(dof, p),
                        1e-6 * oracle::chi_square_quantile(dof, p));
}

TEST(ChiSquare, GofRejectsWrongLaw) {
    const auto xs = draws(Normal{0.2, 1.0}, 20000, 33);
    std::vector<double> obs(10, 0.0), expected(10);
    for (int b = 0; b < 10; ++b) {
        const double lo = b == 0 ? -kInf : normal_quantile(b / 10.0);
        const double hi = b == 9 ? kInf : normal_quantile((b + 1) / 10.0);
        expected[b] = 2000.0;
        for (double x : xs)
            if (x >= lo && x < hi) obs[b] += 1.0;
    }
    EXPECT_FALSE(chi_square_gof(obs, expected).passed);
}
