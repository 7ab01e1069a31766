#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "gibbslab/diagnostics/autocorrelation.hpp"
#include "gibbslab/engine/sampler.hpp"
#include "gibbslab/errors.hpp"
#include "gibbslab/harness/validation.hpp"
#include "gibbslab/model/parametrization.hpp"
#include "gibbslab/model/reparametrization.hpp"
#include "gibbslab/models/repeated_measurements.hpp"
#include "gibbslab/models/synthetic.hpp"
#include "gibbslab/numerics/distributions.hpp"
#include "gibbslab/numerics/stats_tests.hpp"

using namespace gibbslab;

namespace {

double at(const Reparametrization& r, double aux, std::vector<double> theta) {
    const std::vector<double> a{aux};
    return r.forward(a, theta)[0];
}

std::vector<double> uniforms(std::size_t n, std::uint64_t seed) {
    RngStream rng(seed, 0);
    std::vector<double> u(n);
    for (auto& x : u) x = rng.uniform_open();
    return u;
}

}  // namespace

TEST(Parametrization, LabelsRoundTrip) {
    for (const auto& p : {Parametrization::centered(), Parametrization::noncentered(), Parametrization::partial(0.25),
                          Parametrization::data_based("vm")})
        EXPECT_EQ(Parametrization::parse(p.label()), p) << p.label();
    EXPECT_THROW(Parametrization::partial(1.5), InvalidParameter);
    EXPECT_THROW(Parametrization::parse("sideways"), ConfigError);
}

TEST(LocationNcp, Examples) {
    const auto r = location_ncp();
    EXPECT_DOUBLE_EQ(at(r, 1.5, {2.0}), 3.5);
    EXPECT_DOUBLE_EQ(at(r, -0.7, {0.0}), -0.7);
    RngStream rng(1, 0);
    const std::vector<double> x{3.5}, th{2.0};
    EXPECT_DOUBLE_EQ(r.conditional_inverse(x, th, {}, rng)[0], 1.5);
}

TEST(LocationNcp, AuxLawDoesNotMoveWithTheta) {
    const auto r = location_ncp();
    RngStream a(11, 0), b(11, 1);
    std::vector<double> s0, s7;
    for (int i = 0; i < 10000; ++i) {
        const std::vector<double> x0{draw(Normal{0.0, 1.0}, a)}, x7{draw(Normal{7.0, 1.0}, b)};
        s0.push_back(r.conditional_inverse(x0, std::vector<double>{0.0}, {}, a)[0]);
        s7.push_back(r.conditional_inverse(x7, std::vector<double>{7.0}, {}, b)[0]);
    }
    EXPECT_LT(ks_two_sample(s0, s7), 0.02);
}

TEST(ScaleNcp, Examples) {
    const auto r = scale_ncp();
    EXPECT_DOUBLE_EQ(at(r, 0.5, {3.0}), 1.5);
    EXPECT_DOUBLE_EQ(at(r, 0.3, {1.0}), 0.3);
    EXPECT_THROW(at(r, 0.3, {0.0}), InvalidParameter);
    EXPECT_THROW(at(r, 0.3, {-2.0}), InvalidParameter);
}

TEST(ScaleNcp, UniformAuxGivesUniformOnZeroTheta) {
    const auto r = scale_ncp();
    const double theta = 2.5;
    std::vector<double> xs;
    for (double u : uniforms(10000, 21)) xs.push_back(at(r, u, {theta}));
    EXPECT_LT(ks_statistic(xs, [&](double x) { return std::clamp(x / theta, 0.0, 1.0); }), 0.02);
}

TEST(InverseCdfNcp, StickBreakingMap) {
    const auto family = [](std::span<const double> th) -> DistSpec { return Beta{1.0, th[0]}; };
    const auto upper = inverse_cdf_ncp(family, QuantileSide::Upper);
    for (double aux : {0.1, 0.5, 0.93})
        for (double theta : {0.5, 2.0, 7.0})
            EXPECT_NEAR(at(upper, aux, {theta}), 1.0 - std::pow(aux, 1.0 / theta), 1e-14);
    const auto lower = inverse_cdf_ncp(family);
    EXPECT_EQ(at(lower, 0.0, {2.0}), 0.0);
}

TEST(InverseCdfNcp, ForwardDrawsFollowBetaOneTheta) {
    const auto r = inverse_cdf_ncp([](std::span<const double> th) -> DistSpec { return Beta{1.0, th[0]}; });
    std::vector<double> xs;
    for (double u : uniforms(10000, 22)) xs.push_back(at(r, u, {2.0}));
    EXPECT_LT(ks_statistic(xs, [](double x) { return 1.0 - std::pow(1.0 - std::clamp(x, 0.0, 1.0), 2.0); }), 0.02);
}

TEST(InverseCdfNcp, RoundTripAndUnsupportedFamily) {
    const auto r = inverse_cdf_ncp([](std::span<const double> th) -> DistSpec { return Cauchy{th[0], 2.0}; });
    RngStream rng(1, 0);
    for (double u : uniforms(200, 23)) {
        const std::vector<double> aux{u}, th{1.5};
        const auto x = r.forward(aux, th);
        EXPECT_NEAR(r.forward(r.conditional_inverse(x, th, {}, rng), th)[0], x[0], 1e-12 * std::max(1.0, std::fabs(x[0])));
    }
    const auto bad = inverse_cdf_ncp([](std::span<const double>) -> DistSpec { return Gamma{2.0, 1.0}; });
    EXPECT_THROW(at(bad, 0.5, {1.0}), UnsupportedSpec);
}

TEST(MarkovNcp, SinglePointIsPlainInverseCdf) {
    const auto law = [](std::span<const double> th, std::optional<double>) -> DistSpec { return Normal{th[0], 2.0}; };
    const auto chain = markov_recursive_ncp(law, 1);
    const auto plain = inverse_cdf_ncp([](std::span<const double> th) -> DistSpec { return Normal{th[0], 2.0}; });
    for (double u : {0.01, 0.3, 0.5, 0.99}) EXPECT_EQ(at(chain, u, {0.4}), at(plain, u, {0.4}));
}

TEST(MarkovNcp, GaussianArOneHasLagOneRho) {
    const double rho = 0.5, sx = 1.0;
    const auto law = [=](std::span<const double>, std::optional<double> prev) -> DistSpec {
        if (!prev) return Normal{0.0, sx};
        return Normal{rho * *prev, std::sqrt(1.0 - rho * rho) * sx};
    };
    const std::size_t n = 100000;
    const auto r = markov_recursive_ncp(law, n);
    const auto x = r.forward(uniforms(n, 24), std::vector<double>{});
    EXPECT_NEAR(lag1_autocorrelation(x), 0.5, 0.03);
}

TEST(MarkovNcp, MedianInputsFollowConditionalMedians) {
    const auto law = [](std::span<const double>, std::optional<double> prev) -> DistSpec {
        if (!prev) return Normal{1.0, 1.0};
        return Normal{0.5 * *prev, 0.8};
    };
    const auto r = markov_recursive_ncp(law, 6);
    const auto x = r.forward(std::vector<double>(6, 0.5), std::vector<double>{});
    double expect = 1.0;
    for (double v : x) {
        EXPECT_NEAR(v, expect, 1e-15);
        expect *= 0.5;
    }
    RngStream rng(2, 0);
    const auto back = r.conditional_inverse(x, std::vector<double>{}, {}, rng);
    for (double u : back) EXPECT_NEAR(u, 0.5, 1e-12);
}

TEST(GaussianFieldNcp, IdentityCorrelationIsIdentityMap) {
    const auto r = gaussian_field_ncp(Eigen::MatrixXd(Eigen::MatrixXd::Identity(4, 4)));
    const std::vector<double> aux{0.3, -1.0, 2.0, 0.0}, th{0.0, 1.0};
    const auto x = r.forward(aux, th);
    for (std::size_t i = 0; i < aux.size(); ++i) EXPECT_DOUBLE_EQ(x[i], aux[i]);
}

TEST(GaussianFieldNcp, EmpiricalCorrelationMatchesTarget) {
    Eigen::MatrixXd c(2, 2);
    c << 1.0, 0.8, 0.8, 1.0;
    const auto r = gaussian_field_ncp(c);
    RngStream rng(25, 0);
    std::vector<double> a, b;
    for (int i = 0; i < 100000; ++i) {
        const std::vector<double> aux{rng.normal(), rng.normal()}, th{1.0, 3.0};
        const auto x = r.forward(aux, th);
        a.push_back(x[0]);
        b.push_back(x[1]);
    }
    EXPECT_NEAR(sample_correlation(a, b), 0.8, 0.02);
    EXPECT_NEAR(sample_mean(a), 1.0, 0.05);
    EXPECT_NEAR(sample_variance(b), 9.0, 0.2);
}

TEST(GaussianFieldNcp, RoundTripOnRandomInstances) {
    RngStream rng(26, 0);
    for (int rep = 0; rep < 20; ++rep) {
        Eigen::MatrixXd g(5, 5);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) g(i, j) = rng.normal();
        Eigen::MatrixXd s = g * g.transpose() + 0.5 * Eigen::MatrixXd::Identity(5, 5);
        const Eigen::VectorXd d = s.diagonal().cwiseSqrt().cwiseInverse();
        const Eigen::MatrixXd corr = d.asDiagonal() * s * d.asDiagonal();
        const Eigen::MatrixXd sym = 0.5 * (corr + corr.transpose());
        const auto r = gaussian_field_ncp(sym);
        std::vector<double> x(5);
        for (auto& v : x) v = 3.0 * rng.normal();
        const std::vector<double> th{rng.normal(), 0.5 + rng.uniform()};
        const auto back = r.forward(r.conditional_inverse(x, th, {}, rng), th);
        for (int i = 0; i < 5; ++i) EXPECT_NEAR(back[i], x[i], 1e-10);
    }
}

TEST(GaussianFieldNcp, RejectsIndefiniteCorrelation) {
    Eigen::MatrixXd c(2, 2);
    c << 1.0, 1.2, 1.2, 1.0;
    EXPECT_THROW(gaussian_field_ncp(c), NotPositiveDefinite);
}

TEST(PartialNcp, UnitVarianceAndThetaMeanIsLocation) {
    const auto p = partial_ncp([](auto, auto, std::size_t) { return 1.0; },
                               [](std::span<const double> th, auto, std::size_t) { return th[0]; });
    const auto loc = location_ncp();
    for (double aux : {-2.0, 0.0, 1.25})
        for (double theta : {-1.0, 0.0, 4.0}) EXPECT_DOUBLE_EQ(at(p, aux, {theta}), at(loc, aux, {theta}));
}

TEST(PartialNcp, PriorMomentsGiveNoncenteredAux) {
    // X | Theta ~ N(Theta, sx^2): v = sx^2, m = Theta.
    const double sx = 1.7;
    const auto p = partial_ncp([=](auto, auto, std::size_t) { return sx * sx; },
                               [](std::span<const double> th, auto, std::size_t) { return th[0]; });
    RngStream a(27, 0), b(27, 1);
    std::vector<double> s1, s2;
    for (int i = 0; i < 10000; ++i) {
        const std::vector<double> x1{draw(Normal{1.0, sx}, a)}, x2{draw(Normal{3.0, sx}, b)};
        s1.push_back(p.conditional_inverse(x1, std::vector<double>{1.0}, {}, a)[0]);
        s2.push_back(p.conditional_inverse(x2, std::vector<double>{3.0}, {}, b)[0]);
    }
    EXPECT_LT(ks_two_sample(s1, s2), 0.02);
}

TEST(PartialNcp, NonpositiveVarianceThrows) {
    const auto p = partial_ncp([](auto, auto, std::size_t) { return 0.0; }, [](auto, auto, std::size_t) { return 0.0; });
    EXPECT_THROW(at(p, 1.0, {1.0}), InvalidParameter);
}

TEST(PartialNcp, ConditionalMomentsDecoupleTheGibbsBlocks) {
    RngStream data(28, 0);
    RepeatedMeasurements m({1.0, 1.0}, synthetic::repeated_measurements(0.0, 1.0, 1.0, 10, data));
    SamplerConfig cfg;
    cfg.iterations = 110000;
    cfg.burn_in = 10000;
    cfg.parametrization = Parametrization::data_based("vm");
    const auto tr = run_chain(m, cfg, RngStream(28, 1));
    EXPECT_LT(std::fabs(lag1_autocorrelation(tr.theta)), 0.05);
}

TEST(Compose, Examples) {
    const auto id = compose_reparam(identity_reparam(), identity_reparam());
    EXPECT_DOUBLE_EQ(at(id, 0.37, {5.0}), 0.37);
    // Location first, then scale: 2 * (1 + 2).
    const auto sl = compose_reparam(scale_ncp(), location_ncp());
    EXPECT_DOUBLE_EQ(at(sl, 1.0, {2.0}), 6.0);
}

TEST(Compose, RoundTripOfRoundTripParts) {
    const auto inner = inverse_cdf_ncp([](std::span<const double> th) -> DistSpec { return Exponential{th[0]}; });
    const auto r = compose_reparam(scale_ncp(), compose_reparam(location_ncp(), inner));
    RngStream rng(29, 0);
    for (double u : uniforms(500, 29)) {
        const std::vector<double> aux{u}, th{1.0 + u};
        const auto x = r.forward(aux, th);
        const auto back = r.conditional_inverse(x, th, {}, rng);
        EXPECT_NEAR(back[0], u, 1e-12);
        EXPECT_NEAR(r.forward(back, th)[0], x[0], 1e-12 * std::max(1.0, std::fabs(x[0])));
    }
}

TEST(PartialEndpoints, WeightOneIsCenteredAndWeightZeroIsNoncentered) {
    RngStream data(30, 0);
    RepeatedMeasurements m({1.0, 1.0}, synthetic::repeated_measurements(0.5, 1.0, 1.0, 20, data));
    SamplerConfig cfg;
    cfg.iterations = 5000;
    cfg.burn_in = 100;
    const auto run = [&](Parametrization p) {
        auto c = cfg;
        c.parametrization = p;
        return run_chain(m, c, RngStream(30, 1)).theta;
    };
    const auto ca = run(Parametrization::centered()), w1 = run(Parametrization::partial(1.0));
    const auto nca = run(Parametrization::noncentered()), w0 = run(Parametrization::partial(0.0));
    ASSERT_EQ(ca.size(), w1.size());
    ASSERT_EQ(nca.size(), w0.size());
    for (std::size_t i = 0; i < ca.size(); ++i) {
        ASSERT_NEAR(ca[i], w1[i], 1e-10) << i;
        ASSERT_NEAR(nca[i], w0[i], 1e-10) << i;
    }
}

// log P(Theta | X*, Y) must differ from the joint only by a constant in Theta.
TEST(Practicality, ThetaTargetMatchesJointUpToConstant) {
    for (const auto& c : harness::validation_cases()) {
        const Model& m = *c.model;
        RngStream rng(31, 0);
        ChainState start = m.initial_state(m.default_theta0(), rng);
        m.update_latent(start, LatentUpdate{}, rng);
        const auto [lo, hi] = m.theta_support();
        for (const auto& p : m.supported()) {
            ChainState st = start;
            try {
                if (!p.is_centered()) m.to_aux(st, p, rng);
                (void)m.log_theta_conditional(st, p, st.theta);
            } catch (const ConstraintViolation&) {
                continue;
            } catch (const DegenerateConditional&) {
                continue;
            }
            const double t = st.theta;
            const double ref_c = m.log_theta_conditional(st, p, t), ref_j = m.log_joint(st, p, t);
            ASSERT_TRUE(std::isfinite(ref_c) && std::isfinite(ref_j)) << c.label << " " << p.label();
            for (double f : {0.9, 0.97, 1.01, 1.05}) {
                const double th = t * f;
                if (!(th > lo && th < hi)) continue;
                const double dc = m.log_theta_conditional(st, p, th) - ref_c;
                const double dj = m.log_joint(st, p, th) - ref_j;
                if (dc == -kInf || dj == -kInf) {
                    EXPECT_EQ(dc, dj) << c.label << " " << p.label() << " theta=" << th;
                    continue;
                }
                EXPECT_NEAR(dc, dj, 1e-8 * std::max(1.0, std::fabs(dj))) << c.label << " " << p.label();
            }
        }
    }
}
