#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "gibbslab/diagnostics/autocorrelation.hpp"
#include "gibbslab/diagnostics/report.hpp"
#include "gibbslab/engine/sampler.hpp"
#include "gibbslab/errors.hpp"
#include "gibbslab/models/classification.hpp"
#include "gibbslab/models/gaussian_hmm.hpp"
#include "gibbslab/models/heavy_tail_hmm.hpp"
#include "gibbslab/models/nonregular_scale.hpp"
#include "gibbslab/models/repeated_measurements.hpp"
#include "gibbslab/models/rounded_data.hpp"
#include "gibbslab/models/stochastic_frontier.hpp"
#include "gibbslab/models/synthetic.hpp"
#include "gibbslab/numerics/stats_tests.hpp"
#include "oracles.hpp"

using namespace gibbslab;

namespace {

SamplerConfig config(Parametrization p, std::size_t kept, std::size_t burn = 10000) {
    SamplerConfig c;
    c.iterations = kept + burn;
    c.burn_in = burn;
    c.parametrization = p;
    return c;
}

std::vector<double> thin_by_iat(const std::vector<double>& xs) {
    return oracle::thin(xs, static_cast<std::size_t>(std::ceil(iat(xs))));
}

double log_phi_diff(double a, double b) {
    // log(Phi(a) - Phi(b)) for a > b, from erfc on the side that keeps precision.
    if (b > 0.0) return std::log(0.5 * std::erfc(b / std::sqrt(2.0)) - 0.5 * std::erfc(a / std::sqrt(2.0)));
    return std::log(oracle::normal_cdf(a, 0.0, 1.0) - oracle::normal_cdf(b, 0.0, 1.0));
}

// Rates of the two exact chains from a dense Gaussian computation with a very
// diffuse prior on Theta standing in for the flat one.
using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

std::pair<double, double> gaussian_rates_dense(int n, double sx, double sy) {
    const int d = n + 3;  // Theta, X, X~, Y_1..Y_n
    const long double prior_var = 1e10L;  // long double: cov(0,0) cancels to ~1
    MatL a = MatL::Zero(d, 2 + n);  // in terms of (Theta, X~, eps_1..eps_n)
    a(0, 0) = 1.0;
    a(1, 0) = 1.0;
    a(1, 1) = 1.0;
    a(2, 1) = 1.0;
    for (int i = 0; i < n; ++i) {
        a(3 + i, 0) = 1.0;
        a(3 + i, 1) = 1.0;
        a(3 + i, 2 + i) = 1.0;
    }
    VecL v(2 + n);
    v(0) = prior_var;
    v(1) = sx * sx;
    for (int i = 0; i < n; ++i) v(2 + i) = sy * sy;
    const MatL cov = a * v.asDiagonal() * a.transpose();
    const auto cond_var = [&](std::vector<int> given) {
        MatL s_gg(given.size(), given.size());
        VecL s_tg(given.size());
        for (std::size_t i = 0; i < given.size(); ++i) {
            s_tg(i) = cov(0, given[i]);
            for (std::size_t j = 0; j < given.size(); ++j) s_gg(i, j) = cov(given[i], given[j]);
        }
        return cov(0, 0) - s_tg.dot(s_gg.ldlt().solve(s_tg));
    };
    std::vector<int> ys, with_x, with_aux;
    for (int i = 0; i < n; ++i) ys.push_back(3 + i);
    with_x = ys;
    with_x.push_back(1);
    with_aux = ys;
    with_aux.push_back(2);
    const double marg = cond_var(ys);
    return {static_cast<double>(1.0L - cond_var(with_x) / marg), static_cast<double>(1.0L - cond_var(with_aux) / marg)};
}

}  // namespace

// ---- repeated measurements ----

TEST(RepeatedMeasurements, RatesAtOneObservation) {
    EXPECT_DOUBLE_EQ(RepeatedMeasurements::gamma_centered(1, 1, 1), 0.5);
    EXPECT_DOUBLE_EQ(RepeatedMeasurements::gamma_noncentered(1, 1, 1), 0.5);
    const auto [gc, gnc] = gaussian_rates_dense(1, 1.0, 1.0);
    EXPECT_NEAR(gc, 0.5, 1e-6);
    EXPECT_NEAR(gnc, 0.5, 1e-6);
}

TEST(RepeatedMeasurements, RatesMatchDenseGaussianAlgebra) {
    for (int n : {2, 5, 30})
        for (double sx : {0.5, 2.0}) {
            const auto [gc, gnc] = gaussian_rates_dense(n, sx, 1.3);
            EXPECT_NEAR(RepeatedMeasurements::gamma_centered(n, sx, 1.3), gc, 1e-6);
            EXPECT_NEAR(RepeatedMeasurements::gamma_noncentered(n, sx, 1.3), gnc, 1e-6);
        }
}

TEST(RepeatedMeasurements, CenteredRateFallsWithN) {
    double prev = 1.0;
    for (double n = 1; n <= 1e6; n *= 3) {
        const double g = RepeatedMeasurements::gamma_centered(n, 1.0, 1.0);
        EXPECT_LT(g, prev);
        prev = g;
    }
    EXPECT_LT(prev, 1e-5);
}

TEST(RepeatedMeasurements, RatesSumToOne) {
    for (int k = 0; k < 20; ++k) {
        const double n = 1 + 7 * k, sx = 0.2 + 0.3 * k, sy = 3.0 / (1 + k);
        EXPECT_NEAR(RepeatedMeasurements::gamma_centered(n, sx, sy) + RepeatedMeasurements::gamma_noncentered(n, sx, sy),
                    1.0, 1e-12);
    }
}

TEST(RepeatedMeasurements, ConditionalLaws) {
    const std::vector<double> y{0.5, 1.5, 2.5, -0.5};
    const double sx = 1.5, sy = 0.8, n = 4.0, ybar = 1.0;
    RepeatedMeasurements m({sx, sy}, y);
    const double tau = n / (sy * sy) + 1.0 / (sx * sx);
    EXPECT_NEAR(m.latent_variance(), 1.0 / tau, 1e-15);
    EXPECT_NEAR(m.latent_mean(0.3), (n * ybar / (sy * sy) + 0.3 / (sx * sx)) / tau, 1e-14);

    ChainState st;
    st.theta = 0.3;
    st.x = {1.7};
    const auto c = std::get<Normal>(*m.theta_law(st, Parametrization::centered()));
    EXPECT_DOUBLE_EQ(c.mean, 1.7);
    EXPECT_DOUBLE_EQ(c.sd, sx);
    st.aux = {0.4};
    const auto nc = std::get<Normal>(*m.theta_law(st, Parametrization::noncentered()));
    EXPECT_NEAR(nc.mean, ybar - 0.4, 1e-15);
    EXPECT_NEAR(nc.sd, sy / 2.0, 1e-15);
    const auto post = std::get<Normal>(*m.posterior_oracle());
    EXPECT_NEAR(post.mean, ybar, 1e-15);
    EXPECT_NEAR(post.sd * post.sd, sx * sx + sy * sy / n, 1e-14);
}

// ---- gaussian hmm ----

TEST(GaussianHmm, PriorChainNoncenteredIsIndependent) {
    const auto m = GaussianHmm::without_data({0.0, 1.0, 1.0}, 50);
    EXPECT_FALSE(m.has_data());
    const auto tr = run_chain(m, config(Parametrization::noncentered(), 100000), RngStream(1, 0));
    EXPECT_LT(std::fabs(lag1_autocorrelation(tr.theta)), 0.02);
    EXPECT_LT(ks_statistic(tr.theta, [](double t) { return oracle::normal_cdf(t, 0.0, 1.0); }), 0.02);
}

TEST(GaussianHmm, PriorChainCenteredSlowsLinearly) {
    std::vector<double> iats;
    for (std::size_t n : {100u, 1000u}) {
        const auto m = GaussianHmm::without_data({0.0, 1.0, 1.0}, n);
        iats.push_back(iat(run_chain(m, config(Parametrization::centered(), 1000000), RngStream(2, n)).theta));
    }
    EXPECT_NEAR(iats[1] / iats[0], 10.0, 3.0);
}

TEST(GaussianHmm, CenteredLatentDrawMatchesDenseConditional) {
    RngStream rng(3, 0);
    const GaussianHmm::Params p{0.6, 1.2, 0.7};
    const auto y = synthetic::gaussian_hmm(0.4, p, 3, rng);
    GaussianHmm m(p, y);
    // X | Theta, Y for X = Theta + X~: precision Qp + I/sy^2.
    Eigen::MatrixXd s(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s(i, j) = p.sigma_x * p.sigma_x * std::pow(p.rho, std::abs(i - j));
    const Eigen::MatrixXd prec = s.inverse() + Eigen::MatrixXd::Identity(3, 3) / (p.sigma_y * p.sigma_y);
    const Eigen::MatrixXd cov = prec.inverse();
    const double theta = 0.4;
    const Eigen::VectorXd b = s.inverse() * Eigen::VectorXd::Constant(3, theta) +
                              Eigen::Map<const Eigen::VectorXd>(y.data(), 3) / (p.sigma_y * p.sigma_y);
    const Eigen::VectorXd mean = cov * b;
    ChainState st = m.initial_state(theta, rng);
    std::vector<double> x0, x2;
    for (int k = 0; k < 100000; ++k) {
        st.theta = theta;
        m.update_latent(st, LatentUpdate{}, rng);
        x0.push_back(st.x[0]);
        x2.push_back(st.x[2]);
    }
    EXPECT_LT(ks_statistic(x0, [&](double v) { return oracle::normal_cdf(v, mean(0), std::sqrt(cov(0, 0))); }), 0.01);
    EXPECT_LT(ks_statistic(x2, [&](double v) { return oracle::normal_cdf(v, mean(2), std::sqrt(cov(2, 2))); }), 0.01);
    const double corr = cov(0, 2) / std::sqrt(cov(0, 0) * cov(2, 2));
    EXPECT_NEAR(sample_correlation(x0, x2), corr, 0.01);
}

// ---- non-regular scale ----

TEST(NonregularScale, CenteredThetaLawIsParetoTail) {
    NonregularScale m({0.5, 1.0, 2.0});
    ChainState st;
    st.theta = 3.0;
    st.x = {1.0, 2.0, 0.5};
    const auto law = *m.theta_law(st, Parametrization::centered());
    for (double t : {2.0, 2.5, 4.0, 10.0}) EXPECT_NEAR(cdf(law, t), 1.0 - std::pow(2.0 / t, 2.0), 1e-14);
    EXPECT_EQ(cdf(law, 1.9), 0.0);
}

TEST(NonregularScale, CenteredConditionalVarianceShrinksFasterThanPosterior) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t n : {30u, 100u, 300u, 1000u, 3000u}) {
        RngStream rng(4, n);
        const auto y = synthetic::nonregular_scale(2.0, n, rng);
        NonregularScale m(y);
        auto s = Sampler::centered(m, config(Parametrization::centered(), 1, 0), RngStream(4, n + 1));
        double cond = 0.0;
        for (int it = 0; it < 2000; ++it) {
            s.step();
            if (it >= 1000) cond += variance(*m.theta_law(s.state(), Parametrization::centered())) / 1000.0;
        }
        // Var(Theta | Y) from the closed-form likelihood prod (Phi(y) - Phi(y - theta)) / theta.
        const auto logpost = [&](double t) {
            double l = -static_cast<double>(n) * std::log(t);
            for (double v : y) l += log_phi_diff(v, v - t);
            return l;
        };
        double best = 0.0, best_l = -kInf;
        std::vector<std::pair<double, double>> coarse;
        for (double t = 0.05; t < 10.0; t += 0.005) {
            const double l = logpost(t);
            coarse.emplace_back(t, l);
            if (l > best_l) best_l = l, best = t;
        }
        // Coarse spread sets the window of the fine pass.
        double cz = 0.0, c1 = 0.0, c2 = 0.0;
        for (auto [t, l] : coarse) {
            const double w = std::exp(l - best_l);
            cz += w, c1 += w * t, c2 += w * t * t;
        }
        const double step = 12.0 * std::sqrt(std::max(c2 / cz - (c1 / cz) * (c1 / cz), 1e-8)) / 20000.0;
        double z = 0.0, m1 = 0.0, m2 = 0.0;
        for (int k = -20000; k <= 20000; ++k) {
            const double t = best + step * k;
            if (t <= 0.0) continue;
            const double w = std::exp(logpost(t) - best_l);
            z += w;
            m1 += w * t;
            m2 += w * t * t;
        }
        const double post_var = m2 / z - (m1 / z) * (m1 / z);
        pts.emplace_back(std::log(static_cast<double>(n)), std::log(cond / post_var));
    }
    double mx = 0.0, my = 0.0;
    for (auto [a, b] : pts) mx += a / pts.size(), my += b / pts.size();
    double sxy = 0.0, sxx = 0.0;
    for (auto [a, b] : pts) sxy += (a - mx) * (b - my), sxx += (a - mx) * (a - mx);
    EXPECT_NEAR(sxy / sxx, -1.0, 0.2);
}

TEST(NonregularScale, SupportInvariantHoldsAlongTheChain) {
    RngStream rng(5, 0);
    NonregularScale m(synthetic::nonregular_scale(3.0, 20, rng));
    auto s = Sampler::centered(m, config(Parametrization::centered(), 1, 0), RngStream(5, 1));
    for (int it = 0; it < 2000; ++it) {
        s.step();
        for (double x : s.state().x) {
            ASSERT_GT(x, 0.0);
            ASSERT_LT(x, s.theta());
        }
        ASSERT_NO_THROW(m.check_state(s.state(), Parametrization::centered()));
    }
}

// ---- stochastic frontier ----

TEST(StochasticFrontier, NoncenteredVarianceIsExact) {
    for (std::size_t n : {1u, 10u, 1000u}) {
        RngStream rng(6, n);
        const StochasticFrontier::Params p{0.7, 1.3};
        StochasticFrontier m(p, synthetic::stochastic_frontier(0.0, p.lambda, p.sigma_x, n, rng));
        ChainState st = m.initial_state(0.0, rng);
        m.to_aux(st, Parametrization::noncentered(), rng);
        const double v = variance(*m.theta_law(st, Parametrization::noncentered()));
        const double nl = static_cast<double>(n) * p.lambda;
        EXPECT_NEAR(v, 1.0 / (nl * nl), 1e-12 / (nl * nl));
    }
}

TEST(StochasticFrontier, CenteredConditionals) {
    const StochasticFrontier::Params p{2.0, 0.5};
    const std::vector<double> y{0.1, -0.4, 0.3};
    StochasticFrontier m(p, y);
    ChainState st;
    st.theta = 0.8;
    st.x = {0.5, 0.2, 0.9};
    const auto law = std::get<Normal>(*m.theta_law(st, Parametrization::centered()));
    EXPECT_NEAR(law.mean, (0.5 + 0.2 + 0.9) / 3.0, 1e-15);
    EXPECT_NEAR(law.sd, 0.5 / std::sqrt(3.0), 1e-15);
    const auto xi = std::get<TruncatedNormal>(*m.latent_coordinate_law(st, 1));
    EXPECT_NEAR(xi.mean, 0.8 - 2.0 * 0.25, 1e-15);
    EXPECT_DOUBLE_EQ(xi.sd, 0.5);
    EXPECT_DOUBLE_EQ(xi.lo, -0.4);
    EXPECT_EQ(xi.hi, kInf);
}

TEST(StochasticFrontier, LatentStaysAboveData) {
    RngStream rng(7, 0);
    const StochasticFrontier::Params p{1.0, 1.0};
    StochasticFrontier m(p, synthetic::stochastic_frontier(1.0, 1.0, 1.0, 30, rng));
    auto s = Sampler::centered(m, config(Parametrization::centered(), 1, 0), RngStream(7, 1));
    for (int it = 0; it < 2000; ++it) {
        s.step();
        for (std::size_t i = 0; i < 30; ++i) ASSERT_GT(s.state().x[i], m.data()[i]);
    }
}

// ---- rounded data ----

TEST(RoundedData, NoncenteredIntervalWorkedInstance) {
    RoundedData m({1.0}, {1.0, 2.0, 0.0});
    const std::vector<double> aux{0.3, 1.2, -0.5};
    const auto [lo, hi] = m.noncentered_interval(aux);
    EXPECT_DOUBLE_EQ(lo, std::max({1.0 - 0.3, 2.0 - 1.2, 0.0 + 0.5}));
    EXPECT_DOUBLE_EQ(hi, std::min({2.0 - 0.3, 3.0 - 1.2, 1.0 + 0.5}));
    ChainState st;
    st.theta = 1.0;
    st.aux = aux;
    const auto law = std::get<Uniform>(*m.theta_law(st, Parametrization::noncentered()));
    EXPECT_DOUBLE_EQ(law.lo, lo);
    EXPECT_DOUBLE_EQ(law.hi, hi);
    EXPECT_THROW(m.noncentered_interval(std::vector<double>{0.0, 1.5, 0.0}), DegenerateSupport);
}

TEST(RoundedData, CenteredLatentIsTruncatedToTheCell) {
    RoundedData m({0.6}, {1.0, -2.0});
    ChainState st;
    st.theta = 0.2;
    st.x = {1.5, -1.5};
    const auto law = std::get<TruncatedNormal>(*m.latent_coordinate_law(st, 1));
    EXPECT_DOUBLE_EQ(law.mean, 0.2);
    EXPECT_DOUBLE_EQ(law.sd, 0.6);
    EXPECT_DOUBLE_EQ(law.lo, -2.0);
    EXPECT_DOUBLE_EQ(law.hi, -1.0);
}

TEST(RoundedData, RejectsNonIntegerData) { EXPECT_THROW(RoundedData({1.0}, {0.5}), InvalidParameter); }

// ---- classification ----

TEST(Classification, CenteredThetaIsBeta) {
    const std::vector<double> y(10, 0.3);
    ClassificationMixture m(ClassificationMixture::Scenario::General, y);
    ChainState st;
    st.theta = 0.5;
    st.x = {1, 0, 1, 0, 0, 1, 0, 0, 1, 0};
    const auto law = *m.theta_law(st, Parametrization::centered());
    EXPECT_NEAR(mean(law), 5.0 / 12.0, 1e-12);
    EXPECT_NEAR(variance(law), 5.0 * 7.0 / (144.0 * 13.0), 1e-12);
}

TEST(Classification, DisjointNoncenteredIsUniformBetweenOrderStatistics) {
    const std::vector<double> y{0.2, 0.7, 2.5, 0.1, 2.9};
    ClassificationMixture m(ClassificationMixture::Scenario::Disjoint, y);
    ChainState st;
    st.theta = 0.45;
    st.x = {1, 1, 0, 1, 0};
    st.aux = {0.1, 0.3, 0.8, 0.2, 0.6};
    // Three class-0 points, so the support is (X~(3), X~(4)) = (0.3, 0.6).
    const auto law = *m.theta_law(st, Parametrization::noncentered());
    for (double t = 0.0; t <= 1.0; t += 0.05)
        EXPECT_NEAR(cdf(law, t), std::clamp((t - 0.3) / 0.3, 0.0, 1.0), 1e-12) << t;
}

TEST(Classification, IdenticalNoncenteredIsThePrior) {
    RngStream rng(8, 0);
    const auto y = synthetic::classification(0.3, ClassificationMixture::Scenario::Identical, 6, rng);
    ClassificationMixture m(ClassificationMixture::Scenario::Identical, y);
    ChainState st = m.initial_state(0.3, rng);
    m.to_aux(st, Parametrization::noncentered(), rng);
    const auto law = *m.theta_law(st, Parametrization::noncentered());
    for (double t = 0.0; t <= 1.0; t += 0.05) EXPECT_NEAR(cdf(law, t), t, 1e-12);
}

TEST(Classification, NoncenteredAuxRespectsIndicators) {
    RngStream rng(9, 0);
    const auto y = synthetic::classification(0.5, ClassificationMixture::Scenario::General, 50, rng);
    ClassificationMixture m(ClassificationMixture::Scenario::General, y);
    ChainState st = m.initial_state(0.5, rng);
    for (int k = 0; k < 100; ++k) {
        m.update_latent(st, LatentUpdate{}, rng);
        m.to_aux(st, Parametrization::noncentered(), rng);
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (st.x[i] == 1.0) ASSERT_LE(st.aux[i], st.theta);
            else ASSERT_GT(st.aux[i], st.theta);
        }
    }
}

TEST(Classification, InvalidScenario) { EXPECT_THROW(ClassificationMixture::parse_scenario("overlapping"), Error); }

// ---- heavy tails ----

TEST(HeavyTail, CenteredThetaIsNormalOnTheLatentMean) {
    HeavyTailHmm::Params p;
    HeavyTailHmm m(p, {0.0, 1.0, 2.0});
    ChainState st;
    st.theta = 1.0;
    st.x = {0.5, 1.0, 3.0};
    const auto law = std::get<Normal>(*m.theta_law(st, Parametrization::centered()));
    EXPECT_NEAR(law.mean, 1.5, 1e-15);
    EXPECT_NEAR(law.sd, p.sigma_x / std::sqrt(3.0), 1e-15);
}

TEST(HeavyTail, SiteDensityMatchesDefinition) {
    HeavyTailHmm::Params p;
    HeavyTailHmm m(p, {0.4});
    const double x = 1.3, th = -0.2;
    const double cauchy = -std::log(std::numbers::pi * p.sigma_y * (1.0 + std::pow((0.4 - x) / p.sigma_y, 2)));
    const double gauss = -0.5 * std::log(2.0 * std::numbers::pi * p.sigma_x * p.sigma_x) -
                         0.5 * std::pow((x - th) / p.sigma_x, 2);
    EXPECT_NEAR(m.log_site(0, x, th), cauchy + gauss, 1e-13);
}

// ---- posterior marginals of whole chains ----

namespace {

struct PosteriorCase {
    std::string label;
    std::shared_ptr<Model> model;
    std::function<double(double)> log_post;
    double lo, hi;
};

// Convolution of the two links for a single observation, by Simpson in x.
double log_heavy_marginal(const HeavyTailHmm& m, double theta) {
    const double sx = m.params().sigma_x;
    const double sy = m.params().sigma_y;
    const double spread = 12.0 * std::max(sx, sy);
    const double a = std::min(theta, m.data()[0]) - spread, b = std::max(theta, m.data()[0]) + spread;
    const int cells = 600;
    const double h = (b - a) / cells;
    double s = 0.0;
    for (int k = 0; k <= 2 * cells; ++k) {
        const double x = a + 0.5 * h * k;
        const double w = (k == 0 || k == 2 * cells) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        s += w * std::exp(m.log_site(0, x, theta));
    }
    return std::log(s * h / 6.0);
}

}  // namespace

TEST(PosteriorMarginal, ChainsMatchIntegratedPosteriors) {
    std::vector<PosteriorCase> cases;
    {
        RngStream rng(10, 0);
        const auto y = synthetic::classification(0.35, ClassificationMixture::Scenario::General, 8, rng);
        auto m = std::make_shared<ClassificationMixture>(ClassificationMixture::Scenario::General, y);
        const auto [f0, f1] = ClassificationMixture::scenario_densities(ClassificationMixture::Scenario::General);
        cases.push_back({"classification", m,
                         [=](double t) {
                             double l = 0.0;
                             for (double v : y)
                                 l += std::log(t * std::exp(log_density(f0, v)) + (1.0 - t) * std::exp(log_density(f1, v)));
                             return l;
                         },
                         0.0, 1.0});
    }
    {
        RngStream rng(11, 0);
        const auto y = synthetic::nonregular_scale(2.0, 3, rng);
        auto m = std::make_shared<NonregularScale>(y);
        cases.push_back({"nonregular_scale", m,
                         [=](double t) {
                             double l = -3.0 * std::log(t);
                             for (double v : y) l += log_phi_diff(v, v - t);
                             return l;
                         },
                         1e-9, 200.0});
    }
    {
        RngStream rng(12, 0);
        const StochasticFrontier::Params p{1.0, 1.0};
        const auto y = synthetic::stochastic_frontier(0.5, 1.0, 1.0, 3, rng);
        auto m = std::make_shared<StochasticFrontier>(p, y);
        // Y = Theta + sx Z - u: an exponentially modified normal in Theta - Y.
        cases.push_back({"stochastic_frontier", m,
                         [=](double t) {
                             double l = 0.0;
                             for (double v : y) {
                                 const double w = t - v;
                                 l += -w + 0.5 + std::log(oracle::normal_cdf(w - 1.0, 0.0, 1.0));
                             }
                             return l;
                         },
                         -15.0, 20.0});
    }
    {
        RngStream rng(13, 0);
        const auto y = synthetic::rounded_data(0.3, 1.0, 3, rng);
        auto m = std::make_shared<RoundedData>(RoundedData::Params{1.0}, y);
        cases.push_back({"rounded_data", m,
                         [=](double t) {
                             double l = 0.0;
                             for (double v : y) l += log_phi_diff(v + 1.0 - t, v - t);
                             return l;
                         },
                         -12.0, 12.0});
    }
    for (const auto dir : {HeavyTailHmm::Direction::CauchyObservation, HeavyTailHmm::Direction::CauchyLatent}) {
        auto p = dir == HeavyTailHmm::Direction::CauchyObservation ? HeavyTailHmm::Params{} : HeavyTailHmm::mirrored_defaults();
        auto m = std::make_shared<HeavyTailHmm>(p, std::vector<double>{0.7});
        const HeavyTailHmm* raw = m.get();
        cases.push_back({dir == HeavyTailHmm::Direction::CauchyObservation ? "heavy_tail/obs" : "heavy_tail/latent", m,
                         [=](double t) { return log_heavy_marginal(*raw, t); }, -500.0, 500.0});
    }
    std::uint64_t seed = 20;
    for (const auto& c : cases) {
        const oracle::NumericCdf post(c.log_post, c.lo, c.hi, 40000);
        for (const auto& p : {Parametrization::centered(), Parametrization::noncentered()}) {
            // The Cauchy cases mix slowly, so they run longer, and the bound never sits
            // below the 1% KS critical value for the thinned sample.
            const bool slow = c.label.rfind("heavy_tail", 0) == 0;
            const auto tr = run_chain(*c.model, config(p, slow ? 1000000 : 100000), RngStream(seed++, 0));
            const auto kept = thin_by_iat(tr.theta);
            const double bound = std::max(0.02, 1.63 / std::sqrt(static_cast<double>(kept.size())));
            EXPECT_LT(ks_statistic(kept, [&](double t) { return post(t); }), bound)
                << c.label << " " << p.label() << " kept " << kept.size();
        }
    }
}
