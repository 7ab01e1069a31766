#include "gibbslab/models/synthetic.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "common.hpp"

namespace gibbslab::synthetic {

std::vector<double> repeated_measurements(double theta, double sigma_x, double sigma_y, std::size_t n,
                                          RngStream& rng) {
    const double x = theta + sigma_x * rng.normal();
    std::vector<double> y(n);
    for (auto& v : y) v = x + sigma_y * rng.normal();
    return y;
}

std::vector<double> gaussian_hmm(double theta, const GaussianHmm::Params& p, std::size_t n, RngStream& rng) {
    detail::require(std::abs(p.rho) < 1.0, "synthetic::gaussian_hmm: |rho| must be < 1");
    std::vector<double> y(n);
    const double innov = std::sqrt(1.0 - p.rho * p.rho) * p.sigma_x;
    double xt = p.sigma_x * rng.normal();
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) xt = p.rho * xt + innov * rng.normal();
        y[i] = xt + theta + p.sigma_y * rng.normal();
    }
    return y;
}

std::vector<double> nonregular_scale(double theta, std::size_t n, RngStream& rng) {
    detail::require(theta > 0.0, "synthetic::nonregular_scale: theta must be positive");
    std::vector<double> y(n);
    for (auto& v : y) v = theta * rng.uniform_open() + rng.normal();
    return y;
}

std::vector<double> stochastic_frontier(double theta, double lambda, double sigma_x, std::size_t n, RngStream& rng) {
    std::vector<double> y(n);
    for (auto& v : y) v = theta + sigma_x * rng.normal() - rng.exponential() / lambda;
    return y;
}

std::vector<double> rounded_data(double theta, double sigma_x, std::size_t n, RngStream& rng) {
    std::vector<double> y(n);
    for (auto& v : y) v = std::floor(theta + sigma_x * rng.normal());
    return y;
}

std::vector<double> classification(double theta, ClassificationMixture::Scenario scenario, std::size_t n,
                                   RngStream& rng) {
    detail::require(theta >= 0.0 && theta <= 1.0, "synthetic::classification: theta must lie in [0, 1]");
    const auto [f0, f1] = ClassificationMixture::scenario_densities(scenario);
    std::vector<double> y(n);
    for (auto& v : y) v = rng.uniform() < theta ? draw(f0, rng) : draw(f1, rng);
    return y;
}

std::vector<double> heavy_tail_hmm(double theta, const HeavyTailHmm::Params& p, std::size_t n, RngStream& rng) {
    const bool cauchy_obs = p.direction == HeavyTailHmm::Direction::CauchyObservation;
    std::vector<double> y(n);
    for (auto& v : y) {
        const double x = cauchy_obs ? theta + p.sigma_x * rng.normal() : draw(Cauchy{theta, p.sigma_x}, rng);
        v = cauchy_obs ? draw(Cauchy{x, p.sigma_y}, rng) : x + p.sigma_y * rng.normal();
    }
    return y;
}

double discretized_sv(double theta, const DiscretizedSv::Params& p, RngStream& rng) {
    const double dt = p.t1 / static_cast<double>(p.n);
    const double sd = theta * std::sqrt(dt);
    double x = 0.0, v = 0.0;
    for (std::size_t i = 0; i < p.n; ++i) {
        x += sd * rng.normal();
        v += std::exp(x) * dt;
    }
    return std::sqrt(v) * rng.normal();
}

double observed_diffusion(double theta, double t1, RngStream& rng) { return theta * std::sqrt(t1) * rng.normal(); }

std::size_t latent_poisson(double theta, RngStream& rng) {
    detail::require(theta >= 0.0 && std::isfinite(theta), "synthetic::latent_poisson: theta must be >= 0");
    std::size_t k = 0;
    for (double t = rng.exponential(); t <= theta; t += rng.exponential()) ++k;
    return k;
}

std::vector<double> gmrf(double theta, const Eigen::SparseMatrix<double>& q, const std::vector<std::size_t>& observed,
                         RngStream& rng) {
    const Eigen::MatrixXd dense(q);
    Eigen::LLT<Eigen::MatrixXd> llt(dense);
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite("synthetic::gmrf: precision not positive definite");
    Eigen::VectorXd z(dense.rows());
    for (int i = 0; i < z.size(); ++i) z[i] = rng.normal();
    // Q = L L' gives L^{-T} z ~ N(0, Q^{-1}).
    const Eigen::VectorXd x = llt.matrixU().solve(z);
    std::vector<double> y;
    y.reserve(observed.size());
    for (std::size_t s : observed) y.push_back(theta + x[static_cast<int>(s)]);
    return y;
}

}  // namespace gibbslab::synthetic
