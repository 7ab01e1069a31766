#pragma once

#include <vector>

#include "gibbslab/model/model.hpp"

namespace gibbslab {

// Y_i ~ N(X_i, sigma_y^2), X_i = X~_i + Theta with X~ a stationary Gaussian AR(1)
// (correlation rho, marginal variance sigma_x^2) and prior Theta ~ N(0, 1).
// Without data the chains sample the prior of (X, Theta).
class GaussianHmm final : public Model {
public:
    struct Params {
        double rho = 0.0;
        double sigma_x = 1.0;
        double sigma_y = 1.0;
    };

    GaussianHmm(Params params, std::vector<double> y);
    // Prior-only chain of length n.
    static GaussianHmm without_data(Params params, std::size_t n);

    std::string name() const override { return "gaussian_hmm"; }
    std::size_t size() const override { return n_; }
    std::vector<Parametrization> supported() const override;
    std::span<const double> data() const override { return y_; }
    double default_theta0() const override;
    std::optional<std::vector<double>> draw_latent_prior(double theta, RngStream& rng) const override;
    bool has_data() const { return has_data_; }

    BlockStats update_latent(ChainState& state, const LatentUpdate& how, RngStream& rng) const override;
    Reparametrization reparametrization(const Parametrization& p) const override;
    double log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<DistSpec> theta_law(const ChainState& state, const Parametrization& p) const override;
    double log_joint(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<DistSpec> latent_coordinate_law(const ChainState& state, std::size_t i) const override;
    std::optional<DistSpec> posterior_oracle() const override;
    std::optional<double> log_marginal_posterior(double theta) const override;
    std::vector<std::pair<std::string, double>> functionals(const ChainState& state) const override;

private:
    GaussianHmm(Params params, std::vector<double> y, std::size_t n, bool has_data);

    // Entries of the AR(1) prior precision.
    double prior_diag(std::size_t i) const;
    double prior_off() const;
    // Solve (L L^T) v = b in place with the precomputed bidiagonal factor.
    void solve(std::vector<double>& b) const;

    Params params_;
    std::vector<double> y_;
    std::size_t n_ = 0;
    bool has_data_ = true;
    std::vector<double> row_sum_;  // Qp 1
    double one_q_one_ = 0.0;       // 1^T Qp 1
    std::vector<double> l_diag_;   // Cholesky of Qp + I / sigma_y^2 (Qp alone without data)
    std::vector<double> l_sub_;
};

}  // namespace gibbslab
