#pragma once

#include <vector>

#include "gibbslab/model/model.hpp"

namespace gibbslab {

// Y_i = X_i - u_i with u_i ~ Exp(lambda), X_i = Theta + X~_i, X~_i ~ N(0, sigma_x^2),
// flat prior on Theta.
class StochasticFrontier final : public Model {
public:
    struct Params {
        double lambda = 1.0;
        double sigma_x = 1.0;
    };

    StochasticFrontier(Params params, std::vector<double> y);

    std::string name() const override { return "stochastic_frontier"; }
    std::size_t size() const override { return y_.size(); }
    std::vector<Parametrization> supported() const override;
    std::span<const double> data() const override { return y_; }
    double default_theta0() const override;
    std::optional<std::vector<double>> draw_latent_prior(double theta, RngStream& rng) const override;

    BlockStats update_latent(ChainState& state, const LatentUpdate& how, RngStream& rng) const override;
    Reparametrization reparametrization(const Parametrization& p) const override;
    double log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<DistSpec> theta_law(const ChainState& state, const Parametrization& p) const override;
    double log_joint(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<DistSpec> latent_coordinate_law(const ChainState& state, std::size_t i) const override;
    std::optional<double> log_marginal_posterior(double theta) const override;
    std::vector<std::pair<std::string, double>> functionals(const ChainState& state) const override;
    void check_state(const ChainState& state, const Parametrization& p) const override;

    const Params& params() const { return params_; }

private:
    Params params_;
    std::vector<double> y_;
};

}  // namespace gibbslab
