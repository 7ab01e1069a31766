#pragma once

#include <vector>

#include "gibbslab/model/model.hpp"

namespace gibbslab {

// Y_i ~ N(X_i, 1), X_i = Theta X~_i, X~_i ~ Uniform(0, 1), flat prior on Theta > 0.
// The support of X | Theta moves with Theta, which is what slows the centered chain.
class NonregularScale final : public Model {
public:
    explicit NonregularScale(std::vector<double> y);

    std::string name() const override { return "nonregular_scale"; }
    std::size_t size() const override { return y_.size(); }
    std::vector<Parametrization> supported() const override;
    std::span<const double> data() const override { return y_; }
    std::pair<double, double> theta_support() const override { return {0.0, kInf}; }
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

private:
    std::vector<double> y_;
};

}  // namespace gibbslab
