#pragma once

#include <vector>

#include "gibbslab/model/model.hpp"

namespace gibbslab {

// Y_i = floor(X_i), X_i = X~_i + Theta, X~_i ~ N(0, sigma_x^2), flat prior on Theta.
class RoundedData final : public Model {
public:
    struct Params {
        double sigma_x = 1.0;
    };

    // y must hold integers.
    RoundedData(Params params, std::vector<double> y);

    std::string name() const override { return "rounded_data"; }
    std::size_t size() const override { return y_.size(); }
    std::vector<Parametrization> supported() const override;
    std::span<const double> data() const override { return y_; }
    double default_theta0() const override { return detail_mean_ + 0.5; }
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

    // [max_i(Y_i - aux_i), min_i(Y_i + 1 - aux_i)]; throws DegenerateSupport when empty.
    std::pair<double, double> noncentered_interval(std::span<const double> aux) const;

private:
    Params params_;
    std::vector<double> y_;
    double detail_mean_ = 0.0;
};

}  // namespace gibbslab
