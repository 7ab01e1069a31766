#pragma once

#include <vector>

#include "gibbslab/model/model.hpp"

namespace gibbslab {

// Y_i ~ N(X, sigma_y^2), X = X~ + Theta, X~ ~ N(0, sigma_x^2), flat prior on Theta.
//
// Besides the centered and location-noncentered chains it supports the scalar
// partial family X = X* + (1 - w) Theta and the data-based linear map "vm"
// X = v^{1/2} X* + m with v = Var(X | Theta, Y), m = E(X | Theta, Y).
class RepeatedMeasurements final : public Model {
public:
    struct Params {
        double sigma_x = 1.0;
        double sigma_y = 1.0;
    };

    RepeatedMeasurements(Params params, std::vector<double> y);

    std::string name() const override { return "repeated_measurements"; }
    std::size_t size() const override { return 1; }
    std::vector<Parametrization> supported() const override;
    std::span<const double> data() const override { return y_; }
    double default_theta0() const override { return ybar_; }
    std::optional<std::vector<double>> draw_latent_prior(double theta, RngStream& rng) const override;

    BlockStats update_latent(ChainState& state, const LatentUpdate& how, RngStream& rng) const override;
    Reparametrization reparametrization(const Parametrization& p) const override;
    bool can_draw_aux_directly(const Parametrization& p) const override;
    void draw_aux_directly(ChainState& state, const Parametrization& p, RngStream& rng) const override;

    double log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<DistSpec> theta_law(const ChainState& state, const Parametrization& p) const override;
    double log_joint(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<DistSpec> latent_coordinate_law(const ChainState& state, std::size_t i) const override;
    std::optional<DistSpec> posterior_oracle() const override;
    std::optional<double> log_marginal_posterior(double theta) const override;
    std::vector<std::pair<std::string, double>> functionals(const ChainState& state) const override;

    // Lag-1 autocorrelation of Theta under the two exact chains.
    static double gamma_centered(double n, double sigma_x, double sigma_y);
    static double gamma_noncentered(double n, double sigma_x, double sigma_y);

    const Params& params() const { return params_; }
    // X | Theta, Y is N(latent_mean(theta), latent_variance()).
    double latent_mean(double theta) const;
    double latent_variance() const { return 1.0 / tau_; }

private:
    // X = scale * X* + shift + slope * Theta for a non-centered parametrization.
    struct Linear {
        double scale = 1.0;
        double shift = 0.0;
        double slope = 0.0;
    };
    Linear linear(const Parametrization& p) const;

    Params params_;
    std::vector<double> y_;
    double n_ = 0.0;
    double ybar_ = 0.0;
    double tau_ = 0.0;  // n / sigma_y^2 + 1 / sigma_x^2
};

}  // namespace gibbslab
