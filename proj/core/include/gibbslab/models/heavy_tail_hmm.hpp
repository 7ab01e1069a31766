#pragma once

#include <string>
#include <vector>

#include "gibbslab/model/model.hpp"

namespace gibbslab {

// CauchyObservation: Y_i ~ Cauchy(X_i, sigma_y), X_i = X~_i + Theta, X~_i ~ N(0, sigma_x^2).
// CauchyLatent:      Y_i ~ N(X_i, sigma_y^2),    X_i = X~_i + Theta, X~_i ~ Cauchy(0, sigma_x).
// Flat prior on Theta in both. Parameters are the scale of each law, so the
// Gaussian link's variance is sigma^2 and the Cauchy link's scale is sigma.
class HeavyTailHmm final : public Model {
public:
    enum class Direction { CauchyObservation, CauchyLatent };

    struct Params {
        double sigma_y = 1.0;
        double sigma_x = 2.2360679774997898;  // sqrt(5)
        Direction direction = Direction::CauchyObservation;
        int mh_repeats = 5;      // single-site MH passes per latent update
        double mh_step_sd = 0.0; // 0 selects a scale from sigma_x and sigma_y
    };

    HeavyTailHmm(Params params, std::vector<double> y);

    static Direction parse_direction(const std::string& text);
    // The mirrored setting used for the latent-Cauchy model: sigma_y^2 = 5, sigma_x = 1.
    static Params mirrored_defaults();

    std::string name() const override;
    std::size_t size() const override { return y_.size(); }
    std::vector<Parametrization> supported() const override;
    std::span<const double> data() const override { return y_; }
    double default_theta0() const override;
    std::optional<std::vector<double>> draw_latent_prior(double theta, RngStream& rng) const override;

    // Exact start: each X_i drawn from its conditional by grid inverse CDF.
    ChainState initial_state(double theta0, RngStream& rng) const override;
    // Auto and SingleSiteMH: mh_repeats single-site random-walk passes. Exact: grid draws.
    BlockStats update_latent(ChainState& state, const LatentUpdate& how, RngStream& rng) const override;
    Reparametrization reparametrization(const Parametrization& p) const override;
    double log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<DistSpec> theta_law(const ChainState& state, const Parametrization& p) const override;
    double log_joint(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<double> log_marginal_posterior(double theta) const override;
    std::vector<std::pair<std::string, double>> functionals(const ChainState& state) const override;

    // log p(Y_i | x) + log p(x | theta): the centered joint for one coordinate.
    double log_site(std::size_t i, double x, double theta) const;
    const Params& params() const { return params_; }

private:
    double log_obs(double y, double x) const;
    double log_latent(double x, double theta) const;
    double default_step() const;
    double draw_site(std::size_t i, double theta, RngStream& rng) const;

    Params params_;
    std::vector<double> y_;
};

}  // namespace gibbslab
