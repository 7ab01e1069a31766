#pragma once

#include "gibbslab/model/model.hpp"

namespace gibbslab {

// Stick fractions X_i ~ Beta(1, Theta), i = 1..n, with Theta ~ Gamma(a, b) and no data.
// The noncentered map is X_i = 1 - X~_i^{1/Theta}, X~_i ~ Uniform(0, 1).
//
// The latent state holds L_i = -log(1 - X_i) ~ Exp(Theta) rather than X_i: for small
// Theta most X_i round to 1 in double precision, while L_i stays exact. In these
// coordinates the map reads L_i = -log(X~_i) / Theta. stick_fractions() converts back.
class StickBreaking final : public Model {
public:
    struct Params {
        std::size_t n = 100;
        double a = 2.0;
        double b = 1.0;
    };

    explicit StickBreaking(Params params);

    std::string name() const override { return "stick_breaking"; }
    std::size_t size() const override { return params_.n; }
    std::vector<Parametrization> supported() const override;
    std::span<const double> data() const override { return {}; }
    std::pair<double, double> theta_support() const override { return {0.0, kInf}; }
    double default_theta0() const override { return params_.a / params_.b; }
    std::optional<std::vector<double>> draw_latent_prior(double theta, RngStream& rng) const override;

    BlockStats update_latent(ChainState& state, const LatentUpdate& how, RngStream& rng) const override;
    Reparametrization reparametrization(const Parametrization& p) const override;
    double log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<DistSpec> theta_law(const ChainState& state, const Parametrization& p) const override;
    double log_joint(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<DistSpec> latent_coordinate_law(const ChainState& state, std::size_t i) const override;
    std::optional<DistSpec> posterior_oracle() const override;
    std::optional<double> log_marginal_posterior(double theta) const override;
    std::vector<std::pair<std::string, double>> functionals(const ChainState& state) const override;

    // -(1/n) sum log(1 - X_i) for stick fractions x; tends to 1/Theta as n grows.
    static double constraint_statistic(std::span<const double> x);
    // The same statistic read from the stored L coordinates.
    static double constraint_statistic_from_logs(std::span<const double> l);
    static std::vector<double> stick_fractions(std::span<const double> l);
    const Params& params() const { return params_; }

private:
    Params params_;
};

}  // namespace gibbslab
