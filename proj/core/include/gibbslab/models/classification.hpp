#pragma once

#include <string>
#include <vector>

#include "gibbslab/model/model.hpp"

namespace gibbslab {

// Y_i ~ Theta f0 + (1 - Theta) f1 with Theta ~ Uniform(0, 1), augmented by
// X_i = 1{X~_i <= Theta}, X~_i ~ Uniform(0, 1). X_i = 1 marks class 0.
class ClassificationMixture final : public Model {
public:
    enum class Scenario { Disjoint, Identical, General };

    // Disjoint: f0 = Uniform(0, 1), f1 = Uniform(2, 3). Identical: f0 = f1 = N(0, 1).
    ClassificationMixture(Scenario scenario, std::vector<double> y);
    ClassificationMixture(DistSpec f0, DistSpec f1, std::vector<double> y);

    static Scenario parse_scenario(const std::string& text);
    static std::pair<DistSpec, DistSpec> scenario_densities(Scenario s);

    std::string name() const override { return "classification"; }
    std::size_t size() const override { return y_.size(); }
    std::vector<Parametrization> supported() const override;
    std::span<const double> data() const override { return y_; }
    std::pair<double, double> theta_support() const override { return {0.0, 1.0}; }
    double default_theta0() const override { return 0.5; }
    std::optional<std::vector<double>> draw_latent_prior(double theta, RngStream& rng) const override;

    BlockStats update_latent(ChainState& state, const LatentUpdate& how, RngStream& rng) const override;
    Reparametrization reparametrization(const Parametrization& p) const override;
    double log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<DistSpec> theta_law(const ChainState& state, const Parametrization& p) const override;
    double log_joint(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<DistSpec> latent_coordinate_law(const ChainState& state, std::size_t i) const override;
    std::optional<double> log_marginal_posterior(double theta) const override;
    std::vector<std::pair<std::string, double>> functionals(const ChainState& state) const override;

    const DistSpec& f0() const { return f0_; }
    const DistSpec& f1() const { return f1_; }

private:
    DistSpec f0_;
    DistSpec f1_;
    std::vector<double> y_;
    std::vector<double> log_f0_;
    std::vector<double> log_f1_;
};

}  // namespace gibbslab
