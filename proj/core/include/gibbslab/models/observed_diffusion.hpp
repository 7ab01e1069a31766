#pragma once

#include <span>
#include <vector>

#include "gibbslab/model/model.hpp"

namespace gibbslab {

// X_t = Theta B_t on [0, t1] with X_0 = 0, observed only at the endpoint y = X_{t1}.
// The latent state is X at the n - 1 interior grid times t_i = i t1 / n. Theta has a
// flat prior on (0, theta_max]; Theta | Y is improper without the cap.
//
// Parametrizations:
//   centered     bridge imputation, Theta | X from the n increments
//   noncentered  X~ = X / Theta; Theta is pinned by y = Theta X~(t1), so its update throws
//   data:bridge  X* a free Brownian path at t_1..t_n,
//                X_i = Theta (X*_i - (t_i / t1) X*_n) + (t_i / t1) y
class ObservedDiffusion final : public Model {
public:
    struct Params {
        std::size_t n = 100;
        double t1 = 1.0;
        double theta_max = 5.0;
        std::size_t grid_points = 2001;
    };

    ObservedDiffusion(Params params, double y);

    std::string name() const override { return "observed_diffusion"; }
    std::size_t size() const override { return params_.n - 1; }
    std::vector<Parametrization> supported() const override;
    std::span<const double> data() const override { return {&y_, 1}; }
    std::pair<double, double> theta_support() const override { return {0.0, params_.theta_max}; }
    double default_theta0() const override;
    std::optional<std::vector<double>> draw_latent_prior(double theta, RngStream& rng) const override;

    BlockStats update_latent(ChainState& state, const LatentUpdate& how, RngStream& rng) const override;
    Reparametrization reparametrization(const Parametrization& p) const override;
    bool can_draw_aux_directly(const Parametrization& p) const override;
    void draw_aux_directly(ChainState& state, const Parametrization& p, RngStream& rng) const override;
    double log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<DistSpec> theta_law(const ChainState& state, const Parametrization& p) const override;
    std::optional<GridSpec> theta_grid(const ChainState& state, const Parametrization& p) const override;
    double log_joint(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<DistSpec> latent_coordinate_law(const ChainState& state, std::size_t i) const override;
    std::optional<double> log_marginal_posterior(double theta) const override;

    double delta() const { return params_.t1 / static_cast<double>(params_.n); }

private:
    bool is_bridge(const Parametrization& p) const;
    double log_evidence(double theta) const;

    Params params_;
    double y_ = 0.0;
};

}  // namespace gibbslab
