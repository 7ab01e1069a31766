#pragma once

#include <span>
#include <vector>

#include "gibbslab/model/model.hpp"

namespace gibbslab {

// Log-volatility X_t = Theta B_t on [0, t1] (zero drift, X_0 = 0), discretized at
// n steps of length delta = t1 / n, with one price observation
// Y ~ N(0, sum_i exp(X_i) delta). Theta has a flat prior on (0, theta_max]; the
// cap is needed because the likelihood decays only like 1/Theta.
class DiscretizedSv final : public Model {
public:
    struct Params {
        std::size_t n = 100;
        double t1 = 1.0;
        double theta_max = 5.0;
        int block_repeats = 3;  // prior-path independence proposals per latent update
    };

    DiscretizedSv(Params params, double y);

    std::string name() const override { return "discretized_sv"; }
    std::size_t size() const override { return params_.n; }
    std::vector<Parametrization> supported() const override;
    std::span<const double> data() const override { return {&y_, 1}; }
    std::pair<double, double> theta_support() const override { return {0.0, params_.theta_max}; }
    double default_theta0() const override { return std::min(1.0, 0.5 * params_.theta_max); }
    std::optional<std::vector<double>> draw_latent_prior(double theta, RngStream& rng) const override;

    // Auto: one single-site sweep with prior-conditional proposals, then
    // block_repeats whole-path proposals from the prior. SingleSiteMH: sweeps only.
    BlockStats update_latent(ChainState& state, const LatentUpdate& how, RngStream& rng) const override;
    Reparametrization reparametrization(const Parametrization& p) const override;
    double log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<DistSpec> theta_law(const ChainState& state, const Parametrization& p) const override;
    double log_joint(const ChainState& state, const Parametrization& p, double theta) const override;
    std::vector<std::pair<std::string, double>> functionals(const ChainState& state) const override;

    double delta() const { return params_.t1 / static_cast<double>(params_.n); }
    const Params& params() const { return params_; }

private:
    double log_likelihood(double v) const;
    double integrated_variance(std::span<const double> x) const;

    Params params_;
    double y_ = 0.0;
};

// sum of squared increments of (0, path...) divided by t1.
double quadratic_variation(std::span<const double> path, double t1);

}  // namespace gibbslab
