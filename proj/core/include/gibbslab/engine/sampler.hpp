#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gibbslab/model/model.hpp"
#include "gibbslab/numerics/rng.hpp"

namespace gibbslab {

struct SamplerConfig {
    std::size_t iterations = 11000;  // total sweeps, burn-in included
    std::size_t burn_in = 1000;
    std::size_t thin = 1;
    std::uint64_t seed = 0;
    Parametrization parametrization;
    ThetaUpdate theta_update;
    LatentUpdate x_update;
    std::optional<double> theta0;
    bool direct_aux = false;          // j.1 draws X* directly when the model allows it
    bool record_functionals = false;  // model functionals and Var(Theta | X*, Y)
    bool noncentered_first = false;   // interleaved order; default is centered then noncentered
    std::size_t pilot_iterations = 1000;

    void validate() const;
};

struct ChainTrace {
    std::string model;
    std::string scheme;
    SamplerConfig config;
    std::vector<double> theta;
    std::map<std::string, std::vector<double>> functionals;
    double latent_acceptance = 1.0;
    double theta_acceptance = 1.0;
    double theta_step_sd = 0.0;
    double wall_seconds = 0.0;
};

// A running chain. Pilot tuning of automatic MH steps happens on a private copy of
// the start state, so the measured chain starts exactly at its configured theta0.
class Sampler {
public:
    enum class Scheme { Centered, Noncentered, Interleaved };

    static Sampler centered(const Model& model, SamplerConfig cfg, RngStream rng);
    static Sampler noncentered(const Model& model, SamplerConfig cfg, RngStream rng);
    static Sampler interleaved(const Model& model, SamplerConfig cfg_c, SamplerConfig cfg_nc, RngStream rng);

    void step();
    double theta() const { return state_.theta; }
    const ChainState& state() const { return state_; }
    Scheme scheme() const { return scheme_; }
    const BlockStats& latent_stats() const { return latent_stats_; }
    const BlockStats& theta_stats() const { return theta_stats_; }
    double theta_step_sd() const;
    // Var(Theta | X*, Y) of the last exact Theta draw; NaN when the block was not exact.
    double last_conditional_variance() const { return last_cond_var_; }

private:
    struct Block {
        SamplerConfig cfg;
        ThetaUpdate::Kind theta_kind = ThetaUpdate::Kind::Exact;
        double step_sd = 0.0;
    };

    Sampler(const Model& model, Scheme scheme, std::vector<Block> blocks, RngStream rng);

    void resolve_theta_kind(Block& block);
    void tune_steps();
    void sweep(ChainState& state, Block& block, RngStream& rng, bool measure);
    void theta_update(ChainState& state, Block& block, RngStream& rng, bool measure);

    const Model* model_;
    Scheme scheme_;
    std::vector<Block> blocks_;
    RngStream rng_;
    ChainState state_;
    std::size_t exact_draws_ = 0;
    double probe_mean_ = 0.0;
    double probe_m2_ = 0.0;
    BlockStats latent_stats_;
    BlockStats theta_stats_;
    double last_cond_var_ = 0.0;
    double last_acceptance_ = 1.0;
};

ChainTrace run_centered(const Model& model, const SamplerConfig& cfg, RngStream rng);
// Any non-centered parametrization (noncentered, partial, data-based) via steps j.1-j.4.
ChainTrace run_noncentered(const Model& model, const SamplerConfig& cfg, RngStream rng);
// One centered sweep then one non-centered sweep per iteration; Theta recorded after both.
ChainTrace run_interleaved(const Model& model, const SamplerConfig& cfg_c, const SamplerConfig& cfg_nc,
                           RngStream rng);
// Dispatches on cfg.parametrization.
ChainTrace run_chain(const Model& model, const SamplerConfig& cfg, RngStream rng);
// Records Theta (and functionals) from a constructed sampler.
ChainTrace record_chain(Sampler& sampler, const Model& model, const SamplerConfig& cfg);

}  // namespace gibbslab
