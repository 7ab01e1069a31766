#include "gibbslab/engine/sampler.hpp"

#include <chrono>
#include <cmath>

#include "gibbslab/engine/updates.hpp"
#include "gibbslab/errors.hpp"

namespace gibbslab {

namespace {

constexpr std::uint64_t kPilotSalt = 0x70696c6f74ULL;
constexpr std::uint64_t kProbeSalt = 0x70726f6265ULL;
constexpr double kTargetAcceptance = 0.44;
constexpr double kDegenerateRelVar = 1e-14;
constexpr std::size_t kProbeLength = 100;

}  // namespace

void SamplerConfig::validate() const {
    if (iterations == 0) throw InvalidParameter("sampler: iterations must be positive");
    if (burn_in > iterations) throw InvalidParameter("sampler: burn_in exceeds iterations");
    if (thin == 0) throw InvalidParameter("sampler: thin must be positive");
    if (theta_update.step_sd < 0.0 || x_update.step_sd < 0.0) throw InvalidParameter("sampler: negative step sd");
    if (theta_update.repeats < 1) throw InvalidParameter("sampler: theta repeats must be >= 1");
    if (x_update.repeats < 0) throw InvalidParameter("sampler: latent repeats must be >= 0");
    if (theta_update.kind == ThetaUpdate::Kind::GridInverseCDF && theta_update.grid) theta_update.grid->nodes();
}

Sampler::Sampler(const Model& model, Scheme scheme, std::vector<Block> blocks, RngStream rng)
    : model_(&model), scheme_(scheme), blocks_(std::move(blocks)), rng_(rng) {
    for (auto& b : blocks_) {
        b.cfg.validate();
        model.require_supported(b.cfg.parametrization);
    }
    const double theta0 = blocks_.front().cfg.theta0.value_or(model.default_theta0());
    state_ = model.initial_state(theta0, rng_);
    for (auto& b : blocks_) resolve_theta_kind(b);
    tune_steps();
}

Sampler Sampler::centered(const Model& model, SamplerConfig cfg, RngStream rng) {
    if (!cfg.parametrization.is_centered()) {
        throw UnsupportedParametrization("run_centered requires the centered parametrization");
    }
    return Sampler(model, Scheme::Centered, {Block{std::move(cfg)}}, rng);
}

Sampler Sampler::noncentered(const Model& model, SamplerConfig cfg, RngStream rng) {
    if (cfg.parametrization.is_centered()) {
        throw UnsupportedParametrization("run_noncentered requires a non-centered parametrization");
    }
    return Sampler(model, Scheme::Noncentered, {Block{std::move(cfg)}}, rng);
}

Sampler Sampler::interleaved(const Model& model, SamplerConfig cfg_c, SamplerConfig cfg_nc, RngStream rng) {
    if (!cfg_c.parametrization.is_centered() || cfg_nc.parametrization.is_centered()) {
        throw UnsupportedParametrization("run_interleaved needs one centered and one non-centered config");
    }
    const bool nc_first = cfg_c.noncentered_first || cfg_nc.noncentered_first;
    std::vector<Block> blocks;
    if (nc_first) {
        if (!cfg_nc.theta0) cfg_nc.theta0 = cfg_c.theta0;
        blocks = {Block{std::move(cfg_nc)}, Block{std::move(cfg_c)}};
    } else {
        blocks = {Block{std::move(cfg_c)}, Block{std::move(cfg_nc)}};
    }
    return Sampler(model, Scheme::Interleaved, std::move(blocks), rng);
}

void Sampler::resolve_theta_kind(Block& block) {
    const auto& p = block.cfg.parametrization;
    ChainState probe = state_;
    if (!p.is_centered()) {
        RngStream probe_rng = rng_.derive(kProbeSalt);
        model_->to_aux(probe, p, probe_rng);
    }
    const auto requested = block.cfg.theta_update.kind;
    block.step_sd = block.cfg.theta_update.step_sd;
    if (requested == ThetaUpdate::Kind::Auto || requested == ThetaUpdate::Kind::Exact) {
        // Throws for parametrizations whose Theta update is impossible or degenerate.
        const auto law = model_->theta_law(probe, p);
        if (law) {
            block.theta_kind = ThetaUpdate::Kind::Exact;
            return;
        }
        if (requested == ThetaUpdate::Kind::Exact) {
            throw UnsupportedParametrization(model_->name() + ": no exact Theta update under " + p.label());
        }
        if (model_->theta_grid(probe, p)) {
            block.theta_kind = ThetaUpdate::Kind::GridInverseCDF;
            return;
        }
        block.theta_kind = ThetaUpdate::Kind::RandomWalkMH;
        return;
    }
    (void)model_->log_theta_conditional(probe, p, probe.theta);
    block.theta_kind = requested;
}

void Sampler::tune_steps() {
    bool any = false;
    for (auto& b : blocks_) {
        if (b.theta_kind == ThetaUpdate::Kind::RandomWalkMH && b.step_sd == 0.0) {
            b.step_sd = 0.1 * std::max(1.0, std::fabs(state_.theta));
            any = true;
        }
    }
    if (!any) return;
    std::vector<bool> adapt(blocks_.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        adapt[i] = blocks_[i].theta_kind == ThetaUpdate::Kind::RandomWalkMH && blocks_[i].cfg.theta_update.step_sd == 0.0;
    }
    ChainState pilot = state_;
    RngStream pilot_rng = rng_.derive(kPilotSalt);
    const std::size_t iters = blocks_.front().cfg.pilot_iterations;
    for (std::size_t t = 0; t < iters; ++t) {
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            Block& b = blocks_[i];
            sweep(pilot, b, pilot_rng, false);
            if (!adapt[i]) continue;
            const double gain = 1.0 / std::sqrt(static_cast<double>(t) + 1.0);
            b.step_sd *= std::exp(gain * (last_acceptance_ - kTargetAcceptance));
        }
    }
    exact_draws_ = 0;
    probe_mean_ = 0.0;
    probe_m2_ = 0.0;
    last_cond_var_ = 0.0;
}

void Sampler::sweep(ChainState& state, Block& block, RngStream& rng, bool measure) {
    const auto& p = block.cfg.parametrization;
    if (p.is_centered()) {
        const BlockStats s = model_->update_latent(state, block.cfg.x_update, rng);
        if (measure) latent_stats_.add(s);
        theta_update(state, block, rng, measure);
        return;
    }
    if (block.cfg.direct_aux && model_->can_draw_aux_directly(p)) {
        model_->draw_aux_directly(state, p, rng);
        if (measure) latent_stats_.add(BlockStats::exact());
    } else {
        const BlockStats s = model_->update_latent(state, block.cfg.x_update, rng);
        if (measure) latent_stats_.add(s);
        model_->to_aux(state, p, rng);
    }
    theta_update(state, block, rng, measure);
    model_->from_aux(state, p);
}

void Sampler::theta_update(ChainState& state, Block& block, RngStream& rng, bool measure) {
    const auto& p = block.cfg.parametrization;
    switch (block.theta_kind) {
        case ThetaUpdate::Kind::Auto:
        case ThetaUpdate::Kind::Exact: {
            const auto law = model_->theta_law(state, p);
            if (!law) throw UnsupportedParametrization(model_->name() + ": exact Theta law unavailable");
            const double var = variance(*law);
            if (!(var > kDegenerateRelVar * std::max(1.0, state.theta * state.theta))) {
                throw DegenerateConditional(model_->name() + " under " + p.label() +
                                            ": Theta conditional has zero variance");
            }
            state.theta = draw(*law, rng);
            if (measure) {
                last_cond_var_ = var;
                theta_stats_.add(BlockStats::exact());
                if (exact_draws_ < kProbeLength) {
                    ++exact_draws_;
                    const double delta = state.theta - probe_mean_;
                    probe_mean_ += delta / static_cast<double>(exact_draws_);
                    probe_m2_ += delta * (state.theta - probe_mean_);
                    if (exact_draws_ == kProbeLength &&
                        probe_m2_ / static_cast<double>(kProbeLength - 1) <=
                            kDegenerateRelVar * std::max(1.0, probe_mean_ * probe_mean_)) {
                        throw DegenerateConditional(model_->name() + " under " + p.label() +
                                                    ": Theta did not move over the probe window");
                    }
                }
            }
            return;
        }
        case ThetaUpdate::Kind::RandomWalkMH: {
            auto target = [&](double t) { return model_->log_theta_conditional(state, p, t); };
            double lp = target(state.theta);
            std::size_t acc = 0;
            const int reps = block.cfg.theta_update.repeats;
            for (int r = 0; r < reps; ++r) {
                const MhResult res = mh_step(target, state.theta, lp, block.step_sd, rng);
                state.theta = res.value;
                lp = res.log_target;
                acc += res.accepted ? 1 : 0;
            }
            last_acceptance_ = static_cast<double>(acc) / static_cast<double>(reps);
            if (measure) {
                theta_stats_.add({static_cast<std::size_t>(reps), acc});
                last_cond_var_ = std::numeric_limits<double>::quiet_NaN();
            }
            return;
        }
        case ThetaUpdate::Kind::GridInverseCDF: {
            auto grid = block.cfg.theta_update.grid;
            if (!grid) grid = model_->theta_grid(state, p);
            if (!grid) throw InvalidParameter(model_->name() + ": no grid for the inverse-CDF Theta update");
            auto target = [&](double t) { return model_->log_theta_conditional(state, p, t); };
            state.theta = grid_inverse_cdf_update(target, *grid, rng);
            if (measure) {
                theta_stats_.add(BlockStats::exact());
                last_cond_var_ = std::numeric_limits<double>::quiet_NaN();
            }
            return;
        }
    }
}

void Sampler::step() {
    for (auto& b : blocks_) sweep(state_, b, rng_, true);
}

double Sampler::theta_step_sd() const {
    for (const auto& b : blocks_) {
        if (b.theta_kind == ThetaUpdate::Kind::RandomWalkMH) return b.step_sd;
    }
    return 0.0;
}

ChainTrace record_chain(Sampler& sampler, const Model& model, const SamplerConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    ChainTrace trace;
    trace.model = model.name();
    trace.config = cfg;
    switch (sampler.scheme()) {
        case Sampler::Scheme::Centered:
            trace.scheme = "centered";
            break;
        case Sampler::Scheme::Noncentered:
            trace.scheme = "noncentered";
            break;
        case Sampler::Scheme::Interleaved:
            trace.scheme = "interleaved";
            break;
    }
    const std::size_t kept = (cfg.iterations - cfg.burn_in + cfg.thin - 1) / cfg.thin;
    trace.theta.reserve(kept);
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        sampler.step();
        if (it < cfg.burn_in || (it - cfg.burn_in) % cfg.thin != 0) continue;
        trace.theta.push_back(sampler.theta());
        if (cfg.record_functionals) {
            for (const auto& [name, value] : model.functionals(sampler.state())) {
                trace.functionals[name].push_back(value);
            }
            trace.functionals["theta_cond_var"].push_back(sampler.last_conditional_variance());
        }
    }
    trace.latent_acceptance = sampler.latent_stats().rate();
    trace.theta_acceptance = sampler.theta_stats().rate();
    trace.theta_step_sd = sampler.theta_step_sd();
    trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return trace;
}

ChainTrace run_centered(const Model& model, const SamplerConfig& cfg, RngStream rng) {
    Sampler s = Sampler::centered(model, cfg, rng);
    return record_chain(s, model, cfg);
}

ChainTrace run_noncentered(const Model& model, const SamplerConfig& cfg, RngStream rng) {
    Sampler s = Sampler::noncentered(model, cfg, rng);
    return record_chain(s, model, cfg);
}

ChainTrace run_interleaved(const Model& model, const SamplerConfig& cfg_c, const SamplerConfig& cfg_nc,
                           RngStream rng) {
    Sampler s = Sampler::interleaved(model, cfg_c, cfg_nc, rng);
    return record_chain(s, model, cfg_nc);
}

ChainTrace run_chain(const Model& model, const SamplerConfig& cfg, RngStream rng) {
    return cfg.parametrization.is_centered() ? run_centered(model, cfg, rng) : run_noncentered(model, cfg, rng);
}

}  // namespace gibbslab
