#include "gibbslab/models/heavy_tail_hmm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "common.hpp"
#include "gibbslab/engine/updates.hpp"
#include "gibbslab/numerics/stats_tests.hpp"

namespace gibbslab {

HeavyTailHmm::HeavyTailHmm(Params params, std::vector<double> y) : params_(params), y_(std::move(y)) {
    detail::require(detail::positive_finite(params_.sigma_x) && detail::positive_finite(params_.sigma_y),
                    "heavy_tail_hmm: sigma_x and sigma_y must be positive");
    detail::require(params_.mh_repeats >= 1, "heavy_tail_hmm: mh_repeats must be >= 1");
    detail::require(params_.mh_step_sd >= 0.0, "heavy_tail_hmm: negative MH step");
    detail::require(!y_.empty(), "heavy_tail_hmm: needs n >= 1");
    detail::require_finite_data(y_, name());
}

HeavyTailHmm::Direction HeavyTailHmm::parse_direction(const std::string& text) {
    if (text == "cauchy-obs" || text == "cauchy_obs") return Direction::CauchyObservation;
    if (text == "cauchy-latent" || text == "cauchy_latent") return Direction::CauchyLatent;
    throw InvalidParameter("heavy_tail_hmm: unknown direction '" + text + "'");
}

HeavyTailHmm::Params HeavyTailHmm::mirrored_defaults() {
    Params p;
    p.sigma_y = std::sqrt(5.0);
    p.sigma_x = 1.0;
    p.direction = Direction::CauchyLatent;
    return p;
}

std::string HeavyTailHmm::name() const {
    return params_.direction == Direction::CauchyObservation ? "heavy_tail_hmm" : "heavy_tail_hmm_latent";
}

std::vector<Parametrization> HeavyTailHmm::supported() const {
    return {Parametrization::centered(), Parametrization::noncentered()};
}

double HeavyTailHmm::default_theta0() const { return median(y_); }

double HeavyTailHmm::log_obs(double y, double x) const {
    return params_.direction == Direction::CauchyObservation ? detail::log_cauchy_pdf(y, x, params_.sigma_y)
                                                             : detail::log_normal_pdf(y, x, params_.sigma_y);
}

double HeavyTailHmm::log_latent(double x, double theta) const {
    return params_.direction == Direction::CauchyObservation ? detail::log_normal_pdf(x, theta, params_.sigma_x)
                                                             : detail::log_cauchy_pdf(x, theta, params_.sigma_x);
}

double HeavyTailHmm::log_site(std::size_t i, double x, double theta) const {
    return log_obs(y_.at(i), x) + log_latent(x, theta);
}

double HeavyTailHmm::default_step() const {
    if (params_.mh_step_sd > 0.0) return params_.mh_step_sd;
    // Fisher information of a Cauchy location is 1 / (2 scale^2).
    const double sx = params_.sigma_x, sy = params_.sigma_y;
    const double info = params_.direction == Direction::CauchyObservation ? 1.0 / (sx * sx) + 0.5 / (sy * sy)
                                                                          : 0.5 / (sx * sx) + 1.0 / (sy * sy);
    return 2.4 / std::sqrt(info);
}

double HeavyTailHmm::draw_site(std::size_t i, double theta, RngStream& rng) const {
    // The Gaussian link confines the mass to 12 of its sds around its centre; the
    // Cauchy factor varies only polynomially there.
    const bool obs = params_.direction == Direction::CauchyObservation;
    const double c = obs ? theta : y_[i];
    const double s = obs ? params_.sigma_x : params_.sigma_y;
    GridSpec g;
    g.lo = c - 12.0 * s;
    g.hi = c + 12.0 * s;
    g.points = 4001;
    return grid_inverse_cdf_update([&](double x) { return log_site(i, x, theta); }, g, rng);
}

ChainState HeavyTailHmm::initial_state(double theta0, RngStream& rng) const {
    // Sites are independent given Theta, so the start is an exact draw from X | theta0, Y.
    ChainState s;
    s.theta = theta0;
    s.x.resize(y_.size());
    for (std::size_t i = 0; i < y_.size(); ++i) s.x[i] = draw_site(i, theta0, rng);
    return s;
}

BlockStats HeavyTailHmm::update_latent(ChainState& state, const LatentUpdate& how, RngStream& rng) const {
    if (state.x.size() != y_.size()) state.x.assign(y_.size(), state.theta);
    if (how.kind == LatentUpdate::Kind::Exact) {
        for (std::size_t i = 0; i < y_.size(); ++i) state.x[i] = draw_site(i, state.theta, rng);
        return BlockStats::exact(y_.size());
    }
    const double step = how.step_sd > 0.0 ? how.step_sd : default_step();
    const int reps = how.repeats > 0 ? how.repeats : params_.mh_repeats;
    BlockStats stats;
    for (int r = 0; r < reps; ++r) {
        for (std::size_t i = 0; i < y_.size(); ++i) {
            const double theta = state.theta;
            auto target = [&](double x) { return log_site(i, x, theta); };
            const MhResult res = mh_step(target, state.x[i], step, rng);
            state.x[i] = res.value;
            stats.proposals += 1;
            stats.accepted += res.accepted ? 1 : 0;
        }
    }
    return stats;
}

Reparametrization HeavyTailHmm::reparametrization(const Parametrization& p) const {
    require_supported(p);
    return p.is_centered() ? identity_reparam() : location_ncp();
}

std::optional<DistSpec> HeavyTailHmm::theta_law(const ChainState& state, const Parametrization& p) const {
    require_supported(p);
    const double n = static_cast<double>(y_.size());
    const bool obs = params_.direction == Direction::CauchyObservation;
    if (p.is_centered()) {
        // Theta | X comes from the latent link.
        if (obs) return Normal{detail::mean_of(state.x), params_.sigma_x / std::sqrt(n)};
        if (y_.size() == 1) return Cauchy{state.x[0], params_.sigma_x};
        return std::nullopt;
    }
    // Theta | X~, Y comes from the observation link at x = X~ + Theta.
    if (!obs) {
        double s = 0.0;
        for (std::size_t i = 0; i < y_.size(); ++i) s += y_[i] - state.aux[i];
        return Normal{s / n, params_.sigma_y / std::sqrt(n)};
    }
    if (y_.size() == 1) return Cauchy{y_[0] - state.aux[0], params_.sigma_y};
    return std::nullopt;
}

double HeavyTailHmm::log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const {
    require_supported(p);
    double lp = 0.0;
    for (std::size_t i = 0; i < y_.size(); ++i) {
        lp += p.is_centered() ? log_latent(state.x[i], theta) : log_obs(y_[i], state.aux[i] + theta);
    }
    return lp;
}

double HeavyTailHmm::log_joint(const ChainState& state, const Parametrization& p, double theta) const {
    require_supported(p);
    double lp = 0.0;
    for (std::size_t i = 0; i < y_.size(); ++i) {
        const double x = p.is_centered() ? state.x[i] : state.aux[i] + theta;
        lp += log_site(i, x, theta);
    }
    return lp;
}

std::optional<double> HeavyTailHmm::log_marginal_posterior(double theta) const {
    // Latents are independent given Theta: integrate each site separately by
    // Simpson's rule over a window around the lighter-tailed link.
    const bool obs = params_.direction == Direction::CauchyObservation;
    constexpr int kCells = 4000;
    double lp = 0.0;
    for (std::size_t i = 0; i < y_.size(); ++i) {
        const double c = obs ? theta : y_[i];
        const double s = obs ? params_.sigma_x : params_.sigma_y;
        const double lo = c - 12.0 * s, hi = c + 12.0 * s;
        const double h = (hi - lo) / kCells;
        double peak = -kInf;
        for (int k = 0; k <= kCells; ++k) peak = std::max(peak, log_site(i, lo + h * k, theta));
        double acc = 0.0;
        for (int k = 0; k <= kCells; ++k) {
            const double w = (k == 0 || k == kCells) ? 1.0 : (k % 2 ? 4.0 : 2.0);
            acc += w * std::exp(log_site(i, lo + h * k, theta) - peak);
        }
        lp += peak + std::log(acc * h / 3.0);
    }
    return lp;
}

std::vector<std::pair<std::string, double>> HeavyTailHmm::functionals(const ChainState& state) const {
    return {{"xbar", detail::mean_of(state.x)}};
}

std::optional<std::vector<double>> HeavyTailHmm::draw_latent_prior(double theta, RngStream& rng) const {
    std::vector<double> x(y_.size());
    for (auto& v : x) {
        v = params_.direction == Direction::CauchyObservation
                ? theta + params_.sigma_x * rng.normal()
                : theta + params_.sigma_x * std::tan(std::numbers::pi * (rng.uniform_open() - 0.5));
    }
    return x;
}

}  // namespace gibbslab
