#include "gibbslab/models/observed_diffusion.hpp"

#include <cmath>

#include "common.hpp"

namespace gibbslab {

ObservedDiffusion::ObservedDiffusion(Params params, double y) : params_(params), y_(y) {
    detail::require(params_.n >= 2, "observed_diffusion: needs n >= 2");
    detail::require(detail::positive_finite(params_.t1), "observed_diffusion: t1 must be positive");
    detail::require(detail::positive_finite(params_.theta_max), "observed_diffusion: theta_max must be positive");
    detail::require(params_.grid_points >= 3, "observed_diffusion: grid needs at least 3 points");
    detail::require(std::isfinite(y_), "observed_diffusion: observation must be finite");
}

std::vector<Parametrization> ObservedDiffusion::supported() const {
    return {Parametrization::centered(), Parametrization::noncentered(), Parametrization::data_based("bridge")};
}

bool ObservedDiffusion::is_bridge(const Parametrization& p) const {
    return p.kind == Parametrization::Kind::DataBased;
}

double ObservedDiffusion::default_theta0() const {
    const double guess = std::abs(y_) / std::sqrt(params_.t1);
    return std::clamp(guess, 0.1 * params_.theta_max, 0.9 * params_.theta_max);
}

// Y | Theta ~ N(0, Theta^2 t1), up to a constant.
double ObservedDiffusion::log_evidence(double theta) const {
    return -std::log(theta) - y_ * y_ / (2.0 * theta * theta * params_.t1);
}

BlockStats ObservedDiffusion::update_latent(ChainState& state, const LatentUpdate& how, RngStream& rng) const {
    if (how.kind == LatentUpdate::Kind::RandomWalkMH || how.kind == LatentUpdate::Kind::SingleSiteMH) {
        throw UnsupportedParametrization("observed_diffusion: latent path is drawn exactly");
    }
    // Brownian bridge from 0 to y with scale theta.
    const std::size_t n = params_.n;
    const double sd = std::sqrt(delta());
    std::vector<double> w(n);
    double acc = 0.0;
    for (auto& v : w) v = (acc += sd * rng.normal());
    state.x.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double frac = static_cast<double>(i + 1) / static_cast<double>(n);
        state.x[i] = state.theta * (w[i] - frac * w[n - 1]) + frac * y_;
    }
    return BlockStats::exact();
}

Reparametrization ObservedDiffusion::reparametrization(const Parametrization& p) const {
    require_supported(p);
    if (p.is_centered()) return identity_reparam();
    if (!is_bridge(p)) return scale_ncp();
    const std::size_t n = params_.n;
    const double t1 = params_.t1;
    return Reparametrization(
        "bridge",
        [n](std::span<const double> aux, std::span<const double> theta, std::span<const double> y,
            std::vector<double>& x) {
            x.resize(n - 1);
            const double end = aux[n - 1];
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double frac = static_cast<double>(i + 1) / static_cast<double>(n);
                x[i] = theta[0] * (aux[i] - frac * end) + frac * y[0];
            }
        },
        [n, t1](std::span<const double> x, std::span<const double> theta, std::span<const double> y, RngStream& rng,
                std::vector<double>& aux) {
            if (!(theta[0] > 0.0)) throw InvalidParameter("observed_diffusion: theta must be positive");
            // The bridge forgets the free endpoint, so it is redrawn from its N(0, t1) law.
            aux.resize(n);
            const double end = std::sqrt(t1) * rng.normal();
            aux[n - 1] = end;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double frac = static_cast<double>(i + 1) / static_cast<double>(n);
                aux[i] = (x[i] - frac * y[0]) / theta[0] + frac * end;
            }
        },
        true);
}

bool ObservedDiffusion::can_draw_aux_directly(const Parametrization& p) const { return is_bridge(p); }

void ObservedDiffusion::draw_aux_directly(ChainState& state, const Parametrization& p, RngStream& rng) const {
    if (!is_bridge(p)) Model::draw_aux_directly(state, p, rng);
    // X* is a standard Brownian path whatever Theta and Y are.
    const double sd = std::sqrt(delta());
    state.aux.resize(params_.n);
    double acc = 0.0;
    for (auto& v : state.aux) v = (acc += sd * rng.normal());
}

std::optional<DistSpec> ObservedDiffusion::theta_law(const ChainState& state, const Parametrization& p) const {
    require_supported(p);
    if (is_bridge(p)) return std::nullopt;
    if (!p.is_centered()) {
        throw ConstraintViolation("observed_diffusion: Theta is fixed by y = Theta X~(t1) in the noncentered chain");
    }
    double s = 0.0, prev = 0.0;
    for (double v : state.x) {
        s += (v - prev) * (v - prev);
        prev = v;
    }
    s += (y_ - prev) * (y_ - prev);
    const double n = static_cast<double>(params_.n);
    return InverseRootGamma{0.5 * (n - 1.0), s / (2.0 * delta()), params_.theta_max};
}

std::optional<GridSpec> ObservedDiffusion::theta_grid(const ChainState&, const Parametrization& p) const {
    require_supported(p);
    if (!is_bridge(p)) return std::nullopt;
    if (y_ == 0.0) throw DegenerateConditional("observed_diffusion: Theta | Y is not integrable at 0 when y = 0");
    // Below a tenth of the mode the density is under 1e-20 of its peak.
    const double lo = std::min(0.1 * std::abs(y_) / std::sqrt(params_.t1), 0.5 * params_.theta_max);
    GridSpec g;
    g.lo = lo;
    g.hi = params_.theta_max;
    g.points = params_.grid_points;
    g.hard_hi = true;
    return g;
}

double ObservedDiffusion::log_theta_conditional(const ChainState& state, const Parametrization& p,
                                                double theta) const {
    require_supported(p);
    if (!is_bridge(p) && !p.is_centered()) {
        throw ConstraintViolation("observed_diffusion: Theta is fixed by y = Theta X~(t1) in the noncentered chain");
    }
    if (!(theta > 0.0 && theta <= params_.theta_max)) return -kInf;
    if (p.is_centered()) return log_density(*theta_law(state, p), theta);
    return log_evidence(theta);
}

double ObservedDiffusion::log_joint(const ChainState& state, const Parametrization& p, double theta) const {
    require_supported(p);
    if (!(theta > 0.0 && theta <= params_.theta_max)) return -kInf;
    if (p.is_centered()) {
        const double sd = theta * std::sqrt(delta());
        double lp = 0.0, prev = 0.0;
        for (double v : state.x) {
            lp += detail::log_normal_pdf(v, prev, sd);
            prev = v;
        }
        return lp + detail::log_normal_pdf(y_, prev, sd);
    }
    if (!is_bridge(p)) {
        // X~ is Brownian with unit scale; y = Theta X~(t1) is a point mass.
        throw ConstraintViolation("observed_diffusion: noncentered joint is singular in Theta");
    }
    const double sd = std::sqrt(delta());
    double lp = 0.0, prev = 0.0;
    for (double v : state.aux) {
        lp += detail::log_normal_pdf(v, prev, sd);
        prev = v;
    }
    return lp + log_evidence(theta);
}

std::optional<DistSpec> ObservedDiffusion::latent_coordinate_law(const ChainState& state, std::size_t i) const {
    const std::size_t m = params_.n - 1;
    if (i >= m) throw InvalidParameter("observed_diffusion: coordinate out of range");
    const double left = i == 0 ? 0.0 : state.x[i - 1];
    const double right = i + 1 == m ? y_ : state.x[i + 1];
    return Normal{0.5 * (left + right), state.theta * std::sqrt(0.5 * delta())};
}

std::optional<double> ObservedDiffusion::log_marginal_posterior(double theta) const {
    if (!(theta > 0.0 && theta <= params_.theta_max)) return -kInf;
    return log_evidence(theta);
}

std::optional<std::vector<double>> ObservedDiffusion::draw_latent_prior(double theta, RngStream& rng) const {
    // Free Brownian motion with scale theta at the interior times, ignoring Y.
    const double s = theta * std::sqrt(delta());
    std::vector<double> x(params_.n - 1);
    double acc = 0.0;
    for (auto& v : x) v = s * (acc += rng.normal());
    return x;
}

}  // namespace gibbslab
