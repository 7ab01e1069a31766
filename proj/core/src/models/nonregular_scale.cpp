#include "gibbslab/models/nonregular_scale.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace gibbslab {

NonregularScale::NonregularScale(std::vector<double> y) : y_(std::move(y)) {
    // theta^{-n} is integrable at infinity only for n >= 2.
    detail::require(y_.size() >= 2, "nonregular_scale: needs n >= 2 for a proper posterior");
    detail::require_finite_data(y_, name());
}

std::vector<Parametrization> NonregularScale::supported() const {
    return {Parametrization::centered(), Parametrization::noncentered()};
}

double NonregularScale::default_theta0() const { return std::max(0.1, 2.0 * detail::mean_of(y_)); }

BlockStats NonregularScale::update_latent(ChainState& state, const LatentUpdate&, RngStream& rng) const {
    if (!(state.theta > 0.0)) throw DegenerateSupport("nonregular_scale: theta must be positive");
    state.x.resize(y_.size());
    for (std::size_t i = 0; i < y_.size(); ++i) {
        state.x[i] = y_[i] + draw_std_truncated_normal(-y_[i], state.theta - y_[i], rng);
        state.x[i] = std::clamp(state.x[i], 0.0, state.theta);
    }
    return BlockStats::exact();
}

Reparametrization NonregularScale::reparametrization(const Parametrization& p) const {
    require_supported(p);
    return p.is_centered() ? identity_reparam() : scale_ncp();
}

std::optional<DistSpec> NonregularScale::theta_law(const ChainState& state, const Parametrization& p) const {
    require_supported(p);
    const double n = static_cast<double>(y_.size());
    if (p.is_centered()) {
        const double mx = *std::max_element(state.x.begin(), state.x.end());
        if (!(mx > 0.0)) throw DegenerateSupport("nonregular_scale: latent values must be positive");
        return Pareto{mx, n - 1.0};
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < y_.size(); ++i) {
        sxx += state.aux[i] * state.aux[i];
        sxy += state.aux[i] * y_[i];
    }
    return TruncatedNormal{sxy / sxx, 1.0 / std::sqrt(sxx), 0.0, kInf};
}

double NonregularScale::log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const {
    return log_density(*theta_law(state, p), theta);
}

double NonregularScale::log_joint(const ChainState& state, const Parametrization& p, double theta) const {
    require_supported(p);
    if (!(theta > 0.0)) return -kInf;
    double lp = 0.0;
    for (std::size_t i = 0; i < y_.size(); ++i) {
        double x = 0.0;
        if (p.is_centered()) {
            x = state.x[i];
            if (!(x > 0.0 && x < theta)) return -kInf;
            lp -= std::log(theta);
        } else {
            if (!(state.aux[i] > 0.0 && state.aux[i] < 1.0)) return -kInf;
            x = theta * state.aux[i];
        }
        lp += detail::log_normal_pdf(y_[i], x, 1.0);
    }
    return lp;
}

std::optional<DistSpec> NonregularScale::latent_coordinate_law(const ChainState& state, std::size_t i) const {
    return TruncatedNormal{y_.at(i), 1.0, 0.0, state.theta};
}

std::optional<double> NonregularScale::log_marginal_posterior(double theta) const {
    if (!(theta > 0.0)) return -kInf;
    double lp = 0.0;
    for (double yi : y_) {
        const double mass = normal_cdf(theta - yi) - normal_cdf(-yi);
        lp += std::log(mass) - std::log(theta);
    }
    return lp;
}

std::vector<std::pair<std::string, double>> NonregularScale::functionals(const ChainState& state) const {
    return {{"xmax", state.x.empty() ? 0.0 : *std::max_element(state.x.begin(), state.x.end())}};
}

void NonregularScale::check_state(const ChainState& state, const Parametrization& p) const {
    Model::check_state(state, p);
    for (double x : state.x) {
        if (!(x > 0.0 && x <= state.theta)) throw DegenerateSupport("nonregular_scale: latent outside (0, theta)");
    }
}

std::optional<std::vector<double>> NonregularScale::draw_latent_prior(double theta, RngStream& rng) const {
    if (!(theta > 0.0)) throw DegenerateSupport("nonregular_scale: theta must be positive");
    std::vector<double> x(y_.size());
    for (auto& v : x) v = theta * rng.uniform();
    return x;
}

}  // namespace gibbslab
