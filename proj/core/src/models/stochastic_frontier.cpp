#include "gibbslab/models/stochastic_frontier.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace gibbslab {

StochasticFrontier::StochasticFrontier(Params params, std::vector<double> y) : params_(params), y_(std::move(y)) {
    detail::require(detail::positive_finite(params_.lambda) && detail::positive_finite(params_.sigma_x),
                    "stochastic_frontier: lambda and sigma_x must be positive");
    detail::require(!y_.empty(), "stochastic_frontier: needs n >= 1");
    detail::require_finite_data(y_, name());
}

std::vector<Parametrization> StochasticFrontier::supported() const {
    return {Parametrization::centered(), Parametrization::noncentered()};
}

double StochasticFrontier::default_theta0() const { return detail::mean_of(y_) + 1.0 / params_.lambda; }

BlockStats StochasticFrontier::update_latent(ChainState& state, const LatentUpdate&, RngStream& rng) const {
    const double s = params_.sigma_x;
    const double m = state.theta - params_.lambda * s * s;
    state.x.resize(y_.size());
    for (std::size_t i = 0; i < y_.size(); ++i) {
        state.x[i] = std::max(y_[i], m + s * draw_std_truncated_normal((y_[i] - m) / s, kInf, rng));
    }
    return BlockStats::exact();
}

Reparametrization StochasticFrontier::reparametrization(const Parametrization& p) const {
    require_supported(p);
    return p.is_centered() ? identity_reparam() : location_ncp();
}

std::optional<DistSpec> StochasticFrontier::theta_law(const ChainState& state, const Parametrization& p) const {
    require_supported(p);
    const double n = static_cast<double>(y_.size());
    if (p.is_centered()) return Normal{detail::mean_of(state.x), params_.sigma_x / std::sqrt(n)};
    double lo = -kInf;
    for (std::size_t i = 0; i < y_.size(); ++i) lo = std::max(lo, y_[i] - state.aux[i]);
    return TruncatedExponential{n * params_.lambda, lo, kInf};
}

double StochasticFrontier::log_theta_conditional(const ChainState& state, const Parametrization& p,
                                                 double theta) const {
    return log_density(*theta_law(state, p), theta);
}

double StochasticFrontier::log_joint(const ChainState& state, const Parametrization& p, double theta) const {
    require_supported(p);
    double lp = 0.0;
    for (std::size_t i = 0; i < y_.size(); ++i) {
        const double x = p.is_centered() ? state.x[i] : state.aux[i] + theta;
        const double u = x - y_[i];
        if (u < 0.0) return -kInf;
        lp += detail::log_normal_pdf(x, theta, params_.sigma_x) + std::log(params_.lambda) - params_.lambda * u;
    }
    return lp;
}

std::optional<DistSpec> StochasticFrontier::latent_coordinate_law(const ChainState& state, std::size_t i) const {
    const double s = params_.sigma_x;
    return TruncatedNormal{state.theta - params_.lambda * s * s, s, y_.at(i), kInf};
}

std::optional<double> StochasticFrontier::log_marginal_posterior(double theta) const {
    const double l = params_.lambda;
    const double s = params_.sigma_x;
    double lp = 0.0;
    for (double yi : y_) {
        const double e = yi - theta;
        lp += std::log(l) + l * e + 0.5 * l * l * s * s + log_normal_cdf(-(e + l * s * s) / s);
    }
    return lp;
}

std::vector<std::pair<std::string, double>> StochasticFrontier::functionals(const ChainState& state) const {
    return {{"xbar", detail::mean_of(state.x)}};
}

void StochasticFrontier::check_state(const ChainState& state, const Parametrization& p) const {
    Model::check_state(state, p);
    for (std::size_t i = 0; i < state.x.size(); ++i) {
        if (state.x[i] < y_[i]) throw DegenerateSupport("stochastic_frontier: latent below its observation");
    }
}

std::optional<std::vector<double>> StochasticFrontier::draw_latent_prior(double theta, RngStream& rng) const {
    std::vector<double> x(y_.size());
    for (auto& v : x) v = theta + params_.sigma_x * rng.normal();
    return x;
}

}  // namespace gibbslab
