#include "gibbslab/models/stick_breaking.hpp"

#include <cmath>

#include "common.hpp"

namespace gibbslab {

StickBreaking::StickBreaking(Params params) : params_(params) {
    detail::require(params_.n >= 1, "stick_breaking: needs n >= 1");
    detail::require(detail::positive_finite(params_.a) && detail::positive_finite(params_.b),
                    "stick_breaking: Gamma prior needs a, b > 0");
}

std::vector<Parametrization> StickBreaking::supported() const {
    return {Parametrization::centered(), Parametrization::noncentered()};
}

BlockStats StickBreaking::update_latent(ChainState& state, const LatentUpdate&, RngStream& rng) const {
    if (!(state.theta > 0.0)) throw DegenerateSupport("stick_breaking: theta must be positive");
    state.x.resize(params_.n);
    for (auto& l : state.x) l = rng.exponential() / state.theta;
    return BlockStats::exact();
}

Reparametrization StickBreaking::reparametrization(const Parametrization& p) const {
    require_supported(p);
    if (p.is_centered()) return identity_reparam();
    // Upper quantile of Exp(theta): L = -log(X~) / theta, i.e. X = 1 - X~^{1/theta}.
    return inverse_cdf_ncp([](std::span<const double> th) -> DistSpec { return Exponential{th[0]}; },
                           QuantileSide::Upper);
}

double StickBreaking::constraint_statistic(std::span<const double> x) {
    if (x.empty()) throw EmptyInput("constraint_statistic: empty input");
    double s = 0.0;
    for (double v : x) s -= std::log1p(-v);
    return s / static_cast<double>(x.size());
}

double StickBreaking::constraint_statistic_from_logs(std::span<const double> l) {
    if (l.empty()) throw EmptyInput("constraint_statistic: empty input");
    return detail::mean_of(l);
}

std::vector<double> StickBreaking::stick_fractions(std::span<const double> l) {
    std::vector<double> x(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) x[i] = -std::expm1(-l[i]);
    return x;
}

std::optional<DistSpec> StickBreaking::theta_law(const ChainState& state, const Parametrization& p) const {
    require_supported(p);
    if (!p.is_centered()) return Gamma{params_.a, params_.b};
    return Gamma{params_.a + static_cast<double>(params_.n), params_.b + detail::sum(state.x)};
}

double StickBreaking::log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const {
    return log_density(*theta_law(state, p), theta);
}

double StickBreaking::log_joint(const ChainState& state, const Parametrization& p, double theta) const {
    require_supported(p);
    if (!(theta > 0.0)) return -kInf;
    double lp = (params_.a - 1.0) * std::log(theta) - params_.b * theta;
    if (!p.is_centered()) return lp;
    // Exp(theta) density of each L_i.
    for (double l : state.x) {
        if (!(l >= 0.0)) return -kInf;
        lp += std::log(theta) - theta * l;
    }
    return lp;
}

std::optional<DistSpec> StickBreaking::latent_coordinate_law(const ChainState& state, std::size_t i) const {
    if (i >= params_.n) throw InvalidParameter("stick_breaking: latent index out of range");
    return Exponential{state.theta};
}

std::optional<DistSpec> StickBreaking::posterior_oracle() const { return Gamma{params_.a, params_.b}; }

std::optional<double> StickBreaking::log_marginal_posterior(double theta) const {
    return log_density(Gamma{params_.a, params_.b}, theta);
}

std::vector<std::pair<std::string, double>> StickBreaking::functionals(const ChainState& state) const {
    return {{"constraint", constraint_statistic_from_logs(state.x)}};
}

std::optional<std::vector<double>> StickBreaking::draw_latent_prior(double theta, RngStream& rng) const {
    if (!(theta > 0.0)) throw DegenerateSupport("stick_breaking: theta must be positive");
    std::vector<double> x(params_.n);
    for (auto& l : x) l = rng.exponential() / theta;
    return x;
}

}  // namespace gibbslab
