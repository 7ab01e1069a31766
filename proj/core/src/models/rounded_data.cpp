#include "gibbslab/models/rounded_data.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace gibbslab {

RoundedData::RoundedData(Params params, std::vector<double> y) : params_(params), y_(std::move(y)) {
    detail::require(detail::positive_finite(params_.sigma_x), "rounded_data: sigma_x must be positive");
    detail::require(!y_.empty(), "rounded_data: needs n >= 1");
    for (double v : y_) detail::require(std::isfinite(v) && v == std::floor(v), "rounded_data: data must be integers");
    detail_mean_ = detail::mean_of(y_);
}

std::vector<Parametrization> RoundedData::supported() const {
    return {Parametrization::centered(), Parametrization::noncentered()};
}

BlockStats RoundedData::update_latent(ChainState& state, const LatentUpdate&, RngStream& rng) const {
    const double s = params_.sigma_x;
    state.x.resize(y_.size());
    for (std::size_t i = 0; i < y_.size(); ++i) {
        const double a = (y_[i] - state.theta) / s;
        const double b = (y_[i] + 1.0 - state.theta) / s;
        // Clamp keeps rounding at the cell edges inside [Y_i, Y_i + 1).
        const double x = state.theta + s * draw_std_truncated_normal(a, b, rng);
        state.x[i] = std::clamp(x, y_[i], std::nextafter(y_[i] + 1.0, y_[i]));
    }
    return BlockStats::exact();
}

Reparametrization RoundedData::reparametrization(const Parametrization& p) const {
    require_supported(p);
    return p.is_centered() ? identity_reparam() : location_ncp();
}

std::pair<double, double> RoundedData::noncentered_interval(std::span<const double> aux) const {
    if (aux.size() != y_.size()) throw LengthMismatch("rounded_data: auxiliary length differs from data");
    double lo = -kInf, hi = kInf;
    for (std::size_t i = 0; i < y_.size(); ++i) {
        lo = std::max(lo, y_[i] - aux[i]);
        hi = std::min(hi, y_[i] + 1.0 - aux[i]);
    }
    if (!(lo < hi)) throw DegenerateSupport("rounded_data: empty Theta interval; the latent state is corrupt");
    return {lo, hi};
}

std::optional<DistSpec> RoundedData::theta_law(const ChainState& state, const Parametrization& p) const {
    require_supported(p);
    if (p.is_centered()) {
        return Normal{detail::mean_of(state.x), params_.sigma_x / std::sqrt(static_cast<double>(y_.size()))};
    }
    const auto [lo, hi] = noncentered_interval(state.aux);
    return Uniform{lo, hi};
}

double RoundedData::log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const {
    return log_density(*theta_law(state, p), theta);
}

double RoundedData::log_joint(const ChainState& state, const Parametrization& p, double theta) const {
    require_supported(p);
    double lp = 0.0;
    for (std::size_t i = 0; i < y_.size(); ++i) {
        const double x = p.is_centered() ? state.x[i] : state.aux[i] + theta;
        if (std::floor(x) != y_[i]) return -kInf;
        lp += detail::log_normal_pdf(x, theta, params_.sigma_x);
    }
    return lp;
}

std::optional<DistSpec> RoundedData::latent_coordinate_law(const ChainState& state, std::size_t i) const {
    return TruncatedNormal{state.theta, params_.sigma_x, y_.at(i), y_.at(i) + 1.0};
}

std::optional<double> RoundedData::log_marginal_posterior(double theta) const {
    const double s = params_.sigma_x;
    double lp = 0.0;
    for (double yi : y_) {
        const double a = (yi - theta) / s;
        const double b = (yi + 1.0 - theta) / s;
        // Mass of [a, b] under N(0, 1), computed on the side away from the bulk.
        const double mass = a > 0.0 ? normal_upper_tail(a) - normal_upper_tail(b) : normal_cdf(b) - normal_cdf(a);
        lp += std::log(mass);
    }
    return lp;
}

std::vector<std::pair<std::string, double>> RoundedData::functionals(const ChainState& state) const {
    return {{"xbar", detail::mean_of(state.x)}};
}

void RoundedData::check_state(const ChainState& state, const Parametrization& p) const {
    Model::check_state(state, p);
    for (std::size_t i = 0; i < state.x.size(); ++i) {
        if (std::floor(state.x[i]) != y_[i]) throw DegenerateSupport("rounded_data: latent outside its cell");
    }
}

std::optional<std::vector<double>> RoundedData::draw_latent_prior(double theta, RngStream& rng) const {
    std::vector<double> x(y_.size());
    for (auto& v : x) v = theta + params_.sigma_x * rng.normal();
    return x;
}

}  // namespace gibbslab
