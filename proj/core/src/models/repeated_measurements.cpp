#include "gibbslab/models/repeated_measurements.hpp"

#include <cmath>

#include "common.hpp"

namespace gibbslab {

RepeatedMeasurements::RepeatedMeasurements(Params params, std::vector<double> y)
    : params_(params), y_(std::move(y)) {
    detail::require(detail::positive_finite(params_.sigma_x) && detail::positive_finite(params_.sigma_y),
                    "repeated_measurements: sigma_x and sigma_y must be positive");
    detail::require(!y_.empty(), "repeated_measurements: needs n >= 1 observations");
    detail::require_finite_data(y_, name());
    n_ = static_cast<double>(y_.size());
    ybar_ = detail::mean_of(y_);
    tau_ = n_ / (params_.sigma_y * params_.sigma_y) + 1.0 / (params_.sigma_x * params_.sigma_x);
}

std::vector<Parametrization> RepeatedMeasurements::supported() const {
    return {Parametrization::centered(), Parametrization::noncentered(), Parametrization::partial(0.5),
            Parametrization::data_based("vm")};
}

double RepeatedMeasurements::latent_mean(double theta) const {
    const double sy2 = params_.sigma_y * params_.sigma_y;
    const double sx2 = params_.sigma_x * params_.sigma_x;
    return (n_ * ybar_ / sy2 + theta / sx2) / tau_;
}

RepeatedMeasurements::Linear RepeatedMeasurements::linear(const Parametrization& p) const {
    require_supported(p);
    switch (p.kind) {
        case Parametrization::Kind::Centered:
            return {1.0, 0.0, 0.0};
        case Parametrization::Kind::Noncentered:
            return {1.0, 0.0, 1.0};
        case Parametrization::Kind::Partial:
            return {1.0, 0.0, 1.0 - p.weight};
        case Parametrization::Kind::DataBased: {
            const double sy2 = params_.sigma_y * params_.sigma_y;
            const double sx2 = params_.sigma_x * params_.sigma_x;
            return {std::sqrt(1.0 / tau_), n_ * ybar_ / (sy2 * tau_), 1.0 / (sx2 * tau_)};
        }
    }
    return {};
}

BlockStats RepeatedMeasurements::update_latent(ChainState& state, const LatentUpdate&, RngStream& rng) const {
    state.x.resize(1);
    state.x[0] = latent_mean(state.theta) + std::sqrt(1.0 / tau_) * rng.normal();
    return BlockStats::exact();
}

Reparametrization RepeatedMeasurements::reparametrization(const Parametrization& p) const {
    if (p.is_centered()) return identity_reparam();
    if (p.kind == Parametrization::Kind::Noncentered) return location_ncp();
    const Linear lin = linear(p);
    return partial_ncp([lin](std::span<const double>, std::span<const double>, std::size_t) { return lin.scale * lin.scale; },
                       [lin](std::span<const double> th, std::span<const double>, std::size_t) {
                           return lin.shift + lin.slope * th[0];
                       });
}

bool RepeatedMeasurements::can_draw_aux_directly(const Parametrization& p) const { return !p.is_centered(); }

void RepeatedMeasurements::draw_aux_directly(ChainState& state, const Parametrization& p, RngStream& rng) const {
    const Linear lin = linear(p);
    // Same normal as update_latent, pushed through the inverse map.
    const double m = latent_mean(state.theta) - lin.shift - lin.slope * state.theta;
    state.aux.resize(1);
    state.aux[0] = (m + std::sqrt(1.0 / tau_) * rng.normal()) / lin.scale;
}

std::optional<DistSpec> RepeatedMeasurements::theta_law(const ChainState& state, const Parametrization& p) const {
    if (p.is_centered()) return Normal{state.x.at(0), params_.sigma_x};
    const Linear lin = linear(p);
    const double a = lin.scale * state.aux.at(0) + lin.shift;
    const double b = lin.slope;
    const double sy2 = params_.sigma_y * params_.sigma_y;
    const double sx2 = params_.sigma_x * params_.sigma_x;
    const double prec = n_ * b * b / sy2 + (1.0 - b) * (1.0 - b) / sx2;
    const double m = (b * n_ * (ybar_ - a) / sy2 + (1.0 - b) * a / sx2) / prec;
    return Normal{m, std::sqrt(1.0 / prec)};
}

double RepeatedMeasurements::log_theta_conditional(const ChainState& state, const Parametrization& p,
                                                   double theta) const {
    return log_density(*theta_law(state, p), theta);
}

double RepeatedMeasurements::log_joint(const ChainState& state, const Parametrization& p, double theta) const {
    double x = 0.0;
    double log_jac = 0.0;
    if (p.is_centered()) {
        x = state.x.at(0);
    } else {
        const Linear lin = linear(p);
        x = lin.scale * state.aux.at(0) + lin.shift + lin.slope * theta;
        log_jac = std::log(lin.scale);
    }
    double lp = detail::log_normal_pdf(x, theta, params_.sigma_x) + log_jac;
    for (double yi : y_) lp += detail::log_normal_pdf(yi, x, params_.sigma_y);
    return lp;
}

std::optional<DistSpec> RepeatedMeasurements::latent_coordinate_law(const ChainState& state, std::size_t i) const {
    if (i != 0) throw InvalidParameter("repeated_measurements: latent index out of range");
    return Normal{latent_mean(state.theta), std::sqrt(1.0 / tau_)};
}

std::optional<DistSpec> RepeatedMeasurements::posterior_oracle() const {
    const double sx2 = params_.sigma_x * params_.sigma_x;
    const double sy2 = params_.sigma_y * params_.sigma_y;
    return Normal{ybar_, std::sqrt(sx2 + sy2 / n_)};
}

std::optional<double> RepeatedMeasurements::log_marginal_posterior(double theta) const {
    return log_density(*posterior_oracle(), theta);
}

std::vector<std::pair<std::string, double>> RepeatedMeasurements::functionals(const ChainState& state) const {
    return {{"x", state.x.empty() ? 0.0 : state.x[0]}};
}

double RepeatedMeasurements::gamma_centered(double n, double sigma_x, double sigma_y) {
    const double a = sigma_y * sigma_y / n;
    return a / (sigma_x * sigma_x + a);
}

double RepeatedMeasurements::gamma_noncentered(double n, double sigma_x, double sigma_y) {
    const double a = sigma_y * sigma_y / n;
    return sigma_x * sigma_x / (sigma_x * sigma_x + a);
}

std::optional<std::vector<double>> RepeatedMeasurements::draw_latent_prior(double theta, RngStream& rng) const {
    return std::vector<double>{theta + params_.sigma_x * rng.normal()};
}

}  // namespace gibbslab
