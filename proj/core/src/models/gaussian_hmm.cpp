#include "gibbslab/models/gaussian_hmm.hpp"

#include <cmath>

#include "common.hpp"

namespace gibbslab {

GaussianHmm::GaussianHmm(Params params, std::vector<double> y) : GaussianHmm(params, y, y.size(), true) {}

GaussianHmm GaussianHmm::without_data(Params params, std::size_t n) { return GaussianHmm(params, {}, n, false); }

GaussianHmm::GaussianHmm(Params params, std::vector<double> y, std::size_t n, bool has_data)
    : params_(params), y_(std::move(y)), n_(n), has_data_(has_data) {
    detail::require(std::fabs(params_.rho) < 1.0, "gaussian_hmm: need |rho| < 1");
    detail::require(detail::positive_finite(params_.sigma_x) && detail::positive_finite(params_.sigma_y),
                    "gaussian_hmm: sigma_x and sigma_y must be positive");
    detail::require(n_ >= 1, "gaussian_hmm: needs n >= 1");
    detail::require_finite_data(y_, name());

    row_sum_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = prior_diag(i);
        if (i > 0) s += prior_off();
        if (i + 1 < n_) s += prior_off();
        row_sum_[i] = s;
    }
    one_q_one_ = detail::sum(row_sum_);

    const double noise = has_data_ ? 1.0 / (params_.sigma_y * params_.sigma_y) : 0.0;
    l_diag_.resize(n_);
    l_sub_.assign(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double d = prior_diag(i) + noise;
        if (i > 0) {
            l_sub_[i] = prior_off() / l_diag_[i - 1];
            d -= l_sub_[i] * l_sub_[i];
        }
        if (!(d > 0.0)) throw NotPositiveDefinite("gaussian_hmm: precision factorization failed");
        l_diag_[i] = std::sqrt(d);
    }
}

std::vector<Parametrization> GaussianHmm::supported() const {
    return {Parametrization::centered(), Parametrization::noncentered()};
}

double GaussianHmm::default_theta0() const { return has_data_ ? detail::mean_of(y_) : 0.0; }

double GaussianHmm::prior_diag(std::size_t i) const {
    const double sx2 = params_.sigma_x * params_.sigma_x;
    if (n_ == 1) return 1.0 / sx2;
    const double r2 = params_.rho * params_.rho;
    const double c = 1.0 / ((1.0 - r2) * sx2);
    return (i == 0 || i + 1 == n_) ? c : (1.0 + r2) * c;
}

double GaussianHmm::prior_off() const {
    const double sx2 = params_.sigma_x * params_.sigma_x;
    return -params_.rho / ((1.0 - params_.rho * params_.rho) * sx2);
}

void GaussianHmm::solve(std::vector<double>& b) const {
    for (std::size_t i = 0; i < n_; ++i) {
        if (i > 0) b[i] -= l_sub_[i] * b[i - 1];
        b[i] /= l_diag_[i];
    }
    for (std::size_t k = n_; k-- > 0;) {
        if (k + 1 < n_) b[k] -= l_sub_[k + 1] * b[k + 1];
        b[k] /= l_diag_[k];
    }
}

BlockStats GaussianHmm::update_latent(ChainState& state, const LatentUpdate&, RngStream& rng) const {
    // Mean solves Q mu = theta Qp 1 + y / sigma_y^2; noise is L^{-T} z.
    std::vector<double> mu(n_);
    const double inv_sy2 = 1.0 / (params_.sigma_y * params_.sigma_y);
    for (std::size_t i = 0; i < n_; ++i) mu[i] = state.theta * row_sum_[i] + (has_data_ ? y_[i] * inv_sy2 : 0.0);
    solve(mu);
    std::vector<double> z(n_);
    for (auto& v : z) v = rng.normal();
    for (std::size_t k = n_; k-- > 0;) {
        if (k + 1 < n_) z[k] -= l_sub_[k + 1] * z[k + 1];
        z[k] /= l_diag_[k];
    }
    state.x.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) state.x[i] = mu[i] + z[i];
    return BlockStats::exact();
}

Reparametrization GaussianHmm::reparametrization(const Parametrization& p) const {
    require_supported(p);
    return p.is_centered() ? identity_reparam() : location_ncp();
}

std::optional<DistSpec> GaussianHmm::theta_law(const ChainState& state, const Parametrization& p) const {
    require_supported(p);
    if (p.is_centered()) {
        double lin = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            double qx = prior_diag(i) * state.x[i];
            if (i > 0) qx += prior_off() * state.x[i - 1];
            if (i + 1 < n_) qx += prior_off() * state.x[i + 1];
            lin += qx;
        }
        const double prec = 1.0 + one_q_one_;
        return Normal{lin / prec, std::sqrt(1.0 / prec)};
    }
    if (!has_data_) return Normal{0.0, 1.0};
    const double inv_sy2 = 1.0 / (params_.sigma_y * params_.sigma_y);
    double lin = 0.0;
    for (std::size_t i = 0; i < n_; ++i) lin += (y_[i] - state.aux[i]) * inv_sy2;
    const double prec = 1.0 + static_cast<double>(n_) * inv_sy2;
    return Normal{lin / prec, std::sqrt(1.0 / prec)};
}

double GaussianHmm::log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const {
    return log_density(*theta_law(state, p), theta);
}

double GaussianHmm::log_joint(const ChainState& state, const Parametrization& p, double theta) const {
    require_supported(p);
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = p.is_centered() ? state.x[i] : state.aux[i] + theta;
    const double rho = params_.rho;
    const double innov = params_.sigma_x * std::sqrt(1.0 - rho * rho);
    double lp = detail::log_normal_pdf(theta, 0.0, 1.0);
    lp += detail::log_normal_pdf(x[0] - theta, 0.0, params_.sigma_x);
    for (std::size_t i = 1; i < n_; ++i) lp += detail::log_normal_pdf(x[i] - theta, rho * (x[i - 1] - theta), innov);
    if (has_data_) {
        for (std::size_t i = 0; i < n_; ++i) lp += detail::log_normal_pdf(y_[i], x[i], params_.sigma_y);
    }
    return lp;
}

std::optional<DistSpec> GaussianHmm::latent_coordinate_law(const ChainState& state, std::size_t i) const {
    if (i >= n_) throw InvalidParameter("gaussian_hmm: latent index out of range");
    const double inv_sy2 = has_data_ ? 1.0 / (params_.sigma_y * params_.sigma_y) : 0.0;
    const double prec = prior_diag(i) + inv_sy2;
    double b = state.theta * row_sum_[i] + (has_data_ ? y_[i] * inv_sy2 : 0.0);
    if (i > 0) b -= prior_off() * state.x[i - 1];
    if (i + 1 < n_) b -= prior_off() * state.x[i + 1];
    return Normal{b / prec, std::sqrt(1.0 / prec)};
}

std::optional<DistSpec> GaussianHmm::posterior_oracle() const {
    if (!has_data_) return Normal{0.0, 1.0};
    // (Sigma_p + s^2 I)^{-1} = I / s^2 - Q^{-1} / s^4 with Q = Qp + I / s^2.
    const double s2 = params_.sigma_y * params_.sigma_y;
    std::vector<double> q1(n_, 1.0);
    std::vector<double> qy(y_);
    solve(q1);
    solve(qy);
    const double n = static_cast<double>(n_);
    const double one_m_one = n / s2 - detail::sum(q1) / (s2 * s2);
    const double one_m_y = detail::sum(y_) / s2 - detail::sum(qy) / (s2 * s2);
    const double prec = 1.0 + one_m_one;
    return Normal{one_m_y / prec, std::sqrt(1.0 / prec)};
}

std::optional<double> GaussianHmm::log_marginal_posterior(double theta) const {
    return log_density(*posterior_oracle(), theta);
}

std::vector<std::pair<std::string, double>> GaussianHmm::functionals(const ChainState& state) const {
    return {{"xbar", detail::mean_of(state.x)}};
}

std::optional<std::vector<double>> GaussianHmm::draw_latent_prior(double theta, RngStream& rng) const {
    // Stationary AR(1) around theta with marginal sd sigma_x.
    const double s = params_.sigma_x, r = params_.rho;
    const double innov = s * std::sqrt(1.0 - r * r);
    std::vector<double> x(n_);
    double dev = s * rng.normal();
    for (std::size_t i = 0; i < n_; ++i) {
        if (i > 0) dev = r * dev + innov * rng.normal();
        x[i] = theta + dev;
    }
    return x;
}

}  // namespace gibbslab
