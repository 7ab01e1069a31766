#include "gibbslab/models/discretized_sv.hpp"

#include <cmath>

#include "common.hpp"

namespace gibbslab {

double quadratic_variation(std::span<const double> path, double t1) {
    if (path.empty()) throw EmptyInput("quadratic_variation: empty path");
    if (!(t1 > 0.0)) throw InvalidParameter("quadratic_variation: t1 must be positive");
    double prev = 0.0, s = 0.0;
    for (double v : path) {
        s += (v - prev) * (v - prev);
        prev = v;
    }
    return s / t1;
}

DiscretizedSv::DiscretizedSv(Params params, double y) : params_(params), y_(y) {
    detail::require(params_.n >= 2, "discretized_sv: needs n >= 2");
    detail::require(detail::positive_finite(params_.t1), "discretized_sv: t1 must be positive");
    detail::require(detail::positive_finite(params_.theta_max), "discretized_sv: theta_max must be positive");
    detail::require(params_.block_repeats >= 0, "discretized_sv: block_repeats must be >= 0");
    detail::require(std::isfinite(y_), "discretized_sv: observation must be finite");
}

std::vector<Parametrization> DiscretizedSv::supported() const {
    return {Parametrization::centered(), Parametrization::noncentered()};
}

double DiscretizedSv::log_likelihood(double v) const { return -0.5 * std::log(v) - 0.5 * y_ * y_ / v; }

double DiscretizedSv::integrated_variance(std::span<const double> x) const {
    double v = 0.0;
    for (double xi : x) v += std::exp(xi);
    return v * delta();
}

BlockStats DiscretizedSv::update_latent(ChainState& state, const LatentUpdate& how, RngStream& rng) const {
    if (how.kind == LatentUpdate::Kind::Exact || how.kind == LatentUpdate::Kind::RandomWalkMH) {
        throw UnsupportedParametrization("discretized_sv: latent path only has MH updates");
    }
    const std::size_t n = params_.n;
    const double dt = delta();
    const double sd = state.theta * std::sqrt(dt);
    BlockStats stats;
    if (state.x.size() != n) {
        state.x.resize(n);
        double acc = 0.0;
        for (auto& v : state.x) v = (acc += sd * rng.normal());
    }
    double v = integrated_variance(state.x);
    double ll = log_likelihood(v);
    const int sweeps = how.kind == LatentUpdate::Kind::SingleSiteMH ? std::max(1, how.repeats) : 1;
    const double interior_sd = sd * std::sqrt(0.5);
    for (int s = 0; s < sweeps; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            const double prev = i == 0 ? 0.0 : state.x[i - 1];
            const double prop = i + 1 < n ? 0.5 * (prev + state.x[i + 1]) + interior_sd * rng.normal()
                                          : prev + sd * rng.normal();
            const double v_new = v + (std::exp(prop) - std::exp(state.x[i])) * dt;
            const double ll_new = log_likelihood(v_new);
            ++stats.proposals;
            if (v_new > 0.0 && std::log(rng.uniform_open()) < ll_new - ll) {
                state.x[i] = prop;
                v = v_new;
                ll = ll_new;
                ++stats.accepted;
            }
        }
        v = integrated_variance(state.x);
        ll = log_likelihood(v);
    }
    if (how.kind == LatentUpdate::Kind::Auto) {
        std::vector<double> fresh(n);
        for (int r = 0; r < params_.block_repeats; ++r) {
            double acc = 0.0;
            for (auto& f : fresh) f = (acc += sd * rng.normal());
            const double v_new = integrated_variance(fresh);
            const double ll_new = log_likelihood(v_new);
            ++stats.proposals;
            if (std::log(rng.uniform_open()) < ll_new - ll) {
                state.x.swap(fresh);
                ll = ll_new;
                ++stats.accepted;
            }
        }
    }
    return stats;
}

Reparametrization DiscretizedSv::reparametrization(const Parametrization& p) const {
    require_supported(p);
    if (p.is_centered()) return identity_reparam();
    const double root_dt = std::sqrt(delta());
    return Reparametrization(
        "brownian_increments",
        [root_dt](std::span<const double> aux, std::span<const double> theta, std::span<const double>,
                  std::vector<double>& x) {
            const double s = theta[0] * root_dt;
            x.resize(aux.size());
            double acc = 0.0;
            for (std::size_t i = 0; i < aux.size(); ++i) x[i] = s * (acc += aux[i]);
        },
        [root_dt](std::span<const double> x, std::span<const double> theta, std::span<const double>, RngStream&,
                  std::vector<double>& aux) {
            if (!(theta[0] > 0.0)) throw InvalidParameter("discretized_sv: theta must be positive");
            const double s = theta[0] * root_dt;
            aux.resize(x.size());
            double prev = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                aux[i] = (x[i] - prev) / s;
                prev = x[i];
            }
        });
}

std::optional<DistSpec> DiscretizedSv::theta_law(const ChainState& state, const Parametrization& p) const {
    require_supported(p);
    if (!p.is_centered()) return std::nullopt;
    double s = 0.0, prev = 0.0;
    for (double v : state.x) {
        s += (v - prev) * (v - prev);
        prev = v;
    }
    const double n = static_cast<double>(params_.n);
    return InverseRootGamma{0.5 * (n - 1.0), s / (2.0 * delta()), params_.theta_max};
}

double DiscretizedSv::log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const {
    require_supported(p);
    if (p.is_centered()) return log_density(*theta_law(state, p), theta);
    if (!(theta > 0.0 && theta <= params_.theta_max)) return -kInf;
    const double s = theta * std::sqrt(delta());
    double acc = 0.0, v = 0.0;
    for (double a : state.aux) v += std::exp(s * (acc += a));
    return log_likelihood(v * delta());
}

double DiscretizedSv::log_joint(const ChainState& state, const Parametrization& p, double theta) const {
    require_supported(p);
    if (!(theta > 0.0 && theta <= params_.theta_max)) return -kInf;
    const double sd = theta * std::sqrt(delta());
    double lp = 0.0;
    if (p.is_centered()) {
        double prev = 0.0;
        for (double v : state.x) {
            lp += detail::log_normal_pdf(v, prev, sd);
            prev = v;
        }
        return lp + log_likelihood(integrated_variance(state.x));
    }
    double acc = 0.0, v = 0.0;
    for (double a : state.aux) {
        lp += detail::log_normal_pdf(a, 0.0, 1.0);
        v += std::exp(sd * (acc += a));
    }
    return lp + log_likelihood(v * delta());
}

std::vector<std::pair<std::string, double>> DiscretizedSv::functionals(const ChainState& state) const {
    return {{"qv", quadratic_variation(state.x, params_.t1)}};
}

std::optional<std::vector<double>> DiscretizedSv::draw_latent_prior(double theta, RngStream& rng) const {
    const double s = theta * std::sqrt(delta());
    std::vector<double> x(params_.n);
    double acc = 0.0;
    for (auto& v : x) v = s * (acc += rng.normal());
    return x;
}

}  // namespace gibbslab
