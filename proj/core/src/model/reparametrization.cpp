#include "gibbslab/model/reparametrization.hpp"

#include <cmath>
#include <memory>

#include "gibbslab/errors.hpp"

namespace gibbslab {

Reparametrization::Reparametrization(std::string name, Forward forward, Inverse inverse, bool many_to_one)
    : name_(std::move(name)), forward_(std::move(forward)), inverse_(std::move(inverse)), many_to_one_(many_to_one) {}

std::vector<double> Reparametrization::forward(std::span<const double> aux, std::span<const double> theta,
                                               std::span<const double> y) const {
    std::vector<double> x;
    forward_(aux, theta, y, x);
    return x;
}

std::vector<double> Reparametrization::conditional_inverse(std::span<const double> x, std::span<const double> theta,
                                                           std::span<const double> y, RngStream& rng) const {
    std::vector<double> aux;
    inverse_(x, theta, y, rng, aux);
    return aux;
}

void Reparametrization::forward_into(std::span<const double> aux, std::span<const double> theta,
                                     std::span<const double> y, std::vector<double>& x) const {
    forward_(aux, theta, y, x);
}

void Reparametrization::inverse_into(std::span<const double> x, std::span<const double> theta,
                                     std::span<const double> y, RngStream& rng, std::vector<double>& aux) const {
    inverse_(x, theta, y, rng, aux);
}

namespace {

double theta_at(std::span<const double> theta, std::size_t i, const char* who) {
    if (theta.size() <= i) throw InvalidParameter(std::string(who) + ": theta has too few components");
    return theta[i];
}

}  // namespace

Reparametrization identity_reparam() {
    return Reparametrization(
        "identity",
        [](std::span<const double> aux, std::span<const double>, std::span<const double>, std::vector<double>& x) {
            x.assign(aux.begin(), aux.end());
        },
        [](std::span<const double> x, std::span<const double>, std::span<const double>, RngStream&,
           std::vector<double>& aux) { aux.assign(x.begin(), x.end()); });
}

Reparametrization location_ncp() {
    return Reparametrization(
        "location",
        [](std::span<const double> aux, std::span<const double> theta, std::span<const double>,
           std::vector<double>& x) {
            const double t = theta_at(theta, 0, "location_ncp");
            x.resize(aux.size());
            for (std::size_t i = 0; i < aux.size(); ++i) x[i] = aux[i] + t;
        },
        [](std::span<const double> x, std::span<const double> theta, std::span<const double>, RngStream&,
           std::vector<double>& aux) {
            const double t = theta_at(theta, 0, "location_ncp");
            aux.resize(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) aux[i] = x[i] - t;
        });
}

Reparametrization scale_ncp() {
    auto scale = [](std::span<const double> theta) {
        const double t = theta_at(theta, 0, "scale_ncp");
        if (!(t > 0.0)) throw InvalidParameter("scale_ncp: scale must be positive");
        return t;
    };
    return Reparametrization(
        "scale",
        [scale](std::span<const double> aux, std::span<const double> theta, std::span<const double>,
                std::vector<double>& x) {
            const double t = scale(theta);
            x.resize(aux.size());
            for (std::size_t i = 0; i < aux.size(); ++i) x[i] = t * aux[i];
        },
        [scale](std::span<const double> x, std::span<const double> theta, std::span<const double>, RngStream&,
                std::vector<double>& aux) {
            const double t = scale(theta);
            aux.resize(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) aux[i] = x[i] / t;
        });
}

Reparametrization inverse_cdf_ncp(QuantileFamily family, QuantileSide side) {
    auto law_of = [family](std::span<const double> theta) {
        DistSpec law = family(theta);
        if (!has_inverse_cdf(law)) throw UnsupportedSpec("inverse_cdf_ncp: family has no quantile: " + describe(law));
        return law;
    };
    const bool upper = side == QuantileSide::Upper;
    return Reparametrization(
        upper ? "inverse_cdf_upper" : "inverse_cdf",
        [law_of, upper](std::span<const double> aux, std::span<const double> theta, std::span<const double>,
                        std::vector<double>& x) {
            const DistSpec law = law_of(theta);
            x.resize(aux.size());
            for (std::size_t i = 0; i < aux.size(); ++i) x[i] = inverse_cdf(law, upper ? 1.0 - aux[i] : aux[i]);
        },
        [law_of, upper](std::span<const double> x, std::span<const double> theta, std::span<const double>,
                        RngStream&, std::vector<double>& aux) {
            const DistSpec law = law_of(theta);
            aux.resize(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double f = cdf(law, x[i]);
                aux[i] = upper ? 1.0 - f : f;
            }
        });
}

Reparametrization markov_recursive_ncp(TransitionFamily transition, std::size_t n) {
    auto law_of = [transition](std::span<const double> theta, std::optional<double> prev) {
        DistSpec law = transition(theta, prev);
        if (!has_inverse_cdf(law)) {
            throw UnsupportedSpec("markov_recursive_ncp: transition has no quantile: " + describe(law));
        }
        return law;
    };
    return Reparametrization(
        "markov_recursive",
        [law_of, n](std::span<const double> aux, std::span<const double> theta, std::span<const double>,
                    std::vector<double>& x) {
            if (aux.size() != n) throw LengthMismatch("markov_recursive_ncp: wrong chain length");
            x.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const auto prev = i == 0 ? std::nullopt : std::optional<double>(x[i - 1]);
                x[i] = inverse_cdf(law_of(theta, prev), aux[i]);
            }
        },
        [law_of, n](std::span<const double> x, std::span<const double> theta, std::span<const double>, RngStream&,
                    std::vector<double>& aux) {
            if (x.size() != n) throw LengthMismatch("markov_recursive_ncp: wrong chain length");
            aux.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const auto prev = i == 0 ? std::nullopt : std::optional<double>(x[i - 1]);
                aux[i] = cdf(law_of(theta, prev), x[i]);
            }
        });
}

namespace {

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& corr) {
    if (corr.rows() != corr.cols() || corr.rows() == 0) throw NotPositiveDefinite("correlation must be square");
    if (!corr.isApprox(corr.transpose(), 1e-12)) throw NotPositiveDefinite("correlation must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(corr);
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite("correlation matrix is not positive-definite");
    return llt.matrixL();
}

Reparametrization field_from(std::function<Eigen::MatrixXd(std::span<const double>)> factor) {
    auto mu_sigma = [](std::span<const double> theta) {
        const double mu = theta_at(theta, 0, "gaussian_field_ncp");
        const double sigma = theta_at(theta, 1, "gaussian_field_ncp");
        if (!(sigma > 0.0)) throw InvalidParameter("gaussian_field_ncp: sigma must be positive");
        return std::pair{mu, sigma};
    };
    return Reparametrization(
        "gaussian_field",
        [factor, mu_sigma](std::span<const double> aux, std::span<const double> theta, std::span<const double>,
                           std::vector<double>& x) {
            const Eigen::MatrixXd l = factor(theta);
            if (static_cast<std::size_t>(l.rows()) != aux.size()) throw LengthMismatch("gaussian_field_ncp: size");
            const auto [mu, sigma] = mu_sigma(theta);
            const Eigen::Map<const Eigen::VectorXd> a(aux.data(), static_cast<Eigen::Index>(aux.size()));
            Eigen::VectorXd v = l.triangularView<Eigen::Lower>() * a;
            v *= sigma;
            x.resize(aux.size());
            for (std::size_t i = 0; i < aux.size(); ++i) x[i] = v(static_cast<Eigen::Index>(i)) + mu;
        },
        [factor, mu_sigma](std::span<const double> x, std::span<const double> theta, std::span<const double>,
                           RngStream&, std::vector<double>& aux) {
            const Eigen::MatrixXd l = factor(theta);
            if (static_cast<std::size_t>(l.rows()) != x.size()) throw LengthMismatch("gaussian_field_ncp: size");
            const auto [mu, sigma] = mu_sigma(theta);
            Eigen::VectorXd r(static_cast<Eigen::Index>(x.size()));
            for (std::size_t i = 0; i < x.size(); ++i) r(static_cast<Eigen::Index>(i)) = (x[i] - mu) / sigma;
            l.triangularView<Eigen::Lower>().solveInPlace(r);
            aux.assign(r.data(), r.data() + r.size());
        });
}

}  // namespace

Reparametrization gaussian_field_ncp(const Eigen::MatrixXd& corr) {
    auto l = std::make_shared<const Eigen::MatrixXd>(cholesky_lower(corr));
    return field_from([l](std::span<const double>) { return *l; });
}

Reparametrization gaussian_field_ncp(std::function<Eigen::MatrixXd(double alpha)> corr_family) {
    return field_from([corr_family](std::span<const double> theta) {
        return cholesky_lower(corr_family(theta_at(theta, 2, "gaussian_field_ncp")));
    });
}

Reparametrization partial_ncp(LinearCoefficient v, LinearCoefficient m) {
    auto sd_at = [v](std::span<const double> theta, std::span<const double> y, std::size_t i) {
        const double var = v(theta, y, i);
        if (!(var > 0.0) || !std::isfinite(var)) throw InvalidParameter("partial_ncp: variance must be positive");
        return std::sqrt(var);
    };
    return Reparametrization(
        "partial",
        [sd_at, m](std::span<const double> aux, std::span<const double> theta, std::span<const double> y,
                   std::vector<double>& x) {
            x.resize(aux.size());
            for (std::size_t i = 0; i < aux.size(); ++i) x[i] = sd_at(theta, y, i) * aux[i] + m(theta, y, i);
        },
        [sd_at, m](std::span<const double> x, std::span<const double> theta, std::span<const double> y, RngStream&,
                   std::vector<double>& aux) {
            aux.resize(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) aux[i] = (x[i] - m(theta, y, i)) / sd_at(theta, y, i);
        });
}

Reparametrization compose_reparam(const Reparametrization& outer, const Reparametrization& inner) {
    return Reparametrization(
        outer.name() + "." + inner.name(),
        [outer, inner](std::span<const double> aux, std::span<const double> theta, std::span<const double> y,
                       std::vector<double>& x) {
            std::vector<double> mid;
            inner.forward_into(aux, theta, y, mid);
            outer.forward_into(mid, theta, y, x);
        },
        [outer, inner](std::span<const double> x, std::span<const double> theta, std::span<const double> y,
                       RngStream& rng, std::vector<double>& aux) {
            std::vector<double> mid;
            outer.inverse_into(x, theta, y, rng, mid);
            inner.inverse_into(mid, theta, y, rng, aux);
        },
        outer.many_to_one() || inner.many_to_one());
}

}  // namespace gibbslab
