#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gibbslab/numerics/distributions.hpp"
#include "gibbslab/numerics/rng.hpp"

namespace gibbslab {

// The map X = h(X*, Theta, Y) together with a draw from X* | X, Theta.
// For one-to-one maps the draw is the deterministic inverse.
class Reparametrization {
public:
    using Forward = std::function<void(std::span<const double> aux, std::span<const double> theta,
                                       std::span<const double> y, std::vector<double>& x)>;
    using Inverse = std::function<void(std::span<const double> x, std::span<const double> theta,
                                       std::span<const double> y, RngStream& rng, std::vector<double>& aux)>;

    Reparametrization(std::string name, Forward forward, Inverse inverse, bool many_to_one = false);

    std::vector<double> forward(std::span<const double> aux, std::span<const double> theta,
                                std::span<const double> y = {}) const;
    std::vector<double> conditional_inverse(std::span<const double> x, std::span<const double> theta,
                                            std::span<const double> y, RngStream& rng) const;
    void forward_into(std::span<const double> aux, std::span<const double> theta, std::span<const double> y,
                      std::vector<double>& x) const;
    void inverse_into(std::span<const double> x, std::span<const double> theta, std::span<const double> y,
                      RngStream& rng, std::vector<double>& aux) const;

    const std::string& name() const { return name_; }
    bool many_to_one() const { return many_to_one_; }

private:
    std::string name_;
    Forward forward_;
    Inverse inverse_;
    bool many_to_one_;
};

Reparametrization identity_reparam();
// x = aux + theta[0]
Reparametrization location_ncp();
// x = theta[0] * aux, theta[0] > 0
Reparametrization scale_ncp();

using QuantileFamily = std::function<DistSpec(std::span<const double> theta)>;
enum class QuantileSide { Lower, Upper };
// Lower: x = F^{-1}(aux). Upper: x = F^{-1}(1 - aux), which is the orientation of the
// stick-breaking map x = 1 - aux^{1/theta}.
Reparametrization inverse_cdf_ncp(QuantileFamily family, QuantileSide side = QuantileSide::Lower);

// Transition law of X_i given X_{i-1}; previous is empty for the first coordinate.
using TransitionFamily = std::function<DistSpec(std::span<const double> theta, std::optional<double> previous)>;
Reparametrization markov_recursive_ncp(TransitionFamily transition, std::size_t n);

// x = sigma * L aux + mu 1 with corr = L L^T; theta = (mu, sigma).
Reparametrization gaussian_field_ncp(const Eigen::MatrixXd& corr);
// Correlation indexed by theta[2]; theta = (mu, sigma, alpha).
Reparametrization gaussian_field_ncp(std::function<Eigen::MatrixXd(double alpha)> corr_family);

// Coefficient of the linear map, evaluated per coordinate.
using LinearCoefficient =
    std::function<double(std::span<const double> theta, std::span<const double> y, std::size_t i)>;
// x_i = sqrt(v_i) * aux_i + m_i
Reparametrization partial_ncp(LinearCoefficient v, LinearCoefficient m);

// forward = outer.forward(inner.forward(aux)); the inverse runs in reverse order.
Reparametrization compose_reparam(const Reparametrization& outer, const Reparametrization& inner);

}  // namespace gibbslab
