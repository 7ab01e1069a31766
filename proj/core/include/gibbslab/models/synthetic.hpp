#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Sparse>

#include "gibbslab/models/classification.hpp"
#include "gibbslab/models/discretized_sv.hpp"
#include "gibbslab/models/gaussian_hmm.hpp"
#include "gibbslab/models/heavy_tail_hmm.hpp"
#include "gibbslab/numerics/rng.hpp"

// Forward simulation of each model's data given a generating Theta.
namespace gibbslab::synthetic {

std::vector<double> repeated_measurements(double theta, double sigma_x, double sigma_y, std::size_t n, RngStream& rng);
std::vector<double> gaussian_hmm(double theta, const GaussianHmm::Params& p, std::size_t n, RngStream& rng);
// Y_i = Theta U_i + Z_i.
std::vector<double> nonregular_scale(double theta, std::size_t n, RngStream& rng);
// Y_i = X_i - u_i, X_i ~ N(Theta, sigma_x^2), u_i ~ Exp(lambda).
std::vector<double> stochastic_frontier(double theta, double lambda, double sigma_x, std::size_t n, RngStream& rng);
// floor of N(Theta, sigma_x^2) draws.
std::vector<double> rounded_data(double theta, double sigma_x, std::size_t n, RngStream& rng);
std::vector<double> classification(double theta, ClassificationMixture::Scenario scenario, std::size_t n,
                                   RngStream& rng);
std::vector<double> heavy_tail_hmm(double theta, const HeavyTailHmm::Params& p, std::size_t n, RngStream& rng);
double discretized_sv(double theta, const DiscretizedSv::Params& p, RngStream& rng);
// Endpoint Theta B_{t1} of a scaled Brownian motion.
double observed_diffusion(double theta, double t1, RngStream& rng);
// Count of a rate-Theta Poisson process on [0, 1].
std::size_t latent_poisson(double theta, RngStream& rng);
// X ~ N(Theta 1, Q^{-1}) restricted to the observed sites.
std::vector<double> gmrf(double theta, const Eigen::SparseMatrix<double>& q, const std::vector<std::size_t>& observed,
                         RngStream& rng);

}  // namespace gibbslab::synthetic
