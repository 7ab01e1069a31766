#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gibbslab/model/model.hpp"

namespace gibbslab {

// Proper CAR precision on an r x c lattice with first-order neighbours:
// Q = 1.05 D - W, D the neighbour counts and W the adjacency matrix.
Eigen::SparseMatrix<double> car_lattice_precision(std::size_t rows, std::size_t cols, double dominance = 1.05);
// Sites k N / n for k = 0..n-1, with N = rows * cols.
std::vector<std::size_t> spread_sites(std::size_t total, std::size_t observed);

// X ~ N(Theta 1, Q^{-1}) with a flat prior on Theta; y records X exactly at the
// observed sites. The latent state is X at the unobserved sites, in increasing site order.
//
// Parametrizations:
//   centered     impute the unobserved sites, then Theta | X
//   noncentered  X~ = X - Theta 1 at every site; degenerate since Theta = y_i - X~_i
//   data:hybrid  observed sites kept centered, unobserved ones X' = X* + Theta
class GmrfHybrid final : public Model {
public:
    GmrfHybrid(Eigen::SparseMatrix<double> q, std::vector<std::size_t> observed, std::vector<double> y);
    // Lattice convenience: n observed sites spread as spread_sites(rows * cols, n).
    static GmrfHybrid lattice(std::size_t rows, std::size_t cols, std::vector<double> y);

    std::string name() const override { return "gmrf_hybrid"; }
    std::size_t size() const override { return unobserved_.size(); }
    std::vector<Parametrization> supported() const override;
    std::span<const double> data() const override { return y_; }
    double default_theta0() const override;

    BlockStats update_latent(ChainState& state, const LatentUpdate& how, RngStream& rng) const override;
    Reparametrization reparametrization(const Parametrization& p) const override;
    bool can_draw_aux_directly(const Parametrization& p) const override;
    void draw_aux_directly(ChainState& state, const Parametrization& p, RngStream& rng) const override;
    double log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<DistSpec> theta_law(const ChainState& state, const Parametrization& p) const override;
    double log_joint(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<DistSpec> latent_coordinate_law(const ChainState& state, std::size_t i) const override;
    std::optional<DistSpec> posterior_oracle() const override;
    std::optional<double> log_marginal_posterior(double theta) const override;

    const Eigen::SparseMatrix<double>& precision() const { return q_; }
    const std::vector<std::size_t>& observed_sites() const { return observed_; }
    const std::vector<std::size_t>& unobserved_sites() const { return unobserved_; }

private:
    bool is_hybrid(const Parametrization& p) const;
    // Draw of X_u - Theta given Y and Theta.
    Eigen::VectorXd draw_offsets(double theta, RngStream& rng) const;
    Eigen::VectorXd assemble(std::span<const double> latent) const;

    Eigen::SparseMatrix<double> q_;
    std::vector<std::size_t> observed_;
    std::vector<std::size_t> unobserved_;
    std::vector<double> y_;
    Eigen::SparseMatrix<double> q_uu_;
    Eigen::SparseMatrix<double> q_uo_;
    // shared so the model stays copyable; the factorization is immutable after construction
    std::shared_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> chol_uu_;
    double ones_q_ones_ = 0.0;     // 1' Q 1
    double ones_qoo_ones_ = 0.0;   // 1' Q_oo 1
    double ones_qoo_y_ = 0.0;      // 1' Q_oo y
    Eigen::RowVectorXd ones_qou_;  // 1' Q_ou
    Eigen::VectorXd ones_q_;       // Q 1
    double oracle_precision_ = 0.0;
    double oracle_mean_ = 0.0;
};

}  // namespace gibbslab
