#include "gibbslab/models/gmrf_hybrid.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace gibbslab {

Eigen::SparseMatrix<double> car_lattice_precision(std::size_t rows, std::size_t cols, double dominance) {
    detail::require(rows >= 1 && cols >= 1 && rows * cols >= 2, "car_lattice_precision: lattice needs >= 2 sites");
    detail::require(dominance > 1.0 && std::isfinite(dominance), "car_lattice_precision: dominance must exceed 1");
    const std::size_t total = rows * cols;
    std::vector<Eigen::Triplet<double>> t;
    auto id = [cols](std::size_t r, std::size_t c) { return static_cast<int>(r * cols + c); };
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            int degree = 0;
            auto link = [&](std::size_t r2, std::size_t c2) {
                t.emplace_back(id(r, c), id(r2, c2), -1.0);
                ++degree;
            };
            if (r > 0) link(r - 1, c);
            if (r + 1 < rows) link(r + 1, c);
            if (c > 0) link(r, c - 1);
            if (c + 1 < cols) link(r, c + 1);
            t.emplace_back(id(r, c), id(r, c), dominance * degree);
        }
    }
    Eigen::SparseMatrix<double> q(static_cast<int>(total), static_cast<int>(total));
    q.setFromTriplets(t.begin(), t.end());
    return q;
}

std::vector<std::size_t> spread_sites(std::size_t total, std::size_t observed) {
    detail::require(observed >= 1 && observed < total, "spread_sites: need 1 <= observed < total");
    std::vector<std::size_t> s(observed);
    for (std::size_t k = 0; k < observed; ++k) s[k] = k * total / observed;
    return s;
}

namespace {

Eigen::SparseMatrix<double> select(const Eigen::SparseMatrix<double>& q, const std::vector<std::size_t>& rows,
                                   const std::vector<std::size_t>& cols) {
    std::vector<int> col_pos(static_cast<std::size_t>(q.cols()), -1);
    for (std::size_t j = 0; j < cols.size(); ++j) col_pos[cols[j]] = static_cast<int>(j);
    std::vector<int> row_pos(static_cast<std::size_t>(q.rows()), -1);
    for (std::size_t i = 0; i < rows.size(); ++i) row_pos[rows[i]] = static_cast<int>(i);
    std::vector<Eigen::Triplet<double>> t;
    for (int k = 0; k < q.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(q, k); it; ++it) {
            const int r = row_pos[static_cast<std::size_t>(it.row())];
            const int c = col_pos[static_cast<std::size_t>(it.col())];
            if (r >= 0 && c >= 0) t.emplace_back(r, c, it.value());
        }
    }
    Eigen::SparseMatrix<double> out(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    out.setFromTriplets(t.begin(), t.end());
    return out;
}

}  // namespace

GmrfHybrid::GmrfHybrid(Eigen::SparseMatrix<double> q, std::vector<std::size_t> observed, std::vector<double> y)
    : q_(std::move(q)), observed_(std::move(observed)), y_(std::move(y)) {
    const auto total = static_cast<std::size_t>(q_.rows());
    detail::require(q_.rows() == q_.cols(), "gmrf_hybrid: precision must be square");
    if (observed_.empty()) throw EmptyInput("gmrf_hybrid: needs at least one observed site");
    if (observed_.size() != y_.size()) throw LengthMismatch("gmrf_hybrid: one observation per observed site");
    detail::require_finite_data(y_, "gmrf_hybrid");
    std::vector<bool> seen(total, false);
    for (std::size_t s : observed_) {
        detail::require(s < total, "gmrf_hybrid: observed site out of range");
        detail::require(!seen[s], "gmrf_hybrid: observed sites must be distinct");
        seen[s] = true;
    }
    for (std::size_t s = 0; s < total; ++s)
        if (!seen[s]) unobserved_.push_back(s);
    detail::require(!unobserved_.empty(), "gmrf_hybrid: needs at least one unobserved site");

    const Eigen::SparseMatrix<double> asym = q_ - Eigen::SparseMatrix<double>(q_.transpose());
    if (asym.norm() > 1e-12 * std::max(1.0, q_.norm())) throw NotPositiveDefinite("gmrf_hybrid: precision not symmetric");
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> full(q_);
    if (full.info() != Eigen::Success) throw NotPositiveDefinite("gmrf_hybrid: precision not positive definite");

    q_uu_ = select(q_, unobserved_, unobserved_);
    q_uo_ = select(q_, unobserved_, observed_);
    const Eigen::SparseMatrix<double> q_oo = select(q_, observed_, observed_);
    chol_uu_ = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>(q_uu_);
    if (chol_uu_->info() != Eigen::Success) throw NotPositiveDefinite("gmrf_hybrid: Q_uu not positive definite");

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<int>(total));
    ones_q_ = q_ * ones;
    ones_q_ones_ = ones.dot(ones_q_);
    const Eigen::Map<const Eigen::VectorXd> yv(y_.data(), static_cast<int>(y_.size()));
    const Eigen::VectorXd ones_o = Eigen::VectorXd::Ones(static_cast<int>(observed_.size()));
    const Eigen::VectorXd qoo_ones = q_oo * ones_o;
    ones_qoo_ones_ = ones_o.dot(qoo_ones);
    ones_qoo_y_ = qoo_ones.dot(yv);
    ones_qou_ = (q_uo_ * ones_o).transpose();
    if (!(ones_qoo_ones_ > 0.0)) throw NotPositiveDefinite("gmrf_hybrid: 1' Q_oo 1 must be positive");

    // Theta | Y through the Schur complement S = Q_oo - Q_ou Q_uu^{-1} Q_uo.
    const Eigen::MatrixXd solved = chol_uu_->solve(Eigen::MatrixXd(q_uo_));
    const Eigen::MatrixXd schur = Eigen::MatrixXd(q_oo) - Eigen::MatrixXd(q_uo_).transpose() * solved;
    const Eigen::VectorXd s_ones = schur * ones_o;
    oracle_precision_ = ones_o.dot(s_ones);
    if (!(oracle_precision_ > 0.0)) throw NotPositiveDefinite("gmrf_hybrid: marginal precision of Theta not positive");
    oracle_mean_ = s_ones.dot(yv) / oracle_precision_;
}

GmrfHybrid GmrfHybrid::lattice(std::size_t rows, std::size_t cols, std::vector<double> y) {
    const std::size_t total = rows * cols;
    auto sites = spread_sites(total, y.size());
    return GmrfHybrid(car_lattice_precision(rows, cols), std::move(sites), std::move(y));
}

std::vector<Parametrization> GmrfHybrid::supported() const {
    return {Parametrization::centered(), Parametrization::noncentered(), Parametrization::data_based("hybrid")};
}

bool GmrfHybrid::is_hybrid(const Parametrization& p) const { return p.kind == Parametrization::Kind::DataBased; }

double GmrfHybrid::default_theta0() const { return detail::mean_of(y_); }

Eigen::VectorXd GmrfHybrid::draw_offsets(double theta, RngStream& rng) const {
    // X_u - Theta | Y ~ N(-Q_uu^{-1} Q_uo (y - Theta), Q_uu^{-1}).
    Eigen::VectorXd r(static_cast<int>(y_.size()));
    for (std::size_t k = 0; k < y_.size(); ++k) r[static_cast<int>(k)] = y_[k] - theta;
    Eigen::VectorXd mean = -chol_uu_->solve(q_uo_ * r);
    Eigen::VectorXd z(static_cast<int>(unobserved_.size()));
    for (int k = 0; k < z.size(); ++k) z[k] = rng.normal();
    // P Q_uu P' = L L', so P' L^{-T} z has covariance Q_uu^{-1}.
    const Eigen::VectorXd v = chol_uu_->matrixU().solve(z);
    return mean + chol_uu_->permutationPinv() * v;
}

Eigen::VectorXd GmrfHybrid::assemble(std::span<const double> latent) const {
    Eigen::VectorXd full(q_.rows());
    for (std::size_t k = 0; k < observed_.size(); ++k) full[static_cast<int>(observed_[k])] = y_[k];
    for (std::size_t k = 0; k < unobserved_.size(); ++k) full[static_cast<int>(unobserved_[k])] = latent[k];
    return full;
}

BlockStats GmrfHybrid::update_latent(ChainState& state, const LatentUpdate& how, RngStream& rng) const {
    if (how.kind == LatentUpdate::Kind::RandomWalkMH || how.kind == LatentUpdate::Kind::SingleSiteMH) {
        throw UnsupportedParametrization("gmrf_hybrid: unobserved sites are drawn exactly");
    }
    const Eigen::VectorXd off = draw_offsets(state.theta, rng);
    state.x.resize(unobserved_.size());
    for (std::size_t k = 0; k < state.x.size(); ++k) state.x[k] = off[static_cast<int>(k)] + state.theta;
    return BlockStats::exact();
}

Reparametrization GmrfHybrid::reparametrization(const Parametrization& p) const {
    require_supported(p);
    if (p.is_centered()) return identity_reparam();
    if (!is_hybrid(p)) {
        throw DegenerateConditional("gmrf_hybrid: noncentering observed sites pins Theta = y_i - X~_i");
    }
    // Only the unobserved sites are latent, so the hybrid map is a location shift on them.
    return location_ncp();
}

bool GmrfHybrid::can_draw_aux_directly(const Parametrization& p) const { return is_hybrid(p); }

void GmrfHybrid::draw_aux_directly(ChainState& state, const Parametrization& p, RngStream& rng) const {
    if (!is_hybrid(p)) Model::draw_aux_directly(state, p, rng);
    const Eigen::VectorXd off = draw_offsets(state.theta, rng);
    state.aux.assign(off.data(), off.data() + off.size());
}

std::optional<DistSpec> GmrfHybrid::theta_law(const ChainState& state, const Parametrization& p) const {
    require_supported(p);
    if (p.is_centered()) {
        const Eigen::VectorXd x = assemble(state.x);
        return Normal{ones_q_.dot(x) / ones_q_ones_, 1.0 / std::sqrt(ones_q_ones_)};
    }
    if (!is_hybrid(p)) throw DegenerateConditional("gmrf_hybrid: Theta = y_i - X~_i in the noncentered chain");
    const Eigen::Map<const Eigen::VectorXd> a(state.aux.data(), static_cast<int>(state.aux.size()));
    return Normal{(ones_qoo_y_ + ones_qou_.dot(a)) / ones_qoo_ones_, 1.0 / std::sqrt(ones_qoo_ones_)};
}

double GmrfHybrid::log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const {
    return log_density(*theta_law(state, p), theta);
}

double GmrfHybrid::log_joint(const ChainState& state, const Parametrization& p, double theta) const {
    require_supported(p);
    if (!p.is_centered() && !is_hybrid(p)) {
        throw DegenerateConditional("gmrf_hybrid: noncentered joint is singular in Theta");
    }
    Eigen::VectorXd z;
    if (p.is_centered()) {
        z = assemble(state.x).array() - theta;
    } else {
        std::vector<double> shifted(state.aux.size());
        for (std::size_t k = 0; k < shifted.size(); ++k) shifted[k] = state.aux[k] + theta;
        z = assemble(shifted).array() - theta;
    }
    return -0.5 * z.dot(q_ * z);
}

std::optional<DistSpec> GmrfHybrid::latent_coordinate_law(const ChainState& state, std::size_t i) const {
    if (i >= unobserved_.size()) throw InvalidParameter("gmrf_hybrid: coordinate out of range");
    const Eigen::VectorXd x = assemble(state.x);
    const int site = static_cast<int>(unobserved_[i]);
    double diag = 0.0, off = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(q_, site); it; ++it) {
        if (it.row() == site)
            diag = it.value();
        else
            off += it.value() * (x[it.row()] - state.theta);
    }
    return Normal{state.theta - off / diag, 1.0 / std::sqrt(diag)};
}

std::optional<DistSpec> GmrfHybrid::posterior_oracle() const {
    return Normal{oracle_mean_, 1.0 / std::sqrt(oracle_precision_)};
}

std::optional<double> GmrfHybrid::log_marginal_posterior(double theta) const {
    return log_density(*posterior_oracle(), theta);
}

}  // namespace gibbslab
