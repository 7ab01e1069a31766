#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gibbslab/model/model.hpp"

namespace gibbslab {

enum class PoissonConstruction { Rectangle, Scaling };
PoissonConstruction parse_construction(const std::string& text);

// Lazily simulated unit-rate Poisson process used as the noncentered latent state.
//
// Rectangle: points (u, v) on [0, 1] x [0, inf), keyed by v; X = {u : v <= theta}.
// Scaling:   points u on [0, inf), keyed by u;              X = {u / theta : u <= theta}.
//
// Points are generated in key order by Exp(1) gaps. The ceiling is the largest
// level queried since the last rebuild; every point at or below it stays fixed
// until the next rebuild_below.
class PointStore {
public:
    PointStore(PoissonConstruction construction, RngStream rng);

    // Number of points with key <= level, extending the store if needed.
    std::size_t count(double level) const;
    void extend_to(double level) const;
    // h(X~, theta), sorted. Throws StoreCorruption above the ceiling.
    std::vector<double> materialize(double theta) const;
    // A draw of X~ given X = x and theta: the points below theta are rebuilt from x and
    // the process above theta is discarded, to be simulated afresh on demand.
    void rebuild_below(double theta, std::span<const double> x, RngStream& rng);

    double ceiling() const { return ceiling_; }
    std::size_t stored() const { return points_.size(); }
    // Hash of (id, key, coordinate) over points with key <= level.
    std::uint64_t fingerprint(double level) const;
    PoissonConstruction construction() const { return construction_; }

private:
    struct Point {
        double key;
        double coord;
        std::uint64_t id;
    };

    PoissonConstruction construction_;
    // Mutable: extension is invisible to callers, who only see a fixed infinite process.
    mutable std::vector<Point> points_;
    mutable double ceiling_ = 0.0;
    mutable RngStream rng_;
    mutable std::uint64_t next_id_ = 0;
};

// A Poisson process of rate Theta on [0, 1] observed only through its exact count,
// with prior Theta ~ Gamma(alpha, beta).
class LatentPoisson final : public Model {
public:
    struct Params {
        double alpha = 1.0;
        double beta = 1.0;
        PoissonConstruction construction = PoissonConstruction::Rectangle;
    };

    LatentPoisson(Params params, std::size_t observed_count);

    std::string name() const override { return "latent_poisson"; }
    std::size_t size() const override { return count_; }
    std::vector<Parametrization> supported() const override;
    std::span<const double> data() const override { return {&count_value_, 1}; }
    std::pair<double, double> theta_support() const override { return {0.0, kInf}; }
    double default_theta0() const override;

    BlockStats update_latent(ChainState& state, const LatentUpdate& how, RngStream& rng) const override;
    void to_aux(ChainState& state, const Parametrization& p, RngStream& rng) const override;
    void from_aux(ChainState& state, const Parametrization& p) const override;
    double log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<DistSpec> theta_law(const ChainState& state, const Parametrization& p) const override;
    double log_joint(const ChainState& state, const Parametrization& p, double theta) const override;
    std::optional<DistSpec> posterior_oracle() const override;
    std::optional<double> log_marginal_posterior(double theta) const override;

    // The store carried by a noncentered chain state, or null before the first j.2 step.
    static const PointStore* store(const ChainState& state);

private:
    Params params_;
    std::size_t count_ = 0;
    double count_value_ = 0.0;
};

}  // namespace gibbslab
