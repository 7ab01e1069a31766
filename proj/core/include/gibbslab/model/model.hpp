#pragma once

#include <any>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gibbslab/model/parametrization.hpp"
#include "gibbslab/model/reparametrization.hpp"
#include "gibbslab/numerics/distributions.hpp"
#include "gibbslab/numerics/rng.hpp"

namespace gibbslab {

struct LatentUpdate {
    enum class Kind { Auto, Exact, RandomWalkMH, SingleSiteMH };
    Kind kind = Kind::Auto;
    double step_sd = 0.0;  // 0 selects the model default
    int repeats = 0;       // 0 selects the model default
};

// Equally spaced grid for the inverse-CDF Theta update. An end flagged hard is a
// support boundary of Theta and is exempt from the small-endpoint-density check.
struct GridSpec {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t points = 1001;
    bool hard_lo = false;
    bool hard_hi = false;

    std::vector<double> nodes() const;
};

struct ThetaUpdate {
    enum class Kind { Auto, Exact, RandomWalkMH, GridInverseCDF };
    Kind kind = Kind::Auto;
    double step_sd = 0.0;  // 0 means tune with a pilot run
    int repeats = 1;
    std::optional<GridSpec> grid;
};

struct BlockStats {
    std::size_t proposals = 0;
    std::size_t accepted = 0;

    void add(const BlockStats& other) {
        proposals += other.proposals;
        accepted += other.accepted;
    }
    double rate() const {
        return proposals == 0 ? 1.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
    }
    static BlockStats exact(std::size_t count = 1) { return {count, count}; }
};

// x holds the centered latent X; aux holds X* for the active non-centered
// parametrization. Models with extra state (the lazy point store) keep it in extension.
struct ChainState {
    double theta = 0.0;
    std::vector<double> x;
    std::vector<double> aux;
    std::any extension;
};

class Model {
public:
    virtual ~Model() = default;

    virtual std::string name() const = 0;
    virtual std::size_t size() const = 0;
    virtual std::vector<Parametrization> supported() const = 0;
    bool supports(const Parametrization& p) const;
    void require_supported(const Parametrization& p) const;

    virtual std::span<const double> data() const = 0;
    virtual std::pair<double, double> theta_support() const;
    virtual double default_theta0() const = 0;

    // theta set to theta0 and X drawn from (or started near) P(X | theta0, Y).
    virtual ChainState initial_state(double theta0, RngStream& rng) const;

    // X-block: a draw from P(X | Theta, Y) or an MH kernel that leaves it invariant.
    virtual BlockStats update_latent(ChainState& state, const LatentUpdate& how, RngStream& rng) const = 0;

    // The map h for a non-centered parametrization.
    virtual Reparametrization reparametrization(const Parametrization& p) const;
    // Step j.2: state.aux drawn from X* | X, Theta, Y.
    virtual void to_aux(ChainState& state, const Parametrization& p, RngStream& rng) const;
    // Step j.4: state.x = h(state.aux, state.theta, Y).
    virtual void from_aux(ChainState& state, const Parametrization& p) const;
    // Optional j.1 performed directly in the auxiliary coordinates.
    virtual bool can_draw_aux_directly(const Parametrization& p) const;
    virtual void draw_aux_directly(ChainState& state, const Parametrization& p, RngStream& rng) const;

    // log P(Theta = theta | X*, Y) + const, reading x (centered) or aux (otherwise).
    virtual double log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const = 0;
    // Closed-form Theta | X*, Y when one exists.
    virtual std::optional<DistSpec> theta_law(const ChainState& state, const Parametrization& p) const = 0;
    // Grid covering the Theta conditional, for grid inverse-CDF updates.
    virtual std::optional<GridSpec> theta_grid(const ChainState& state, const Parametrization& p) const;
    // Joint log density of (X*, Theta, Y) coded directly from the model definition.
    virtual double log_joint(const ChainState& state, const Parametrization& p, double theta) const = 0;

    // Full conditional of centered coordinate i given the rest, Theta and Y.
    virtual std::optional<DistSpec> latent_coordinate_law(const ChainState& state, std::size_t i) const;

    // Exact Theta | Y when it has a closed form.
    virtual std::optional<DistSpec> posterior_oracle() const;
    // Unnormalized log P(Theta | Y), for numerical integration.
    virtual std::optional<double> log_marginal_posterior(double theta) const;

    // A draw of the centered latent from its prior P(X | Theta); empty when the
    // model has no such prior (the latent is pinned by data or is a point process).
    virtual std::optional<std::vector<double>> draw_latent_prior(double theta, RngStream& rng) const;

    // Named scalar summaries of the latent state recorded alongside Theta.
    virtual std::vector<std::pair<std::string, double>> functionals(const ChainState& state) const;

    // Throws DegenerateSupport when a support invariant of the parametrization fails.
    virtual void check_state(const ChainState& state, const Parametrization& p) const;
};

}  // namespace gibbslab
