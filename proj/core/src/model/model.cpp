#include "gibbslab/model/model.hpp"

#include <algorithm>
#include <cmath>

#include "gibbslab/errors.hpp"

namespace gibbslab {

std::vector<double> GridSpec::nodes() const {
    if (points < 3 || !(lo < hi)) throw InvalidParameter("grid needs lo < hi and at least 3 points");
    std::vector<double> out(points);
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

bool Model::supports(const Parametrization& p) const {
    const auto all = supported();
    return std::any_of(all.begin(), all.end(), [&](const Parametrization& q) {
        if (q.kind == Parametrization::Kind::Partial && p.kind == Parametrization::Kind::Partial) return true;
        return q == p;
    });
}

void Model::require_supported(const Parametrization& p) const {
    if (!supports(p)) throw UnsupportedParametrization(name() + " does not support parametrization " + p.label());
}

std::optional<std::vector<double>> Model::draw_latent_prior(double, RngStream&) const { return std::nullopt; }

std::pair<double, double> Model::theta_support() const { return {-kInf, kInf}; }

ChainState Model::initial_state(double theta0, RngStream& rng) const {
    ChainState s;
    s.theta = theta0;
    update_latent(s, LatentUpdate{}, rng);
    return s;
}

Reparametrization Model::reparametrization(const Parametrization& p) const {
    throw UnsupportedParametrization(name() + " has no map for parametrization " + p.label());
}

void Model::to_aux(ChainState& state, const Parametrization& p, RngStream& rng) const {
    const double th[1] = {state.theta};
    reparametrization(p).inverse_into(state.x, th, data(), rng, state.aux);
}

void Model::from_aux(ChainState& state, const Parametrization& p) const {
    const double th[1] = {state.theta};
    reparametrization(p).forward_into(state.aux, th, data(), state.x);
}

bool Model::can_draw_aux_directly(const Parametrization&) const { return false; }

void Model::draw_aux_directly(ChainState&, const Parametrization& p, RngStream&) const {
    throw UnsupportedParametrization(name() + " cannot draw auxiliary state directly for " + p.label());
}

std::optional<GridSpec> Model::theta_grid(const ChainState&, const Parametrization&) const { return std::nullopt; }

std::optional<DistSpec> Model::latent_coordinate_law(const ChainState&, std::size_t) const { return std::nullopt; }

std::optional<DistSpec> Model::posterior_oracle() const { return std::nullopt; }

std::optional<double> Model::log_marginal_posterior(double) const { return std::nullopt; }

std::vector<std::pair<std::string, double>> Model::functionals(const ChainState&) const { return {}; }

void Model::check_state(const ChainState& state, const Parametrization&) const {
    const auto [lo, hi] = theta_support();
    if (!(state.theta >= lo && state.theta <= hi)) throw DegenerateSupport(name() + ": theta outside its support");
}

}  // namespace gibbslab
