#include "gibbslab/models/classification.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common.hpp"

namespace gibbslab {

ClassificationMixture::Scenario ClassificationMixture::parse_scenario(const std::string& text) {
    if (text == "disjoint") return Scenario::Disjoint;
    if (text == "identical") return Scenario::Identical;
    if (text == "general") return Scenario::General;
    throw InvalidParameter("classification: unknown scenario '" + text + "'");
}

std::pair<DistSpec, DistSpec> ClassificationMixture::scenario_densities(Scenario s) {
    switch (s) {
        case Scenario::Disjoint:
            return {Uniform{0.0, 1.0}, Uniform{2.0, 3.0}};
        case Scenario::Identical:
            return {Normal{0.0, 1.0}, Normal{0.0, 1.0}};
        case Scenario::General:
            return {Normal{0.0, 1.0}, Normal{2.0, 1.0}};
    }
    throw InvalidParameter("classification: unknown scenario");
}

ClassificationMixture::ClassificationMixture(Scenario scenario, std::vector<double> y)
    : ClassificationMixture(scenario_densities(scenario).first, scenario_densities(scenario).second, std::move(y)) {}

ClassificationMixture::ClassificationMixture(DistSpec f0, DistSpec f1, std::vector<double> y)
    : f0_(std::move(f0)), f1_(std::move(f1)), y_(std::move(y)) {
    validate(f0_);
    validate(f1_);
    detail::require(!y_.empty(), "classification: needs n >= 1");
    detail::require_finite_data(y_, name());
    log_f0_.resize(y_.size());
    log_f1_.resize(y_.size());
    for (std::size_t i = 0; i < y_.size(); ++i) {
        log_f0_[i] = log_density(f0_, y_[i]);
        log_f1_[i] = log_density(f1_, y_[i]);
        if (log_f0_[i] == -kInf && log_f1_[i] == -kInf) {
            throw InvalidParameter("classification: an observation lies outside both component supports");
        }
    }
}

std::vector<Parametrization> ClassificationMixture::supported() const {
    return {Parametrization::centered(), Parametrization::noncentered()};
}

BlockStats ClassificationMixture::update_latent(ChainState& state, const LatentUpdate&, RngStream& rng) const {
    state.x.resize(y_.size());
    for (std::size_t i = 0; i < y_.size(); ++i) state.x[i] = draw(*latent_coordinate_law(state, i), rng);
    return BlockStats::exact();
}

Reparametrization ClassificationMixture::reparametrization(const Parametrization& p) const {
    require_supported(p);
    if (p.is_centered()) return identity_reparam();
    return Reparametrization(
        "indicator",
        [](std::span<const double> aux, std::span<const double> theta, std::span<const double>,
           std::vector<double>& x) {
            x.resize(aux.size());
            for (std::size_t i = 0; i < aux.size(); ++i) x[i] = aux[i] <= theta[0] ? 1.0 : 0.0;
        },
        [](std::span<const double> x, std::span<const double> theta, std::span<const double>, RngStream& rng,
           std::vector<double>& aux) {
            // Many-to-one map: draw X~ given the indicator.
            const double t = theta[0];
            aux.resize(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double u = rng.uniform();
                aux[i] = x[i] == 1.0 ? t * u : t + (1.0 - t) * u;
            }
        },
        true);
}

std::optional<DistSpec> ClassificationMixture::theta_law(const ChainState& state, const Parametrization& p) const {
    require_supported(p);
    const std::size_t n = y_.size();
    if (p.is_centered()) {
        const double count = detail::sum(state.x);
        return Beta{count + 1.0, static_cast<double>(n) - count + 1.0};
    }
    // Between consecutive order statistics of X~ the class split is fixed, so the
    // conditional is flat there with level prod f0 (first k) * prod f1 (rest).
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return state.aux[a] < state.aux[b]; });
    PiecewiseUniform law;
    law.breaks.reserve(n + 2);
    law.log_weights.reserve(n + 1);
    law.breaks.push_back(0.0);
    for (std::size_t k : order) law.breaks.push_back(std::clamp(state.aux[k], 0.0, 1.0));
    law.breaks.push_back(1.0);
    // -inf terms are tracked by count so they can be swapped out exactly.
    std::size_t dead = 0;
    double finite = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (log_f1_[i] == -kInf) ++dead; else finite += log_f1_[i];
    }
    law.log_weights.push_back(dead ? -kInf : finite);
    for (std::size_t k : order) {
        if (log_f1_[k] == -kInf) --dead; else finite -= log_f1_[k];
        if (log_f0_[k] == -kInf) ++dead; else finite += log_f0_[k];
        law.log_weights.push_back(dead ? -kInf : finite);
    }
    return law;
}

double ClassificationMixture::log_theta_conditional(const ChainState& state, const Parametrization& p,
                                                    double theta) const {
    if (!(theta >= 0.0 && theta <= 1.0)) return -kInf;
    return log_density(*theta_law(state, p), theta);
}

double ClassificationMixture::log_joint(const ChainState& state, const Parametrization& p, double theta) const {
    require_supported(p);
    if (!(theta >= 0.0 && theta <= 1.0)) return -kInf;
    double lp = 0.0;
    for (std::size_t i = 0; i < y_.size(); ++i) {
        bool class0 = false;
        if (p.is_centered()) {
            class0 = state.x[i] == 1.0;
            lp += class0 ? std::log(theta) : std::log1p(-theta);
        } else {
            class0 = state.aux[i] <= theta;
        }
        lp += class0 ? log_f0_[i] : log_f1_[i];
    }
    return lp;
}

std::optional<DistSpec> ClassificationMixture::latent_coordinate_law(const ChainState& state, std::size_t i) const {
    const double a = std::log(state.theta) + log_f0_.at(i);
    const double b = std::log1p(-state.theta) + log_f1_.at(i);
    if (a == -kInf) return Bernoulli{0.0};
    if (b == -kInf) return Bernoulli{1.0};
    return Bernoulli{1.0 / (1.0 + std::exp(b - a))};
}

std::optional<double> ClassificationMixture::log_marginal_posterior(double theta) const {
    if (!(theta >= 0.0 && theta <= 1.0)) return -kInf;
    double lp = 0.0;
    for (std::size_t i = 0; i < y_.size(); ++i) {
        lp += std::log(theta * std::exp(log_f0_[i]) + (1.0 - theta) * std::exp(log_f1_[i]));
    }
    return lp;
}

std::vector<std::pair<std::string, double>> ClassificationMixture::functionals(const ChainState& state) const {
    return {{"class0_count", detail::sum(state.x)}};
}

std::optional<std::vector<double>> ClassificationMixture::draw_latent_prior(double theta, RngStream& rng) const {
    std::vector<double> x(y_.size());
    for (auto& v : x) v = rng.uniform() <= theta ? 1.0 : 0.0;
    return x;
}

}  // namespace gibbslab
