#include "gibbslab/models/latent_poisson.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "common.hpp"

namespace gibbslab {

PoissonConstruction parse_construction(const std::string& text) {
    if (text == "rectangle") return PoissonConstruction::Rectangle;
    if (text == "scaling") return PoissonConstruction::Scaling;
    throw InvalidParameter("latent_poisson: unknown construction '" + text + "'");
}

PointStore::PointStore(PoissonConstruction construction, RngStream rng) : construction_(construction), rng_(rng) {}

void PointStore::extend_to(double level) const {
    if (!std::isfinite(level)) throw InvalidParameter("PointStore: level must be finite");
    // Keep one pending point strictly above the ceiling.
    while (points_.empty() || points_.back().key <= level) {
        const double base = points_.empty() ? 0.0 : points_.back().key;
        Point p;
        p.key = base + rng_.exponential();
        p.coord = construction_ == PoissonConstruction::Rectangle ? rng_.uniform() : p.key;
        p.id = next_id_++;
        points_.push_back(p);
    }
    ceiling_ = std::max(ceiling_, level);
}

std::size_t PointStore::count(double level) const {
    if (level < 0.0) return 0;
    extend_to(level);
    const auto it = std::upper_bound(points_.begin(), points_.end(), level,
                                     [](double v, const Point& p) { return v < p.key; });
    return static_cast<std::size_t>(it - points_.begin());
}

std::vector<double> PointStore::materialize(double theta) const {
    if (theta > ceiling_) throw StoreCorruption("PointStore: queried above the simulated ceiling");
    std::vector<double> x;
    for (const auto& p : points_) {
        if (p.key > theta) break;
        x.push_back(construction_ == PoissonConstruction::Rectangle ? p.coord : p.key / theta);
    }
    std::sort(x.begin(), x.end());
    return x;
}

void PointStore::rebuild_below(double theta, std::span<const double> x, RngStream& rng) {
    if (!(theta > 0.0)) throw InvalidParameter("PointStore: theta must be positive");
    std::vector<Point> fresh;
    fresh.reserve(x.size() + 1);
    for (double xi : x) {
        if (!(xi >= 0.0 && xi <= 1.0)) throw InvalidParameter("PointStore: latent points must lie in [0, 1]");
        Point p;
        if (construction_ == PoissonConstruction::Rectangle) {
            p.key = theta * rng.uniform_open();
            p.coord = xi;
        } else {
            p.key = theta * xi;
            p.coord = p.key;
        }
        p.id = next_id_++;
        fresh.push_back(p);
    }
    std::sort(fresh.begin(), fresh.end(), [](const Point& a, const Point& b) { return a.key < b.key; });
    // Above theta the conditional law is a fresh unit-rate process. Keeping the old
    // points there would freeze the first one and cap every later Theta below it.
    // By memorylessness the first new point sits at theta + Exp(1).
    Point pending;
    pending.key = theta + rng_.exponential();
    pending.coord = construction_ == PoissonConstruction::Rectangle ? rng_.uniform() : pending.key;
    pending.id = next_id_++;
    fresh.push_back(pending);
    points_.swap(fresh);
    ceiling_ = theta;
}

std::uint64_t PointStore::fingerprint(double level) const {
    std::uint64_t h = mix64(points_.size() > 0 ? 1 : 0);
    for (const auto& p : points_) {
        if (p.key > level) break;
        h = hash_combine(h, p.id);
        h = hash_combine(h, std::bit_cast<std::uint64_t>(p.key));
        h = hash_combine(h, std::bit_cast<std::uint64_t>(p.coord));
    }
    return h;
}

LatentPoisson::LatentPoisson(Params params, std::size_t observed_count)
    : params_(params), count_(observed_count), count_value_(static_cast<double>(observed_count)) {
    detail::require(detail::positive_finite(params_.alpha) && detail::positive_finite(params_.beta),
                    "latent_poisson: Gamma prior needs alpha, beta > 0");
}

std::vector<Parametrization> LatentPoisson::supported() const {
    return {Parametrization::centered(), Parametrization::noncentered()};
}

double LatentPoisson::default_theta0() const { return (params_.alpha + count_value_) / (params_.beta + 1.0); }

const PointStore* LatentPoisson::store(const ChainState& state) {
    return std::any_cast<PointStore>(&state.extension);
}

BlockStats LatentPoisson::update_latent(ChainState& state, const LatentUpdate&, RngStream& rng) const {
    // Given the count, the points are i.i.d. uniform on [0, 1].
    state.x.resize(count_);
    for (auto& v : state.x) v = rng.uniform();
    std::sort(state.x.begin(), state.x.end());
    return BlockStats::exact();
}

void LatentPoisson::to_aux(ChainState& state, const Parametrization& p, RngStream& rng) const {
    require_supported(p);
    if (p.is_centered()) return;
    if (!state.extension.has_value()) state.extension = PointStore(params_.construction, rng.spawn());
    auto* s = std::any_cast<PointStore>(&state.extension);
    if (s == nullptr) throw StoreCorruption("latent_poisson: chain state carries a foreign extension");
    s->rebuild_below(state.theta, state.x, rng);
    state.aux.clear();
}

void LatentPoisson::from_aux(ChainState& state, const Parametrization& p) const {
    require_supported(p);
    if (p.is_centered()) return;
    const PointStore* s = store(state);
    if (s == nullptr) throw StoreCorruption("latent_poisson: no point store in the chain state");
    state.x = s->materialize(state.theta);
}

std::optional<DistSpec> LatentPoisson::theta_law(const ChainState&, const Parametrization& p) const {
    require_supported(p);
    if (p.is_centered()) return Gamma{params_.alpha + count_value_, params_.beta + 1.0};
    return std::nullopt;
}

double LatentPoisson::log_theta_conditional(const ChainState& state, const Parametrization& p, double theta) const {
    require_supported(p);
    if (!(theta > 0.0)) return -kInf;
    if (p.is_centered()) return log_density(*theta_law(state, p), theta);
    const PointStore* s = store(state);
    if (s == nullptr) throw StoreCorruption("latent_poisson: no point store in the chain state");
    if (s->count(theta) != count_) return -kInf;
    return log_density(Gamma{params_.alpha, params_.beta}, theta);
}

double LatentPoisson::log_joint(const ChainState& state, const Parametrization& p, double theta) const {
    require_supported(p);
    if (!(theta > 0.0)) return -kInf;
    const double prior = log_density(Gamma{params_.alpha, params_.beta}, theta);
    if (p.is_centered()) {
        // Density of the process relative to a unit-rate one: theta^N exp(-(theta - 1)).
        if (state.x.size() != count_) return -kInf;
        return prior + count_value_ * std::log(theta) - (theta - 1.0);
    }
    return log_theta_conditional(state, p, theta);
}

std::optional<DistSpec> LatentPoisson::posterior_oracle() const {
    return Gamma{params_.alpha + count_value_, params_.beta + 1.0};
}

std::optional<double> LatentPoisson::log_marginal_posterior(double theta) const {
    return log_density(*posterior_oracle(), theta);
}

}  // namespace gibbslab
