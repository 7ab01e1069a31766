#include "gibbslab/models/jump_transform.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gibbslab/errors.hpp"

namespace gibbslab {

std::int64_t EventPath::value_at(double t) const {
    if (!(t >= 0.0 && t <= horizon)) throw InvalidParameter("EventPath: time outside [0, horizon]");
    const auto k = std::upper_bound(times.begin(), times.end(), t) - times.begin();
    return populations[static_cast<std::size_t>(k)];
}

namespace {

void check(JumpRates rates, double horizon, std::int64_t x0) {
    if (!(rates.lambda >= 0.0) || !std::isfinite(rates.lambda))
        throw InvalidParameter("jump transform: immigration rate must be finite and >= 0");
    if (!(rates.mu > 0.0) || !std::isfinite(rates.mu))
        throw InvalidParameter("jump transform: death rate must be finite and > 0");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidParameter("jump transform: horizon must be positive");
    if (x0 < 0) throw InvalidParameter("jump transform: initial population must be >= 0");
}

// Shared recursion; next() yields the inputs in order and returns false when exhausted.
EventPath run(const std::function<bool(JumpInput&)>& next, JumpRates rates, double horizon, std::int64_t x0) {
    check(rates, horizon, x0);
    EventPath path;
    path.horizon = horizon;
    path.populations.push_back(x0);
    double t = 0.0;
    std::int64_t x = x0;
    for (;;) {
        const double total = rates.lambda + static_cast<double>(x) * rates.mu;
        // Zero total rate: the population is absorbed at 0.
        if (total <= 0.0) break;
        JumpInput in;
        if (!next(in)) throw InsufficientLength("jump transform: inputs exhausted before the horizon");
        t += in.z / total;
        if (t >= horizon) break;
        if (in.u <= rates.lambda / total) {
            ++x;
            ++path.births;
        } else {
            --x;
            ++path.deaths;
        }
        path.times.push_back(t);
        path.populations.push_back(x);
    }
    return path;
}

}  // namespace

EventPath simulate_jump_transform(std::span<const JumpInput> inputs, JumpRates rates, double horizon,
                                  std::int64_t x0) {
    std::size_t i = 0;
    return run(
        [&](JumpInput& out) {
            if (i == inputs.size()) return false;
            out = inputs[i++];
            return true;
        },
        rates, horizon, x0);
}

EventPath simulate_jump_transform(RngStream& rng, JumpRates rates, double horizon, std::int64_t x0) {
    return run(
        [&](JumpInput& out) {
            out.z = rng.exponential();
            out.u = rng.uniform();
            return true;
        },
        rates, horizon, x0);
}

std::vector<JumpInput> draw_jump_inputs(RngStream& rng, std::size_t count) {
    std::vector<JumpInput> v(count);
    for (auto& in : v) {
        in.z = rng.exponential();
        in.u = rng.uniform();
    }
    return v;
}

}  // namespace gibbslab
