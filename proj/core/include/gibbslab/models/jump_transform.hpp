#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gibbslab/numerics/rng.hpp"

namespace gibbslab {

// One noncentered input: an Exp(1) interarrival and a Uniform(0, 1) event-type mark.
struct JumpInput {
    double z = 0.0;
    double u = 0.0;
};

struct JumpRates {
    double lambda = 0.0;  // immigration
    double mu = 1.0;      // per-capita death
};

// Piecewise-constant population path on [0, horizon].
struct EventPath {
    double horizon = 0.0;
    std::vector<double> times;             // strictly increasing, all < horizon
    std::vector<std::int64_t> populations;  // populations[k] holds on [times[k-1], times[k]); size times+1
    std::size_t births = 0;
    std::size_t deaths = 0;

    std::int64_t value_at(double t) const;
    std::int64_t final_value() const { return populations.back(); }
};

// Immigration-death path from the transform X = h(X~, (lambda, mu)).
// Throws InsufficientLength if the inputs run out before the horizon is passed.
EventPath simulate_jump_transform(std::span<const JumpInput> inputs, JumpRates rates, double horizon,
                                  std::int64_t x0);
// Draws the inputs on demand.
EventPath simulate_jump_transform(RngStream& rng, JumpRates rates, double horizon, std::int64_t x0);

std::vector<JumpInput> draw_jump_inputs(RngStream& rng, std::size_t count);

}  // namespace gibbslab
