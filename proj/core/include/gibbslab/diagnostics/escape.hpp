#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gibbslab/engine/sampler.hpp"

namespace gibbslab {

struct EscapeConfig {
    double theta0 = 50.0;
    double center = 0.0;
    double radius = 5.0;
    std::size_t max_iters = 10000;
    std::size_t replicates = 31;  // odd, at least 31
    SamplerConfig sampler;        // parametrization and update kinds; length fields unused
    // When set, each iteration is a sweep under `sampler` (centered) followed by one under this.
    std::optional<SamplerConfig> interleave_with;
};

struct EscapeResult {
    double median = 0.0;
    std::vector<double> iterations;  // censored runs count as max_iters
    std::vector<bool> censored;
    std::size_t censored_count = 0;
};

// Iterations until |Theta - center| < radius, per replicate. Replicate r runs on rng.derive(r).
EscapeResult escape_time(const Model& model, const EscapeConfig& cfg, const RngStream& rng);

// Centered on the median of the model's data.
EscapeResult escape_time(const Model& model, const Parametrization& p, double theta0, double radius,
                         std::size_t max_iters, std::size_t replicates, const RngStream& rng);

}  // namespace gibbslab
