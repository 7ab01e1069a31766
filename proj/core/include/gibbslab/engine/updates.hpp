#pragma once

#include <functional>
#include <span>

#include "gibbslab/model/model.hpp"
#include "gibbslab/numerics/rng.hpp"

namespace gibbslab {

struct MhResult {
    double value = 0.0;
    double log_target = 0.0;
    bool accepted = false;
};

// Symmetric Gaussian random-walk Metropolis step.
MhResult mh_step(const std::function<double(double)>& log_target, double current, double step_sd, RngStream& rng);
// Same, reusing a cached log_target(current).
MhResult mh_step(const std::function<double(double)>& log_target, double current, double current_log_target,
                 double step_sd, RngStream& rng);

// Draw from the density obtained by linear interpolation of exp(log_density) between
// grid nodes. Ends not flagged hard must carry density below 1e-12 of the maximum.
double grid_inverse_cdf_update(const std::function<double(double)>& log_density, std::span<const double> nodes,
                               RngStream& rng, bool hard_lo = false, bool hard_hi = false);
double grid_inverse_cdf_update(const std::function<double(double)>& log_density, const GridSpec& grid,
                               RngStream& rng);

}  // namespace gibbslab
