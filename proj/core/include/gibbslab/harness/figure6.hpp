#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gibbslab::harness {

// Log posterior of (X, Theta) for the Cauchy-observation HMM with n = 1, Y = 0,
// sigma_y = 1, sigma_x^2 = 5, on a square grid. Values are the sum of the two
// log densities with no added constant, so the anchor cell (0, 0) holds
// log Cauchy(0; 0, 1) + log N(0; 0, 5).
struct Figure6Grid {
    double lo = -40.0;
    double hi = 40.0;
    double step = 0.25;
    std::vector<double> axis;    // shared by X and Theta
    std::vector<double> values;  // values[it * axis.size() + ix]

    std::size_t side() const { return axis.size(); }
    double at(std::size_t ix, std::size_t it) const { return values[it * axis.size() + ix]; }
    std::size_t index_of(double v) const;
};

Figure6Grid figure6_grid(double lo = -40.0, double hi = 40.0, double step = 0.25);
// Columns x, theta, log_posterior; Theta-major.
std::string figure6_csv(const Figure6Grid& grid);

struct Figure6Checks {
    double anchor_value = 0.0;
    double anchor_expected = 0.0;
    double max_asymmetry = 0.0;  // max |grid(X, Theta) - grid(-X, -Theta)|
    double ridge_theta = 30.0;
    double ridge_argmax = 0.0;   // argmax over grid X at Theta = ridge_theta
    bool anchor_ok = false;
    bool symmetry_ok = false;    // within 1e-10
    bool ridge_ok = false;       // within 0.1 of ridge_theta
};

Figure6Checks check_figure6(const Figure6Grid& grid);

}  // namespace gibbslab::harness
