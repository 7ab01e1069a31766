#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gibbslab/model/model.hpp"

namespace gibbslab::harness {

struct ValidationCase {
    std::string label;  // model name plus distinguishing settings
    std::shared_ptr<const Model> model;
};

struct ValidationCheck {
    std::string model;
    std::string check;
    bool passed = false;
    double value = 0.0;      // the measured discrepancy
    double tolerance = 0.0;
    std::string detail;
};

// Tiny instances (n <= 3, 2x2 lattice) of every registered model.
std::vector<ValidationCase> validation_cases();

// Sup distance between the CDF of `law` and a CDF integrated numerically from
// log_density on nodes placed at quantiles of `law` (plus log-spaced tails).
double brute_force_cdf_distance(const DistSpec& law, const std::function<double(double)>& log_density);

// Brute-force conditionals, round trips and NCP prior independence for one case.
std::vector<ValidationCheck> validate_case(const ValidationCase& c, std::uint64_t seed);
std::vector<ValidationCheck> run_validation(const std::vector<ValidationCase>& cases, std::uint64_t seed,
                                            std::size_t threads);
std::string validation_table(const std::vector<ValidationCheck>& checks);
bool all_passed(const std::vector<ValidationCheck>& checks);

// Forwards everything to `inner` except that exact Theta laws are moved off
// target. Used to show the suite catches a wrong conditional.
std::shared_ptr<const Model> corrupt_conditional(std::shared_ptr<const Model> inner);

}  // namespace gibbslab::harness
