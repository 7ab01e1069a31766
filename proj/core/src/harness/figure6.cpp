#include "gibbslab/harness/figure6.hpp"

#include <cmath>
#include <numbers>

#include "gibbslab/errors.hpp"
#include "gibbslab/harness/output.hpp"
#include "gibbslab/models/heavy_tail_hmm.hpp"

namespace gibbslab::harness {

std::size_t Figure6Grid::index_of(double v) const {
    const double k = std::round((v - lo) / step);
    if (k < 0.0 || k >= static_cast<double>(axis.size()) || std::fabs(axis[static_cast<std::size_t>(k)] - v) > 1e-9) {
        throw InvalidParameter("figure6: value is not a grid node");
    }
    return static_cast<std::size_t>(k);
}

Figure6Grid figure6_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi > lo)) throw InvalidParameter("figure6: need lo < hi and step > 0");
    HeavyTailHmm::Params p;
    p.sigma_y = 1.0;
    p.sigma_x = std::sqrt(5.0);
    p.direction = HeavyTailHmm::Direction::CauchyObservation;
    const HeavyTailHmm model(p, {0.0});

    Figure6Grid g;
    g.lo = lo;
    g.hi = hi;
    g.step = step;
    // Nodes are lo + k*step, so 0 is hit exactly whenever lo is a multiple of step.
    const auto count = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
    g.axis.reserve(count);
    for (std::size_t k = 0; k < count; ++k) g.axis.push_back(lo + static_cast<double>(k) * step);
    g.values.resize(count * count);
    for (std::size_t it = 0; it < count; ++it)
        for (std::size_t ix = 0; ix < count; ++ix) g.values[it * count + ix] = model.log_site(0, g.axis[ix], g.axis[it]);
    return g;
}

std::string figure6_csv(const Figure6Grid& grid) {
    Csv csv({"x", "theta", "log_posterior"});
    for (std::size_t it = 0; it < grid.side(); ++it) {
        for (std::size_t ix = 0; ix < grid.side(); ++ix) {
            csv.cell(grid.axis[ix]).cell(grid.axis[it]).cell(grid.at(ix, it));
            csv.end_row();
        }
    }
    return csv.str();
}

Figure6Checks check_figure6(const Figure6Grid& grid) {
    Figure6Checks c;
    const std::size_t n = grid.side();
    const std::size_t z = grid.index_of(0.0);
    c.anchor_value = grid.at(z, z);
    // Cauchy(0; 0, 1) = 1/pi and N(0; 0, 5) = 1/sqrt(10 pi).
    c.anchor_expected = -std::log(std::numbers::pi) - 0.5 * std::log(10.0 * std::numbers::pi);
    c.anchor_ok = std::fabs(c.anchor_value - c.anchor_expected) < 1e-12;

    for (std::size_t it = 0; it < n; ++it) {
        const std::size_t mt = grid.index_of(-grid.axis[it]);
        for (std::size_t ix = 0; ix < n; ++ix) {
            const double d = std::fabs(grid.at(ix, it) - grid.at(grid.index_of(-grid.axis[ix]), mt));
            if (d > c.max_asymmetry) c.max_asymmetry = d;
        }
    }
    c.symmetry_ok = c.max_asymmetry <= 1e-10;

    const std::size_t row = grid.index_of(c.ridge_theta);
    std::size_t best = 0;
    for (std::size_t ix = 1; ix < n; ++ix)
        if (grid.at(ix, row) > grid.at(best, row)) best = ix;
    c.ridge_argmax = grid.axis[best];
    c.ridge_ok = std::fabs(c.ridge_argmax - c.ridge_theta) <= 0.1;
    return c;
}

}  // namespace gibbslab::harness
