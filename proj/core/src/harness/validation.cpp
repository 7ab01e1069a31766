#include "gibbslab/harness/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gibbslab/errors.hpp"
#include "gibbslab/harness/config.hpp"
#include "gibbslab/harness/output.hpp"
#include "gibbslab/harness/registry.hpp"
#include "gibbslab/harness/runner.hpp"
#include "gibbslab/numerics/stats_tests.hpp"

namespace gibbslab::harness {

namespace {

constexpr double kCdfTol = 1e-3;
constexpr double kRoundTripTol = 1e-10;
constexpr std::size_t kPriorDraws = 10000;

std::vector<double> quantile_levels() {
    std::vector<double> u;
    constexpr int kBody = 4000;
    for (int k = 1; k < kBody; ++k) u.push_back(static_cast<double>(k) / kBody);
    // Sixteen nodes per decade out to 1e-10 in each tail.
    for (int j = 57; j <= 160; ++j) {
        const double t = std::pow(10.0, -j / 16.0);
        u.push_back(t);
        u.push_back(1.0 - t);
    }
    std::sort(u.begin(), u.end());
    return u;
}

std::vector<double> nodes_for(const DistSpec& law) {
    std::vector<double> z;
    if (has_inverse_cdf(law)) {
        for (double u : quantile_levels()) z.push_back(inverse_cdf(law, u));
    } else {
        const double m = mean(law), s = std::sqrt(variance(law));
        if (!std::isfinite(m) || !std::isfinite(s)) throw UnsupportedSpec("no quantile or moments for " + describe(law));
        for (int k = 0; k <= 8000; ++k) z.push_back(m - 12.0 * s + 24.0 * s * k / 8000.0);
    }
    z.erase(std::remove_if(z.begin(), z.end(), [](double v) { return !std::isfinite(v); }), z.end());
    std::sort(z.begin(), z.end());
    z.erase(std::unique(z.begin(), z.end()), z.end());
    return z;
}

// Sup distance between the CDFs obtained by trapezoid integration of exp(f) and exp(g).
double cdf_distance_on_nodes(const std::vector<double>& z, const std::function<double(double)>& f,
                             const std::function<double(double)>& g) {
    const auto integrate = [&](const std::function<double(double)>& h) {
        std::vector<double> l(z.size());
        double top = -kInf;
        for (std::size_t k = 0; k < z.size(); ++k) top = std::max(top, l[k] = h(z[k]));
        std::vector<double> cum(z.size(), 0.0);
        if (!std::isfinite(top)) return cum;
        for (std::size_t k = 1; k < z.size(); ++k)
            cum[k] = cum[k - 1] + 0.5 * (std::exp(l[k - 1] - top) + std::exp(l[k] - top)) * (z[k] - z[k - 1]);
        for (auto& v : cum) v /= cum.back();
        return cum;
    };
    const auto a = integrate(f), b = integrate(g);
    if (a.back() != 1.0 || b.back() != 1.0) return 1.0;
    double worst = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) worst = std::max(worst, std::fabs(a[k] - b[k]));
    return worst;
}

ValidationCheck make(const std::string& model, const std::string& check, double value, double tol,
                     std::string detail = {}) {
    return {model, check, value <= tol, value, tol, std::move(detail)};
}

double bernoulli_distance(double p, const std::function<double(double)>& log_density) {
    const double l0 = log_density(0.0), l1 = log_density(1.0);
    const double m = std::max(l0, l1);
    const double brute = std::exp(l1 - m) / (std::exp(l0 - m) + std::exp(l1 - m));
    return std::fabs(brute - p);
}

double law_distance(const DistSpec& law, const std::function<double(double)>& log_density) {
    if (const auto* b = std::get_if<Bernoulli>(&law)) return bernoulli_distance(b->p, log_density);
    return brute_force_cdf_distance(law, log_density);
}

void check_theta_conditionals(const ValidationCase& c, const ChainState& start, RngStream& rng,
                              std::vector<ValidationCheck>& out) {
    const Model& m = *c.model;
    for (const auto& p : m.supported()) {
        ChainState st = start;
        std::optional<DistSpec> law;
        try {
            if (!p.is_centered()) m.to_aux(st, p, rng);
            law = m.theta_law(st, p);
        } catch (const DegenerateConditional&) {
            continue;
        } catch (const ConstraintViolation&) {
            continue;
        }
        if (!law) continue;
        const auto logf = [&](double th) { return m.log_joint(st, p, th); };
        out.push_back(make(c.label, "theta_conditional[" + p.label() + "]", law_distance(*law, logf), kCdfTol,
                           describe(*law)));
    }
}

// The unnormalized target behind grid and MH Theta updates must match the joint.
void check_theta_targets(const ValidationCase& c, const ChainState& start, RngStream& rng,
                         std::vector<ValidationCheck>& out) {
    const Model& m = *c.model;
    const auto [lo, hi] = m.theta_support();
    for (const auto& p : m.supported()) {
        ChainState st = start;
        std::vector<double> z;
        try {
            if (!p.is_centered()) m.to_aux(st, p, rng);
            (void)m.log_theta_conditional(st, p, st.theta);
            if (const auto g = m.theta_grid(st, p)) {
                z = g->nodes();
            } else {
                const double t = st.theta;
                const double a = std::isfinite(lo) ? std::max(lo, t - 4.0 * std::fabs(t)) : t - 10.0;
                const double b = std::isfinite(hi) ? std::min(hi, t + 4.0 * std::fabs(t)) : t + 10.0;
                // Interior nodes only: the ends may be support boundaries.
                for (int k = 1; k < 20000; ++k) z.push_back(a + (b - a) * k / 20000.0);
            }
        } catch (const DegenerateConditional&) {
            continue;
        } catch (const ConstraintViolation&) {
            continue;
        }
        const double d = cdf_distance_on_nodes(
            z, [&](double th) { return m.log_theta_conditional(st, p, th); },
            [&](double th) { return m.log_joint(st, p, th); });
        out.push_back(make(c.label, "theta_target[" + p.label() + "]", d, kCdfTol));
    }
}

void check_latent_conditionals(const ValidationCase& c, const ChainState& start, std::vector<ValidationCheck>& out) {
    const Model& m = *c.model;
    const auto centered = Parametrization::centered();
    for (std::size_t i = 0; i < std::min<std::size_t>(start.x.size(), 3); ++i) {
        const auto law = m.latent_coordinate_law(start, i);
        if (!law) continue;
        ChainState st = start;
        const auto logf = [&](double v) {
            st.x[i] = v;
            return m.log_joint(st, centered, st.theta);
        };
        out.push_back(make(c.label, "latent_conditional[" + std::to_string(i) + "]", law_distance(*law, logf),
                           kCdfTol, describe(*law)));
    }
}

void check_round_trips(const ValidationCase& c, const ChainState& start, RngStream& rng,
                       std::vector<ValidationCheck>& out) {
    const Model& m = *c.model;
    for (const auto& p : m.supported()) {
        if (p.is_centered()) continue;
        ChainState st = start;
        try {
            m.to_aux(st, p, rng);
            m.from_aux(st, p);
        } catch (const DegenerateConditional&) {
            continue;
        }
        double worst = st.x.size() == start.x.size() ? 0.0 : kInf;
        for (std::size_t i = 0; i < std::min(st.x.size(), start.x.size()); ++i) {
            const double scale = std::max(1.0, std::fabs(start.x[i]));
            worst = std::max(worst, std::fabs(st.x[i] - start.x[i]) / scale);
        }
        out.push_back(make(c.label, "round_trip[" + p.label() + "]", worst, kRoundTripTol));
    }
}

void check_prior_independence(const ValidationCase& c, RngStream& rng, std::vector<ValidationCheck>& out) {
    const Model& m = *c.model;
    const auto p = Parametrization::noncentered();
    if (!m.supports(p)) return;
    const double t0 = m.default_theta0();
    const auto [lo, hi] = m.theta_support();
    double t1 = 2.0 * t0 + 1.0;
    if (!(t1 < hi)) t1 = 0.5 * (t0 + hi);
    (void)lo;

    std::vector<double> a, b;
    for (double th : {t0, t1}) {
        auto& dst = th == t0 ? a : b;
        for (std::size_t k = 0; k < kPriorDraws; ++k) {
            auto x = m.draw_latent_prior(th, rng);
            if (!x) return;
            ChainState st;
            st.theta = th;
            st.x = std::move(*x);
            try {
                m.to_aux(st, p, rng);
            } catch (const DegenerateConditional&) {
                return;
            }
            dst.push_back(st.aux.front());
        }
    }
    const double d = ks_two_sample(a, b);
    const double crit = ks_two_sample_critical(a.size(), b.size(), 1e-3);
    char buf[96];
    std::snprintf(buf, sizeof buf, "theta %.4g vs %.4g", t0, t1);
    out.push_back(make(c.label, "prior_independence[noncentered]", d, crit, buf));
}

// Every virtual forwards; theta_law shifts its location or scale.
class CorruptedModel final : public Model {
public:
    explicit CorruptedModel(std::shared_ptr<const Model> inner) : in_(std::move(inner)) {}

    std::string name() const override { return in_->name(); }
    std::size_t size() const override { return in_->size(); }
    std::vector<Parametrization> supported() const override { return in_->supported(); }
    std::span<const double> data() const override { return in_->data(); }
    std::pair<double, double> theta_support() const override { return in_->theta_support(); }
    double default_theta0() const override { return in_->default_theta0(); }
    ChainState initial_state(double theta0, RngStream& rng) const override { return in_->initial_state(theta0, rng); }
    BlockStats update_latent(ChainState& s, const LatentUpdate& how, RngStream& rng) const override {
        return in_->update_latent(s, how, rng);
    }
    Reparametrization reparametrization(const Parametrization& p) const override { return in_->reparametrization(p); }
    void to_aux(ChainState& s, const Parametrization& p, RngStream& rng) const override { in_->to_aux(s, p, rng); }
    void from_aux(ChainState& s, const Parametrization& p) const override { in_->from_aux(s, p); }
    bool can_draw_aux_directly(const Parametrization& p) const override { return in_->can_draw_aux_directly(p); }
    void draw_aux_directly(ChainState& s, const Parametrization& p, RngStream& rng) const override {
        in_->draw_aux_directly(s, p, rng);
    }
    double log_theta_conditional(const ChainState& s, const Parametrization& p, double th) const override {
        return in_->log_theta_conditional(s, p, th);
    }
    std::optional<DistSpec> theta_law(const ChainState& s, const Parametrization& p) const override {
        auto law = in_->theta_law(s, p);
        if (!law) return law;
        return std::visit(
            [](auto d) -> DistSpec {
                using T = decltype(d);
                if constexpr (std::is_same_v<T, Normal> || std::is_same_v<T, TruncatedNormal>) {
                    d.mean += 0.25 * d.sd;
                } else if constexpr (std::is_same_v<T, Gamma> || std::is_same_v<T, Exponential> ||
                                     std::is_same_v<T, TruncatedExponential>) {
                    d.rate *= 1.25;
                } else if constexpr (std::is_same_v<T, Beta>) {
                    d.a *= 1.25;
                } else if constexpr (std::is_same_v<T, Pareto>) {
                    d.shape *= 1.25;
                } else if constexpr (std::is_same_v<T, Cauchy>) {
                    d.location += 0.25 * d.scale;
                } else if constexpr (std::is_same_v<T, InverseRootGamma>) {
                    d.rate *= 1.25;
                } else if constexpr (std::is_same_v<T, Uniform>) {
                    d.hi += 0.25 * (d.hi - d.lo);
                }
                return d;
            },
            *law);
    }
    std::optional<GridSpec> theta_grid(const ChainState& s, const Parametrization& p) const override {
        return in_->theta_grid(s, p);
    }
    double log_joint(const ChainState& s, const Parametrization& p, double th) const override {
        return in_->log_joint(s, p, th);
    }
    std::optional<DistSpec> latent_coordinate_law(const ChainState& s, std::size_t i) const override {
        return in_->latent_coordinate_law(s, i);
    }
    std::optional<DistSpec> posterior_oracle() const override { return in_->posterior_oracle(); }
    std::optional<double> log_marginal_posterior(double th) const override { return in_->log_marginal_posterior(th); }
    std::optional<std::vector<double>> draw_latent_prior(double th, RngStream& rng) const override {
        return in_->draw_latent_prior(th, rng);
    }
    std::vector<std::pair<std::string, double>> functionals(const ChainState& s) const override {
        return in_->functionals(s);
    }
    void check_state(const ChainState& s, const Parametrization& p) const override { in_->check_state(s, p); }

private:
    std::shared_ptr<const Model> in_;
};

ValidationCase tiny(const std::string& label, const std::string& name, nlohmann::json params, double theta_star,
                    std::size_t n) {
    ModelSpec spec{name, std::move(params)};
    DataSource data;
    data.theta_star = theta_star;
    data.seed = 20240601;
    return {label, std::shared_ptr<const Model>(build_model(spec, data, n))};
}

}  // namespace

double brute_force_cdf_distance(const DistSpec& law, const std::function<double(double)>& log_density) {
    const auto z = nodes_for(law);
    if (z.size() < 3) throw InsufficientLength("brute force: law has fewer than three distinct nodes");
    std::vector<double> lf(z.size());
    double top = -kInf;
    for (std::size_t k = 0; k < z.size(); ++k) {
        lf[k] = log_density(z[k]);
        if (std::isnan(lf[k])) throw NonFiniteTarget("brute force: NaN log density at " + std::to_string(z[k]));
        top = std::max(top, lf[k]);
    }
    if (!std::isfinite(top)) return 1.0;  // no mass where the law puts its mass
    std::vector<double> cum(z.size(), 0.0);
    for (std::size_t k = 1; k < z.size(); ++k) {
        cum[k] = cum[k - 1] + 0.5 * (std::exp(lf[k - 1] - top) + std::exp(lf[k] - top)) * (z[k] - z[k - 1]);
    }
    const double total = cum.back();
    const double c0 = cdf(law, z.front()), c1 = cdf(law, z.back());
    double worst = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        const double f_law = (cdf(law, z[k]) - c0) / (c1 - c0);
        worst = std::max(worst, std::fabs(cum[k] / total - f_law));
    }
    return worst;
}

std::vector<ValidationCase> validation_cases() {
    using nlohmann::json;
    return {
        tiny("repeated_measurements", "repeated_measurements", json::object(), 1.0, 3),
        tiny("gaussian_hmm", "gaussian_hmm", json::object(), 1.0, 3),
        tiny("nonregular_scale", "nonregular_scale", json::object(), 2.0, 3),
        tiny("stochastic_frontier", "stochastic_frontier", json::object(), 1.0, 3),
        tiny("rounded_data", "rounded_data", json::object(), 0.3, 3),
        tiny("classification", "classification", json{{"scenario", "general"}}, 0.4, 3),
        tiny("heavy_tail_hmm/cauchy-obs", "heavy_tail_hmm", json{{"direction", "cauchy-obs"}}, 0.5, 1),
        tiny("heavy_tail_hmm/cauchy-latent", "heavy_tail_hmm", json{{"direction", "cauchy-latent"}}, 0.5, 1),
        tiny("discretized_sv", "discretized_sv", json::object(), 1.0, 3),
        tiny("stick_breaking", "stick_breaking", json::object(), 1.0, 3),
        tiny("latent_poisson/rectangle", "latent_poisson", json{{"construction", "rectangle"}}, 3.0, 1),
        tiny("latent_poisson/scaling", "latent_poisson", json{{"construction", "scaling"}}, 3.0, 1),
        tiny("observed_diffusion", "observed_diffusion", json::object(), 1.0, 3),
        tiny("gmrf_hybrid", "gmrf_hybrid", json{{"observed", 2}}, 1.0, 2),
    };
}

std::vector<ValidationCheck> validate_case(const ValidationCase& c, std::uint64_t seed) {
    std::vector<ValidationCheck> out;
    std::uint64_t key = 0x7A11DA7Eull;
    for (unsigned char ch : c.label) key = hash_combine(key, ch);
    RngStream rng(seed, key);
    const Model& m = *c.model;
    try {
        ChainState start = m.initial_state(m.default_theta0(), rng);
        // A few sweeps so the state is not the special starting point.
        for (int k = 0; k < 5; ++k) {
            m.update_latent(start, LatentUpdate{}, rng);
            const auto law = m.theta_law(start, Parametrization::centered());
            if (law) start.theta = draw(*law, rng);
            m.update_latent(start, LatentUpdate{}, rng);
        }
        check_theta_conditionals(c, start, rng, out);
        check_theta_targets(c, start, rng, out);
        check_latent_conditionals(c, start, out);
        check_round_trips(c, start, rng, out);
        check_prior_independence(c, rng, out);
    } catch (const std::exception& e) {
        out.push_back({c.label, "error", false, kInf, 0.0, e.what()});
    }
    return out;
}

std::vector<ValidationCheck> run_validation(const std::vector<ValidationCase>& cases, std::uint64_t seed,
                                            std::size_t threads) {
    std::vector<std::vector<ValidationCheck>> per(cases.size());
    parallel_for(cases.size(), threads, [&](std::size_t i) { per[i] = validate_case(cases[i], seed); });
    std::vector<ValidationCheck> all;
    for (auto& v : per) all.insert(all.end(), v.begin(), v.end());
    return all;
}

std::string validation_table(const std::vector<ValidationCheck>& checks) {
    std::size_t wm = 5, wc = 5;
    for (const auto& c : checks) {
        wm = std::max(wm, c.model.size());
        wc = std::max(wc, c.check.size());
    }
    std::string out;
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-*s  %-*s  %-6s  %-12s  %-12s  %s\n", static_cast<int>(wm), "model",
                  static_cast<int>(wc), "check", "result", "value", "tolerance", "detail");
    out += buf;
    for (const auto& c : checks) {
        std::snprintf(buf, sizeof buf, "%-*s  %-*s  %-6s  %-12.4g  %-12.4g  %s\n", static_cast<int>(wm), c.model.c_str(),
                      static_cast<int>(wc), c.check.c_str(), c.passed ? "PASS" : "FAIL", c.value, c.tolerance,
                      c.detail.c_str());
        out += buf;
    }
    return out;
}

bool all_passed(const std::vector<ValidationCheck>& checks) {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::shared_ptr<const Model> corrupt_conditional(std::shared_ptr<const Model> inner) {
    return std::make_shared<CorruptedModel>(std::move(inner));
}

}  // namespace gibbslab::harness
