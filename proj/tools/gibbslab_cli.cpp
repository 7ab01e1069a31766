#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gibbslab/errors.hpp"
#include "gibbslab/harness/config.hpp"
#include "gibbslab/harness/figure6.hpp"
#include "gibbslab/harness/output.hpp"
#include "gibbslab/harness/runner.hpp"
#include "gibbslab/harness/validation.hpp"

namespace {

using namespace gibbslab;
using namespace gibbslab::harness;

enum Exit { kOk = 0, kCheckFailed = 1, kConfig = 2, kRuntime = 3 };

struct Common {
    std::size_t threads = 0;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
};

ExperimentConfig load(const std::string& path, const Common& common) {
    ExperimentConfig cfg = load_config(path);
    if (common.seed) cfg.seed = *common.seed;
    if (!common.out_dir.empty()) cfg.output_dir = common.out_dir;
    return cfg;
}

int cmd_run(const std::string& path, const Common& common) {
    const auto cfg = load(path, common);
    const auto out = run_experiment(cfg, common.threads);
    const auto dir = invocation_dir(cfg.output_dir, "run", config_hash(cfg));
    write_run(out, dir);
    std::cout << "wrote " << out.rows.size() << " rows to " << (dir / "results.csv").string() << "\n";
    for (const auto& [label, fit] : out.summary.at("scaling").items()) {
        std::cout << "  " << label << ": slope " << format_real(fit.at("slope").get<double>()) << "\n";
    }
    return kOk;
}

int cmd_compare(const std::string& path, const Common& common) {
    const auto cfg = load(path, common);
    const auto out = run_compare(cfg, common.threads);
    const auto dir = invocation_dir(cfg.output_dir, "compare", config_hash(cfg));
    write_compare(out, dir);
    std::cout << compare_csv(out.rows);
    std::cout << "wrote " << (dir / "compare.csv").string() << "\n";
    return kOk;
}

int cmd_figure6(const std::string& path, bool strict) {
    const auto grid = figure6_grid();
    write_file(path, figure6_csv(grid));
    const auto c = check_figure6(grid);
    std::printf("wrote %zu x %zu grid to %s\n", grid.side(), grid.side(), path.c_str());
    std::printf("anchor    %s  value %.17g expected %.17g\n", c.anchor_ok ? "PASS" : "FAIL", c.anchor_value,
                c.anchor_expected);
    std::printf("symmetry  %s  max |g(x,t) - g(-x,-t)| = %.3g\n", c.symmetry_ok ? "PASS" : "FAIL", c.max_asymmetry);
    std::printf("ridge     %s  argmax_x at theta=%g is %g\n", c.ridge_ok ? "PASS" : "FAIL", c.ridge_theta,
                c.ridge_argmax);
    const bool ok = c.anchor_ok && c.symmetry_ok && c.ridge_ok;
    return strict && !ok ? kCheckFailed : kOk;
}

int cmd_validate(const Common& common, const std::string& corrupt) {
    auto cases = validation_cases();
    if (!corrupt.empty()) {
        bool found = false;
        for (auto& c : cases) {
            if (c.label == corrupt) {
                c.model = corrupt_conditional(c.model);
                found = true;
            }
        }
        if (!found) throw ConfigError("--corrupt: no validation case named '" + corrupt + "'");
    }
    const auto checks = run_validation(cases, common.seed.value_or(1), common.threads);
    std::cout << validation_table(checks);
    std::size_t failed = 0;
    for (const auto& c : checks) {
        if (!c.passed) {
            ++failed;
            std::cerr << "failed: " << c.model << " " << c.check << "\n";
        }
    }
    std::cout << (failed == 0 ? "all checks passed" : std::to_string(failed) + " checks failed") << "\n";
    return failed == 0 ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gibbs sampler parametrization experiments"};
    app.require_subcommand(1);
    Common common;
    std::uint64_t seed = 0;
    app.add_option("--threads", common.threads, "worker threads (0: hardware threads)");
    app.add_option("--out-dir", common.out_dir, "base output directory (overrides the config)");
    auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides the config)");

    std::string config_path, figure_path, corrupt;
    bool strict = false;
    auto* run = app.add_subcommand("run", "run every parametrization x n x replicate cell");
    run->add_option("config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    auto* compare = app.add_subcommand("compare", "compare centered, noncentered, partial and interleaved chains");
    compare->add_option("config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    auto* fig = app.add_subcommand("figure6", "write the heavy-tailed HMM log-posterior grid");
    fig->add_option("--out", figure_path, "output CSV path")->required();
    fig->add_flag("--strict", strict, "exit 1 when a grid check fails");
    auto* val = app.add_subcommand("validate", "brute-force conditional, round-trip and prior-independence checks");
    val->add_option("--corrupt", corrupt, "shift the Theta conditionals of one case (negative-path fixture)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }
    if (*seed_opt) common.seed = seed;

    try {
        if (*run) return cmd_run(config_path, common);
        if (*compare) return cmd_compare(config_path, common);
        if (*fig) return cmd_figure6(figure_path, strict);
        if (*val) return cmd_validate(common, corrupt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kConfig;
}
