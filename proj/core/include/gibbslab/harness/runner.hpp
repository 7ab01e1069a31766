#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gibbslab/errors.hpp"
#include "gibbslab/harness/config.hpp"

namespace gibbslab::harness {

// A chain failure tagged with its grid cell.
class CellFailure : public Error {
public:
    using Error::Error;
};

// One row per (parametrization, n, replicate). Wall time is kept out of this
// schema so reruns reproduce results.csv byte for byte; it goes to timings.csv.
struct ResultRow {
    std::string model;
    std::string parametrization;
    std::size_t n = 0;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    double iat = 0.0;
    double ess = 0.0;
    double lag1 = 0.0;
    double gamma_hat_lower = 0.0;
    double latent_acceptance = 1.0;
    double theta_acceptance = 1.0;
    double wall_seconds = 0.0;
};

const std::vector<std::string>& result_header();

// Runs task(i) for i in [0, count) on `threads` workers (0: hardware threads).
// The exception of the lowest failing index is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& task);

// Every cell uses RngStream(cfg.seed, n).derive(replicate), shared by all
// parametrizations of the cell.
RngStream chain_stream(std::uint64_t seed, std::size_t n, std::size_t replicate);

// Throws ConfigError when the model is unknown, a parametrization is not
// supported, or the model rejects its parameters.
void check_experiment(const ExperimentConfig& cfg);

struct RunOutput {
    std::vector<ResultRow> rows;  // sorted by (parametrization order, n order, replicate)
    nlohmann::json summary;
};

RunOutput run_experiment(const ExperimentConfig& cfg, std::size_t threads);
std::string results_csv(const std::vector<ResultRow>& rows);
std::string timings_csv(const std::vector<ResultRow>& rows);
// results.csv, timings.csv and summary.json under `dir`.
void write_run(const RunOutput& out, const std::filesystem::path& dir);

struct CompareRow {
    std::string model;
    std::size_t n = 0;
    std::string scheme;  // a parametrization label or "interleaved"
    std::size_t replicates = 0;
    double iat = 0.0;
    double ess = 0.0;
    double lag1 = 0.0;
    double gamma_hat_lower = 0.0;
    double wall_seconds = 0.0;
    double ess_per_second = 0.0;
    bool winner = false;
    bool has_escape = false;
    double escape_median = 0.0;
    std::size_t escape_censored = 0;
    std::string error;  // set when the scheme cannot run on this model
};

struct CompareOutput {
    std::vector<CompareRow> rows;
    nlohmann::json summary;
};

// Schemes run: centered, noncentered, the partial weights, each data-based
// parametrization and the interleaved chain, whichever the model supports.
CompareOutput run_compare(const ExperimentConfig& cfg, std::size_t threads);
std::string compare_csv(const std::vector<CompareRow>& rows);
void write_compare(const CompareOutput& out, const std::filesystem::path& dir);

}  // namespace gibbslab::harness
