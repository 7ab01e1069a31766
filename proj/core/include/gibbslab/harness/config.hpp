#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gibbslab/engine/sampler.hpp"

namespace gibbslab::harness {

struct DataSource {
    enum class Kind { Synthetic, Inline, File };
    Kind kind = Kind::Synthetic;
    double theta_star = 0.0;   // synthetic: generating Theta
    std::uint64_t seed = 1;    // synthetic: data stream, keyed further by n
    std::vector<double> values;  // inline
    std::string path;            // file: whitespace-separated reals
};

struct ModelSpec {
    std::string name;
    nlohmann::json params = nlohmann::json::object();
};

struct EscapeSettings {
    double theta0 = 50.0;
    double radius = 5.0;
    std::size_t max_iters = 10000;
    std::size_t replicates = 31;
    std::optional<double> center;  // default: median of the data
};

struct CompareSettings {
    std::vector<double> weights{0.0, 0.25, 0.5, 0.75, 1.0};
    bool interleaved = true;
    std::optional<EscapeSettings> escape;
};

struct ExperimentConfig {
    ModelSpec model;
    DataSource data;
    std::vector<Parametrization> parametrizations;
    // Shared sampler settings; "iterations" counts every sweep, burn-in included.
    nlohmann::json sampler = nlohmann::json::object();
    // Per-parametrization patches merged over `sampler`, keyed by label.
    std::map<std::string, nlohmann::json> sampler_overrides;
    std::vector<std::size_t> grid;
    std::size_t replicates = 5;
    std::uint64_t seed = 1;
    std::string output_dir = "results";
    CompareSettings compare;

    SamplerConfig sampler_for(const Parametrization& p) const;
};

// Throws ConfigError naming the offending key.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
// The fully resolved document; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const ExperimentConfig& cfg);
// 16 hex digits over the resolved document.
std::string config_hash(const ExperimentConfig& cfg);

SamplerConfig parse_sampler(const nlohmann::json& j, const std::string& where);
nlohmann::json sampler_to_json(const SamplerConfig& cfg);

}  // namespace gibbslab::harness
