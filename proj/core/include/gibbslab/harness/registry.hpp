#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gibbslab/harness/config.hpp"
#include "gibbslab/model/model.hpp"

namespace gibbslab::harness {

struct ModelInfo {
    std::string name;
    std::string n_meaning;  // what a grid value n controls for this model
};

const std::vector<ModelInfo>& registered_models();
bool is_registered(const std::string& name);

// Synthetic data are drawn from the stream (data.seed, n), so every
// parametrization in a cell sees the same data.
std::vector<double> make_data(const ModelSpec& spec, const DataSource& data, std::size_t n);
// Throws ConfigError for unknown models or parameter keys.
std::unique_ptr<Model> build_model(const ModelSpec& spec, const DataSource& data, std::size_t n);

}  // namespace gibbslab::harness
