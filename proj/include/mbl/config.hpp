// Copyright 2026 The mblotoc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mbl/lattice.hpp"
#include "mbl/model.hpp"
#include "mbl/noise.hpp"

namespace mbl {

/// A rejected configuration. what() names the offending field (or line/column for syntax errors).
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct LatticeSpec {
    struct HeavyHex {
        std::size_t rows = 1;
        std::size_t cols = 1;
    };
    std::optional<HeavyHex> heavy_hex;
    std::optional<std::filesystem::path> edge_list;  // absolute after loading
};

inline constexpr int kConfigSchemaVersion = 1;

struct RunConfig {
    LatticeSpec lattice;
    Qubit butterfly_qubit = 0;
    ModelParams params;
    std::vector<double> w_list;
    std::size_t n_max = 10;
    std::size_t realizations = 25;
    NoiseModel noise;
    std::vector<double> noise_factors{1.0, 1.5};
    std::size_t trajectories = 100;
    std::optional<std::uint64_t> shots = 16000;  // nullopt: exact expectation values
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "out";
    std::size_t max_qubits = kDefaultMaxQubits;
    bool prune = true;
};

/**
 * Parses and validates a config document. `base_dir` resolves a relative edge_list path.
 * A run manifest is accepted too: its "config" member is used. Unknown fields are errors.
 */
RunConfig parse_config(const nlohmann::json &doc, const std::filesystem::path &base_dir = {});

/// Reads a JSON file; syntax errors are reported with line and column.
RunConfig load_config(const std::filesystem::path &path);

/// Full echo with every default spelled out; parse_config(config_to_json(c)) == c.
nlohmann::json config_to_json(const RunConfig &config);

/// Builds (and edge-colors) the configured lattice. Throws ConfigError when the graph is
/// unusable or exceeds max_qubits, before any state is allocated.
CouplingGraph build_lattice(const RunConfig &config);

}  // namespace mbl
