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
#include <numbers>
#include <vector>

#include "json.hpp"

namespace mbl {

/// Kicked Ising parameters as dimensionless angles (period T = 1).
struct ModelParams {
    double jt = std::numbers::pi / 2;    // ZZ coupling J*T
    double bzt = 1.3;                    // longitudinal field B_Z*T
    double bx0t = std::numbers::pi / 2;  // centre of the transverse kick B_X0*T
    double w = 0.0;                      // disorder half-width W*T

    /// Throws std::invalid_argument for w < 0 or non-finite angles.
    void validate() const;
};

/// Per-site transverse kick angles for one disorder sample.
struct DisorderRealization {
    std::vector<double> bxt;
    std::uint64_t seed = 0;
    std::uint64_t realization_index = 0;
};

/**
 * Draws bxt[i] = bx0t + w * (2 u_i - 1) with u_i i.i.d. uniform on [0, 1).
 *
 * The u_i depend only on (seed, realization_index, i), so the same realization index produces
 * the same underlying draws at every disorder strength and the curve over w stays correlated.
 */
DisorderRealization sample_disorder(const ModelParams &params, std::size_t n_qubits, std::uint64_t seed,
                                    std::uint64_t realization_index);

nlohmann::json params_to_json(const ModelParams &params);
ModelParams params_from_json(const nlohmann::json &j, ModelParams defaults = {});
nlohmann::json realization_to_json(const DisorderRealization &real);
DisorderRealization realization_from_json(const nlohmann::json &j);

}  // namespace mbl
