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

/**
 * @file noise.hpp
 * @brief Stochastic-trajectory execution of circuits under depolarizing noise.
 *
 * LocalDepolarizing: after every two-qubit gate application (folded copies included), with
 * probability p2 a uniformly random non-identity two-qubit Pauli hits that gate's qubits.
 * Averaged over trajectories this is the two-qubit depolarizing channel.
 *
 * GlobalDepolarizing: after every Floquet period, with probability q_global the state is
 * replaced by a uniformly random computational basis state. The average over that reset is the
 * maximally mixed state, so for Z-diagonal observables each period multiplies <Z_m> by
 * (1 - q_global) exactly.
 *
 * Trajectory t draws only from a stream keyed on (seed, t) and the reduction runs in trajectory
 * order, so results do not depend on the thread count.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mbl/circuit.hpp"
#include "mbl/statevector.hpp"

namespace mbl {

/// Median CZ error of the reference device, used as the default two-qubit error rate.
inline constexpr double kMedianCzError = 3.7e-3;

enum class NoiseMode : std::uint8_t { None, LocalDepolarizing, GlobalDepolarizing };

std::string_view noise_mode_name(NoiseMode mode);
NoiseMode noise_mode_from_name(std::string_view name);

struct NoiseModel {
    NoiseMode mode = NoiseMode::None;
    double p2 = kMedianCzError;
    double q_global = 0.0;

    /// Throws std::invalid_argument unless 0 <= p2 < 1 and 0 <= q_global < 1.
    void validate() const;
    bool is_noiseless() const;
};

struct TrajectoryOptions {
    std::size_t trajectories = 1;
    /// nullopt: each trajectory contributes its exact <Z_m>. Otherwise that many binomial shots.
    std::optional<std::uint64_t> shots;
    std::uint64_t seed = 0;
    /// Above 1, every trajectory re-folds the circuit with fold_gates(circ, refold_factor, .)
    /// using its own stream, so the averaged channel carries the factor uniformly.
    double refold_factor = 1.0;
    unsigned threads = 1;
    /// Memory for cached noiseless states that noisy trajectories restart from.
    std::size_t snapshot_budget_bytes = std::size_t{64} << 20;
    std::size_t max_qubits = kDefaultMaxQubits;
};

struct ZEstimate {
    std::vector<double> mean;
    std::vector<double> std_error;
    std::size_t trajectories = 0;
};

/// Trajectory-mean <Z_m> for every qubit, with standard errors from the trajectory spread.
ZEstimate run_noisy(const Circuit &circ, const NoiseModel &noise, const TrajectoryOptions &opts);

}  // namespace mbl
