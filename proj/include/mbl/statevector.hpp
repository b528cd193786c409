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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mbl/circuit.hpp"

namespace mbl {

using Amplitude = std::complex<double>;

inline constexpr std::size_t kDefaultMaxQubits = 26;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Dense 2^N amplitude vector. Qubit q is bit q of the basis index.
class StateVector {
   public:
    /// |0...0>. Refuses (std::length_error) before allocating when n_qubits > max_qubits.
    explicit StateVector(std::size_t n_qubits, std::size_t max_qubits = kDefaultMaxQubits);

    static StateVector basis(std::size_t n_qubits, std::uint64_t index, std::size_t max_qubits = kDefaultMaxQubits);

    std::size_t n_qubits() const { return n_qubits_; }
    std::size_t dimension() const { return amps_.size(); }
    std::span<Amplitude> amplitudes() { return amps_; }
    std::span<const Amplitude> amplitudes() const { return amps_; }

    /// Resets to the computational basis state `index`.
    void set_basis(std::uint64_t index);

    double norm() const;

   private:
    std::size_t n_qubits_;
    std::vector<Amplitude> amps_;
};

/// In-place gate application. Throws std::out_of_range for qubits >= N. Folded copies are not
/// replayed here since they do not change the state.
void apply_gate(StateVector &state, const Gate &gate);

void apply_pauli(StateVector &state, Qubit q, Pauli p);

/// Applies every layer in order.
void apply_circuit(StateVector &state, const Circuit &circ);
void apply_layers(StateVector &state, const Circuit &circ, std::size_t first_layer, std::size_t last_layer);

/// <Z_m>.
double expectation_z(const StateVector &state, Qubit m);

/// <Z_m> for every m in one pass over the amplitudes.
std::vector<double> expectation_z_all(const StateVector &state);

}  // namespace mbl
