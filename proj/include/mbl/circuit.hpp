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
 * @file circuit.hpp
 * @brief Layered gate programs for the kicked Ising Floquet evolution and its OTOC circuits.
 *
 * Conventions: RX(t) = exp(-i t/2 X), RZ(t) = exp(-i t/2 Z), RZZ(t) = exp(-i t/2 Z Z).
 * Layers apply in order; gates inside one layer act on disjoint qubits.
 */

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mbl/lattice.hpp"
#include "mbl/model.hpp"

namespace mbl {

enum class GateKind : std::uint8_t { RX, RZ, RZZ, X, IDLE };

std::string_view gate_kind_name(GateKind kind);
GateKind gate_kind_from_name(std::string_view name);

struct Gate {
    GateKind kind = GateKind::IDLE;
    std::array<Qubit, 2> qubits{0, 0};
    double angle = 0.0;
    /// Number of G^dagger G pairs appended after G by gate folding. The represented unitary is
    /// always G; noisy execution sees 1 + 2 * folds applications.
    std::uint8_t folds = 0;

    static Gate rx(Qubit q, double angle) { return {GateKind::RX, {q, q}, angle, 0}; }
    static Gate rz(Qubit q, double angle) { return {GateKind::RZ, {q, q}, angle, 0}; }
    static Gate rzz(Qubit a, Qubit b, double angle) { return {GateKind::RZZ, {a, b}, angle, 0}; }
    static Gate x(Qubit q) { return {GateKind::X, {q, q}, 0.0, 0}; }

    bool is_two_qubit() const { return kind == GateKind::RZZ; }
    std::size_t arity() const { return is_two_qubit() ? 2 : 1; }
    Gate adjoint() const;

    friend bool operator==(const Gate &, const Gate &) = default;
};

struct Layer {
    std::vector<Gate> gates;

    friend bool operator==(const Layer &, const Layer &) = default;
};

struct Circuit {
    std::size_t n_qubits = 0;
    std::vector<Layer> layers;
    /// Layer counts at which a Floquet period ends (strictly increasing).
    std::vector<std::size_t> step_boundaries;

    // Metadata.
    std::size_t steps = 0;
    double fold_factor = 1.0;
    bool pruned = false;
    /// OTOC circuits only: layers [0, forward_layers) hold (U_F)^n.
    std::size_t forward_layers = 0;
    bool otoc = false;
    bool butterfly_inserted = false;
    Qubit butterfly = 0;

    std::size_t gate_count() const;
    /// Two-qubit gate applications, counting folded copies.
    std::size_t two_qubit_gate_count() const;

    /// Throws std::invalid_argument on out-of-range qubits, overlapping supports within a layer,
    /// non-finite angles, or malformed step boundaries.
    void validate() const;
};

/// Reversed layers of adjoint gates, with mirrored step boundaries.
Circuit adjoint(const Circuit &circ);

/**
 * One Floquet period: RX(bxt[i]) on every qubit, RZ(bzt) on every qubit, then one RZZ(jt) layer
 * per edge layer of the (colored) graph. Represents exp(-i H_Z / 2) exp(-i H_X / 2).
 */
Circuit build_floquet_step(const CouplingGraph &graph, const ModelParams &params, const DisorderRealization &real);

/// (U_F^dagger)^n O (U_F)^n with O = X_butterfly when insert_butterfly, identity otherwise.
Circuit build_otoc_circuit(const Circuit &step, std::size_t n, Qubit butterfly, bool insert_butterfly);

/**
 * Drops gates of the forward half that lie outside the backward light cone of the butterfly
 * qubit and rebuilds the backward half as the adjoint of what remains. The cone is tracked per
 * Floquet period: the support of period k (counting back from the butterfly) is the support of
 * period k+1 widened by one hop along that period's RZZ gates, and a gate is kept when all of
 * its qubits lie in that support.
 */
Circuit prune_causal_cone(const Circuit &circ, Qubit butterfly);

/**
 * Folds each two-qubit gate G -> G G^dagger G independently so that the expected number of
 * applications per gate is f: floor(s) folds plus one more with probability frac(s), where
 * s = (f - 1) / 2. Deterministic for a given seed. Throws std::invalid_argument for f < 1.
 */
Circuit fold_gates(const Circuit &circ, double f, std::uint64_t rng_seed);

/// Two-qubit gates in the pruned OTOC circuit (both halves) for `n` periods of `step`.
std::size_t count_lightcone_gates(const Circuit &step, std::size_t n, Qubit butterfly);

nlohmann::json circuit_to_json(const Circuit &circ);
Circuit circuit_from_json(const nlohmann::json &j);

}  // namespace mbl
