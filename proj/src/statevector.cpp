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

#include "mbl/statevector.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mbl {

namespace {

constexpr Amplitude kI{0.0, 1.0};

void check_qubit(const StateVector &state, Qubit q) {
    if (q >= state.n_qubits()) {
        throw std::out_of_range("qubit " + std::to_string(q) + " out of range for " +
                                std::to_string(state.n_qubits()) + "-qubit state");
    }
}

// Calls body(i0, i1) for every index pair differing only in bit q.
template <typename Body>
inline void for_each_pair(std::span<Amplitude> amps, Qubit q, Body body) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t dim = amps.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t j = base; j < base + stride; ++j) {
            body(amps[j], amps[j + stride]);
        }
    }
}

void apply_rx(std::span<Amplitude> amps, Qubit q, double angle) {
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    const Amplitude mis{0.0, -s};
    for_each_pair(amps, q, [&](Amplitude &a0, Amplitude &a1) {
        const Amplitude t0 = a0;
        const Amplitude t1 = a1;
        a0 = c * t0 + mis * t1;
        a1 = mis * t0 + c * t1;
    });
}

void apply_rz(std::span<Amplitude> amps, Qubit q, double angle) {
    const Amplitude p0 = std::polar(1.0, -angle / 2);
    const Amplitude p1 = std::polar(1.0, angle / 2);
    for_each_pair(amps, q, [&](Amplitude &a0, Amplitude &a1) {
        a0 *= p0;
        a1 *= p1;
    });
}

void apply_rzz(std::span<Amplitude> amps, Qubit a, Qubit b, double angle) {
    const Amplitude even = std::polar(1.0, -angle / 2);
    const Amplitude odd = std::polar(1.0, angle / 2);
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const auto bits = i & mask;
        const bool parity_odd = bits != 0 && bits != mask;
        amps[i] *= parity_odd ? odd : even;
    }
}

}  // namespace

StateVector::StateVector(std::size_t n_qubits, std::size_t max_qubits) : n_qubits_(n_qubits) {
    if (n_qubits > max_qubits) {
        throw std::length_error("state of " + std::to_string(n_qubits) + " qubits exceeds the cap of " +
                                std::to_string(max_qubits));
    }
    amps_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector StateVector::basis(std::size_t n_qubits, std::uint64_t index, std::size_t max_qubits) {
    StateVector s(n_qubits, max_qubits);
    s.set_basis(index);
    return s;
}

void StateVector::set_basis(std::uint64_t index) {
    if (index >= amps_.size()) {
        throw std::out_of_range("basis index out of range");
    }
    std::fill(amps_.begin(), amps_.end(), Amplitude{0.0, 0.0});
    amps_[index] = 1.0;
}

double StateVector::norm() const {
    double total = 0.0;
    for (const auto &a : amps_) {
        total += std::norm(a);
    }
    return std::sqrt(total);
}

void apply_gate(StateVector &state, const Gate &gate) {
    check_qubit(state, gate.qubits[0]);
    if (gate.is_two_qubit()) {
        check_qubit(state, gate.qubits[1]);
    }
    auto amps = state.amplitudes();
    switch (gate.kind) {
        case GateKind::RX:
            apply_rx(amps, gate.qubits[0], gate.angle);
            break;
        case GateKind::RZ:
            apply_rz(amps, gate.qubits[0], gate.angle);
            break;
        case GateKind::RZZ:
            apply_rzz(amps, gate.qubits[0], gate.qubits[1], gate.angle);
            break;
        case GateKind::X:
            apply_pauli(state, gate.qubits[0], Pauli::X);
            break;
        case GateKind::IDLE:
            break;
    }
    assert(std::abs(state.norm() - 1.0) < 1e-10);
}

void apply_pauli(StateVector &state, Qubit q, Pauli p) {
    check_qubit(state, q);
    auto amps = state.amplitudes();
    switch (p) {
        case Pauli::I:
            break;
        case Pauli::X:
            for_each_pair(amps, q, [](Amplitude &a0, Amplitude &a1) { std::swap(a0, a1); });
            break;
        case Pauli::Y:
            for_each_pair(amps, q, [](Amplitude &a0, Amplitude &a1) {
                const Amplitude t0 = a0;
                a0 = -kI * a1;
                a1 = kI * t0;
            });
            break;
        case Pauli::Z:
            for_each_pair(amps, q, [](Amplitude &, Amplitude &a1) { a1 = -a1; });
            break;
    }
}

void apply_layers(StateVector &state, const Circuit &circ, std::size_t first_layer, std::size_t last_layer) {
    for (std::size_t l = first_layer; l < last_layer; ++l) {
        for (const auto &g : circ.layers[l].gates) {
            apply_gate(state, g);
        }
    }
}

void apply_circuit(StateVector &state, const Circuit &circ) {
    if (circ.n_qubits != state.n_qubits()) {
        throw std::invalid_argument("circuit/state qubit count mismatch");
    }
    apply_layers(state, circ, 0, circ.layers.size());
}

double expectation_z(const StateVector &state, Qubit m) {
    check_qubit(state, m);
    const auto amps = state.amplitudes();
    const std::size_t bit = std::size_t{1} << m;
    double total = 0.0;
    double ones = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        total += p;
        if (i & bit) {
            ones += p;
        }
    }
    return total - 2.0 * ones;
}

std::vector<double> expectation_z_all(const StateVector &state) {
    const std::size_t n = state.n_qubits();
    const auto amps = state.amplitudes();
    std::vector<double> ones(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        total += p;
        for (std::size_t q = 0; q < n; ++q) {
            if ((i >> q) & 1U) {
                ones[q] += p;
            }
        }
    }
    std::vector<double> z(n);
    for (std::size_t q = 0; q < n; ++q) {
        z[q] = total - 2.0 * ones[q];
    }
    return z;
}

}  // namespace mbl
