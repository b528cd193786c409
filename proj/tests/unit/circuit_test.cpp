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
#include "mbl/circuit.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "mbl/random.hpp"
#include "mbl/statevector.hpp"
#include "oracle.hpp"

using namespace mbl;

namespace {

// Connected window of the 12-ring: a path of `k` qubits.
CouplingGraph ring_path(std::size_t k) {
    const auto ring = build_heavy_hex(1, 1);
    std::vector<Qubit> verts{0};
    while (verts.size() < k) {
        for (Qubit nb : ring.neighbors(verts.back())) {
            if (std::find(verts.begin(), verts.end(), nb) == verts.end()) {
                verts.push_back(nb);
                break;
            }
        }
    }
    return color_edges(induced_subgraph(ring, verts));
}

oracle::Mat circuit_matrix(const Circuit &c) {
    const std::size_t dim = std::size_t{1} << c.n_qubits;
    oracle::Mat m(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        auto s = StateVector::basis(c.n_qubits, col);
        apply_circuit(s, c);
        for (std::size_t row = 0; row < dim; ++row) {
            m(row, col) = s.amplitudes()[row];
        }
    }
    return m;
}

ModelParams disordered(double w) {
    ModelParams p;
    p.w = w;
    return p;
}

}  // namespace

TEST(FloquetStep, LayerStructure) {
    const auto g = color_edges(build_heavy_hex(1, 2));
    const auto real = sample_disorder(disordered(0.3), g.num_qubits(), 1, 0);
    const auto step = build_floquet_step(g, disordered(0.3), real);
    ASSERT_EQ(step.layers.size(), 2 + g.edge_layers().size());
    EXPECT_EQ(step.layers[0].gates.size(), g.num_qubits());
    EXPECT_EQ(step.layers[1].gates.size(), g.num_qubits());
    EXPECT_EQ(step.two_qubit_gate_count(), g.edges().size());
    EXPECT_EQ(step.step_boundaries, std::vector<std::size_t>{step.layers.size()});
    for (std::size_t q = 0; q < g.num_qubits(); ++q) {
        EXPECT_EQ(step.layers[0].gates[q].kind, GateKind::RX);
        EXPECT_EQ(step.layers[0].gates[q].angle, real.bxt[q]);
        EXPECT_EQ(step.layers[1].gates[q].angle, 1.3);
    }
}

TEST(FloquetStep, EqualsMatrixExponential) {
    for (std::size_t k : {3, 5}) {
        const auto g = ring_path(k);
        const auto p = disordered(0.4);
        const auto real = sample_disorder(p, k, 3, 1);
        const auto step = build_floquet_step(g, p, real);
        const auto expected = oracle::floquet_unitary(g, p, real.bxt);
        EXPECT_LT((circuit_matrix(step) - expected).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(FloquetStep, RequiresColoringAndMatchingRealization) {
    const auto raw = build_heavy_hex(1, 1);
    const auto real = sample_disorder(ModelParams{}, 12, 0, 0);
    EXPECT_THROW(build_floquet_step(raw, ModelParams{}, real), std::invalid_argument);
    const auto g = color_edges(raw);
    const auto short_real = sample_disorder(ModelParams{}, 5, 0, 0);
    EXPECT_THROW(build_floquet_step(g, ModelParams{}, short_real), std::invalid_argument);
}

TEST(Adjoint, UndoesTheCircuit) {
    const auto g = ring_path(5);
    const auto p = disordered(0.2);
    const auto step = build_floquet_step(g, p, sample_disorder(p, 5, 0, 0));
    const auto fwd = build_otoc_circuit(step, 3, 0, false);  // U^dag U
    EXPECT_LT((circuit_matrix(fwd) - oracle::Mat::Identity(32, 32)).cwiseAbs().maxCoeff(), 1e-12);
    const auto twice = adjoint(adjoint(step));
    EXPECT_EQ(twice.layers, step.layers);
    EXPECT_EQ(twice.step_boundaries, step.step_boundaries);
    EXPECT_LT((circuit_matrix(adjoint(step)) - circuit_matrix(step).adjoint()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(OtocCircuit, Layout) {
    const auto g = ring_path(4);
    const auto step = build_floquet_step(g, ModelParams{}, sample_disorder(ModelParams{}, 4, 0, 0));
    const std::size_t L = step.layers.size();
    const auto c = build_otoc_circuit(step, 3, 1, true);
    EXPECT_EQ(c.layers.size(), 2 * 3 * L + 1);
    EXPECT_EQ(c.forward_layers, 3 * L);
    EXPECT_EQ(c.step_boundaries.size(), 6u);
    EXPECT_EQ(c.layers[3 * L].gates, std::vector<Gate>{Gate::x(1)});
    EXPECT_TRUE(c.otoc);
    EXPECT_TRUE(c.butterfly_inserted);
    EXPECT_THROW(build_otoc_circuit(step, 2, 9, true), std::invalid_argument);
    const auto id = build_otoc_circuit(step, 3, 1, false);
    EXPECT_EQ(id.layers.size(), 2 * 3 * L);
}

TEST(Pruning, KeepsExpectationValues) {
    const auto g = color_edges(build_heavy_hex(1, 1));
    const auto p = disordered(0.3);
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto step = build_floquet_step(g, p, sample_disorder(p, 12, 4, n));
        for (bool insert : {true, false}) {
            const auto full = build_otoc_circuit(step, n, 0, insert);
            const auto pruned = prune_causal_cone(full, 0);
            EXPECT_TRUE(pruned.pruned);
            EXPECT_LE(pruned.gate_count(), full.gate_count());
            StateVector a(12), b(12);
            apply_circuit(a, full);
            apply_circuit(b, pruned);
            const auto za = expectation_z_all(a);
            const auto zb = expectation_z_all(b);
            for (Qubit m = 0; m < 12; ++m) {
                EXPECT_NEAR(za[m], zb[m], 1e-12) << "n=" << n << " m=" << m;
            }
        }
    }
}

TEST(Pruning, GateCountMatchesBallCount) {
    // Period k (counting back from the butterfly, k = 1..n) keeps exactly the couplings with
    // both ends within k hops; both halves are counted.
    const auto g = color_edges(build_heavy_hex(2, 2));
    const Qubit b = 7;
    const auto d = oracle::floyd_warshall(g);
    const auto step = build_floquet_step(g, ModelParams{}, sample_disorder(ModelParams{}, g.num_qubits(), 0, 0));
    for (std::size_t n = 1; n <= 6; ++n) {
        std::size_t expected = 0;
        for (std::size_t k = 1; k <= n; ++k) {
            for (const auto &e : g.edges()) {
                if (d[b][e.a] <= static_cast<int>(k) && d[b][e.b] <= static_cast<int>(k)) {
                    expected += 2;
                }
            }
        }
        EXPECT_EQ(count_lightcone_gates(step, n, b), expected) << "n=" << n;
    }
}

TEST(Pruning, RejectsNonOtocCircuits) {
    const auto g = ring_path(3);
    const auto step = build_floquet_step(g, ModelParams{}, sample_disorder(ModelParams{}, 3, 0, 0));
    EXPECT_THROW(prune_causal_cone(step, 0), std::invalid_argument);
}

TEST(Folding, PreservesTheUnitary) {
    const auto g = ring_path(4);
    const auto p = disordered(0.3);
    const auto c = build_otoc_circuit(build_floquet_step(g, p, sample_disorder(p, 4, 0, 0)), 2, 0, true);
    const auto folded = fold_gates(c, 3.0, 11);
    EXPECT_EQ(folded.gate_count(), c.gate_count());
    EXPECT_EQ(folded.two_qubit_gate_count(), 3 * c.two_qubit_gate_count());
    EXPECT_DOUBLE_EQ(folded.fold_factor, 3.0);
    EXPECT_LT((circuit_matrix(folded) - circuit_matrix(c)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Folding, FractionalFactorOnAverage) {
    const auto g = color_edges(build_heavy_hex(2, 3));
    const auto step = build_floquet_step(g, ModelParams{}, sample_disorder(ModelParams{}, 60, 0, 0));
    const auto c = build_otoc_circuit(step, 10, 0, true);
    const double base = static_cast<double>(c.two_qubit_gate_count());
    double total = 0.0;
    const int reps = 20;
    for (int r = 0; r < reps; ++r) {
        total += static_cast<double>(fold_gates(c, 1.5, r).two_qubit_gate_count());
    }
    // Each gate gains 2 applications with probability 1/4.
    const double sd = 2.0 * std::sqrt(0.25 * 0.75 * base * reps);
    EXPECT_NEAR(total / reps, 1.5 * base, 5.0 * sd / reps);
}

TEST(Folding, UnitFactorAndErrors) {
    const auto g = ring_path(3);
    const auto c = build_floquet_step(g, ModelParams{}, sample_disorder(ModelParams{}, 3, 0, 0));
    EXPECT_EQ(fold_gates(c, 1.0, 5).layers, c.layers);
    EXPECT_THROW(fold_gates(c, 0.5, 5), std::invalid_argument);
    EXPECT_THROW(fold_gates(c, std::nan(""), 5), std::invalid_argument);
    EXPECT_EQ(fold_gates(c, 1.7, 5).layers, fold_gates(c, 1.7, 5).layers);
}

TEST(CircuitJson, RoundTrip) {
    const auto g = ring_path(5);
    const auto p = disordered(0.1);
    const auto c = fold_gates(
        prune_causal_cone(build_otoc_circuit(build_floquet_step(g, p, sample_disorder(p, 5, 0, 0)), 3, 2, true), 2),
        2.2, 4);
    const auto back = circuit_from_json(circuit_to_json(c));
    EXPECT_EQ(back.layers, c.layers);
    EXPECT_EQ(back.step_boundaries, c.step_boundaries);
    EXPECT_EQ(back.forward_layers, c.forward_layers);
    EXPECT_EQ(back.pruned, c.pruned);
    EXPECT_EQ(circuit_to_json(back), circuit_to_json(c));
}

TEST(CircuitValidate, Rejects) {
    Circuit c;
    c.n_qubits = 2;
    c.layers = {Layer{{Gate::rx(0, 0.1), Gate::rzz(0, 1, 0.2)}}};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.layers = {Layer{{Gate::rx(2, 0.1)}}};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.layers = {Layer{{Gate::rzz(1, 1, 0.1)}}};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.layers = {Layer{{Gate::rx(0, std::nan(""))}}};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.layers = {Layer{{Gate::rx(0, 0.1)}}};
    c.step_boundaries = {2};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    EXPECT_EQ(gate_kind_from_name("RZZ"), GateKind::RZZ);
    EXPECT_THROW(gate_kind_from_name("CNOT"), std::invalid_argument);
}
