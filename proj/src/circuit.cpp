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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mbl/random.hpp"

namespace mbl {

std::string_view gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::RX:
            return "RX";
        case GateKind::RZ:
            return "RZ";
        case GateKind::RZZ:
            return "RZZ";
        case GateKind::X:
            return "X";
        case GateKind::IDLE:
            return "IDLE";
    }
    return "?";
}

GateKind gate_kind_from_name(std::string_view name) {
    for (auto k : {GateKind::RX, GateKind::RZ, GateKind::RZZ, GateKind::X, GateKind::IDLE}) {
        if (gate_kind_name(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown gate kind '" + std::string(name) + "'");
}

Gate Gate::adjoint() const {
    Gate g = *this;
    if (kind == GateKind::RX || kind == GateKind::RZ || kind == GateKind::RZZ) {
        g.angle = -angle;
    }
    return g;
}

std::size_t Circuit::gate_count() const {
    std::size_t count = 0;
    for (const auto &layer : layers) {
        count += layer.gates.size();
    }
    return count;
}

std::size_t Circuit::two_qubit_gate_count() const {
    std::size_t count = 0;
    for (const auto &layer : layers) {
        for (const auto &g : layer.gates) {
            if (g.is_two_qubit()) {
                count += 1 + 2 * static_cast<std::size_t>(g.folds);
            }
        }
    }
    return count;
}

void Circuit::validate() const {
    for (std::size_t l = 0; l < layers.size(); ++l) {
        std::vector<bool> busy(n_qubits, false);
        for (const auto &g : layers[l].gates) {
            if (!std::isfinite(g.angle)) {
                throw std::invalid_argument("non-finite gate angle in layer " + std::to_string(l));
            }
            if (g.is_two_qubit() && g.qubits[0] == g.qubits[1]) {
                throw std::invalid_argument("RZZ on a single qubit in layer " + std::to_string(l));
            }
            for (std::size_t k = 0; k < g.arity(); ++k) {
                const Qubit q = g.qubits[k];
                if (q >= n_qubits) {
                    throw std::invalid_argument("gate qubit " + std::to_string(q) + " out of range in layer " +
                                                std::to_string(l));
                }
                if (busy[q]) {
                    throw std::invalid_argument("overlapping gate supports in layer " + std::to_string(l));
                }
                busy[q] = true;
            }
        }
    }
    std::size_t prev = 0;
    for (auto b : step_boundaries) {
        if (b < prev || b > layers.size()) {
            throw std::invalid_argument("malformed step boundaries");
        }
        prev = b;
    }
}

namespace {

void append(Circuit &dst, const Circuit &src) {
    const std::size_t offset = dst.layers.size();
    dst.layers.insert(dst.layers.end(), src.layers.begin(), src.layers.end());
    for (auto b : src.step_boundaries) {
        dst.step_boundaries.push_back(offset + b);
    }
    dst.steps += src.steps;
}

}  // namespace

Circuit adjoint(const Circuit &circ) {
    Circuit out = circ;
    out.layers.assign(circ.layers.rbegin(), circ.layers.rend());
    for (auto &layer : out.layers) {
        for (auto &g : layer.gates) {
            g = g.adjoint();
        }
    }
    // A period ending after layer b in the original starts at layer L - b of the reverse.
    const std::size_t total = circ.layers.size();
    out.step_boundaries.clear();
    std::vector<std::size_t> starts{0};
    starts.insert(starts.end(), circ.step_boundaries.begin(), circ.step_boundaries.end());
    if (!circ.step_boundaries.empty()) {
        starts.pop_back();
    }
    for (auto it = starts.rbegin(); it != starts.rend() && !circ.step_boundaries.empty(); ++it) {
        out.step_boundaries.push_back(total - *it);
    }
    out.otoc = false;
    out.forward_layers = 0;
    out.butterfly_inserted = false;
    return out;
}

Circuit build_floquet_step(const CouplingGraph &graph, const ModelParams &params, const DisorderRealization &real) {
    params.validate();
    const std::size_t n = graph.num_qubits();
    if (real.bxt.size() != n) {
        throw std::invalid_argument("realization has " + std::to_string(real.bxt.size()) + " sites, graph has " +
                                    std::to_string(n));
    }
    if (!graph.is_colored() && !graph.edges().empty()) {
        throw std::invalid_argument("build_floquet_step: graph edges are not colored");
    }
    Circuit c;
    c.n_qubits = n;
    Layer x_layer;
    Layer z_layer;
    for (Qubit q = 0; q < n; ++q) {
        x_layer.gates.push_back(Gate::rx(q, real.bxt[q]));
        z_layer.gates.push_back(Gate::rz(q, params.bzt));
    }
    c.layers.push_back(std::move(x_layer));
    c.layers.push_back(std::move(z_layer));
    const auto edges = graph.edges();
    for (const auto &indices : graph.edge_layers()) {
        Layer zz;
        for (auto e : indices) {
            zz.gates.push_back(Gate::rzz(edges[e].a, edges[e].b, params.jt));
        }
        c.layers.push_back(std::move(zz));
    }
    c.steps = 1;
    c.step_boundaries = {c.layers.size()};
    c.validate();
    return c;
}

Circuit build_otoc_circuit(const Circuit &step, std::size_t n, Qubit butterfly, bool insert_butterfly) {
    if (butterfly >= step.n_qubits) {
        throw std::invalid_argument("butterfly qubit " + std::to_string(butterfly) + " outside circuit of " +
                                    std::to_string(step.n_qubits) + " qubits");
    }
    Circuit forward;
    forward.n_qubits = step.n_qubits;
    for (std::size_t k = 0; k < n; ++k) {
        append(forward, step);
    }
    Circuit out;
    out.n_qubits = step.n_qubits;
    append(out, forward);
    if (insert_butterfly) {
        out.layers.push_back(Layer{{Gate::x(butterfly)}});
    }
    append(out, adjoint(forward));
    out.otoc = true;
    out.forward_layers = forward.layers.size();
    out.butterfly_inserted = insert_butterfly;
    out.butterfly = butterfly;
    return out;
}

Circuit prune_causal_cone(const Circuit &circ, Qubit butterfly) {
    if (!circ.otoc) {
        throw std::invalid_argument("prune_causal_cone expects a circuit from build_otoc_circuit");
    }
    if (butterfly >= circ.n_qubits) {
        throw std::invalid_argument("butterfly qubit out of range");
    }
    // Period boundaries of the forward half.
    std::vector<std::size_t> bounds{0};
    for (auto b : circ.step_boundaries) {
        if (b <= circ.forward_layers) {
            bounds.push_back(b);
        }
    }
    if (bounds.back() != circ.forward_layers) {
        bounds.push_back(circ.forward_layers);
    }

    std::vector<bool> support(circ.n_qubits, false);
    support[butterfly] = true;
    std::vector<std::vector<Layer>> kept_periods(bounds.size() - 1);
    for (std::size_t p = bounds.size() - 1; p-- > 0;) {
        const std::size_t begin = bounds[p];
        const std::size_t end = bounds[p + 1];
        std::vector<bool> widened = support;
        for (std::size_t l = begin; l < end; ++l) {
            for (const auto &g : circ.layers[l].gates) {
                if (g.is_two_qubit() && (support[g.qubits[0]] || support[g.qubits[1]])) {
                    widened[g.qubits[0]] = widened[g.qubits[1]] = true;
                }
            }
        }
        for (std::size_t l = begin; l < end; ++l) {
            Layer layer;
            for (const auto &g : circ.layers[l].gates) {
                bool inside = widened[g.qubits[0]];
                if (g.is_two_qubit()) {
                    inside = inside && widened[g.qubits[1]];
                }
                if (inside) {
                    layer.gates.push_back(g);
                }
            }
            if (!layer.gates.empty()) {
                kept_periods[p].push_back(std::move(layer));
            }
        }
        support = std::move(widened);
    }

    Circuit forward;
    forward.n_qubits = circ.n_qubits;
    for (auto &period : kept_periods) {
        forward.layers.insert(forward.layers.end(), period.begin(), period.end());
        forward.step_boundaries.push_back(forward.layers.size());
        ++forward.steps;
    }

    Circuit out;
    out.n_qubits = circ.n_qubits;
    append(out, forward);
    if (circ.butterfly_inserted) {
        out.layers.push_back(Layer{{Gate::x(butterfly)}});
    }
    append(out, adjoint(forward));
    out.otoc = true;
    out.pruned = true;
    out.forward_layers = forward.layers.size();
    out.butterfly_inserted = circ.butterfly_inserted;
    out.butterfly = butterfly;
    out.fold_factor = circ.fold_factor;
    return out;
}

Circuit fold_gates(const Circuit &circ, double f, std::uint64_t rng_seed) {
    if (!(f >= 1.0) || !std::isfinite(f)) {
        throw std::invalid_argument("fold_gates: noise factor must be >= 1");
    }
    const double s = (f - 1.0) / 2.0;
    const double whole = std::floor(s);
    const double frac = s - whole;
    if (whole + 1 > 255) {
        throw std::invalid_argument("fold_gates: noise factor too large");
    }
    auto rng = make_stream(StreamDomain::Folding, rng_seed);
    Circuit out = circ;
    for (auto &layer : out.layers) {
        for (auto &g : layer.gates) {
            if (!g.is_two_qubit()) {
                continue;
            }
            auto folds = static_cast<unsigned>(whole);
            if (frac > 0.0 && uniform01(rng) < frac) {
                ++folds;
            }
            g.folds = static_cast<std::uint8_t>(std::min(255u, g.folds + folds));
        }
    }
    out.fold_factor = circ.fold_factor * f;
    return out;
}

std::size_t count_lightcone_gates(const Circuit &step, std::size_t n, Qubit butterfly) {
    return prune_causal_cone(build_otoc_circuit(step, n, butterfly, true), butterfly).two_qubit_gate_count();
}

nlohmann::json circuit_to_json(const Circuit &circ) {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto &layer : circ.layers) {
        nlohmann::json gates = nlohmann::json::array();
        for (const auto &g : layer.gates) {
            nlohmann::json jg{{"kind", gate_kind_name(g.kind)}};
            if (g.is_two_qubit()) {
                jg["qubits"] = {g.qubits[0], g.qubits[1]};
            } else {
                jg["qubits"] = {g.qubits[0]};
            }
            if (g.kind == GateKind::RX || g.kind == GateKind::RZ || g.kind == GateKind::RZZ) {
                jg["angle"] = g.angle;
            }
            if (g.folds > 0) {
                jg["folds"] = g.folds;
            }
            gates.push_back(std::move(jg));
        }
        layers.push_back(std::move(gates));
    }
    return {{"n_qubits", circ.n_qubits},
            {"steps", circ.steps},
            {"fold_factor", circ.fold_factor},
            {"pruned", circ.pruned},
            {"otoc", circ.otoc},
            {"forward_layers", circ.forward_layers},
            {"butterfly_inserted", circ.butterfly_inserted},
            {"butterfly", circ.butterfly},
            {"step_boundaries", circ.step_boundaries},
            {"layers", std::move(layers)}};
}

Circuit circuit_from_json(const nlohmann::json &j) {
    Circuit c;
    c.n_qubits = j.at("n_qubits").get<std::size_t>();
    c.steps = j.value("steps", std::size_t{0});
    c.fold_factor = j.value("fold_factor", 1.0);
    c.pruned = j.value("pruned", false);
    c.otoc = j.value("otoc", false);
    c.forward_layers = j.value("forward_layers", std::size_t{0});
    c.butterfly_inserted = j.value("butterfly_inserted", false);
    c.butterfly = j.value("butterfly", Qubit{0});
    c.step_boundaries = j.value("step_boundaries", std::vector<std::size_t>{});
    for (const auto &jl : j.at("layers")) {
        Layer layer;
        for (const auto &jg : jl) {
            Gate g;
            g.kind = gate_kind_from_name(jg.at("kind").get<std::string>());
            const auto &qs = jg.at("qubits");
            g.qubits[0] = qs.at(0).get<Qubit>();
            g.qubits[1] = qs.size() > 1 ? qs.at(1).get<Qubit>() : g.qubits[0];
            g.angle = jg.value("angle", 0.0);
            g.folds = jg.value("folds", std::uint8_t{0});
            layer.gates.push_back(g);
        }
        c.layers.push_back(std::move(layer));
    }
    c.validate();
    return c;
}

}  // namespace mbl
