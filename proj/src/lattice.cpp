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

#include "mbl/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <set>
#include <string>

namespace mbl {

CouplingGraph::CouplingGraph(std::size_t num_qubits, std::vector<Edge> edges)
    : num_qubits_(num_qubits), edges_(std::move(edges)), adjacency_(num_qubits) {
    std::set<Edge> seen;
    for (auto &e : edges_) {
        if (e.a == e.b) {
            throw GraphError("self-loop on qubit " + std::to_string(e.a));
        }
        if (e.a > e.b) {
            std::swap(e.a, e.b);
        }
        if (e.b >= num_qubits_) {
            throw GraphError("edge (" + std::to_string(e.a) + "," + std::to_string(e.b) + ") outside [0, " +
                             std::to_string(num_qubits_) + ")");
        }
        if (!seen.insert(e).second) {
            throw GraphError("duplicate edge (" + std::to_string(e.a) + "," + std::to_string(e.b) + ")");
        }
        adjacency_[e.a].push_back(e.b);
        adjacency_[e.b].push_back(e.a);
    }
    for (auto &nbrs : adjacency_) {
        std::sort(nbrs.begin(), nbrs.end());
    }
}

std::size_t CouplingGraph::max_degree() const {
    std::size_t d = 0;
    for (const auto &nbrs : adjacency_) {
        d = std::max(d, nbrs.size());
    }
    return d;
}

void CouplingGraph::set_coords(std::vector<Coord> coords) {
    if (coords.size() != num_qubits_) {
        throw GraphError("coordinate count " + std::to_string(coords.size()) + " != num_qubits " +
                         std::to_string(num_qubits_));
    }
    coords_ = std::move(coords);
}

void CouplingGraph::set_edge_layers(std::vector<std::vector<std::size_t>> layers) {
    std::vector<int> owner(edges_.size(), -1);
    for (std::size_t l = 0; l < layers.size(); ++l) {
        std::vector<bool> busy(num_qubits_, false);
        for (auto idx : layers[l]) {
            if (idx >= edges_.size()) {
                throw GraphError("edge layer references unknown edge " + std::to_string(idx));
            }
            if (owner[idx] != -1) {
                throw GraphError("edge " + std::to_string(idx) + " appears in more than one layer");
            }
            owner[idx] = static_cast<int>(l);
            const auto &e = edges_[idx];
            if (busy[e.a] || busy[e.b]) {
                throw GraphError("edge layer " + std::to_string(l) + " is not a matching");
            }
            busy[e.a] = busy[e.b] = true;
        }
    }
    if (std::find(owner.begin(), owner.end(), -1) != owner.end()) {
        throw GraphError("edge layers do not cover every edge");
    }
    layers_ = std::move(layers);
}

bool CouplingGraph::same_topology(const CouplingGraph &other) const {
    return num_qubits_ == other.num_qubits_ && edges_ == other.edges_ && layers_ == other.layers_;
}

CouplingGraph build_heavy_hex(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
        throw GraphError("heavy-hex patch needs rows >= 1 and cols >= 1");
    }
    std::vector<Edge> edges;
    std::vector<Coord> coords;
    Qubit next = 0;

    auto add_line = [&](std::size_t width, std::size_t line) {
        const Qubit base = next;
        for (std::size_t j = 0; j < width; ++j) {
            coords.push_back({static_cast<double>(j), -2.0 * static_cast<double>(line)});
            if (j > 0) {
                edges.push_back({base + static_cast<Qubit>(j - 1), base + static_cast<Qubit>(j)});
            }
        }
        next += static_cast<Qubit>(width);
        return base;
    };

    if (rows == 1) {
        const std::size_t width = 4 * cols + 1;
        const Qubit top = add_line(width, 0);
        std::vector<Qubit> bridges;
        for (std::size_t k = 0; k <= cols; ++k) {
            bridges.push_back(next++);
            coords.push_back({static_cast<double>(4 * k), -1.0});
        }
        const Qubit bottom = add_line(width, 1);
        for (std::size_t k = 0; k <= cols; ++k) {
            edges.push_back({top + static_cast<Qubit>(4 * k), bridges[k]});
            edges.push_back({bridges[k], bottom + static_cast<Qubit>(4 * k)});
        }
    } else {
        const std::size_t width = 4 * (cols + 1);
        std::vector<Qubit> line_base;
        std::vector<std::vector<std::pair<Qubit, std::size_t>>> groups;
        for (std::size_t g = 0; g <= rows; ++g) {
            line_base.push_back(add_line(width, g));
            std::vector<std::pair<Qubit, std::size_t>> group;
            const std::size_t offset = (g % 2 == 0) ? 3 : 1;
            for (std::size_t k = 0; k <= cols; ++k) {
                const std::size_t col = offset + 4 * k;
                group.emplace_back(next++, col);
                coords.push_back({static_cast<double>(col), -2.0 * static_cast<double>(g) - 1.0});
            }
            groups.push_back(std::move(group));
        }
        for (std::size_t g = 0; g <= rows; ++g) {
            for (const auto &[bridge, col] : groups[g]) {
                edges.push_back({line_base[g] + static_cast<Qubit>(col), bridge});
                if (g < rows) {
                    edges.push_back({bridge, line_base[g + 1] + static_cast<Qubit>(col)});
                }
            }
        }
    }

    CouplingGraph graph(next, std::move(edges));
    graph.set_coords(std::move(coords));
    return graph;
}

CouplingGraph parse_edge_list(std::istream &in) {
    std::vector<std::uint64_t> values;
    std::string token;
    while (in >> token) {
        std::uint64_t v = 0;
        const auto *first = token.data();
        const auto *last = token.data() + token.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) {
            throw GraphError("edge list: '" + token + "' is not a non-negative integer");
        }
        if (v > 0xffffffffULL) {
            throw GraphError("edge list: qubit index " + token + " out of range");
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw GraphError("edge list: no edges");
    }
    if (values.size() % 2 != 0) {
        throw GraphError("edge list: odd number of indices");
    }
    std::vector<Edge> edges;
    std::uint64_t max_index = 0;
    for (std::size_t i = 0; i < values.size(); i += 2) {
        edges.push_back({static_cast<Qubit>(values[i]), static_cast<Qubit>(values[i + 1])});
        max_index = std::max({max_index, values[i], values[i + 1]});
    }
    return CouplingGraph(static_cast<std::size_t>(max_index + 1), std::move(edges));
}

CouplingGraph load_graph(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw GraphError("cannot open edge list " + path.string());
    }
    return parse_edge_list(in);
}

void write_edge_list(std::ostream &out, const CouplingGraph &graph) {
    for (const auto &e : graph.edges()) {
        out << e.a << ' ' << e.b << '\n';
    }
}

bool is_bipartite(const CouplingGraph &graph) {
    std::vector<int> side(graph.num_qubits(), -1);
    for (Qubit s = 0; s < graph.num_qubits(); ++s) {
        if (side[s] != -1) {
            continue;
        }
        side[s] = 0;
        std::queue<Qubit> frontier;
        frontier.push(s);
        while (!frontier.empty()) {
            const Qubit u = frontier.front();
            frontier.pop();
            for (Qubit v : graph.neighbors(u)) {
                if (side[v] == -1) {
                    side[v] = 1 - side[u];
                    frontier.push(v);
                } else if (side[v] == side[u]) {
                    return false;
                }
            }
        }
    }
    return true;
}

std::vector<int> distances_from(const CouplingGraph &graph, Qubit source) {
    if (source >= graph.num_qubits()) {
        throw GraphError("qubit " + std::to_string(source) + " outside graph");
    }
    std::vector<int> dist(graph.num_qubits(), -1);
    dist[source] = 0;
    std::queue<Qubit> frontier;
    frontier.push(source);
    while (!frontier.empty()) {
        const Qubit u = frontier.front();
        frontier.pop();
        for (Qubit v : graph.neighbors(u)) {
            if (dist[v] == -1) {
                dist[v] = dist[u] + 1;
                frontier.push(v);
            }
        }
    }
    return dist;
}

bool is_connected(const CouplingGraph &graph) {
    if (graph.num_qubits() == 0) {
        return true;
    }
    const auto dist = distances_from(graph, 0);
    return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

std::size_t distance(const CouplingGraph &graph, Qubit a, Qubit b) {
    if (b >= graph.num_qubits()) {
        throw GraphError("qubit " + std::to_string(b) + " outside graph");
    }
    const int d = distances_from(graph, a)[b];
    if (d < 0) {
        throw GraphError("qubits " + std::to_string(a) + " and " + std::to_string(b) + " are disconnected");
    }
    return static_cast<std::size_t>(d);
}

CouplingGraph color_edges(CouplingGraph graph) {
    const std::size_t delta = graph.max_degree();
    if (delta > 3) {
        throw GraphError("edge coloring supports max degree <= 3, got " + std::to_string(delta));
    }
    if (!is_bipartite(graph)) {
        throw GraphError("edge coloring requires a bipartite graph");
    }
    const auto edges = graph.edges();
    constexpr int kFree = -1;
    // at[q][c] = index of the edge with color c touching q.
    std::vector<std::vector<int>> at(graph.num_qubits(), std::vector<int>(delta, kFree));
    std::vector<std::size_t> color(edges.size(), 0);

    auto first_free = [&](Qubit q) {
        for (std::size_t c = 0; c < delta; ++c) {
            if (at[q][c] == kFree) {
                return c;
            }
        }
        throw GraphError("edge coloring: no free color (degree bound violated)");
    };
    auto other_end = [&](std::size_t e, Qubit q) { return edges[e].a == q ? edges[e].b : edges[e].a; };

    for (std::size_t e = 0; e < edges.size(); ++e) {
        const Qubit u = edges[e].a;
        const Qubit v = edges[e].b;
        const std::size_t alpha = first_free(u);
        if (at[v][alpha] != kFree) {
            // Swap alpha/beta along the alternating path leaving v; bipartiteness keeps u off it.
            const std::size_t beta = first_free(v);
            std::vector<std::size_t> path;
            Qubit q = v;
            std::size_t want = alpha;
            while (at[q][want] != kFree) {
                const auto pe = static_cast<std::size_t>(at[q][want]);
                path.push_back(pe);
                q = other_end(pe, q);
                want = (want == alpha) ? beta : alpha;
            }
            for (auto pe : path) {
                at[edges[pe].a][color[pe]] = kFree;
                at[edges[pe].b][color[pe]] = kFree;
            }
            for (auto pe : path) {
                color[pe] = (color[pe] == alpha) ? beta : alpha;
                at[edges[pe].a][color[pe]] = static_cast<int>(pe);
                at[edges[pe].b][color[pe]] = static_cast<int>(pe);
            }
        }
        color[e] = alpha;
        at[u][alpha] = static_cast<int>(e);
        at[v][alpha] = static_cast<int>(e);
    }

    std::vector<std::vector<std::size_t>> layers(delta);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        layers[color[e]].push_back(e);
    }
    std::erase_if(layers, [](const auto &layer) { return layer.empty(); });
    graph.set_edge_layers(std::move(layers));
    return graph;
}

CouplingGraph induced_subgraph(const CouplingGraph &graph, std::span<const Qubit> vertices) {
    std::vector<int> relabel(graph.num_qubits(), -1);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i] >= graph.num_qubits()) {
            throw GraphError("qubit " + std::to_string(vertices[i]) + " outside graph");
        }
        if (relabel[vertices[i]] != -1) {
            throw GraphError("qubit " + std::to_string(vertices[i]) + " listed twice");
        }
        relabel[vertices[i]] = static_cast<int>(i);
    }
    std::vector<Edge> edges;
    for (const auto &e : graph.edges()) {
        if (relabel[e.a] >= 0 && relabel[e.b] >= 0) {
            edges.push_back({static_cast<Qubit>(relabel[e.a]), static_cast<Qubit>(relabel[e.b])});
        }
    }
    CouplingGraph sub(vertices.size(), std::move(edges));
    if (graph.coords()) {
        std::vector<Coord> coords;
        for (auto q : vertices) {
            coords.push_back((*graph.coords())[q]);
        }
        sub.set_coords(std::move(coords));
    }
    return sub;
}

nlohmann::json graph_to_json(const CouplingGraph &graph) {
    nlohmann::json j;
    j["num_qubits"] = graph.num_qubits();
    auto edges = nlohmann::json::array();
    for (const auto &e : graph.edges()) {
        edges.push_back({e.a, e.b});
    }
    j["edges"] = std::move(edges);
    j["layers"] = graph.edge_layers();
    if (graph.coords()) {
        auto coords = nlohmann::json::array();
        for (const auto &c : *graph.coords()) {
            coords.push_back({c.x, c.y});
        }
        j["coords"] = std::move(coords);
    } else {
        j["coords"] = nullptr;
    }
    return j;
}

CouplingGraph graph_from_json(const nlohmann::json &j) {
    try {
        std::vector<Edge> edges;
        for (const auto &e : j.at("edges")) {
            edges.push_back({e.at(0).get<Qubit>(), e.at(1).get<Qubit>()});
        }
        CouplingGraph graph(j.at("num_qubits").get<std::size_t>(), std::move(edges));
        if (j.contains("layers") && !j["layers"].empty()) {
            graph.set_edge_layers(j["layers"].get<std::vector<std::vector<std::size_t>>>());
        }
        if (j.contains("coords") && !j["coords"].is_null()) {
            std::vector<Coord> coords;
            for (const auto &c : j["coords"]) {
                coords.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
            }
            graph.set_coords(std::move(coords));
        }
        return graph;
    } catch (const nlohmann::json::exception &ex) {
        throw GraphError(std::string("graph JSON: ") + ex.what());
    }
}

}  // namespace mbl
