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
 * @file lattice.hpp
 * @brief Qubit coupling graphs: heavy-hex patches, edge-list I/O, edge coloring, hop distances.
 *
 * A CouplingGraph is immutable once built. color_edges() returns a new graph with the
 * edge layers populated; every layer is a matching, and the layers partition the edge set.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace mbl {

using Qubit = std::uint32_t;

/// Undirected coupling, stored with a < b.
struct Edge {
    Qubit a = 0;
    Qubit b = 0;

    friend bool operator==(const Edge &, const Edge &) = default;
    friend auto operator<=>(const Edge &, const Edge &) = default;
};

struct Coord {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Coord &, const Coord &) = default;
};

/// Raised for malformed graphs and for refused operations (e.g. coloring a non-bipartite graph).
class GraphError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class CouplingGraph {
   public:
    CouplingGraph() = default;

    /// Validates endpoints, self-loops and duplicates. Edge order is preserved; endpoints are
    /// normalized so that a < b.
    CouplingGraph(std::size_t num_qubits, std::vector<Edge> edges);

    std::size_t num_qubits() const { return num_qubits_; }
    std::span<const Edge> edges() const { return edges_; }
    std::span<const Qubit> neighbors(Qubit q) const { return adjacency_.at(q); }
    std::size_t degree(Qubit q) const { return adjacency_.at(q).size(); }
    std::size_t max_degree() const;

    /// Each layer lists indices into edges(). Empty until color_edges() has run.
    const std::vector<std::vector<std::size_t>> &edge_layers() const { return layers_; }
    bool is_colored() const { return !edges_.empty() && !layers_.empty(); }

    const std::optional<std::vector<Coord>> &coords() const { return coords_; }
    void set_coords(std::vector<Coord> coords);

    /// Layers must be disjoint matchings covering every edge exactly once.
    void set_edge_layers(std::vector<std::vector<std::size_t>> layers);

    /// Edge sets and layers compare equal; coordinates are ignored.
    bool same_topology(const CouplingGraph &other) const;

   private:
    std::size_t num_qubits_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Qubit>> adjacency_;
    std::vector<std::vector<std::size_t>> layers_;
    std::optional<std::vector<Coord>> coords_;
};

/**
 * Heavy-hex patch of rows x cols hexagonal plaquettes, indexed row-major over horizontal qubit
 * lines and the bridge qubits that follow each line.
 *
 * A single plaquette row is the bare strip: two lines of 4*cols+1 qubits joined by cols+1
 * bridges (so 1x1 is one 12-qubit ring). Two or more rows follow the Heron register window:
 * rows+1 lines of 4*(cols+1) qubits, each followed by a group of cols+1 bridges whose columns
 * alternate between 3 mod 4 and 1 mod 4; the last group dangles. The 2x3 patch is the 60-qubit
 * window formed by device qubits 0..59.
 */
CouplingGraph build_heavy_hex(std::size_t rows, std::size_t cols);

/// Parses whitespace-separated integer pairs. N is 1 + the largest index.
CouplingGraph parse_edge_list(std::istream &in);
CouplingGraph load_graph(const std::filesystem::path &path);
void write_edge_list(std::ostream &out, const CouplingGraph &graph);

/// Proper edge coloring with max_degree() colors (bipartite, degree <= 3), via alternating-path
/// recoloring. Throws GraphError otherwise.
CouplingGraph color_edges(CouplingGraph graph);

bool is_bipartite(const CouplingGraph &graph);
bool is_connected(const CouplingGraph &graph);

/// BFS hop counts from `source`; unreachable qubits get -1.
std::vector<int> distances_from(const CouplingGraph &graph, Qubit source);

/// Shortest-path hop count. Throws GraphError for disconnected pairs or invalid qubits.
std::size_t distance(const CouplingGraph &graph, Qubit a, Qubit b);

/// Subgraph induced by `vertices`, relabeled 0..k-1 in the given order. Coordinates carry over.
CouplingGraph induced_subgraph(const CouplingGraph &graph, std::span<const Qubit> vertices);

/// {num_qubits, edges, layers, coords}
nlohmann::json graph_to_json(const CouplingGraph &graph);
CouplingGraph graph_from_json(const nlohmann::json &j);

}  // namespace mbl
