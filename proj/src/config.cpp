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
#include "mbl/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace mbl {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string &field, const std::string &msg) {
    throw ConfigError("field '" + field + "': " + msg);
}

void reject_unknown(const json &obj, const std::string &prefix, std::initializer_list<const char *> known) {
    for (const auto &[key, value] : obj.items()) {
        if (std::none_of(known.begin(), known.end(), [&](const char *k) { return key == k; })) {
            fail(prefix + key, "unknown field");
        }
    }
}

const json &require_object(const json &j, const std::string &field) {
    if (!j.is_object()) {
        fail(field, "expected an object");
    }
    return j;
}

double get_number(const json &obj, const char *key, const std::string &field, double fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const auto &v = obj.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
        fail(field, "expected a finite number");
    }
    return v.get<double>();
}

std::uint64_t get_count(const json &obj, const char *key, const std::string &field, std::uint64_t fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const auto &v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        fail(field, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::vector<double> get_numbers(const json &obj, const char *key, const std::string &field) {
    const auto &v = obj.at(key);
    if (!v.is_array() || v.empty()) {
        fail(field, "expected a non-empty array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
            fail(field + "[" + std::to_string(i) + "]", "expected a finite number");
        }
        out.push_back(v[i].get<double>());
    }
    return out;
}

LatticeSpec parse_lattice(const json &j, const std::filesystem::path &base_dir) {
    require_object(j, "lattice");
    reject_unknown(j, "lattice.", {"heavy_hex", "edge_list"});
    LatticeSpec spec;
    if (j.contains("heavy_hex") == j.contains("edge_list")) {
        fail("lattice", "give exactly one of heavy_hex or edge_list");
    }
    if (j.contains("heavy_hex")) {
        const auto &h = require_object(j.at("heavy_hex"), "lattice.heavy_hex");
        reject_unknown(h, "lattice.heavy_hex.", {"rows", "cols"});
        LatticeSpec::HeavyHex hh;
        hh.rows = get_count(h, "rows", "lattice.heavy_hex.rows", 1);
        hh.cols = get_count(h, "cols", "lattice.heavy_hex.cols", 1);
        if (hh.rows == 0 || hh.cols == 0) {
            fail("lattice.heavy_hex", "rows and cols must be positive");
        }
        spec.heavy_hex = hh;
    } else {
        if (!j.at("edge_list").is_string()) {
            fail("lattice.edge_list", "expected a path string");
        }
        std::filesystem::path p = j.at("edge_list").get<std::string>();
        if (p.is_relative()) {
            p = base_dir / p;
        }
        spec.edge_list = std::filesystem::absolute(p).lexically_normal();
    }
    return spec;
}

NoiseModel parse_noise(const json &j) {
    require_object(j, "noise");
    reject_unknown(j, "noise.", {"mode", "p2", "q_global"});
    NoiseModel noise;
    if (j.contains("mode")) {
        if (!j.at("mode").is_string()) {
            fail("noise.mode", "expected one of none|local|global");
        }
        try {
            noise.mode = noise_mode_from_name(j.at("mode").get<std::string>());
        } catch (const std::invalid_argument &ex) {
            fail("noise.mode", ex.what());
        }
    }
    noise.p2 = get_number(j, "p2", "noise.p2", noise.p2);
    noise.q_global = get_number(j, "q_global", "noise.q_global", noise.q_global);
    if (!(noise.p2 >= 0.0 && noise.p2 < 1.0)) {
        fail("noise.p2", "must lie in [0, 1)");
    }
    if (!(noise.q_global >= 0.0 && noise.q_global < 1.0)) {
        fail("noise.q_global", "must lie in [0, 1)");
    }
    return noise;
}

}  // namespace

RunConfig parse_config(const json &input, const std::filesystem::path &base_dir) {
    const json *docp = &input;
    if (input.is_object() && input.value("schema", "") == "mblotoc-manifest") {
        if (!input.contains("config")) {
            fail("config", "manifest has no config member");
        }
        docp = &input.at("config");
    }
    const json &doc = *docp;
    if (!doc.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    reject_unknown(doc, "",
                   {"schema_version", "lattice", "butterfly_qubit", "params", "w_list", "n_max", "realizations", "noise",
                    "noise_factors", "trajectories", "shots", "seed", "output_dir", "max_qubits", "prune"});

    const auto version = get_count(doc, "schema_version", "schema_version", kConfigSchemaVersion);
    if (version == 0 || version > kConfigSchemaVersion) {
        fail("schema_version", "unsupported version " + std::to_string(version) + " (this build reads up to " +
                                   std::to_string(kConfigSchemaVersion) + ")");
    }

    RunConfig c;
    if (!doc.contains("lattice")) {
        fail("lattice", "required");
    }
    c.lattice = parse_lattice(doc.at("lattice"), base_dir);
    c.butterfly_qubit = static_cast<Qubit>(get_count(doc, "butterfly_qubit", "butterfly_qubit", 0));

    if (doc.contains("params")) {
        const auto &p = require_object(doc.at("params"), "params");
        reject_unknown(p, "params.", {"jt", "bzt", "bx0t"});
        c.params.jt = get_number(p, "jt", "params.jt", c.params.jt);
        c.params.bzt = get_number(p, "bzt", "params.bzt", c.params.bzt);
        c.params.bx0t = get_number(p, "bx0t", "params.bx0t", c.params.bx0t);
    }

    if (!doc.contains("w_list")) {
        fail("w_list", "required");
    }
    c.w_list = get_numbers(doc, "w_list", "w_list");
    for (std::size_t i = 0; i < c.w_list.size(); ++i) {
        if (c.w_list[i] < 0.0) {
            fail("w_list[" + std::to_string(i) + "]", "disorder strength must be >= 0");
        }
    }
    if (std::set<double>(c.w_list.begin(), c.w_list.end()).size() != c.w_list.size()) {
        fail("w_list", "duplicate disorder strengths");
    }

    c.n_max = get_count(doc, "n_max", "n_max", c.n_max);
    if (c.n_max == 0) {
        fail("n_max", "must be at least 1");
    }
    c.realizations = get_count(doc, "realizations", "realizations", c.realizations);
    if (c.realizations == 0) {
        fail("realizations", "must be at least 1");
    }
    if (doc.contains("noise")) {
        c.noise = parse_noise(doc.at("noise"));
    }
    if (doc.contains("noise_factors")) {
        c.noise_factors = get_numbers(doc, "noise_factors", "noise_factors");
    }
    for (std::size_t i = 0; i < c.noise_factors.size(); ++i) {
        if (!(c.noise_factors[i] >= 1.0)) {
            fail("noise_factors[" + std::to_string(i) + "]", "noise factors must be >= 1");
        }
    }
    if (std::set<double>(c.noise_factors.begin(), c.noise_factors.end()).size() != c.noise_factors.size()) {
        fail("noise_factors", "duplicate noise factors");
    }
    c.trajectories = get_count(doc, "trajectories", "trajectories", c.trajectories);
    if (c.trajectories == 0) {
        fail("trajectories", "must be at least 1");
    }
    if (doc.contains("shots")) {
        const auto &s = doc.at("shots");
        if (s.is_string()) {
            if (s.get<std::string>() != "exact") {
                fail("shots", "expected a positive integer or \"exact\"");
            }
            c.shots.reset();
        } else {
            c.shots = get_count(doc, "shots", "shots", 0);
            if (*c.shots == 0) {
                fail("shots", "expected a positive integer or \"exact\"");
            }
        }
    }
    c.seed = get_count(doc, "seed", "seed", c.seed);
    if (doc.contains("output_dir")) {
        if (!doc.at("output_dir").is_string()) {
            fail("output_dir", "expected a path string");
        }
        c.output_dir = doc.at("output_dir").get<std::string>();
    }
    c.max_qubits = get_count(doc, "max_qubits", "max_qubits", c.max_qubits);
    if (c.max_qubits == 0 || c.max_qubits > 40) {
        fail("max_qubits", "must lie in [1, 40]");
    }
    if (doc.contains("prune")) {
        if (!doc.at("prune").is_boolean()) {
            fail("prune", "expected true or false");
        }
        c.prune = doc.at("prune").get<bool>();
    }
    return c;
}

RunConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &ex) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < ex.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": JSON syntax error");
    }
    try {
        return parse_config(doc, path.parent_path());
    } catch (const ConfigError &ex) {
        throw ConfigError(path.string() + ": " + ex.what());
    }
}

json config_to_json(const RunConfig &c) {
    json lattice;
    if (c.lattice.heavy_hex) {
        lattice["heavy_hex"] = {{"rows", c.lattice.heavy_hex->rows}, {"cols", c.lattice.heavy_hex->cols}};
    } else if (c.lattice.edge_list) {
        lattice["edge_list"] = c.lattice.edge_list->string();
    }
    json doc = {
        {"schema_version", kConfigSchemaVersion},
        {"lattice", lattice},
        {"butterfly_qubit", c.butterfly_qubit},
        {"params", {{"jt", c.params.jt}, {"bzt", c.params.bzt}, {"bx0t", c.params.bx0t}}},
        {"w_list", c.w_list},
        {"n_max", c.n_max},
        {"realizations", c.realizations},
        {"noise", {{"mode", std::string(noise_mode_name(c.noise.mode))}, {"p2", c.noise.p2}, {"q_global", c.noise.q_global}}},
        {"noise_factors", c.noise_factors},
        {"trajectories", c.trajectories},
        {"seed", c.seed},
        {"output_dir", c.output_dir.string()},
        {"max_qubits", c.max_qubits},
        {"prune", c.prune},
    };
    if (c.shots) {
        doc["shots"] = *c.shots;
    } else {
        doc["shots"] = "exact";
    }
    return doc;
}

CouplingGraph build_lattice(const RunConfig &c) {
    CouplingGraph graph;
    try {
        if (c.lattice.heavy_hex) {
            graph = build_heavy_hex(c.lattice.heavy_hex->rows, c.lattice.heavy_hex->cols);
        } else {
            graph = load_graph(*c.lattice.edge_list);
        }
    } catch (const std::exception &ex) {
        throw ConfigError(std::string("field 'lattice': ") + ex.what());
    }
    if (graph.num_qubits() > c.max_qubits) {
        throw ConfigError("field 'lattice': " + std::to_string(graph.num_qubits()) +
                          " qubits exceed max_qubits = " + std::to_string(c.max_qubits) +
                          " (a statevector needs 16 * 2^N bytes); refusing to allocate");
    }
    if (c.butterfly_qubit >= graph.num_qubits()) {
        fail("butterfly_qubit", "qubit " + std::to_string(c.butterfly_qubit) + " is not in the " +
                                    std::to_string(graph.num_qubits()) + "-qubit lattice");
    }
    if (!is_connected(graph)) {
        fail("lattice", "coupling graph is not connected");
    }
    if (!graph.is_colored()) {
        try {
            graph = color_edges(std::move(graph));
        } catch (const GraphError &ex) {
            fail("lattice", ex.what());
        }
    }
    return graph;
}

}  // namespace mbl
