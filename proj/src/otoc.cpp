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

#include "mbl/otoc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>

#include "csv_util.hpp"
#include "mbl/circuit.hpp"
#include "mbl/random.hpp"

namespace mbl {

namespace {

constexpr const char *kRecordsTag = "mblotoc-records";
constexpr const char *kRecordsHeader =
    "w,realization,n,m,x,f,numerator,err_num,denominator,err_den,normalized,veff,discarded";

std::uint64_t circuit_seed(const MeasureOptions &opts, double w, std::uint64_t realization, bool butterfly) {
    auto rng = make_stream(StreamDomain::Trajectory, opts.seed,
                           {std::bit_cast<std::uint64_t>(w), realization, opts.steps,
                            std::bit_cast<std::uint64_t>(opts.noise_factor), butterfly ? 1u : 0u});
    return rng();
}

}  // namespace

std::vector<OtocRecord> measure_otoc(const CouplingGraph &graph, const ModelParams &params,
                                     const DisorderRealization &real, const MeasureOptions &opts) {
    if (opts.butterfly >= graph.num_qubits()) {
        throw std::invalid_argument("butterfly qubit " + std::to_string(opts.butterfly) + " outside graph");
    }
    if (!(opts.noise_factor >= 1.0)) {
        throw std::invalid_argument("noise factor must be >= 1");
    }
    opts.noise.validate();
    const auto dist = distances_from(graph, opts.butterfly);
    if (std::any_of(dist.begin(), dist.end(), [](int d) { return d < 0; })) {
        throw GraphError("graph is not connected to the butterfly qubit");
    }

    const Circuit step = build_floquet_step(graph, params, real);
    Circuit num_circ = build_otoc_circuit(step, opts.steps, opts.butterfly, true);
    Circuit den_circ = build_otoc_circuit(step, opts.steps, opts.butterfly, false);
    if (opts.prune) {
        num_circ = prune_causal_cone(num_circ, opts.butterfly);
        den_circ = prune_causal_cone(den_circ, opts.butterfly);
    }

    TrajectoryOptions topts;
    topts.trajectories = opts.trajectories;
    topts.shots = opts.shots;
    topts.threads = opts.threads;
    topts.max_qubits = opts.max_qubits;
    topts.refold_factor = opts.noise_factor;

    topts.seed = circuit_seed(opts, params.w, real.realization_index, true);
    const ZEstimate num = run_noisy(num_circ, opts.noise, topts);
    topts.seed = circuit_seed(opts, params.w, real.realization_index, false);
    const ZEstimate den = run_noisy(den_circ, opts.noise, topts);

    const bool has_rate = opts.noise.mode == NoiseMode::LocalDepolarizing && opts.noise.p2 > 0.0;
    const double p_eff = opts.noise.p2 * opts.noise_factor;

    std::vector<OtocRecord> records;
    records.reserve(graph.num_qubits());
    for (Qubit m = 0; m < graph.num_qubits(); ++m) {
        OtocRecord r;
        r.w = params.w;
        r.realization = real.realization_index;
        r.n = opts.steps;
        r.m = m;
        r.x = static_cast<std::size_t>(dist[m]);
        r.f = opts.noise_factor;
        r.numerator = num.mean[m];
        r.err_num = num.std_error[m];
        r.denominator = den.mean[m];
        r.err_den = den.std_error[m];
        r.discarded = !(r.denominator > 0.0);
        if (!r.discarded) {
            r.normalized = r.numerator / r.denominator;
            if (has_rate && p_eff < 1.0) {
                r.veff = effective_quantum_volume(r.denominator, p_eff);
            }
        }
        records.push_back(r);
    }
    return records;
}

double effective_quantum_volume(double fidelity, double p) {
    if (!(fidelity > 0.0) || !std::isfinite(fidelity)) {
        throw std::invalid_argument("effective_quantum_volume: fidelity must be > 0");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("effective_quantum_volume: error rate must lie in (0, 1)");
    }
    // Adding 0.0 turns the -0 of F == 1 into +0.
    return std::log(fidelity) / std::log1p(-p) + 0.0;
}

void write_records_csv(std::ostream &out, std::span<const OtocRecord> records) {
    out << "# " << kRecordsTag << " v" << kRecordsSchemaVersion << '\n' << kRecordsHeader << '\n';
    for (const auto &r : records) {
        out << csv::format_double(r.w) << ',' << r.realization << ',' << r.n << ',' << r.m << ',' << r.x << ','
            << csv::format_double(r.f) << ',' << csv::format_double(r.numerator) << ','
            << csv::format_double(r.err_num) << ',' << csv::format_double(r.denominator) << ','
            << csv::format_double(r.err_den) << ',' << csv::format_optional(r.normalized) << ','
            << csv::format_optional(r.veff) << ',' << (r.discarded ? 1 : 0) << '\n';
    }
}

std::vector<OtocRecord> read_records_csv(std::istream &in) {
    csv::expect_schema(in, kRecordsTag, kRecordsSchemaVersion);
    csv::expect_header(in, kRecordsHeader);
    std::vector<OtocRecord> records;
    std::string line;
    std::size_t line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = csv::split(line);
        if (fields.size() != 13) {
            throw std::runtime_error("records line " + std::to_string(line_no) + ": expected 13 fields, got " +
                                     std::to_string(fields.size()));
        }
        try {
            OtocRecord r;
            r.w = csv::parse_double(fields[0], "w");
            r.realization = csv::parse_uint(fields[1], "realization");
            r.n = csv::parse_uint(fields[2], "n");
            r.m = static_cast<Qubit>(csv::parse_uint(fields[3], "m"));
            r.x = csv::parse_uint(fields[4], "x");
            r.f = csv::parse_double(fields[5], "f");
            r.numerator = csv::parse_double(fields[6], "numerator");
            r.err_num = csv::parse_double(fields[7], "err_num");
            r.denominator = csv::parse_double(fields[8], "denominator");
            r.err_den = csv::parse_double(fields[9], "err_den");
            r.normalized = csv::parse_optional(fields[10], "normalized");
            r.veff = csv::parse_optional(fields[11], "veff");
            r.discarded = csv::parse_uint(fields[12], "discarded") != 0;
            records.push_back(r);
        } catch (const std::runtime_error &ex) {
            throw std::runtime_error("records line " + std::to_string(line_no) + ": " + ex.what());
        }
    }
    return records;
}

void sort_records(std::vector<OtocRecord> &records) {
    std::stable_sort(records.begin(), records.end(), [](const OtocRecord &a, const OtocRecord &b) {
        return std::tie(a.w, a.realization, a.n, a.m, a.f) < std::tie(b.w, b.realization, b.n, b.m, b.f);
    });
}

}  // namespace mbl
