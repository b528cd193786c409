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
 * @file otoc.hpp
 * @brief OTOC measurements by the echo construction.
 *
 * With |psi> = (U_F^dagger)^n X_b (U_F)^n |0^N>, the OTOC for Z_m is <psi|Z_m|psi>, so one
 * simulated state yields every m at once. The identity-echo circuit (no X_b) gives the
 * denominator F used for renormalization and for the effective quantum volume
 * V_eff = log F / log(1 - p).
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mbl/lattice.hpp"
#include "mbl/model.hpp"
#include "mbl/noise.hpp"

namespace mbl {

struct OtocRecord {
    double w = 0.0;
    std::uint64_t realization = 0;
    std::size_t n = 0;
    Qubit m = 0;
    std::size_t x = 0;
    double f = 1.0;
    double numerator = 0.0;
    double err_num = 0.0;
    double denominator = 0.0;
    double err_den = 0.0;
    std::optional<double> normalized;
    std::optional<double> veff;
    bool discarded = false;

    friend bool operator==(const OtocRecord &, const OtocRecord &) = default;
};

struct MeasureOptions {
    Qubit butterfly = 0;
    std::size_t steps = 0;
    NoiseModel noise;
    double noise_factor = 1.0;
    std::size_t trajectories = 1;
    std::optional<std::uint64_t> shots;
    std::uint64_t seed = 0;
    bool prune = true;
    unsigned threads = 1;
    std::size_t max_qubits = kDefaultMaxQubits;
};

/**
 * Builds the butterfly and identity echo circuits for `opts.steps` periods (pruned to the
 * butterfly's light cone unless opts.prune is false), simulates both under the same noise model
 * and noise factor with independent trajectory streams, and returns one record per qubit m.
 * Records whose denominator is <= 0 are flagged discarded and carry no normalized value.
 */
std::vector<OtocRecord> measure_otoc(const CouplingGraph &graph, const ModelParams &params,
                                     const DisorderRealization &real, const MeasureOptions &opts);

/// log F / log(1 - p). Throws std::invalid_argument for F <= 0 or p outside (0, 1).
double effective_quantum_volume(double fidelity, double p);

inline constexpr int kRecordsSchemaVersion = 1;

/// Deterministic CSV: a "# mblotoc-records v1" line, the header, then rows in the given order.
/// Doubles print with 17 significant digits so a read-back is exact.
void write_records_csv(std::ostream &out, std::span<const OtocRecord> records);

/// Throws std::runtime_error on schema mismatch or a newer schema version.
std::vector<OtocRecord> read_records_csv(std::istream &in);

/// Sort order used for every records file: (w, realization, n, m, f).
void sort_records(std::vector<OtocRecord> &records);

}  // namespace mbl
