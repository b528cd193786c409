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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mbl/config.hpp"
#include "mbl/otoc.hpp"
#include "mbl/stats.hpp"

namespace mbl {

std::string_view version();

inline constexpr int kSummarySchemaVersion = 1;
inline constexpr int kManifestSchemaVersion = 1;

/// Called after each finished task with (done, total). Invoked from one thread at a time.
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

/**
 * Runs every (w, realization, n, f) task of the config on `threads` workers and returns the
 * records sorted by (w, realization, n, m, f). Seeds depend only on task keys, so the result is
 * the same for any thread count.
 */
std::vector<OtocRecord> simulate(const RunConfig &config, const CouplingGraph &graph, unsigned threads = 1,
                                 const ProgressFn &progress = {});

struct AnalysisOptions {
    std::optional<double> w_min;
    std::optional<double> w_max;
    std::uint64_t bootstrap_seed = 0;
    std::size_t resamples = 1000;
};

struct Analysis {
    std::vector<EnsembleStats> aggregates;
    nlohmann::json summary;
};

/**
 * Aggregates every quantity and estimates W_c from the normalized OTOC (and from ZNE when two or
 * more noise factors are present) at the largest n, x = n/2 and the smallest noise factor.
 */
Analysis analyze_records(std::span<const OtocRecord> records, const AnalysisOptions &opts = {});

nlohmann::json make_manifest(const RunConfig &config, const CouplingGraph &graph, std::size_t record_count);

/// Writes aggregates.csv and summary.json into `dir`.
void write_analysis(const std::filesystem::path &dir, const Analysis &analysis);

/// The `run` pipeline: records.csv, aggregates.csv, summary.json and manifest.json in config.output_dir.
void run_pipeline(const RunConfig &config, unsigned threads, const ProgressFn &progress = {});

}  // namespace mbl
