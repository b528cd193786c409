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
#include "mbl/runner.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

namespace mbl {

namespace {

using nlohmann::json;

struct Task {
    double w;
    std::uint64_t realization;
    std::size_t n;
    double f;
};

std::ofstream open_output(const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

json crossover_json(std::span<const EnsembleStats> stats, Quantity q, std::size_t n, std::size_t x, double f,
                    const AnalysisOptions &opts) {
    const auto curve = curve_at(stats, q, n, x, f);
    json j = {{"quantity", std::string(quantity_name(q))}, {"n", n}, {"x", x}, {"f", f}, {"points", curve.size()}};
    if (curve.size() < 3) {
        j["w_c"] = nullptr;
        j["diagnostic"] = "need at least 3 disorder strengths with data, have " + std::to_string(curve.size());
        return j;
    }
    const auto est = estimate_crossover(curve, CrossoverOptions{opts.resamples, opts.bootstrap_seed});
    j["w_c"] = est.w_c;
    j["uncertainty"] = est.uncertainty;
    j["low_confidence"] = est.low_confidence;
    j["max_slope"] = est.max_slope;
    return j;
}

}  // namespace

std::string_view version() { return MBLOTOC_VERSION; }

std::vector<OtocRecord> simulate(const RunConfig &config, const CouplingGraph &graph, unsigned threads,
                                 const ProgressFn &progress) {
    std::vector<Task> tasks;
    for (double w : config.w_list) {
        for (std::uint64_t r = 0; r < config.realizations; ++r) {
            for (std::size_t n = 1; n <= config.n_max; ++n) {
                for (double f : config.noise_factors) {
                    tasks.push_back(Task{w, r, n, f});
                }
            }
        }
    }

    std::vector<std::vector<OtocRecord>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::mutex progress_mutex;
    std::size_t done = 0;
    auto work = [&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++) {
            const Task &task = tasks[t];
            ModelParams params = config.params;
            params.w = task.w;
            const auto real = sample_disorder(params, graph.num_qubits(), config.seed, task.realization);
            MeasureOptions opts;
            opts.butterfly = config.butterfly_qubit;
            opts.steps = task.n;
            opts.noise = config.noise;
            opts.noise_factor = task.f;
            opts.trajectories = config.noise.is_noiseless() && !config.shots ? 1 : config.trajectories;
            opts.shots = config.shots;
            opts.seed = config.seed;
            opts.prune = config.prune;
            opts.max_qubits = config.max_qubits;
            results[t] = measure_otoc(graph, params, real, opts);
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(++done, tasks.size());
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tasks.size())));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < workers; ++i) {
            pool.emplace_back(work);
        }
    }

    std::vector<OtocRecord> records;
    for (auto &r : results) {
        records.insert(records.end(), r.begin(), r.end());
    }
    sort_records(records);
    return records;
}

Analysis analyze_records(std::span<const OtocRecord> all, const AnalysisOptions &opts) {
    std::vector<OtocRecord> records;
    for (const auto &r : all) {
        if ((!opts.w_min || r.w >= *opts.w_min) && (!opts.w_max || r.w <= *opts.w_max)) {
            records.push_back(r);
        }
    }
    Analysis out;
    for (auto q : {Quantity::Normalized, Quantity::Veff, Quantity::Numerator, Quantity::Denominator, Quantity::Zne}) {
        auto stats = aggregate(records, q);
        out.aggregates.insert(out.aggregates.end(), stats.begin(), stats.end());
    }

    std::size_t discarded = 0;
    std::set<double> ws, fs;
    std::size_t n_max = 0;
    for (const auto &r : records) {
        discarded += r.discarded ? 1 : 0;
        ws.insert(r.w);
        fs.insert(r.f);
        n_max = std::max(n_max, r.n);
    }
    json summary = {{"schema", "mblotoc-summary"},
                    {"schema_version", kSummarySchemaVersion},
                    {"records", records.size()},
                    {"discarded", discarded},
                    {"w_values", std::vector<double>(ws.begin(), ws.end())},
                    {"noise_factors", std::vector<double>(fs.begin(), fs.end())},
                    {"bootstrap_seed", opts.bootstrap_seed},
                    {"bootstrap_resamples", opts.resamples}};
    if (!records.empty()) {
        const std::size_t x = n_max / 2;
        summary["crossover"] = crossover_json(out.aggregates, Quantity::Normalized, n_max, x, *fs.begin(), opts);
        if (fs.size() >= 2) {
            summary["crossover_zne"] = crossover_json(out.aggregates, Quantity::Zne, n_max, x, 0.0, opts);
        } else {
            summary["crossover_zne"] = nullptr;
        }
    } else {
        summary["crossover"] = nullptr;
        summary["crossover_zne"] = nullptr;
    }
    out.summary = std::move(summary);
    return out;
}

json make_manifest(const RunConfig &config, const CouplingGraph &graph, std::size_t record_count) {
    return {
        {"schema", "mblotoc-manifest"},
        {"schema_version", kManifestSchemaVersion},
        {"config", config_to_json(config)},
        {"seeds",
         {{"master", config.seed},
          {"disorder", "stream (Disorder, seed, realization); identical draws at every w"},
          {"trajectories", "stream (Trajectory, seed, w, realization, n, f, circuit) then (Trajectory, ., t)"}}},
        {"versions",
         {{"mblotoc", std::string(version())},
          {"records_schema", kRecordsSchemaVersion},
          {"aggregates_schema", kAggregatesSchemaVersion},
          {"summary_schema", kSummarySchemaVersion},
          {"config_schema", kConfigSchemaVersion},
          {"compiler", __VERSION__}}},
        {"lattice",
         {{"num_qubits", graph.num_qubits()},
          {"num_edges", graph.edges().size()},
          {"edge_layers", graph.edge_layers().size()}}},
        {"records", record_count},
    };
}

void write_analysis(const std::filesystem::path &dir, const Analysis &analysis) {
    {
        auto out = open_output(dir / "aggregates.csv");
        write_aggregates_csv(out, analysis.aggregates);
    }
    auto out = open_output(dir / "summary.json");
    out << analysis.summary.dump(2) << '\n';
}

void run_pipeline(const RunConfig &config, unsigned threads, const ProgressFn &progress) {
    const CouplingGraph graph = build_lattice(config);
    std::filesystem::create_directories(config.output_dir);
    const auto records = simulate(config, graph, threads, progress);
    {
        auto out = open_output(config.output_dir / "records.csv");
        write_records_csv(out, records);
    }
    write_analysis(config.output_dir, analyze_records(records));
    auto out = open_output(config.output_dir / "manifest.json");
    out << make_manifest(config, graph, records.size()).dump(2) << '\n';
}

}  // namespace mbl
