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
// Command-line entry point: run, analyze, export-graph.
// Exit status: 0 success, 1 user error (bad config, bad input file), 2 internal error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "mbl/config.hpp"
#include "mbl/runner.hpp"

namespace {

constexpr int kUserError = 1;
constexpr int kInternalError = 2;

// Errors attributable to the input rather than to this program.
class InputError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

int cmd_run(const std::string &config_path, unsigned threads, std::optional<std::uint64_t> seed,
            std::optional<std::string> output_dir, bool quiet) {
    auto config = mbl::load_config(config_path);
    if (seed) {
        config.seed = *seed;
    }
    if (output_dir) {
        config.output_dir = *output_dir;
    }
    mbl::ProgressFn progress;
    if (!quiet) {
        progress = [last = std::size_t{0}](std::size_t done, std::size_t total) mutable {
            const std::size_t pct = 100 * done / total;
            if (pct / 10 != last / 10 || done == total) {
                std::fprintf(stderr, "  %zu/%zu tasks (%zu%%)\n", done, total, pct);
                last = pct;
            }
        };
    }
    mbl::run_pipeline(config, threads, progress);
    if (!quiet) {
        std::fprintf(stderr, "wrote %s\n", (config.output_dir / "records.csv").string().c_str());
    }
    return 0;
}

int cmd_analyze(const std::string &records_path, std::optional<double> w_min, std::optional<double> w_max,
                std::optional<std::string> out_dir) {
    std::ifstream in(records_path);
    if (!in) {
        throw InputError("cannot open " + records_path);
    }
    std::vector<mbl::OtocRecord> records;
    try {
        records = mbl::read_records_csv(in);
    } catch (const std::runtime_error &ex) {
        throw InputError(records_path + ": " + ex.what());
    }
    mbl::AnalysisOptions opts;
    opts.w_min = w_min;
    opts.w_max = w_max;
    const std::filesystem::path dir =
        out_dir ? std::filesystem::path(*out_dir) : std::filesystem::path(records_path).parent_path() / "analysis";
    std::filesystem::create_directories(dir);
    mbl::write_analysis(dir, mbl::analyze_records(records, opts));
    return 0;
}

int cmd_export_graph(const std::string &config_path, const std::string &format, std::optional<std::string> out_path) {
    const auto config = mbl::load_config(config_path);
    const auto graph = mbl::build_lattice(config);
    std::ofstream file;
    if (out_path) {
        file.open(*out_path, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw InputError("cannot write " + *out_path);
        }
    }
    std::ostream &out = out_path ? static_cast<std::ostream &>(file) : std::cout;
    if (format == "edges") {
        mbl::write_edge_list(out, graph);
    } else {
        out << mbl::graph_to_json(graph).dump(2) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Floquet OTOC simulator for disordered kicked Ising circuits"};
    app.set_version_flag("--version", std::string(mbl::version()));
    app.require_subcommand(1);

    std::string config_path;
    unsigned threads = 1;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_dir;
    bool quiet = false;
    auto *run = app.add_subcommand("run", "simulate every task in a config and write records, aggregates, summary");
    run->add_option("config", config_path, "run config (JSON) or a previous manifest.json")->required();
    run->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
    run->add_option("--seed", seed, "override the config seed");
    run->add_option("--output-dir", output_dir, "override the config output_dir");
    run->add_flag("-q,--quiet", quiet, "no progress output");

    std::string records_path;
    std::optional<double> w_min, w_max;
    std::optional<std::string> analyze_out;
    auto *analyze = app.add_subcommand("analyze", "recompute aggregates and W_c from a records.csv");
    analyze->add_option("records", records_path, "records.csv from a run")->required();
    analyze->add_option("--w-min", w_min, "keep records with w >= this");
    analyze->add_option("--w-max", w_max, "keep records with w <= this");
    analyze->add_option("--out", analyze_out, "output directory (default: <records dir>/analysis)");

    std::string graph_config;
    std::string format = "json";
    std::optional<std::string> graph_out;
    auto *export_graph = app.add_subcommand("export-graph", "print the colored coupling graph of a config");
    export_graph->add_option("config", graph_config, "run config (JSON)")->required();
    export_graph->add_option("--format", format, "json or edges")->check(CLI::IsMember({"json", "edges"}));
    export_graph->add_option("-o,--out", graph_out, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUserError;
    }

    try {
        if (*run) {
            return cmd_run(config_path, threads, seed, output_dir, quiet);
        }
        if (*analyze) {
            return cmd_analyze(records_path, w_min, w_max, analyze_out);
        }
        return cmd_export_graph(graph_config, format, graph_out);
    } catch (const mbl::ConfigError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUserError;
    } catch (const InputError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUserError;
    } catch (const mbl::GraphError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUserError;
    } catch (const std::filesystem::filesystem_error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUserError;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}
