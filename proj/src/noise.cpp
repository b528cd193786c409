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

#include "mbl/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "mbl/random.hpp"

namespace mbl {

std::string_view noise_mode_name(NoiseMode mode) {
    switch (mode) {
        case NoiseMode::None:
            return "none";
        case NoiseMode::LocalDepolarizing:
            return "local";
        case NoiseMode::GlobalDepolarizing:
            return "global";
    }
    return "?";
}

NoiseMode noise_mode_from_name(std::string_view name) {
    for (auto m : {NoiseMode::None, NoiseMode::LocalDepolarizing, NoiseMode::GlobalDepolarizing}) {
        if (noise_mode_name(m) == name) {
            return m;
        }
    }
    throw std::invalid_argument("unknown noise mode '" + std::string(name) + "' (expected none|local|global)");
}

void NoiseModel::validate() const {
    if (!(p2 >= 0.0 && p2 < 1.0)) {
        throw std::invalid_argument("p2 must lie in [0, 1)");
    }
    if (!(q_global >= 0.0 && q_global < 1.0)) {
        throw std::invalid_argument("q_global must lie in [0, 1)");
    }
}

bool NoiseModel::is_noiseless() const {
    switch (mode) {
        case NoiseMode::None:
            return true;
        case NoiseMode::LocalDepolarizing:
            return p2 == 0.0;
        case NoiseMode::GlobalDepolarizing:
            return q_global == 0.0;
    }
    return true;
}

namespace {

class SnapshotCache {
   public:
    SnapshotCache(const Circuit &circ, std::size_t budget_bytes, std::size_t max_qubits) {
        const std::size_t layers = circ.layers.size();
        const std::size_t state_bytes = (std::size_t{1} << circ.n_qubits) * sizeof(Amplitude);
        const std::size_t capacity = std::max<std::size_t>(1, budget_bytes / std::max<std::size_t>(1, state_bytes));
        stride_ = std::max<std::size_t>(1, (layers + capacity) / capacity);
        StateVector state(circ.n_qubits, max_qubits);
        for (std::size_t l = 0; l <= layers; ++l) {
            if (l % stride_ == 0) {
                snapshots_.push_back(state);
            }
            if (l < layers) {
                apply_layers(state, circ, l, l + 1);
            }
        }
        final_z_ = expectation_z_all(state);
    }

    /// Largest cached layer index <= layer, with its state.
    std::pair<std::size_t, const StateVector *> before(std::size_t layer) const {
        const std::size_t k = std::min(layer / stride_, snapshots_.size() - 1);
        return {k * stride_, &snapshots_[k]};
    }

    const std::vector<double> &final_z() const { return final_z_; }

   private:
    std::size_t stride_ = 1;
    std::vector<StateVector> snapshots_;
    std::vector<double> final_z_;
};

void apply_two_qubit_pauli(StateVector &state, const Gate &g, std::uint64_t which) {
    // which in [1, 15]; (0, 0) is the identity and never drawn.
    apply_pauli(state, g.qubits[0], static_cast<Pauli>(which / 4));
    apply_pauli(state, g.qubits[1], static_cast<Pauli>(which % 4));
}

class TrajectoryRunner {
   public:
    TrajectoryRunner(const Circuit &circ, const NoiseModel &noise, const TrajectoryOptions &opts,
                     const SnapshotCache &cache)
        : circ_(circ), noise_(noise), opts_(opts), cache_(cache), state_(circ.n_qubits, opts.max_qubits) {}

    std::vector<double> run(std::size_t t) {
        auto rng = make_stream(StreamDomain::Trajectory, opts_.seed, {t});
        std::vector<double> z;
        switch (noise_.mode) {
            case NoiseMode::LocalDepolarizing:
                z = run_local(rng);
                break;
            case NoiseMode::GlobalDepolarizing:
                z = run_global(rng);
                break;
            case NoiseMode::None:
                z = cache_.final_z();
                break;
        }
        if (opts_.shots) {
            sample_shots(z, *opts_.shots, rng);
        }
        return z;
    }

   private:
    std::vector<double> run_local(std::mt19937_64 &rng) {
        const Circuit *circ = &circ_;
        Circuit refolded;
        if (opts_.refold_factor > 1.0) {
            refolded = fold_gates(circ_, opts_.refold_factor, rng());
            circ = &refolded;
        }
        // Pre-draw which two-qubit applications fail, so the run can restart from a cached state.
        const std::size_t applications = circ->two_qubit_gate_count();
        errors_.assign(applications, false);
        std::size_t first_error = applications;
        for (std::size_t a = 0; a < applications; ++a) {
            if (uniform01(rng) < noise_.p2) {
                errors_[a] = true;
                first_error = std::min(first_error, a);
            }
        }
        if (first_error == applications) {
            return cache_.final_z();
        }

        std::size_t counter = 0;
        std::size_t first_layer = 0;
        for (; first_layer < circ->layers.size(); ++first_layer) {
            std::size_t in_layer = 0;
            for (const auto &g : circ->layers[first_layer].gates) {
                if (g.is_two_qubit()) {
                    in_layer += 1 + 2 * static_cast<std::size_t>(g.folds);
                }
            }
            if (counter + in_layer > first_error) {
                break;
            }
            counter += in_layer;
        }
        auto [start, snapshot] = cache_.before(first_layer);
        // Rewind the application counter to the snapshot layer.
        for (std::size_t l = start; l < first_layer; ++l) {
            for (const auto &g : circ->layers[l].gates) {
                if (g.is_two_qubit()) {
                    counter -= 1 + 2 * static_cast<std::size_t>(g.folds);
                }
            }
        }
        std::copy(snapshot->amplitudes().begin(), snapshot->amplitudes().end(), state_.amplitudes().begin());

        for (std::size_t l = start; l < circ->layers.size(); ++l) {
            for (const auto &g : circ->layers[l].gates) {
                apply_gate(state_, g);
                if (!g.is_two_qubit()) {
                    continue;
                }
                if (errors_[counter++]) {
                    apply_two_qubit_pauli(state_, g, 1 + uniform_below(rng, 15));
                }
                if (g.folds > 0) {
                    const Gate inverse = g.adjoint();
                    for (unsigned k = 0; k < g.folds; ++k) {
                        apply_gate(state_, inverse);
                        if (errors_[counter++]) {
                            apply_two_qubit_pauli(state_, g, 1 + uniform_below(rng, 15));
                        }
                        apply_gate(state_, g);
                        if (errors_[counter++]) {
                            apply_two_qubit_pauli(state_, g, 1 + uniform_below(rng, 15));
                        }
                    }
                }
            }
        }
        return expectation_z_all(state_);
    }

    std::vector<double> run_global(std::mt19937_64 &rng) {
        // Only the last reset matters: everything before it is overwritten.
        std::optional<std::size_t> last_reset;
        for (std::size_t k = 0; k < circ_.step_boundaries.size(); ++k) {
            if (uniform01(rng) < noise_.q_global) {
                last_reset = k;
            }
        }
        if (!last_reset) {
            return cache_.final_z();
        }
        state_.set_basis(uniform_below(rng, std::uint64_t{1} << circ_.n_qubits));
        apply_layers(state_, circ_, circ_.step_boundaries[*last_reset], circ_.layers.size());
        return expectation_z_all(state_);
    }

    static void sample_shots(std::vector<double> &z, std::uint64_t shots, std::mt19937_64 &rng) {
        for (auto &v : z) {
            const double p_plus = std::clamp((1.0 + v) / 2.0, 0.0, 1.0);
            std::binomial_distribution<std::uint64_t> dist(shots, p_plus);
            const auto plus = dist(rng);
            v = 2.0 * static_cast<double>(plus) / static_cast<double>(shots) - 1.0;
        }
    }

    const Circuit &circ_;
    const NoiseModel &noise_;
    const TrajectoryOptions &opts_;
    const SnapshotCache &cache_;
    StateVector state_;
    std::vector<bool> errors_;
};

}  // namespace

ZEstimate run_noisy(const Circuit &circ, const NoiseModel &noise, const TrajectoryOptions &opts) {
    noise.validate();
    circ.validate();
    if (opts.trajectories == 0) {
        throw std::invalid_argument("run_noisy: need at least one trajectory");
    }
    if (opts.shots && *opts.shots == 0) {
        throw std::invalid_argument("run_noisy: shots must be positive");
    }
    if (circ.n_qubits > opts.max_qubits) {
        throw std::length_error("circuit of " + std::to_string(circ.n_qubits) + " qubits exceeds the cap of " +
                                std::to_string(opts.max_qubits));
    }

    const std::size_t n = circ.n_qubits;
    const bool noiseless = noise.is_noiseless();
    // Noiseless runs never leave the cached path; one snapshot is enough.
    const SnapshotCache cache(circ, noiseless ? 0 : opts.snapshot_budget_bytes, opts.max_qubits);

    ZEstimate out;
    out.trajectories = opts.trajectories;
    if (noiseless && !opts.shots) {
        out.mean = cache.final_z();
        out.std_error.assign(n, 0.0);
        return out;
    }

    NoiseModel effective = noise;
    if (noiseless) {
        effective.mode = NoiseMode::None;
    }

    std::vector<std::vector<double>> samples(opts.trajectories);
    const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(opts.trajectories)));
    auto work = [&](unsigned worker) {
        TrajectoryRunner runner(circ, effective, opts, cache);
        for (std::size_t t = worker; t < opts.trajectories; t += threads) {
            samples[t] = runner.run(t);
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back(work, w);
        }
    }

    const double count = static_cast<double>(opts.trajectories);
    out.mean.assign(n, 0.0);
    out.std_error.assign(n, 0.0);
    for (const auto &s : samples) {
        for (std::size_t m = 0; m < n; ++m) {
            out.mean[m] += s[m];
        }
    }
    for (auto &v : out.mean) {
        v /= count;
    }
    if (opts.trajectories > 1) {
        for (const auto &s : samples) {
            for (std::size_t m = 0; m < n; ++m) {
                const double d = s[m] - out.mean[m];
                out.std_error[m] += d * d;
            }
        }
        for (auto &v : out.std_error) {
            v = std::sqrt(v / (count - 1.0) / count);
        }
    } else if (opts.shots) {
        for (std::size_t m = 0; m < n; ++m) {
            const double v = out.mean[m];
            out.std_error[m] = std::sqrt(std::max(0.0, 1.0 - v * v) / static_cast<double>(*opts.shots));
        }
    }
    return out;
}

}  // namespace mbl
