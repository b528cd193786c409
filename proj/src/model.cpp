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

#include "mbl/model.hpp"

#include <cmath>
#include <stdexcept>

#include "mbl/random.hpp"

namespace mbl {

void ModelParams::validate() const {
    if (!std::isfinite(jt) || !std::isfinite(bzt) || !std::isfinite(bx0t) || !std::isfinite(w)) {
        throw std::invalid_argument("model parameters must be finite");
    }
    if (w < 0.0) {
        throw std::invalid_argument("disorder width w must be >= 0");
    }
}

DisorderRealization sample_disorder(const ModelParams &params, std::size_t n_qubits, std::uint64_t seed,
                                    std::uint64_t realization_index) {
    params.validate();
    if (n_qubits == 0) {
        throw std::invalid_argument("sample_disorder: n_qubits must be >= 1");
    }
    auto rng = make_stream(StreamDomain::Disorder, seed, {realization_index});
    DisorderRealization real;
    real.seed = seed;
    real.realization_index = realization_index;
    real.bxt.reserve(n_qubits);
    for (std::size_t i = 0; i < n_qubits; ++i) {
        const double u = uniform01(rng);
        real.bxt.push_back(params.bx0t + params.w * (2.0 * u - 1.0));
    }
    return real;
}

nlohmann::json params_to_json(const ModelParams &params) {
    return {{"jt", params.jt}, {"bzt", params.bzt}, {"bx0t", params.bx0t}, {"w", params.w}};
}

ModelParams params_from_json(const nlohmann::json &j, ModelParams defaults) {
    ModelParams p = defaults;
    p.jt = j.value("jt", p.jt);
    p.bzt = j.value("bzt", p.bzt);
    p.bx0t = j.value("bx0t", p.bx0t);
    p.w = j.value("w", p.w);
    p.validate();
    return p;
}

nlohmann::json realization_to_json(const DisorderRealization &real) {
    return {{"seed", real.seed}, {"realization_index", real.realization_index}, {"bxt", real.bxt}};
}

DisorderRealization realization_from_json(const nlohmann::json &j) {
    DisorderRealization real;
    real.seed = j.at("seed").get<std::uint64_t>();
    real.realization_index = j.at("realization_index").get<std::uint64_t>();
    real.bxt = j.at("bxt").get<std::vector<double>>();
    return real;
}

}  // namespace mbl
