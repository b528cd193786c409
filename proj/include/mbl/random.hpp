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

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mbl {

/// Stream domains keep disorder, folding and trajectory draws from ever sharing a key.
enum class StreamDomain : std::uint32_t {
    Disorder = 0x44495331,
    Folding = 0x464f4c44,
    Trajectory = 0x5452414a,
    Bootstrap = 0x424f4f54,
};

/// Returns a generator keyed on (domain, seed, keys...). Equal keys give bit-identical
/// streams on every conforming standard library (mt19937_64 and seed_seq are fully specified).
std::mt19937_64 make_stream(StreamDomain domain, std::uint64_t seed, std::initializer_list<std::uint64_t> keys = {});

/// Uniform double in [0, 1) built from the top 53 bits.
inline double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased uniform integer in [0, n) by rejection.
std::uint64_t uniform_below(std::mt19937_64 &rng, std::uint64_t n);

/// Standard normal draw (Box-Muller), portable across standard libraries.
double standard_normal(std::mt19937_64 &rng);

}  // namespace mbl
