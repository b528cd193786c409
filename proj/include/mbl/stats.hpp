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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mbl/noise.hpp"
#include "mbl/otoc.hpp"

namespace mbl {

enum class Quantity : std::uint8_t { Normalized, Veff, Numerator, Denominator, Zne };

std::string_view quantity_name(Quantity q);
Quantity quantity_from_name(std::string_view name);

struct GroupKey {
    double w = 0.0;
    std::size_t n = 0;
    std::size_t x = 0;
    double f = 1.0;  // 0 for ZNE estimates

    friend bool operator==(const GroupKey &, const GroupKey &) = default;
    friend auto operator<=>(const GroupKey &, const GroupKey &) = default;
};

struct EnsembleStats {
    Quantity quantity = Quantity::Normalized;
    GroupKey key;
    std::optional<double> mean;
    std::optional<double> std_error;
    std::size_t n_used = 0;
    std::size_t n_discarded = 0;
    std::string diagnostic;

    friend bool operator==(const EnsembleStats &, const EnsembleStats &) = default;
};

struct Measurement {
    double value = 0.0;
    double sigma = 0.0;
};

struct WeightedMean {
    double mean = 0.0;
    double std_error = 0.0;
};

/**
 * Inverse-variance weighted mean: mean = sum(y/s^2) / sum(1/s^2), stderr = sum(1/s^2)^(-1/2).
 * When any sigma is zero (exact values) every member gets equal weight and the stderr is the
 * sample standard deviation over sqrt(k). Throws std::invalid_argument on an empty input.
 */
WeightedMean weighted_mean(std::span<const Measurement> values);

struct AggregateOptions {
    /// Used for V_eff uncertainties only when a record has F == 1 exactly.
    double error_rate = kMedianCzError;
};

/**
 * Groups records by (w, n, x, f), pooling every site m at distance x together with the
 * disorder realizations in one weighted pass. Discarded records (denominator <= 0) are left
 * out of NORMALIZED and VEFF means but counted. ZNE first extrapolates each (w, realization,
 * n, m) across its noise factors; non-extrapolable ones count as discarded. Output is sorted by
 * key and independent of input order.
 */
std::vector<EnsembleStats> aggregate(std::span<const OtocRecord> records, Quantity quantity,
                                     const AggregateOptions &opts = {});

struct ZnePoint {
    double f = 1.0;
    double y = 0.0;
    double sigma = 0.0;
};

enum class ZneStatus : std::uint8_t { Ok, NotExtrapolable };

struct ZneResult {
    ZneStatus status = ZneStatus::Ok;
    double estimate = 0.0;  // a in y = a exp(-b f)
    double std_error = 0.0;
    double decay = 0.0;     // b
};

/**
 * Fits y = a exp(-b f) and returns a. Two points use the closed form
 * b = ln(y1/y2)/(f2 - f1), a = y1 exp(b f1); more points use weighted least squares on ln|y|.
 * Mixed signs or a zero y give NotExtrapolable. Throws std::invalid_argument for fewer than two
 * points or repeated noise factors.
 */
ZneResult zne_extrapolate(std::span<const ZnePoint> points);

struct ZneRecord {
    double w = 0.0;
    std::uint64_t realization = 0;
    std::size_t n = 0;
    Qubit m = 0;
    std::size_t x = 0;
    ZneResult result;
};

/// Extrapolates the bare OTOC of each (w, realization, n, m) that was run at two or more factors.
std::vector<ZneRecord> zne_records(std::span<const OtocRecord> records);

struct CurvePoint {
    double w = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
};

struct CrossoverOptions {
    std::size_t resamples = 1000;
    std::uint64_t seed = 0;
};

struct CrossoverEstimate {
    double w_c = 0.0;
    double uncertainty = 0.0;
    bool low_confidence = false;
    double max_slope = 0.0;
    std::size_t grid_index = 0;
};

/**
 * Disorder strength of steepest increase. Central differences give slopes at interior grid
 * points; the largest one (ties go to the smallest W and are flagged low-confidence) is refined
 * by the vertex of a parabola through it and its interior neighbours. The uncertainty combines
 * half the local grid spacing with a seeded parametric bootstrap over the means' stderrs.
 * Throws std::invalid_argument for fewer than 3 points or a W axis that is not strictly increasing.
 */
CrossoverEstimate estimate_crossover(std::span<const CurvePoint> curve, const CrossoverOptions &opts = {});

/// The W curve of one (quantity, n, x, f) slice of aggregate output, skipping absent means.
std::vector<CurvePoint> curve_at(std::span<const EnsembleStats> stats, Quantity quantity, std::size_t n,
                                 std::size_t x, double f);

inline constexpr int kAggregatesSchemaVersion = 1;

void write_aggregates_csv(std::ostream &out, std::span<const EnsembleStats> stats);
std::vector<EnsembleStats> read_aggregates_csv(std::istream &in);

}  // namespace mbl
