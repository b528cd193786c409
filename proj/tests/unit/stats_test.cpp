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
#include "mbl/stats.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace mbl;

namespace {

OtocRecord rec(double w, std::uint64_t real, std::size_t n, Qubit m, std::size_t x, double f, double num,
               double err_num, double den = 1.0, double err_den = 0.0) {
    OtocRecord r;
    r.w = w;
    r.realization = real;
    r.n = n;
    r.m = m;
    r.x = x;
    r.f = f;
    r.numerator = num;
    r.err_num = err_num;
    r.denominator = den;
    r.err_den = err_den;
    r.discarded = !(den > 0.0);
    if (!r.discarded) {
        r.normalized = num / den;
    }
    return r;
}

const std::vector<double> kGrid{0.02, 0.05, 0.08, 0.1, 0.12, 0.15, 0.18, 0.2, 0.25, 0.3, 0.4, 0.5};

std::vector<CurvePoint> logistic(double center, double width, double stderr_ = 0.0) {
    std::vector<CurvePoint> c;
    for (double w : kGrid) {
        c.push_back({w, 1.0 / (1.0 + std::exp(-(w - center) / width)), stderr_});
    }
    return c;
}

double local_step(double w) {
    const auto it = std::lower_bound(kGrid.begin(), kGrid.end(), w);
    const std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - kGrid.begin(), 1), kGrid.size() - 1);
    return kGrid[i] - kGrid[i - 1];
}

}  // namespace

TEST(WeightedMean, EqualSigmasGiveArithmeticMean) {
    const std::vector<Measurement> v{{0.2, 0.1}, {0.4, 0.1}, {0.9, 0.1}, {0.5, 0.1}};
    const auto wm = weighted_mean(v);
    EXPECT_NEAR(wm.mean, 0.5, 1e-15);
    EXPECT_NEAR(wm.std_error, 0.1 / 2.0, 1e-15);
}

TEST(WeightedMean, SingleRecord) {
    const std::vector<Measurement> v{{0.37, 0.02}};
    const auto wm = weighted_mean(v);
    EXPECT_EQ(wm.mean, 0.37);
    EXPECT_NEAR(wm.std_error, 0.02, 1e-16);
}

TEST(WeightedMean, HandComputed) {
    const std::vector<Measurement> v{{0.8, 0.1}, {0.6, 0.2}};
    const auto wm = weighted_mean(v);
    EXPECT_NEAR(wm.mean, 0.76, 1e-15);
    EXPECT_NEAR(wm.std_error, 1.0 / std::sqrt(125.0), 1e-15);
}

TEST(WeightedMean, ExactValuesFallBackToSampleSpread) {
    const std::vector<Measurement> v{{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.5}};
    const auto wm = weighted_mean(v);
    EXPECT_NEAR(wm.mean, 2.0, 1e-15);
    EXPECT_NEAR(wm.std_error, 1.0 / std::sqrt(3.0), 1e-15);
    const std::vector<Measurement> one{{0.4, 0.0}};
    EXPECT_EQ(weighted_mean(one).std_error, 0.0);
    EXPECT_THROW(weighted_mean(std::vector<Measurement>{}), std::invalid_argument);
}

TEST(WeightedMean, RecoversTruthUnderHeteroscedasticNoise) {
    const double truth = 0.42;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> sig(0.01, 0.2);
    std::normal_distribution<double> z(0.0, 1.0);
    int covered = 0;
    double chi2 = 0.0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        std::vector<Measurement> v;
        for (int i = 0; i < 25; ++i) {
            const double s = sig(rng);
            v.push_back({truth + s * z(rng), s});
        }
        const auto wm = weighted_mean(v);
        const double pull = (wm.mean - truth) / wm.std_error;
        covered += std::abs(pull) <= 3.0 ? 1 : 0;
        chi2 += pull * pull;
    }
    EXPECT_GE(covered, 196);  // 99.7% expected
    EXPECT_NEAR(chi2 / reps, 1.0, 0.3);  // stderr is calibrated
}

TEST(Aggregate, PoolsSitesAndRealizations) {
    std::vector<OtocRecord> recs{
        rec(0.1, 0, 2, 1, 1, 1.0, 0.8, 0.1),  rec(0.1, 0, 2, 5, 1, 1.0, 0.6, 0.2),
        rec(0.1, 1, 2, 1, 1, 1.0, 0.8, 0.1),  rec(0.1, 1, 2, 5, 1, 1.0, 0.6, 0.2),
        rec(0.1, 0, 2, 2, 2, 1.0, 0.3, 0.1),  rec(0.2, 0, 2, 1, 1, 1.0, 0.1, 0.1),
    };
    const auto stats = aggregate(recs, Quantity::Numerator);
    ASSERT_EQ(stats.size(), 3u);
    EXPECT_EQ(stats[0].key, (GroupKey{0.1, 2, 1, 1.0}));
    EXPECT_EQ(stats[0].n_used, 4u);
    EXPECT_NEAR(*stats[0].mean, 0.76, 1e-15);
    EXPECT_NEAR(*stats[0].std_error, 1.0 / std::sqrt(250.0), 1e-15);
    EXPECT_EQ(stats[1].key, (GroupKey{0.1, 2, 2, 1.0}));
    EXPECT_EQ(stats[2].key, (GroupKey{0.2, 2, 1, 1.0}));
}

TEST(Aggregate, NormalizedErrorPropagation) {
    const std::vector<OtocRecord> recs{rec(0.1, 0, 1, 0, 0, 1.0, 0.5, 0.01, 0.8, 0.02)};
    const auto s = aggregate(recs, Quantity::Normalized);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_NEAR(*s[0].mean, 0.625, 1e-15);
    EXPECT_NEAR(*s[0].std_error, std::hypot(0.01 / 0.8, 0.5 * 0.02 / 0.64), 1e-15);
}

TEST(Aggregate, DiscardedRecordsAreCountedNotAveraged) {
    const std::vector<OtocRecord> recs{rec(0.1, 0, 1, 0, 0, 1.0, 0.5, 0.01, 0.8, 0.02),
                                       rec(0.1, 1, 1, 0, 0, 1.0, 0.5, 0.01, -0.1, 0.02),
                                       rec(0.1, 2, 1, 0, 0, 1.0, 0.4, 0.01, 0.0, 0.02)};
    const auto norm = aggregate(recs, Quantity::Normalized);
    ASSERT_EQ(norm.size(), 1u);
    EXPECT_EQ(norm[0].n_used, 1u);
    EXPECT_EQ(norm[0].n_discarded, 2u);
    EXPECT_NEAR(*norm[0].mean, 0.625, 1e-15);
    const auto num = aggregate(recs, Quantity::Numerator);
    EXPECT_EQ(num[0].n_used, 3u);
    EXPECT_EQ(num[0].n_discarded, 0u);
}

TEST(Aggregate, AllDiscardedIsAbsentWithDiagnostic) {
    const std::vector<OtocRecord> recs{rec(0.1, 0, 1, 0, 0, 1.0, 0.5, 0.01, -0.2, 0.02),
                                       rec(0.1, 1, 1, 0, 0, 1.0, 0.5, 0.01, 0.0, 0.02)};
    const auto s = aggregate(recs, Quantity::Normalized);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_FALSE(s[0].mean.has_value());
    EXPECT_FALSE(s[0].std_error.has_value());
    EXPECT_EQ(s[0].n_used + s[0].n_discarded, 2u);
    EXPECT_FALSE(s[0].diagnostic.empty());
    EXPECT_TRUE(aggregate(std::vector<OtocRecord>{}, Quantity::Normalized).empty());
}

TEST(Aggregate, PermutationInvariant) {
    std::vector<OtocRecord> recs;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::uint64_t r = 0; r < 25; ++r) {
        for (Qubit m = 0; m < 12; ++m) {
            for (double f : {1.0, 1.5}) {
                recs.push_back(rec(0.1 * (r % 3), r, 3, m, m % 4, f, u(rng), 0.01 + 0.1 * u(rng), 0.5 + u(rng),
                                   0.01 + 0.1 * u(rng)));
            }
        }
    }
    for (auto q : {Quantity::Normalized, Quantity::Numerator, Quantity::Denominator, Quantity::Zne}) {
        const auto base = aggregate(recs, q);
        auto shuffled = recs;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto again = aggregate(shuffled, q);
        ASSERT_EQ(again.size(), base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            EXPECT_EQ(again[i].key, base[i].key);
            EXPECT_NEAR(*again[i].mean, *base[i].mean, 1e-12);
            EXPECT_NEAR(*again[i].std_error, *base[i].std_error, 1e-12);
        }
    }
}

TEST(Aggregate, VeffAveragesLogsPerRecord) {
    const double p = 0.01;
    auto a = rec(0.1, 0, 4, 0, 0, 1.0, 0.5, 0.01, 0.9, 0.01);
    auto b = rec(0.1, 1, 4, 0, 0, 1.0, 0.5, 0.01, 0.5, 0.01 * 0.5 / 0.9);  // same relative error
    a.veff = std::log(0.9) / std::log1p(-p);
    b.veff = std::log(0.5) / std::log1p(-p);
    const std::vector<OtocRecord> recs{a, b};
    const auto s = aggregate(recs, Quantity::Veff);
    ASSERT_EQ(s.size(), 1u);
    const double log_first = 0.5 * (*a.veff + *b.veff);
    const double log_last = std::log(0.7) / std::log1p(-p);
    EXPECT_NEAR(*s[0].mean, log_first, 1e-9);
    EXPECT_GT(std::abs(*s[0].mean - log_last), 1.0);
    // dV/dF = 1 / (F log(1 - p)).
    EXPECT_NEAR(*s[0].std_error, (0.01 / 0.9) / std::abs(std::log1p(-p)) / std::sqrt(2.0), 1e-12);
}

TEST(Aggregate, NoVeffForNoiselessRecords) {
    const std::vector<OtocRecord> recs{rec(0.1, 0, 1, 0, 0, 1.0, 0.5, 0.0)};
    EXPECT_TRUE(aggregate(recs, Quantity::Veff).empty());
}

TEST(Aggregate, ZneGroupsUseFactorZero) {
    const double a = 0.7, b = 0.4;
    std::vector<OtocRecord> recs;
    for (std::uint64_t r = 0; r < 3; ++r) {
        for (double f : {1.0, 1.5}) {
            recs.push_back(rec(0.2, r, 5, 1, 2, f, a * std::exp(-b * f), 0.01));
        }
    }
    // A sign flip between factors cannot be extrapolated.
    recs.push_back(rec(0.2, 9, 5, 1, 2, 1.0, 0.1, 0.01));
    recs.push_back(rec(0.2, 9, 5, 1, 2, 1.5, -0.05, 0.01));
    const auto s = aggregate(recs, Quantity::Zne);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].key, (GroupKey{0.2, 5, 2, 0.0}));
    EXPECT_EQ(s[0].n_used, 3u);
    EXPECT_EQ(s[0].n_discarded, 1u);
    EXPECT_NEAR(*s[0].mean, a, 1e-12);
}

TEST(Zne, TwoPointClosedForm) {
    const std::vector<ZnePoint> pts{{1.0, 0.7 * std::exp(-0.4), 0.0}, {1.5, 0.7 * std::exp(-0.6), 0.0}};
    const auto z = zne_extrapolate(pts);
    EXPECT_EQ(z.status, ZneStatus::Ok);
    EXPECT_NEAR(z.estimate, 0.7, 1e-12);
    EXPECT_NEAR(z.decay, 0.4, 1e-12);
}

TEST(Zne, EqualValuesHaveNoDecay) {
    const std::vector<ZnePoint> pts{{1.0, 0.3, 0.01}, {1.5, 0.3, 0.01}};
    const auto z = zne_extrapolate(pts);
    EXPECT_EQ(z.decay, 0.0);
    EXPECT_EQ(z.estimate, 0.3);
}

TEST(Zne, RoundTripOverDecayRange) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ub(-5.0, 5.0), ua(0.01, 2.0);
    for (int i = 0; i < 500; ++i) {
        const double a = (i % 2 ? 1.0 : -1.0) * ua(rng);
        const double b = ub(rng);
        const std::vector<ZnePoint> pts{{1.0, a * std::exp(-b), 0.0}, {1.5, a * std::exp(-1.5 * b), 0.0}};
        const auto z = zne_extrapolate(pts);
        ASSERT_EQ(z.status, ZneStatus::Ok);
        EXPECT_NEAR(z.estimate, a, 1e-12 * std::max(1.0, std::abs(a))) << a << " " << b;
    }
}

TEST(Zne, ErrorPropagationMatchesFiniteDifferences) {
    const double y1 = 0.5, y2 = 0.4, s1 = 0.01, s2 = 0.02;
    const std::vector<ZnePoint> pts{{1.0, y1, s1}, {1.5, y2, s2}};
    const auto z = zne_extrapolate(pts);
    auto est = [](double a, double b) {
        const std::vector<ZnePoint> p{{1.0, a, 0.0}, {1.5, b, 0.0}};
        return zne_extrapolate(p).estimate;
    };
    const double h = 1e-6;
    const double d1 = (est(y1 + h, y2) - est(y1 - h, y2)) / (2 * h);
    const double d2 = (est(y1, y2 + h) - est(y1, y2 - h)) / (2 * h);
    EXPECT_NEAR(z.std_error, std::hypot(d1 * s1, d2 * s2), 1e-8);
}

TEST(Zne, ThreePointLeastSquares) {
    const std::vector<ZnePoint> exact{{1.0, -0.8 * std::exp(-0.3), 0.01},
                                      {1.5, -0.8 * std::exp(-0.45), 0.02},
                                      {3.0, -0.8 * std::exp(-0.9), 0.03}};
    const auto z = zne_extrapolate(exact);
    EXPECT_NEAR(z.estimate, -0.8, 1e-12);
    EXPECT_NEAR(z.decay, 0.3, 1e-12);
    EXPECT_GT(z.std_error, 0.0);
    auto zero_sigma = exact;
    zero_sigma[1].sigma = 0.0;
    EXPECT_NEAR(zne_extrapolate(zero_sigma).estimate, -0.8, 1e-12);
}

TEST(Zne, NotExtrapolableAndErrors) {
    EXPECT_EQ(zne_extrapolate(std::vector<ZnePoint>{{1.0, 0.2, 0.0}, {1.5, -0.1, 0.0}}).status,
              ZneStatus::NotExtrapolable);
    EXPECT_EQ(zne_extrapolate(std::vector<ZnePoint>{{1.0, 0.0, 0.0}, {1.5, 0.1, 0.0}}).status,
              ZneStatus::NotExtrapolable);
    EXPECT_THROW(zne_extrapolate(std::vector<ZnePoint>{{1.0, 0.2, 0.0}}), std::invalid_argument);
    EXPECT_THROW(zne_extrapolate(std::vector<ZnePoint>{{1.0, 0.2, 0.0}, {1.0, 0.1, 0.0}}), std::invalid_argument);
}

TEST(Crossover, LogisticCenter) {
    for (double center : {0.18, 0.17, 0.22}) {
        const auto est = estimate_crossover(logistic(center, 0.03));
        EXPECT_NEAR(est.w_c, center, local_step(center)) << center;
        EXPECT_FALSE(est.low_confidence);
    }
    EXPECT_NEAR(estimate_crossover(logistic(0.18, 0.03)).w_c, 0.18, 0.02);
}

TEST(Crossover, LinearCurveIsATie) {
    std::vector<CurvePoint> c;
    for (double w : kGrid) {
        c.push_back({w, 0.2 + 1.5 * w, 0.0});
    }
    std::vector<CurvePoint> uniform;
    for (int i = 0; i < 10; ++i) {
        uniform.push_back({0.05 * (i + 1), 0.1 + 0.3 * i, 0.0});
    }
    const auto est = estimate_crossover(uniform);
    EXPECT_TRUE(est.low_confidence);
    EXPECT_DOUBLE_EQ(est.w_c, 0.1);
    EXPECT_EQ(est.grid_index, 1u);
    EXPECT_TRUE(estimate_crossover(c).low_confidence);
}

TEST(Crossover, InvariantUnderOffsetEquivariantUnderShift) {
    const auto base = logistic(0.19, 0.05, 0.01);
    const auto est = estimate_crossover(base);
    auto offset = base;
    for (auto &p : offset) {
        p.mean += 0.3;
    }
    const auto e2 = estimate_crossover(offset);
    EXPECT_NEAR(e2.w_c, est.w_c, 1e-12);
    EXPECT_NEAR(e2.uncertainty, est.uncertainty, 1e-9);
    auto shifted = base;
    for (auto &p : shifted) {
        p.w += 1.0;
    }
    const auto e3 = estimate_crossover(shifted);
    EXPECT_NEAR(e3.w_c, est.w_c + 1.0, 1e-12);
    EXPECT_NEAR(e3.uncertainty, est.uncertainty, 1e-9);
}

TEST(Crossover, UncertaintyCombinesSpacingAndBootstrap) {
    const auto exact = estimate_crossover(logistic(0.18, 0.03));
    const std::size_t i = exact.grid_index;
    const double h = (kGrid[i + 1] - kGrid[i - 1]) / 2.0;
    EXPECT_NEAR(exact.uncertainty, h / 2.0, 1e-15);
    const auto noisy = estimate_crossover(logistic(0.18, 0.03, 0.05), {1000, 3});
    EXPECT_GT(noisy.uncertainty, h / 2.0);
    const auto again = estimate_crossover(logistic(0.18, 0.03, 0.05), {1000, 3});
    EXPECT_EQ(noisy.uncertainty, again.uncertainty);
}

TEST(Crossover, Errors) {
    EXPECT_THROW(estimate_crossover(std::vector<CurvePoint>{{0.1, 0, 0}, {0.2, 1, 0}}), std::invalid_argument);
    EXPECT_THROW(estimate_crossover(std::vector<CurvePoint>{{0.1, 0, 0}, {0.3, 1, 0}, {0.2, 2, 0}}),
                 std::invalid_argument);
    EXPECT_THROW(estimate_crossover(std::vector<CurvePoint>{{0.1, 0, 0}, {0.1, 1, 0}, {0.2, 2, 0}}),
                 std::invalid_argument);
}

TEST(Crossover, CurveAtSelectsOneSlice) {
    std::vector<EnsembleStats> stats;
    for (double w : {0.3, 0.1, 0.2}) {
        EnsembleStats s;
        s.key = {w, 10, 5, 1.0};
        s.mean = w;
        s.std_error = 0.01;
        stats.push_back(s);
        s.key.f = 1.5;
        stats.push_back(s);
    }
    stats.back().mean.reset();
    const auto c = curve_at(stats, Quantity::Normalized, 10, 5, 1.0);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c[0].w, 0.1);
    EXPECT_EQ(c[2].w, 0.3);
    EXPECT_EQ(curve_at(stats, Quantity::Normalized, 10, 5, 1.5).size(), 2u);
    EXPECT_TRUE(curve_at(stats, Quantity::Zne, 10, 5, 1.0).empty());
}

TEST(AggregatesCsv, RoundTripAndSchema) {
    std::vector<OtocRecord> recs{rec(0.1, 0, 1, 0, 0, 1.0, 0.5, 0.01, 0.8, 0.02),
                                 rec(0.2, 0, 1, 0, 0, 1.0, 0.5, 0.01, -0.8, 0.02)};
    auto stats = aggregate(recs, Quantity::Normalized);
    std::stringstream ss;
    write_aggregates_csv(ss, stats);
    EXPECT_EQ(read_aggregates_csv(ss), stats);
    std::istringstream future("# mblotoc-aggregates v9\n");
    EXPECT_THROW(read_aggregates_csv(future), std::runtime_error);
    EXPECT_EQ(quantity_from_name("zne"), Quantity::Zne);
    EXPECT_THROW(quantity_from_name("fidelity"), std::invalid_argument);
}
