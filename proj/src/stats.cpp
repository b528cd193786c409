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

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>

#include "csv_util.hpp"
#include "mbl/random.hpp"

namespace mbl {

namespace {

constexpr const char *kAggregatesTag = "mblotoc-aggregates";
constexpr const char *kAggregatesHeader = "quantity,w,n,x,f,mean,stderr,n_used,n_discarded";

constexpr Quantity kAllQuantities[] = {Quantity::Normalized, Quantity::Veff, Quantity::Numerator,
                                       Quantity::Denominator, Quantity::Zne};

// One group member before reduction; `order` fixes the summation order independent of input order.
struct Member {
    std::tuple<std::uint64_t, Qubit> order;
    std::optional<Measurement> value;  // nullopt: counted as discarded
};

std::optional<Measurement> member_value(const OtocRecord &r, Quantity q, const AggregateOptions &opts) {
    switch (q) {
        case Quantity::Numerator:
            return Measurement{r.numerator, r.err_num};
        case Quantity::Denominator:
            return Measurement{r.denominator, r.err_den};
        case Quantity::Normalized: {
            if (r.discarded || !r.normalized) {
                return std::nullopt;
            }
            const double d = r.denominator;
            const double a = r.err_num / d;
            const double b = r.numerator * r.err_den / (d * d);
            return Measurement{*r.normalized, std::sqrt(a * a + b * b)};
        }
        case Quantity::Veff: {
            if (r.discarded || !r.veff) {
                return std::nullopt;
            }
            const double F = r.denominator;
            const double v = *r.veff;
            // dV/dF = 1 / (F log(1 - p)); log(1 - p) = log F / V when V != 0.
            double log_rate = 0.0;
            if (v != 0.0) {
                log_rate = std::log(F) / v;
            } else {
                log_rate = std::log1p(-opts.error_rate * r.f);
            }
            return Measurement{v, r.err_den / (F * std::abs(log_rate))};
        }
        case Quantity::Zne:
            break;
    }
    throw std::logic_error("member_value: ZNE is handled separately");
}

EnsembleStats reduce(Quantity q, const GroupKey &key, std::vector<Member> &members) {
    std::sort(members.begin(), members.end(), [](const Member &a, const Member &b) { return a.order < b.order; });
    EnsembleStats s;
    s.quantity = q;
    s.key = key;
    std::vector<Measurement> used;
    for (const auto &m : members) {
        if (m.value) {
            used.push_back(*m.value);
        } else {
            ++s.n_discarded;
        }
    }
    s.n_used = used.size();
    if (used.empty()) {
        s.diagnostic = "all " + std::to_string(s.n_discarded) + " records discarded";
        return s;
    }
    const auto wm = weighted_mean(used);
    s.mean = wm.mean;
    s.std_error = wm.std_error;
    return s;
}

struct Located {
    double w_c = 0.0;
    std::size_t index = 0;
    double slope = 0.0;
    bool tie = false;
};

Located locate(std::span<const double> w, std::span<const double> y) {
    const std::size_t k = w.size();
    std::vector<double> slope(k, 0.0);
    double scale = 0.0;
    for (std::size_t i = 1; i + 1 < k; ++i) {
        slope[i] = (y[i + 1] - y[i - 1]) / (w[i + 1] - w[i - 1]);
        scale = std::max(scale, std::abs(slope[i]));
    }
    const double tol = 1e-9 * scale;
    Located out;
    out.index = 1;
    for (std::size_t i = 2; i + 1 < k; ++i) {
        if (slope[i] > slope[out.index] + tol) {
            out.index = i;
        }
    }
    const std::size_t b = out.index;
    out.slope = slope[b];
    for (std::size_t i = 1; i + 1 < k; ++i) {
        if (i != b && std::abs(slope[i] - slope[b]) <= tol) {
            out.tie = true;
        }
    }
    out.w_c = w[b];
    if (out.tie || b < 2 || b + 2 >= k) {
        return out;
    }
    // Vertex of the parabola through the peak slope and its two interior neighbours.
    const double x0 = w[b - 1], x1 = w[b], x2 = w[b + 1];
    const double y0 = slope[b - 1], y1 = slope[b], y2 = slope[b + 1];
    const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
    const double A = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
    const double B = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
    if (A < 0.0) {
        out.w_c = std::clamp(-B / (2.0 * A), x0, x2);
    }
    return out;
}

}  // namespace

std::string_view quantity_name(Quantity q) {
    switch (q) {
        case Quantity::Normalized:
            return "normalized";
        case Quantity::Veff:
            return "veff";
        case Quantity::Numerator:
            return "numerator";
        case Quantity::Denominator:
            return "denominator";
        case Quantity::Zne:
            return "zne";
    }
    return "?";
}

Quantity quantity_from_name(std::string_view name) {
    for (auto q : kAllQuantities) {
        if (quantity_name(q) == name) {
            return q;
        }
    }
    throw std::invalid_argument("unknown quantity '" + std::string(name) + "'");
}

WeightedMean weighted_mean(std::span<const Measurement> values) {
    if (values.empty()) {
        throw std::invalid_argument("weighted_mean: empty group");
    }
    const bool exact = std::any_of(values.begin(), values.end(),
                                   [](const Measurement &m) { return !(m.sigma > 0.0) || !std::isfinite(m.sigma); });
    WeightedMean out;
    if (!exact) {
        double sw = 0.0;
        double swy = 0.0;
        for (const auto &m : values) {
            const double wt = 1.0 / (m.sigma * m.sigma);
            sw += wt;
            swy += wt * m.value;
        }
        out.mean = swy / sw;
        out.std_error = 1.0 / std::sqrt(sw);
        return out;
    }
    const double k = static_cast<double>(values.size());
    double sum = 0.0;
    for (const auto &m : values) {
        sum += m.value;
    }
    out.mean = sum / k;
    if (values.size() > 1) {
        double ss = 0.0;
        for (const auto &m : values) {
            ss += (m.value - out.mean) * (m.value - out.mean);
        }
        out.std_error = std::sqrt(ss / (k - 1.0) / k);
    }
    return out;
}

std::vector<EnsembleStats> aggregate(std::span<const OtocRecord> records, Quantity quantity,
                                     const AggregateOptions &opts) {
    std::map<GroupKey, std::vector<Member>> groups;
    if (quantity == Quantity::Zne) {
        for (const auto &z : zne_records(records)) {
            std::optional<Measurement> v;
            if (z.result.status == ZneStatus::Ok) {
                v = Measurement{z.result.estimate, z.result.std_error};
            }
            groups[GroupKey{z.w, z.n, z.x, 0.0}].push_back(Member{{z.realization, z.m}, v});
        }
    } else {
        for (const auto &r : records) {
            if (quantity == Quantity::Veff && !r.veff && !r.discarded) {
                continue;  // noiseless or no error rate: V_eff is undefined, not discarded
            }
            groups[GroupKey{r.w, r.n, r.x, r.f}].push_back(
                Member{{r.realization, r.m}, member_value(r, quantity, opts)});
        }
    }

    std::vector<EnsembleStats> out;
    out.reserve(groups.size());
    for (auto &[key, members] : groups) {
        out.push_back(reduce(quantity, key, members));
    }
    return out;
}

ZneResult zne_extrapolate(std::span<const ZnePoint> points) {
    if (points.size() < 2) {
        throw std::invalid_argument("zne_extrapolate: need at least two noise factors");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[i].f == points[j].f) {
                throw std::invalid_argument("zne_extrapolate: repeated noise factor");
            }
        }
    }
    ZneResult out;
    const bool positive = points[0].y > 0.0;
    for (const auto &p : points) {
        if (p.y == 0.0 || !std::isfinite(p.y) || (p.y > 0.0) != positive) {
            out.status = ZneStatus::NotExtrapolable;
            return out;
        }
    }
    const double sign = positive ? 1.0 : -1.0;

    if (points.size() == 2) {
        const auto &[f1, y1, s1] = points[0];
        const auto &[f2, y2, s2] = points[1];
        const double delta = f2 - f1;
        out.decay = std::log(y1 / y2) / delta;
        out.estimate = y1 * std::exp(out.decay * f1);
        const double r1 = (f2 / delta) * (s1 / y1);
        const double r2 = (f1 / delta) * (s2 / y2);
        out.std_error = std::abs(out.estimate) * std::sqrt(r1 * r1 + r2 * r2);
        return out;
    }

    // Weighted least squares for ln|y| = c - b f with weights (y/sigma)^2, or equal weights
    // when some sigma is zero. c is linear in the ln|y_i|, which gives the propagated error.
    const bool exact = std::any_of(points.begin(), points.end(), [](const ZnePoint &p) { return !(p.sigma > 0.0); });
    std::vector<double> wt(points.size(), 1.0);
    if (!exact) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            wt[i] = (points[i].y / points[i].sigma) * (points[i].y / points[i].sigma);
        }
    }
    double sw = 0.0, sf = 0.0, sff = 0.0, sl = 0.0, sfl = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double l = std::log(std::abs(points[i].y));
        sw += wt[i];
        sf += wt[i] * points[i].f;
        sff += wt[i] * points[i].f * points[i].f;
        sl += wt[i] * l;
        sfl += wt[i] * points[i].f * l;
    }
    const double det = sw * sff - sf * sf;
    const double c = (sff * sl - sf * sfl) / det;
    out.decay = -(sw * sfl - sf * sl) / det;
    out.estimate = sign * std::exp(c);
    double var_c = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double coeff = wt[i] * (sff - points[i].f * sf) / det;
        const double rel = points[i].sigma / points[i].y;
        var_c += coeff * coeff * rel * rel;
    }
    out.std_error = std::abs(out.estimate) * std::sqrt(var_c);
    return out;
}

std::vector<ZneRecord> zne_records(std::span<const OtocRecord> records) {
    using Key = std::tuple<double, std::uint64_t, std::size_t, Qubit>;
    std::map<Key, std::vector<const OtocRecord *>> groups;
    for (const auto &r : records) {
        groups[Key{r.w, r.realization, r.n, r.m}].push_back(&r);
    }
    std::vector<ZneRecord> out;
    for (auto &[key, members] : groups) {
        std::sort(members.begin(), members.end(), [](const OtocRecord *a, const OtocRecord *b) { return a->f < b->f; });
        members.erase(std::unique(members.begin(), members.end(),
                                  [](const OtocRecord *a, const OtocRecord *b) { return a->f == b->f; }),
                      members.end());
        if (members.size() < 2) {
            continue;
        }
        std::vector<ZnePoint> points;
        for (const auto *r : members) {
            points.push_back(ZnePoint{r->f, r->numerator, r->err_num});
        }
        ZneRecord z;
        std::tie(z.w, z.realization, z.n, z.m) = key;
        z.x = members.front()->x;
        z.result = zne_extrapolate(points);
        out.push_back(z);
    }
    return out;
}

CrossoverEstimate estimate_crossover(std::span<const CurvePoint> curve, const CrossoverOptions &opts) {
    if (curve.size() < 3) {
        throw std::invalid_argument("estimate_crossover: need at least 3 points, got " + std::to_string(curve.size()));
    }
    const std::size_t k = curve.size();
    std::vector<double> w(k), y(k);
    for (std::size_t i = 0; i < k; ++i) {
        w[i] = curve[i].w;
        y[i] = curve[i].mean;
        if (i > 0 && !(w[i] > w[i - 1])) {
            throw std::invalid_argument("estimate_crossover: W must be strictly increasing");
        }
    }
    const Located best = locate(w, y);
    CrossoverEstimate out;
    out.w_c = best.w_c;
    out.grid_index = best.index;
    out.max_slope = best.slope;
    out.low_confidence = best.tie;

    double boot_sd = 0.0;
    const bool noisy = std::any_of(curve.begin(), curve.end(), [](const CurvePoint &p) { return p.std_error > 0.0; });
    if (noisy && opts.resamples > 1) {
        auto rng = make_stream(StreamDomain::Bootstrap, opts.seed);
        std::vector<double> ys(k);
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t r = 0; r < opts.resamples; ++r) {
            for (std::size_t i = 0; i < k; ++i) {
                ys[i] = y[i] + curve[i].std_error * standard_normal(rng);
            }
            const double wc = locate(w, ys).w_c;
            sum += wc;
            sum2 += wc * wc;
        }
        const double n = static_cast<double>(opts.resamples);
        const double mean = sum / n;
        boot_sd = std::sqrt(std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)));
    }
    const double spacing = (w[best.index + 1] - w[best.index - 1]) / 2.0;
    out.uncertainty = std::sqrt(spacing * spacing / 4.0 + boot_sd * boot_sd);
    return out;
}

std::vector<CurvePoint> curve_at(std::span<const EnsembleStats> stats, Quantity quantity, std::size_t n,
                                 std::size_t x, double f) {
    std::vector<CurvePoint> out;
    for (const auto &s : stats) {
        if (s.quantity == quantity && s.key.n == n && s.key.x == x && s.key.f == f && s.mean) {
            out.push_back(CurvePoint{s.key.w, *s.mean, s.std_error.value_or(0.0)});
        }
    }
    std::sort(out.begin(), out.end(), [](const CurvePoint &a, const CurvePoint &b) { return a.w < b.w; });
    return out;
}

void write_aggregates_csv(std::ostream &out, std::span<const EnsembleStats> stats) {
    out << "# " << kAggregatesTag << " v" << kAggregatesSchemaVersion << '\n' << kAggregatesHeader << '\n';
    for (const auto &s : stats) {
        out << quantity_name(s.quantity) << ',' << csv::format_double(s.key.w) << ',' << s.key.n << ',' << s.key.x
            << ',' << csv::format_double(s.key.f) << ',' << csv::format_optional(s.mean) << ','
            << csv::format_optional(s.std_error) << ',' << s.n_used << ',' << s.n_discarded << '\n';
    }
}

std::vector<EnsembleStats> read_aggregates_csv(std::istream &in) {
    csv::expect_schema(in, kAggregatesTag, kAggregatesSchemaVersion);
    csv::expect_header(in, kAggregatesHeader);
    std::vector<EnsembleStats> stats;
    std::string line;
    std::size_t line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = csv::split(line);
        if (fields.size() != 9) {
            throw std::runtime_error("aggregates line " + std::to_string(line_no) + ": expected 9 fields, got " +
                                     std::to_string(fields.size()));
        }
        try {
            EnsembleStats s;
            s.quantity = quantity_from_name(fields[0]);
            s.key.w = csv::parse_double(fields[1], "w");
            s.key.n = csv::parse_uint(fields[2], "n");
            s.key.x = csv::parse_uint(fields[3], "x");
            s.key.f = csv::parse_double(fields[4], "f");
            s.mean = csv::parse_optional(fields[5], "mean");
            s.std_error = csv::parse_optional(fields[6], "stderr");
            s.n_used = csv::parse_uint(fields[7], "n_used");
            s.n_discarded = csv::parse_uint(fields[8], "n_discarded");
            if (!s.mean) {
                s.diagnostic = "all " + std::to_string(s.n_discarded) + " records discarded";
            }
            stats.push_back(s);
        } catch (const std::exception &ex) {
            throw std::runtime_error("aggregates line " + std::to_string(line_no) + ": " + ex.what());
        }
    }
    return stats;
}

}  // namespace mbl
