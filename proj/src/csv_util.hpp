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

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mbl::csv {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_optional(const std::optional<double> &v) { return v ? format_double(*v) : std::string{}; }

inline std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> fields;
    std::string current;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(current);
            current.clear();
        } else if (ch != '\r') {
            current.push_back(ch);
        }
    }
    fields.push_back(current);
    return fields;
}

inline double parse_double(const std::string &s, const char *column) {
    errno = 0;
    char *end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw std::runtime_error(std::string("bad value '") + s + "' in column " + column);
    }
    return v;
}

inline std::optional<double> parse_optional(const std::string &s, const char *column) {
    if (s.empty()) {
        return std::nullopt;
    }
    return parse_double(s, column);
}

inline std::uint64_t parse_uint(const std::string &s, const char *column) {
    errno = 0;
    char *end = nullptr;
    const auto v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || s[0] == '-' || end != s.c_str() + s.size() || errno == ERANGE) {
        throw std::runtime_error(std::string("bad integer '") + s + "' in column " + column);
    }
    return v;
}

/// Reads the "# <tag> v<k>" line and refuses other tags or versions newer than `supported`.
inline void expect_schema(std::istream &in, const std::string &tag, int supported) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("empty file, expected '# " + tag + " v" + std::to_string(supported) + "'");
    }
    const std::string prefix = "# " + tag + " v";
    if (line.rfind(prefix, 0) != 0) {
        throw std::runtime_error("schema mismatch: expected '" + prefix + "<version>', got '" + line + "'");
    }
    const int version = std::atoi(line.c_str() + prefix.size());
    if (version <= 0 || version > supported) {
        throw std::runtime_error("unsupported " + tag + " schema version " + line.substr(prefix.size()) +
                                 " (this build reads up to v" + std::to_string(supported) + ")");
    }
}

inline void expect_header(std::istream &in, const std::string &header) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("missing CSV header");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != header) {
        throw std::runtime_error("schema mismatch: header '" + line + "' != '" + header + "'");
    }
}

}  // namespace mbl::csv
