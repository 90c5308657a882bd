// Copyright 2026 The dfsdecoh Authors
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

// CSV ingestion and writers for datasets and curves, plus the
// `start:stop:steps` time-grid syntax.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dfsdecoh/errors.hpp"
#include "dfsdecoh/fieldnoise.hpp"
#include "dfsdecoh/modelfit.hpp"

namespace dfsdecoh::io {

inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string_view trim(std::string_view s) noexcept {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string_view> split_commas(std::string_view s) {
    std::vector<std::string_view> out;
    for (;;) {
        const auto pos = s.find(',');
        out.push_back(trim(s.substr(0, pos)));
        if (pos == std::string_view::npos) {
            return out;
        }
        s.remove_prefix(pos + 1);
    }
}

/// Strict decimal parse; the whole field must be consumed.
inline bool parse_double(std::string_view field, double &out) {
    if (field.empty()) {
        return false;
    }
    if (field.front() == '+') {
        field.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc{} && ptr == field.data() + field.size();
}

/// Reads `time,visibility[,visibility_err]` rows. Blank lines and lines
/// starting with '#' are skipped; line numbers are 1-based file lines.
inline VisibilityDataset read_dataset_csv(std::istream &in, std::string label = {}) {
    VisibilityDataset ds;
    ds.label = std::move(label);
    std::string raw;
    std::size_t line_no = 0;
    bool have_header = false;
    bool has_err_column = false;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) {
            line.remove_prefix(3);
        }
        line = trim(line);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto fields = split_commas(line);
        if (!have_header) {
            if (fields.size() >= 2 && fields.size() <= 3 && fields[0] == "time" && fields[1] == "visibility" &&
                (fields.size() == 2 || fields[2] == "visibility_err")) {
                have_header = true;
                has_err_column = fields.size() == 3;
                continue;
            }
            throw Error(ErrorKind::ParseError,
                        "line " + std::to_string(line_no) + ": expected header time,visibility[,visibility_err]",
                        line_no);
        }
        const std::size_t expected = has_err_column ? 3 : 2;
        if (fields.size() != expected && !(has_err_column && fields.size() == 2)) {
            throw Error(ErrorKind::ParseError,
                        "line " + std::to_string(line_no) + ": expected " + std::to_string(expected) + " fields",
                        line_no);
        }
        VisibilityPoint p;
        p.line = line_no;
        if (!parse_double(fields[0], p.t) || !parse_double(fields[1], p.v)) {
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": malformed number", line_no);
        }
        if (fields.size() == 3 && !fields[2].empty()) {
            double err = 0.0;
            if (!parse_double(fields[2], err)) {
                throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": malformed error value",
                            line_no);
            }
            p.err = err;
        }
        ds.points.push_back(p);
    }
    if (!have_header) {
        throw Error(ErrorKind::ParseError, "missing header time,visibility[,visibility_err]", line_no);
    }
    ds.validate();
    return ds;
}

inline VisibilityDataset ingest_csv(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::ParseError, "cannot open " + path);
    }
    return read_dataset_csv(in, path);
}

inline void write_dataset_csv(const VisibilityDataset &ds, std::ostream &out) {
    bool has_err = false;
    for (const auto &p : ds.points) {
        has_err = has_err || p.err.has_value();
    }
    if (!ds.label.empty()) {
        out << "# " << ds.label << '\n';
    }
    out << (has_err ? "time,visibility,visibility_err\n" : "time,visibility\n");
    for (const auto &p : ds.points) {
        out << format_double(p.t) << ',' << format_double(p.v);
        if (has_err) {
            out << ',';
            if (p.err) {
                out << format_double(*p.err);
            }
        }
        out << '\n';
    }
}

inline void write_curve_csv(const DecoherenceCurve &curve, std::ostream &out) {
    out << "time,abs_k,re_k,im_k,stderr\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto &k = curve.k[i];
        out << format_double(curve.times[i]) << ',' << format_double(std::abs(k.value)) << ','
            << format_double(k.value.real()) << ',' << format_double(k.value.imag()) << ','
            << format_double(k.std_error) << '\n';
    }
}

/// `start:stop:steps`, inclusive endpoints, `steps` intervals (steps + 1
/// points); `steps` = 0 requires start == stop and yields one point.
inline std::vector<double> parse_time_grid(std::string_view spec) {
    const auto first = spec.find(':');
    const auto second = first == std::string_view::npos ? first : spec.find(':', first + 1);
    double start = 0.0;
    double stop = 0.0;
    double steps_d = 0.0;
    if (second == std::string_view::npos || !parse_double(trim(spec.substr(0, first)), start) ||
        !parse_double(trim(spec.substr(first + 1, second - first - 1)), stop) ||
        !parse_double(trim(spec.substr(second + 1)), steps_d)) {
        throw Error(ErrorKind::ConfigError, "time grid must look like start:stop:steps");
    }
    if (steps_d < 0 || steps_d != std::floor(steps_d) || steps_d > 1e7) {
        throw Error(ErrorKind::ConfigError, "time grid steps must be a non-negative integer");
    }
    const auto steps = static_cast<std::size_t>(steps_d);
    if (start < 0 || (steps == 0 && start != stop) || (steps > 0 && !(stop > start))) {
        throw Error(ErrorKind::ConfigError, "time grid needs 0 <= start < stop (or start == stop with 0 steps)");
    }
    std::vector<double> t(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        t[i] = i == steps ? stop : start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps);
    }
    return t;
}

}  // namespace dfsdecoh::io
