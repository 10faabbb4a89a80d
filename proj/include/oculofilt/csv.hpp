// Copyright 2026 The oculofilt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OCULOFILT_CSV_HPP
#define OCULOFILT_CSV_HPP

#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "oculofilt/error.hpp"
#include "oculofilt/recording.hpp"

namespace oculofilt {

namespace csv {

/// Shortest decimal text that parses back to exactly `value`. Non-finite
/// values render as `nan`, `inf`, `-inf`.
[[nodiscard]] inline std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

[[nodiscard]] inline std::string_view trim(std::string_view text) noexcept {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() &&
         (text.back() == ' ' || text.back() == '\t' || text.back() == '\r' || text.back() == '\n')) {
    text.remove_suffix(1);
  }
  return text;
}

[[nodiscard]] inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

/// Parses a decimal field; nullopt on malformed text. Accepts `nan`/`inf`.
[[nodiscard]] inline std::optional<double> parse_number(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc{} || result.ptr != last) return std::nullopt;
  return value;
}

}  // namespace csv

/// Column header of the recording CSV format.
inline constexpr std::string_view kRecordingHeader = "t_ms,x_deg,y_deg";

/// Parses the recording CSV format:
///
///     # subject_id=s01
///     # eye=left
///     # sample_rate_hz=1000
///     t_ms,x_deg,y_deg
///     0,0.12,-0.40
///     1,,          <- dropout: empty field marks the sample invalid
///
/// Errors name the zero-based data row.
[[nodiscard]] inline Recording load_recording(std::istream& in) {
  Recording rec;
  std::string line;
  bool have_header = false;
  std::size_t row = 0;

  while (std::getline(in, line)) {
    const auto text = csv::trim(line);
    if (!have_header) {
      if (text.empty()) continue;
      if (text.front() == '#') {
        auto body = csv::trim(text.substr(1));
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) continue;
        const auto key = csv::trim(body.substr(0, eq));
        const auto value = csv::trim(body.substr(eq + 1));
        if (key == "subject_id") {
          rec.subject_id = std::string(value);
        } else if (key == "eye") {
          rec.eye = parse_eye(value);
        } else if (key == "sample_rate_hz") {
          const auto rate = csv::parse_number(value);
          if (!rate || !(*rate > 0.0) || !std::isfinite(*rate)) {
            throw DataError("malformed sample_rate_hz metadata: '" + std::string(value) + "'");
          }
          rec.sample_rate_hz = *rate;
        }
        continue;
      }
      const auto columns = csv::split(text);
      if (columns.size() != 3 || columns[0] != "t_ms" || columns[1] != "x_deg" ||
          columns[2] != "y_deg") {
        throw DataError("malformed header: expected '" + std::string(kRecordingHeader) +
                        "', got '" + std::string(text) + "'");
      }
      have_header = true;
      continue;
    }
    if (text.empty()) continue;
    const auto fields = csv::split(text);
    if (fields.size() != 3) {
      throw DataError("expected 3 fields, got " + std::to_string(fields.size()), row);
    }
    const auto t = csv::parse_number(fields[0]);
    if (!t || !std::isfinite(*t)) throw DataError("malformed timestamp", row);

    auto position = [&](std::string_view field) -> double {
      if (field.empty()) return kMissing;
      const auto value = csv::parse_number(field);
      if (!value) throw DataError("malformed position '" + std::string(field) + "'", row);
      return *value;
    };
    const double x = position(fields[1]);
    const double y = position(fields[2]);
    rec.t_ms.push_back(*t);
    rec.x_deg.push_back(x);
    rec.y_deg.push_back(y);
    rec.valid.push_back(std::isfinite(x) && std::isfinite(y));
    ++row;
  }
  if (!have_header) throw DataError("malformed header: no header line found");
  validate(rec);
  return rec;
}

[[nodiscard]] inline Recording load_recording(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_recording(in);
}

/// Writes `rec` in the format read by load_recording. Invalid samples are
/// written with empty position fields.
inline void write_recording(std::ostream& out, const Recording& rec) {
  if (!rec.subject_id.empty()) out << "# subject_id=" << rec.subject_id << '\n';
  out << "# eye=" << to_string(rec.eye) << '\n';
  out << "# sample_rate_hz=" << csv::format_number(rec.sample_rate_hz) << '\n';
  out << kRecordingHeader << '\n';
  for (std::size_t i = 0; i < rec.size(); ++i) {
    out << csv::format_number(rec.t_ms[i]) << ',';
    const double x = rec.x_deg[i];
    const double y = rec.y_deg[i];
    if (rec.valid[i]) {
      out << csv::format_number(x) << ',' << csv::format_number(y) << '\n';
    } else if (std::isfinite(x) && std::isfinite(y)) {
      out << ",\n";
    } else {
      if (std::isfinite(x)) out << csv::format_number(x);
      out << ',';
      if (std::isfinite(y)) out << csv::format_number(y);
      out << '\n';
    }
  }
}

[[nodiscard]] inline std::string to_csv(const Recording& rec) {
  std::ostringstream out;
  write_recording(out, rec);
  return out.str();
}

}  // namespace oculofilt

#endif  // OCULOFILT_CSV_HPP
