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

#ifndef OCULOFILT_RECORDING_HPP
#define OCULOFILT_RECORDING_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oculofilt/error.hpp"

namespace oculofilt {

enum class Eye { left, right, unknown };

[[nodiscard]] inline std::string_view to_string(Eye eye) noexcept {
  switch (eye) {
    case Eye::left:
      return "left";
    case Eye::right:
      return "right";
    default:
      return "unknown";
  }
}

[[nodiscard]] inline Eye parse_eye(std::string_view text) noexcept {
  if (text == "left" || text == "L" || text == "l") return Eye::left;
  if (text == "right" || text == "R" || text == "r") return Eye::right;
  return Eye::unknown;
}

/// Placeholder stored in x_deg/y_deg for samples with no position.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

/// Tolerance on sample spacing, in milliseconds.
inline constexpr double kSpacingToleranceMs = 1e-9;

/// A gap-aware 2-D gaze position series in degrees of visual angle.
///
/// Dropped samples stay in the arrays with `valid[i] == false` so that index
/// arithmetic stays aligned with time.
struct Recording {
  std::string subject_id;
  Eye eye = Eye::unknown;
  double sample_rate_hz = 1000.0;
  std::vector<double> t_ms;
  std::vector<double> x_deg;
  std::vector<double> y_deg;
  std::vector<bool> valid;

  [[nodiscard]] std::size_t size() const noexcept { return t_ms.size(); }
  [[nodiscard]] double sample_period_ms() const noexcept { return 1000.0 / sample_rate_hz; }
};

/// A run of valid samples inside a Recording.
struct Span {
  std::size_t start_index = 0;
  std::size_t length = 0;

  [[nodiscard]] std::size_t end_index() const noexcept { return start_index + length; }
  friend bool operator==(const Span&, const Span&) = default;
};

/// Checks every Recording invariant; throws DataError naming the first offending row.
inline void validate(const Recording& rec) {
  if (!(rec.sample_rate_hz > 0.0) || !std::isfinite(rec.sample_rate_hz)) {
    throw DataError("sample_rate_hz must be a positive finite number");
  }
  const std::size_t n = rec.t_ms.size();
  if (n == 0) throw DataError("recording holds no samples");
  if (rec.x_deg.size() != n || rec.y_deg.size() != n || rec.valid.size() != n) {
    throw DataError("t_ms, x_deg, y_deg and valid must have equal length");
  }
  const double period = rec.sample_period_ms();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(rec.t_ms[i])) throw DataError("non-finite timestamp", i);
    if (rec.valid[i] && !(std::isfinite(rec.x_deg[i]) && std::isfinite(rec.y_deg[i]))) {
      throw DataError("valid sample with non-finite position", i);
    }
    if (i == 0) continue;
    const double step = rec.t_ms[i] - rec.t_ms[i - 1];
    if (!(step > 0.0)) throw DataError("non-monotone timestamps", i);
    if (std::abs(step - period) > kSpacingToleranceMs) {
      throw DataError("inconsistent sample spacing: " + std::to_string(step) + " ms, expected " +
                          std::to_string(period) + " ms",
                      i);
    }
  }
}

/// Maximal runs of valid samples, each at least `min_length` long, in index order.
[[nodiscard]] inline std::vector<Span> contiguous_valid_spans(const std::vector<bool>& valid,
                                                              std::size_t min_length) {
  if (min_length == 0) throw ArgumentError("min_length must be at least 1");
  std::vector<Span> spans;
  std::size_t i = 0;
  const std::size_t n = valid.size();
  while (i < n) {
    if (!valid[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && valid[j]) ++j;
    if (j - i >= min_length) spans.push_back({i, j - i});
    i = j;
  }
  return spans;
}

[[nodiscard]] inline std::vector<Span> contiguous_valid_spans(const Recording& rec,
                                                              std::size_t min_length) {
  return contiguous_valid_spans(rec.valid, min_length);
}

/// View of one channel over a span.
[[nodiscard]] inline std::span<const double> slice(const std::vector<double>& channel, Span s) {
  return std::span<const double>(channel).subspan(s.start_index, s.length);
}

}  // namespace oculofilt

#endif  // OCULOFILT_RECORDING_HPP
