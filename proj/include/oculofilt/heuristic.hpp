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

#ifndef OCULOFILT_HEURISTIC_HPP
#define OCULOFILT_HEURISTIC_HPP

// Software versions of the two heuristic despike filters found on video
// eye trackers: STD removes one-sample spikes, EXTRA removes two-sample
// spikes and is meant to run on STD output.
//
// Both scan the signal causally and replace samples in place, so a value
// substituted at index i is what the window at i+1 sees. Replacement values
// are always copies of existing neighbours.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "oculofilt/error.hpp"

namespace oculofilt {

enum class HeuristicLevel { std_filter, extra_filter };

namespace detail {

inline void require_finite(std::span<const double> x, const char* what) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw ArgumentError(std::string(what) + ": non-finite sample at index " + std::to_string(i));
    }
  }
}

/// Nearer of two candidates to `value`; ties go to `preceding`.
[[nodiscard]] inline double nearer(double value, double preceding, double following) noexcept {
  return std::abs(value - preceding) <= std::abs(value - following) ? preceding : following;
}

}  // namespace detail

/// True when x[i] is a strict local extremum of (x[i-1], x[i], x[i+1]).
[[nodiscard]] inline bool is_one_sample_spike(double prev, double value, double next) noexcept {
  return (value - prev) * (value - next) > 0.0;
}

/// True when (a, b) both lie strictly outside the range of the outer pair.
[[nodiscard]] inline bool is_two_sample_spike(double prev, double a, double b,
                                              double next) noexcept {
  const double hi = std::max(prev, next);
  const double lo = std::min(prev, next);
  return (a > hi && b > hi) || (a < lo && b < lo);
}

/// STD filter. Requires at least 3 finite samples; first and last pass through.
[[nodiscard]] inline std::vector<double> std_filter(std::span<const double> x) {
  if (x.size() < 3) throw ArgumentError("std_filter: need at least 3 samples");
  detail::require_finite(x, "std_filter");
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t i = 1; i + 1 < out.size(); ++i) {
    if (is_one_sample_spike(out[i - 1], out[i], out[i + 1])) {
      out[i] = detail::nearer(out[i], out[i - 1], out[i + 1]);
    }
  }
  return out;
}

/// EXTRA filter. Requires at least 4 finite samples. Expects STD output;
/// use apply_heuristic(HeuristicLevel::extra_filter, ...) to chain both.
[[nodiscard]] inline std::vector<double> extra_filter(std::span<const double> x_std) {
  if (x_std.size() < 4) throw ArgumentError("extra_filter: need at least 4 samples");
  detail::require_finite(x_std, "extra_filter");
  std::vector<double> out(x_std.begin(), x_std.end());
  for (std::size_t i = 1; i + 2 < out.size(); ++i) {
    const double prev = out[i - 1];
    const double next = out[i + 2];
    if (is_two_sample_spike(prev, out[i], out[i + 1], next)) {
      out[i] = detail::nearer(out[i], prev, next);
      out[i + 1] = detail::nearer(out[i + 1], prev, next);
    }
  }
  return out;
}

[[nodiscard]] inline std::vector<double> apply_heuristic(HeuristicLevel level,
                                                         std::span<const double> x) {
  auto once = std_filter(x);
  if (level == HeuristicLevel::std_filter) return once;
  return extra_filter(once);
}

/// Minimum input length accepted by the given level.
[[nodiscard]] constexpr std::size_t min_length(HeuristicLevel level) noexcept {
  return level == HeuristicLevel::std_filter ? 3 : 4;
}

}  // namespace oculofilt

#endif  // OCULOFILT_HEURISTIC_HPP
