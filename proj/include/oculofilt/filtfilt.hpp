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

#ifndef OCULOFILT_FILTFILT_HPP
#define OCULOFILT_FILTFILT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "oculofilt/butterworth.hpp"
#include "oculofilt/error.hpp"

namespace oculofilt {

/// Per-section transposed direct-form II state.
using SectionState = std::array<double, 2>;

/// State each section holds after an infinitely long unit-step input.
[[nodiscard]] inline std::vector<SectionState> steady_state(const BiquadCascade& filter) {
  std::vector<SectionState> zi;
  zi.reserve(filter.sections().size());
  double level = 1.0;  // input level reaching the current section
  for (const auto& s : filter.sections()) {
    const double g = s.dc_gain();
    const double y = g * level;
    const double z2 = s.b2 * level - s.a2 * y;
    const double z1 = s.b1 * level - s.a1 * y + z2;
    zi.push_back({z1, z2});
    level = y;
  }
  return zi;
}

/// Runs `x` once through the cascade, starting from `state` (updated in place).
inline void sosfilt_inplace(const BiquadCascade& filter, std::span<double> x,
                            std::vector<SectionState>& state) {
  const auto& sections = filter.sections();
  for (std::size_t k = 0; k < sections.size(); ++k) {
    const auto& s = sections[k];
    double z1 = state[k][0];
    double z2 = state[k][1];
    for (double& v : x) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
    state[k] = {z1, z2};
  }
  const double g = filter.overall_gain();
  for (double& v : x) v *= g;
}

/// Single causal pass from rest.
[[nodiscard]] inline std::vector<double> sosfilt(const BiquadCascade& filter,
                                                 std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  std::vector<SectionState> state(filter.sections().size(), SectionState{0.0, 0.0});
  sosfilt_inplace(filter, out, state);
  return out;
}

/// Reflection padding used on each side by filtfilt.
[[nodiscard]] inline std::size_t filtfilt_padding(const BiquadCascade& filter) noexcept {
  return 3 * (2 * static_cast<std::size_t>(filter.design().order) + 1);
}

/// Zero-phase filtering: forward pass, then a pass over the reversed result.
///
/// The effective magnitude is the square of the single-pass magnitude and the
/// phase is zero. Both ends are extended by odd reflection about the end
/// sample and each pass starts from the steady state for its first padded
/// sample, so constant inputs come out unchanged.
[[nodiscard]] inline std::vector<double> filtfilt(const BiquadCascade& filter,
                                                  std::span<const double> x) {
  const std::size_t pad = filtfilt_padding(filter);
  const std::size_t n = x.size();
  if (n <= pad) {
    throw DataError("signal of " + std::to_string(n) + " samples too short for zero-phase " +
                    "filtering (need more than " + std::to_string(pad) + ")");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i])) {
      throw ArgumentError("filtfilt: non-finite sample at index " + std::to_string(i));
    }
  }

  std::vector<double> ext(n + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) {
    ext[i] = 2.0 * x[0] - x[pad - i];
    ext[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];
  }
  std::copy(x.begin(), x.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));

  const auto zi = steady_state(filter);
  auto scaled = [&](double level) {
    auto state = zi;
    for (auto& s : state) {
      s[0] *= level;
      s[1] *= level;
    }
    return state;
  };

  auto state = scaled(ext.front());
  sosfilt_inplace(filter, ext, state);
  std::reverse(ext.begin(), ext.end());
  state = scaled(ext.front());
  sosfilt_inplace(filter, ext, state);
  std::reverse(ext.begin(), ext.end());

  return {ext.begin() + static_cast<std::ptrdiff_t>(pad),
          ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

}  // namespace oculofilt

#endif  // OCULOFILT_FILTFILT_HPP
