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

#ifndef OCULOFILT_SACCADES_HPP
#define OCULOFILT_SACCADES_HPP

// A plain velocity-threshold saccade detector with hysteresis. It exists so
// main-sequence analyses can run end to end; it is not a replacement for a
// validated event classifier.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "oculofilt/error.hpp"
#include "oculofilt/kinematics.hpp"
#include "oculofilt/recording.hpp"

namespace oculofilt {

struct SaccadeRecord {
  std::size_t onset_index = 0;
  std::size_t offset_index = 0;
  double amplitude_deg = 0.0;  // straight-line onset-to-offset displacement
  double peak_velocity_deg_s = 0.0;
  double duration_ms = 0.0;
};

struct DetectorConfig {
  double onset_threshold_deg_s = 30.0;
  double offset_threshold_deg_s = 20.0;
  double min_duration_ms = 6.0;
  double merge_gap_ms = 20.0;
};

/// Intervals whose speed stays above the offset threshold and reaches the
/// onset threshold somewhere; neighbours separated by no more than the merge
/// gap are joined, then intervals shorter than the minimum duration dropped.
[[nodiscard]] inline std::vector<SaccadeRecord> detect_saccades(const VelocitySeries& v,
                                                                std::span<const double> x,
                                                                std::span<const double> y,
                                                                const DetectorConfig& cfg = {}) {
  if (x.size() != v.size() || y.size() != v.size()) {
    throw ArgumentError("positions and velocity differ in length");
  }
  if (!(cfg.offset_threshold_deg_s <= cfg.onset_threshold_deg_s)) {
    throw ArgumentError("offset threshold must not exceed onset threshold");
  }
  const std::size_t n = v.size();
  const double ms_per_sample = 1000.0 / v.sample_rate_hz;
  auto above = [&](std::size_t i, double threshold) {
    return v.defined_mask[i] && v.speed[i] > threshold;
  };

  struct Interval {
    std::size_t on, off;
  };
  std::vector<Interval> intervals;
  std::size_t i = 0;
  while (i < n) {
    if (!above(i, cfg.offset_threshold_deg_s)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    bool reaches_onset = false;
    while (j < n && above(j, cfg.offset_threshold_deg_s)) {
      reaches_onset = reaches_onset || v.speed[j] > cfg.onset_threshold_deg_s;
      ++j;
    }
    if (reaches_onset) intervals.push_back({i, j - 1});
    i = j;
  }

  std::vector<Interval> merged;
  for (const auto& iv : intervals) {
    if (!merged.empty()) {
      auto& last = merged.back();
      const double gap_ms = static_cast<double>(iv.on - last.off) * ms_per_sample;
      bool contiguous = true;
      for (std::size_t k = last.off; k <= iv.on && contiguous; ++k) {
        contiguous = v.defined_mask[k];
      }
      if (gap_ms <= cfg.merge_gap_ms && contiguous) {
        last.off = iv.off;
        continue;
      }
    }
    merged.push_back(iv);
  }

  std::vector<SaccadeRecord> out;
  for (const auto& iv : merged) {
    if (iv.off <= iv.on) continue;
    const double duration = static_cast<double>(iv.off - iv.on) * ms_per_sample;
    if (duration < cfg.min_duration_ms) continue;
    SaccadeRecord r;
    r.onset_index = iv.on;
    r.offset_index = iv.off;
    r.duration_ms = duration;
    r.amplitude_deg = std::hypot(x[iv.off] - x[iv.on], y[iv.off] - y[iv.on]);
    double peak = 0.0;
    for (std::size_t k = iv.on; k <= iv.off; ++k) peak = std::max(peak, v.speed[k]);
    r.peak_velocity_deg_s = peak;
    out.push_back(r);
  }
  return out;
}

[[nodiscard]] inline std::vector<SaccadeRecord> detect_saccades(const Recording& rec,
                                                                const DetectorConfig& cfg = {}) {
  return detect_saccades(velocity_six_point(rec), rec.x_deg, rec.y_deg, cfg);
}

}  // namespace oculofilt

#endif  // OCULOFILT_SACCADES_HPP
