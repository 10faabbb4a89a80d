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

#ifndef OCULOFILT_KINEMATICS_HPP
#define OCULOFILT_KINEMATICS_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "oculofilt/error.hpp"
#include "oculofilt/recording.hpp"

namespace oculofilt {

/// Half-width of the six-point difference, in samples.
inline constexpr std::size_t kVelocityHalfWidth = 3;

/// Velocity in deg/s. Entries with defined_mask false hold NaN.
struct VelocitySeries {
  double sample_rate_hz = 1000.0;
  std::vector<double> vx;
  std::vector<double> vy;
  std::vector<double> speed;
  std::vector<bool> defined_mask;

  [[nodiscard]] std::size_t size() const noexcept { return speed.size(); }
};

namespace detail {

inline VelocitySeries undefined_velocity(std::size_t n, double fs_hz) {
  VelocitySeries v;
  v.sample_rate_hz = fs_hz;
  v.vx.assign(n, kMissing);
  v.vy.assign(n, kMissing);
  v.speed.assign(n, kMissing);
  v.defined_mask.assign(n, false);
  return v;
}

/// Fills indices [offset+3, offset+n-4] of `v` from one contiguous run.
inline void six_point_into(VelocitySeries& v, std::span<const double> x,
                           std::span<const double> y, std::size_t offset) {
  const std::size_t n = x.size();
  const double scale = v.sample_rate_hz / 6.0;
  for (std::size_t i = kVelocityHalfWidth; i + kVelocityHalfWidth < n; ++i) {
    const double vx = (x[i + 3] - x[i - 3]) * scale;
    const double vy = (y[i + 3] - y[i - 3]) * scale;
    v.vx[offset + i] = vx;
    v.vy[offset + i] = vy;
    v.speed[offset + i] = std::hypot(vx, vy);
    v.defined_mask[offset + i] = true;
  }
}

}  // namespace detail

/// Six-point central difference, v[i] = (p[i+3] - p[i-3]) * fs / 6, on one
/// contiguous run of samples. Needs at least 7 samples.
[[nodiscard]] inline VelocitySeries velocity_six_point(std::span<const double> x,
                                                       std::span<const double> y, double fs_hz) {
  if (x.size() != y.size()) throw ArgumentError("x and y differ in length");
  if (x.size() < 2 * kVelocityHalfWidth + 1) {
    throw DataError("span of " + std::to_string(x.size()) +
                    " samples too short for six-point velocity (need 7)");
  }
  auto v = detail::undefined_velocity(x.size(), fs_hz);
  detail::six_point_into(v, x, y, 0);
  return v;
}

/// Velocity over a whole recording, computed within each valid span so no
/// difference straddles a dropout.
[[nodiscard]] inline VelocitySeries velocity_six_point(const Recording& rec) {
  auto v = detail::undefined_velocity(rec.size(), rec.sample_rate_hz);
  for (const auto& span : contiguous_valid_spans(rec, 2 * kVelocityHalfWidth + 1)) {
    detail::six_point_into(v, slice(rec.x_deg, span), slice(rec.y_deg, span), span.start_index);
  }
  return v;
}

enum class Channel { x, y };

struct FixationSegmentConfig {
  std::size_t block_length = 2048;
  std::size_t subsegment_length = 256;
  double max_speed_deg_s = 25.0;
  /// Veto on |vx| only instead of 2-D speed.
  bool horizontal_only = false;
  Channel channel = Channel::x;
};

/// A subsegment selected for spectral analysis.
struct FixationSegment {
  std::size_t start_index = 0;
  std::vector<double> samples;
};

/// Start indices of the subsegments that survive the velocity veto.
///
/// Each valid span is tiled from its start with non-overlapping blocks; a
/// block is dropped when any defined speed inside it is strictly above the
/// limit (undefined speeds do not veto). Survivors are cut into consecutive
/// subsegments.
[[nodiscard]] inline std::vector<std::size_t> fixation_segment_starts(
    const Recording& rec, const FixationSegmentConfig& cfg = {}) {
  if (cfg.block_length == 0 || cfg.subsegment_length == 0 ||
      cfg.block_length % cfg.subsegment_length != 0) {
    throw ArgumentError("block length must be a positive multiple of the subsegment length");
  }
  const auto velocity = velocity_six_point(rec);
  std::vector<std::size_t> starts;
  for (const auto& span : contiguous_valid_spans(rec, cfg.block_length)) {
    for (std::size_t b = span.start_index; b + cfg.block_length <= span.end_index();
         b += cfg.block_length) {
      bool fast = false;
      for (std::size_t i = b; i < b + cfg.block_length && !fast; ++i) {
        if (!velocity.defined_mask[i]) continue;
        const double s = cfg.horizontal_only ? std::abs(velocity.vx[i]) : velocity.speed[i];
        fast = s > cfg.max_speed_deg_s;
      }
      if (fast) continue;
      for (std::size_t s = b; s < b + cfg.block_length; s += cfg.subsegment_length) {
        starts.push_back(s);
      }
    }
  }
  return starts;
}

/// Copies the subsegments at `starts` from a channel.
[[nodiscard]] inline std::vector<FixationSegment> extract_segments(
    const std::vector<double>& channel, std::span<const std::size_t> starts, std::size_t length) {
  std::vector<FixationSegment> out;
  out.reserve(starts.size());
  for (std::size_t s : starts) {
    if (s + length > channel.size()) throw ArgumentError("segment runs past the channel end");
    out.push_back({s, std::vector<double>(channel.begin() + static_cast<std::ptrdiff_t>(s),
                                          channel.begin() + static_cast<std::ptrdiff_t>(s + length))});
  }
  return out;
}

[[nodiscard]] inline const std::vector<double>& channel_of(const Recording& rec, Channel c) {
  return c == Channel::x ? rec.x_deg : rec.y_deg;
}

[[nodiscard]] inline std::vector<FixationSegment> select_fixation_segments(
    const Recording& rec, const FixationSegmentConfig& cfg = {}) {
  const auto starts = fixation_segment_starts(rec, cfg);
  return extract_segments(channel_of(rec, cfg.channel), starts, cfg.subsegment_length);
}

}  // namespace oculofilt

#endif  // OCULOFILT_KINEMATICS_HPP
