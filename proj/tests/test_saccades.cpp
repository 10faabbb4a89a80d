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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <oculofilt/pipeline.hpp>
#include <oculofilt/saccades.hpp>
#include <oculofilt/synth.hpp>

namespace {

namespace synth = oculofilt::synth;
using oculofilt::detect_saccades;
using oculofilt::VelocitySeries;

constexpr synth::NoiseModel kNoNoise{synth::NoiseKind::white_gaussian, 0.0, 0.0, 0.0, 1};

VelocitySeries speed_series(const std::vector<double>& speed) {
  VelocitySeries v;
  v.sample_rate_hz = 1000.0;
  v.speed = speed;
  v.vx = speed;
  v.vy.assign(speed.size(), 0.0);
  v.defined_mask.assign(speed.size(), true);
  return v;
}

TEST(DetectSaccades, NothingBelowThreshold) {
  const std::vector<double> speed(500, 29.0);
  const std::vector<double> pos(500, 0.0);
  EXPECT_TRUE(detect_saccades(speed_series(speed), pos, pos).empty());
}

TEST(DetectSaccades, SingleRaisedCosine) {
  const std::vector<synth::SaccadeProfile> p{{10.0, 50.0, 200.0}};
  const auto s = synth::gen_saccade_recording(p, kNoNoise, 600, 1000.0);
  const auto found = detect_saccades(s.recording);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_NEAR(found[0].amplitude_deg, 10.0, 0.2);
  EXPECT_NEAR(found[0].peak_velocity_deg_s, 314.16, 314.16 * 0.02);
  EXPECT_NEAR(static_cast<double>(found[0].onset_index), 200.0, 2.0);
  EXPECT_NEAR(static_cast<double>(found[0].offset_index), 250.0, 2.0);
  EXPECT_NEAR(found[0].duration_ms, 50.0, 4.0);
}

TEST(DetectSaccades, HysteresisNeedsOnsetCrossing) {
  std::vector<double> speed(200, 0.0);
  for (int i = 20; i < 40; ++i) speed[i] = 25.0;  // above offset, never above onset
  for (int i = 100; i < 120; ++i) speed[i] = i == 110 ? 40.0 : 25.0;
  const std::vector<double> pos(200, 0.0);
  const auto found = detect_saccades(speed_series(speed), pos, pos);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].onset_index, 100u);
  EXPECT_EQ(found[0].offset_index, 119u);
  EXPECT_EQ(found[0].peak_velocity_deg_s, 40.0);
}

TEST(DetectSaccades, MergesAcrossShortGap) {
  std::vector<double> speed(300, 0.0);
  for (int i = 50; i < 70; ++i) speed[i] = 100.0;
  for (int i = 85; i < 105; ++i) speed[i] = 100.0;   // 16 ms from 69 to 85
  for (int i = 150; i < 170; ++i) speed[i] = 100.0;  // 46 ms from 104 to 150
  const std::vector<double> pos(300, 0.0);
  const auto found = detect_saccades(speed_series(speed), pos, pos);
  ASSERT_EQ(found.size(), 2u);
  EXPECT_EQ(found[0].onset_index, 50u);
  EXPECT_EQ(found[0].offset_index, 104u);
  EXPECT_EQ(found[1].onset_index, 150u);
}

TEST(DetectSaccades, DropsShortEvents) {
  std::vector<double> speed(100, 0.0);
  for (int i = 10; i < 15; ++i) speed[i] = 100.0;  // 4 ms
  for (int i = 50; i < 57; ++i) speed[i] = 100.0;  // 6 ms
  const std::vector<double> pos(100, 0.0);
  const auto found = detect_saccades(speed_series(speed), pos, pos);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].onset_index, 50u);
  EXPECT_EQ(found[0].duration_ms, 6.0);
}

TEST(DetectSaccades, UndefinedGapPreventsMerge) {
  std::vector<double> speed(200, 0.0);
  for (int i = 50; i < 70; ++i) speed[i] = 100.0;
  for (int i = 80; i < 100; ++i) speed[i] = 100.0;
  auto v = speed_series(speed);
  v.defined_mask[75] = false;
  v.speed[75] = oculofilt::kMissing;
  const std::vector<double> pos(200, 0.0);
  EXPECT_EQ(detect_saccades(v, pos, pos).size(), 2u);
}

TEST(DetectSaccades, BadThresholds) {
  const std::vector<double> pos(10, 0.0);
  oculofilt::DetectorConfig cfg;
  cfg.offset_threshold_deg_s = 40.0;
  EXPECT_THROW((void)detect_saccades(speed_series(pos), pos, pos, cfg), oculofilt::ArgumentError);
}

double impulse_l1(const oculofilt::FilterKind& kind) {
  std::vector<double> x(4001, 0.0);
  x[2000] = 1.0;
  const auto h = oculofilt::filtfilt(*oculofilt::cascade_for(kind, 1000.0), x);
  double l1 = 0.0;
  for (double v : h) l1 += std::abs(v);
  return l1;
}

// Unit gain in frequency does not bound the time-domain peak: the squared
// Butterworth response rings, so a pulse can come out taller. The peak is
// bounded by the impulse response's L1 norm instead.
TEST(DetectSaccades, LowPassPeakBoundedByImpulseL1) {
  for (const auto& kind : {oculofilt::zlp100(), oculofilt::zlp50()}) {
    const double l1 = impulse_l1(kind);
    EXPECT_GT(l1, 1.0);
    for (double amp : {1.0, 2.0, 5.0, 10.0, 20.0}) {
      const synth::MainSequenceModel model;
      const std::vector<synth::SaccadeProfile> p{{amp, model.duration_ms(amp), 300.0}};
      const auto s = synth::gen_saccade_recording(p, kNoNoise, 800, 1000.0);
      const auto raw = detect_saccades(s.recording);
      ASSERT_EQ(raw.size(), 1u) << amp;
      const auto filtered = detect_saccades(oculofilt::apply_filter(s.recording, kind));
      ASSERT_EQ(filtered.size(), 1u) << amp;
      EXPECT_LE(filtered[0].peak_velocity_deg_s, l1 * raw[0].peak_velocity_deg_s + 1e-6) << amp;
    }
  }
}

}  // namespace
