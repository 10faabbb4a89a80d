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

#include <algorithm>
#include <limits>
#include <random>
#include <vector>

#include <oculofilt/heuristic.hpp>
#include <oculofilt/synth.hpp>

namespace {

using oculofilt::extra_filter;
using oculofilt::std_filter;
using Vec = std::vector<double>;

TEST(StdFilter, IsolatedSpikeTiesToPreceding) {
  EXPECT_EQ(std_filter(Vec{0, 0, 1, 0, 0}), (Vec{0, 0, 0, 0, 0}));
}

TEST(StdFilter, MonotoneUnchanged) {
  EXPECT_EQ(std_filter(Vec{0, 1, 2, 3, 4}), (Vec{0, 1, 2, 3, 4}));
}

TEST(StdFilter, NearerNeighbourWins) {
  // Index 2 is the only extremum; 4 is nearer to 5 than 0 is.
  EXPECT_EQ(std_filter(Vec{0, 0, 5, 4, 0, 0}), (Vec{0, 0, 4, 4, 0, 0}));
}

TEST(StdFilter, ReplacementIsVisibleToNextWindow) {
  // In place, index 2 sees (0, 0, 1) after index 1 was replaced and does not
  // fire; a sliding window over the original would see (1, 0, 1) and set it to 1.
  EXPECT_EQ(std_filter(Vec{0, 1, 0, 1, 0}), (Vec{0, 0, 0, 0, 0}));
  EXPECT_EQ(std_filter(Vec{0, 3, 2, 0, 0}), (Vec{0, 2, 2, 0, 0}));
}

TEST(StdFilter, EndpointsPassThrough) {
  const auto out = std_filter(Vec{9, 0, 0, 0, -9});
  EXPECT_EQ(out.front(), 9.0);
  EXPECT_EQ(out.back(), -9.0);
}

TEST(StdFilter, LeavesTwoSampleSpike) {
  EXPECT_EQ(std_filter(Vec{0, 0, 1, 1, 0, 0}), (Vec{0, 0, 1, 1, 0, 0}));
}

TEST(StdFilter, Errors) {
  EXPECT_THROW((void)std_filter(Vec{0, 1}), oculofilt::ArgumentError);
  EXPECT_THROW((void)std_filter(Vec{0, std::numeric_limits<double>::quiet_NaN(), 1}),
               oculofilt::ArgumentError);
}

TEST(ExtraFilter, TwoSamplePlateau) {
  EXPECT_EQ(extra_filter(Vec{0, 0, 1, 1, 0, 0}), (Vec{0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(extra_filter(Vec{0, 0, 2, 2, 0, 0}), (Vec{0, 0, 0, 0, 0, 0}));
}

TEST(ExtraFilter, NegativePairAndUnevenOuterValues) {
  // Pair below both outer values; each member goes to the nearer outer value.
  EXPECT_EQ(extra_filter(Vec{5, 1, -3, -2, 2, 2}), (Vec{5, 1, 1, 1, 2, 2}));
}

TEST(ExtraFilter, Constant) {
  EXPECT_EQ(extra_filter(Vec(10, 3.5)), Vec(10, 3.5));
}

TEST(ExtraFilter, Errors) {
  EXPECT_THROW((void)extra_filter(Vec{0, 1, 2}), oculofilt::ArgumentError);
  EXPECT_THROW((void)extra_filter(Vec{0, 1, std::numeric_limits<double>::infinity(), 2}),
               oculofilt::ArgumentError);
}

TEST(ApplyHeuristic, ExtraChainsStd) {
  const Vec x{0, 0, 1, 0, 0, 2, 2, 0, 0};
  EXPECT_EQ(oculofilt::apply_heuristic(oculofilt::HeuristicLevel::extra_filter, x),
            extra_filter(std_filter(x)));
  EXPECT_EQ(oculofilt::apply_heuristic(oculofilt::HeuristicLevel::extra_filter, x), Vec(9, 0.0));
}

TEST(HeuristicProperties, IdempotentOnMonotoneAndConstant) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> step(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Vec x(4 + rng() % 50);
    double v = step(rng) * 10 - 5;
    const bool down = trial % 2;
    for (auto& s : x) {
      s = v;
      v += down ? -step(rng) : step(rng);
    }
    EXPECT_EQ(std_filter(x), x);
    EXPECT_EQ(extra_filter(x), x);
    const Vec c(x.size(), v);
    EXPECT_EQ(std_filter(c), c);
    EXPECT_EQ(extra_filter(c), c);
  }
}

TEST(HeuristicProperties, RangeBounded) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Vec x(4 + rng() % 200);
    for (auto& s : x) s = noise(rng);
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    for (const auto& out : {std_filter(x), extra_filter(x), extra_filter(std_filter(x))}) {
      ASSERT_EQ(out.size(), x.size());
      for (double s : out) {
        ASSERT_GE(s, *lo);
        ASSERT_LE(s, *hi);
      }
    }
  }
}

TEST(HeuristicProperties, RemovesInjectedSpikesOnConstantBaseline) {
  namespace synth = oculofilt::synth;
  const double baseline = 1.25;
  for (auto kind : {synth::NoiseKind::white_plus_one_sample_spikes,
                    synth::NoiseKind::white_plus_two_sample_spikes}) {
    const auto noise = synth::gen_noise_with_truth({kind, 0.0, 20.0, 0.3, 99}, 20000, 1000.0);
    ASSERT_EQ(noise.spike_starts.size(), 400u);
    Vec x(noise.samples);
    for (auto& v : x) v += baseline;
    const auto out = kind == synth::NoiseKind::white_plus_one_sample_spikes
                         ? std_filter(x)
                         : extra_filter(std_filter(x));
    for (double v : out) ASSERT_EQ(v, baseline);
  }
}

TEST(HeuristicProperties, NonlinearExample) {
  // filter(a + b) != filter(a) + filter(b).
  const Vec a{0, 0, 1, 0, 0};
  const Vec b{0, 1, 0, 0, 0};
  Vec sum(5);
  for (int i = 0; i < 5; ++i) sum[i] = a[i] + b[i];
  const auto fa = std_filter(a), fb = std_filter(b), fs = std_filter(sum);
  bool differs = false;
  for (int i = 0; i < 5; ++i) differs = differs || fs[i] != fa[i] + fb[i];
  EXPECT_TRUE(differs);
}

}  // namespace
