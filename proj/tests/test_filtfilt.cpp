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
#include <limits>
#include <numeric>
#include <vector>

#include <oculofilt/bands.hpp>
#include <oculofilt/filtfilt.hpp>
#include <oculofilt/synth.hpp>

#include "oracles.hpp"

namespace {

using oculofilt::design_lowpass;
using oculofilt::filtfilt;
using oculofilt::synth::gen_sine;

constexpr double kFs = 1000.0;

double energy(const std::vector<double>& x, std::size_t first, std::size_t last) {
  double e = 0.0;
  for (std::size_t i = first; i < last; ++i) e += x[i] * x[i];
  return e;
}

/// Lag in [-max_lag, max_lag] maximizing the cross-correlation of a and b.
int best_lag(const std::vector<double>& a, const std::vector<double>& b, int max_lag,
             std::size_t first, std::size_t last) {
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    double s = 0.0;
    for (std::size_t i = first; i < last; ++i) s += a[i] * b[static_cast<std::size_t>(static_cast<int>(i) + lag)];
    if (s > best_value) {
      best_value = s;
      best = lag;
    }
  }
  return best;
}

TEST(Filtfilt, ConstantInputUnchanged) {
  for (int order : {1, 2, 7, 12}) {
    const auto f = design_lowpass(order, 50.0, kFs);
    const std::vector<double> x(500, 3.25);
    const auto y = filtfilt(f, x);
    ASSERT_EQ(y.size(), x.size());
    for (double v : y) ASSERT_NEAR(v, 3.25, 1e-10) << order;
  }
}

TEST(Filtfilt, TwentyHzSineZeroLagSquaredGain) {
  const auto f = design_lowpass(7, 100.0, kFs);
  const auto x = gen_sine(20.0, 1.0, 0.0, 2000, kFs);
  const auto y = filtfilt(f, x);
  EXPECT_EQ(best_lag(x, y, 10, 200, 1800), 0);
  const double g = std::abs(f.response_at(20.0));
  const auto fit = oracle::fit_sine(y, 20.0, kFs, 200, 1800);
  EXPECT_NEAR(fit.amplitude, g * g, 1e-6);
  EXPECT_NEAR(fit.phase_rad, 0.0, 1e-3);
}

TEST(Filtfilt, SineAtCutoffHalvesAmplitude) {
  for (double fc : {50.0, 100.0}) {
    const auto f = design_lowpass(7, fc, kFs);
    const auto x = gen_sine(fc, 1.0, 0.3, 4000, kFs);
    const auto y = filtfilt(f, x);
    const auto fit = oracle::fit_sine(y, fc, kFs, 500, 3500);
    EXPECT_NEAR(fit.amplitude, 0.5, 0.5 * 0.02) << fc;
    EXPECT_NEAR(fit.phase_rad, 0.3, 1e-3) << fc;
  }
}

TEST(Filtfilt, ZeroPhaseInBandSweep) {
  const auto f = design_lowpass(7, 100.0, kFs);
  for (double freq = 5.0; freq <= 95.0; freq += 10.0) {
    const auto x = gen_sine(freq, 1.0, 1.0, 3000, kFs);
    const auto y = filtfilt(f, x);
    const auto fit = oracle::fit_sine(y, freq, kFs, 400, 2600);
    EXPECT_NEAR(fit.phase_rad, 1.0, 1e-3) << freq;
  }
}

TEST(Filtfilt, Errors) {
  const auto f = design_lowpass(7, 100.0, kFs);
  EXPECT_EQ(oculofilt::filtfilt_padding(f), 45u);
  EXPECT_THROW((void)filtfilt(f, std::vector<double>(45, 0.0)), oculofilt::DataError);
  EXPECT_NO_THROW((void)filtfilt(f, std::vector<double>(46, 0.0)));
  std::vector<double> bad(100, 0.0);
  bad[10] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW((void)filtfilt(f, bad), oculofilt::ArgumentError);
}

TEST(Filtfilt, StopBandOfZlp100) {
  const auto f = design_lowpass(7, 100.0, kFs);
  for (double freq = 150.0; freq <= 500.0; freq += 1.0) {
    const double g = std::abs(f.response_at(freq));
    ASSERT_LE(20.0 * std::log10(g * g), -40.0) << freq;
  }
  const double g500 = std::abs(f.response_at(500.0));
  EXPECT_LE(g500 * g500, 1e-4);  // <= -80 dB
}

TEST(BandsFromEdges, DefaultBands) {
  const auto bands = oculofilt::default_bands();
  ASSERT_EQ(bands.size(), 5u);
  const double expected[5][2] = {{0, 50}, {51, 75}, {76, 100}, {101, 300}, {301, 500}};
  for (int k = 0; k < 5; ++k) {
    EXPECT_EQ(bands[k].low_hz, expected[k][0]);
    EXPECT_EQ(bands[k].high_hz, expected[k][1]);
    EXPECT_EQ(bands[k].order, 7);
  }
  EXPECT_EQ(bands[1].label(), "band_51_75");
}

TEST(BandsFromEdges, Errors) {
  const std::vector<double> decreasing{100, 50};
  EXPECT_THROW((void)oculofilt::bands_from_edges(decreasing, kFs), oculofilt::ArgumentError);
  const std::vector<double> at_nyquist{499.5};
  EXPECT_THROW((void)oculofilt::bands_from_edges(at_nyquist, kFs), oculofilt::ArgumentError);
}

TEST(BandDecompose, DcGoesToLowestBand) {
  const auto bands = oculofilt::default_bands();
  const std::vector<double> x(2000, 2.0);
  const auto out = oculofilt::band_decompose(x, bands, kFs);
  const double total = energy(out[0], 0, x.size());
  EXPECT_NEAR(total, energy(x, 0, x.size()), 1e-6 * total);
  for (std::size_t k = 1; k < out.size(); ++k) {
    EXPECT_LE(energy(out[k], 0, x.size()), 1e-6 * total) << k;
  }
}

double band_fraction(double freq, std::size_t band) {
  const auto bands = oculofilt::default_bands();
  const auto x = gen_sine(freq, 1.0, 0.0, 4000, kFs);
  const auto out = oculofilt::band_decompose(x, bands, kFs);
  double total = 0.0;
  for (const auto& y : out) total += energy(y, 500, 3500);
  return energy(out[band], 500, 3500) / total;
}

TEST(BandDecompose, SixtyHzInSecondBand) {
  // Analytic routing: squared single-pass gains at 60 Hz.
  double analytic[5];
  const auto bands = oculofilt::default_bands();
  double sum = 0.0;
  for (int k = 0; k < 5; ++k) {
    const auto f = oculofilt::design_band(bands[k], kFs);
    const double g = oracle::butterworth_gain(f.design(), 60.0);
    analytic[k] = std::pow(g, 4);
    sum += analytic[k];
  }
  EXPECT_GE(analytic[1] / sum, 0.95);
  EXPECT_GE(band_fraction(60.0, 1), 0.95);
}

TEST(BandDecompose, FourHundredHzInTopBand) { EXPECT_GE(band_fraction(400.0, 4), 0.95); }

}  // namespace
