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

#ifndef OCULOFILT_SYNTH_HPP
#define OCULOFILT_SYNTH_HPP

// Deterministic synthetic signals used as ground truth.
//
// Random streams come from MT19937-64 (std::mt19937_64, whose output sequence
// is fixed by the C++ standard). Uniform deviates take the top 53 bits,
// u = (word >> 11) * 2^-53, and normal deviates use the Box-Muller
// transform, so streams do not depend on the standard library's
// distribution implementations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "oculofilt/error.hpp"
#include "oculofilt/recording.hpp"

namespace oculofilt::synth {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Integer uniform on [0, n).
  std::uint64_t below(std::uint64_t n) {
    return std::min(n - 1, static_cast<std::uint64_t>(uniform() * static_cast<double>(n)));
  }

  /// Standard normal deviate.
  double normal() {
    if (cached_) {
      const double v = *cached_;
      cached_.reset();
      return v;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    return r * std::cos(theta);
  }

  double sign() { return uniform() < 0.5 ? -1.0 : 1.0; }

 private:
  std::mt19937_64 engine_;
  std::optional<double> cached_;
};

/// SplitMix64 step, used to derive independent sub-seeds from one seed.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// x[i] = A sin(2 pi f i / fs + phase), 0 <= f < fs/2.
[[nodiscard]] inline std::vector<double> gen_sine(double freq_hz, double amplitude_deg,
                                                  double phase_rad, std::size_t n, double fs_hz) {
  if (!(freq_hz >= 0.0 && freq_hz < fs_hz / 2.0)) {
    throw ArgumentError("sine frequency must lie in [0, fs/2)");
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = amplitude_deg *
           std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) / fs_hz + phase_rad);
  }
  return x;
}

enum class NoiseKind { white_gaussian, white_plus_one_sample_spikes, white_plus_two_sample_spikes };

struct NoiseModel {
  NoiseKind kind = NoiseKind::white_gaussian;
  double sigma_deg = 0.0;
  double spike_rate_per_s = 0.0;
  double spike_amplitude_deg = 0.0;
  std::uint64_t seed = 0;
};

struct NoiseSample {
  std::vector<double> samples;
  std::vector<std::size_t> spike_starts;  // sorted
  std::size_t spike_width = 0;            // 0, 1 or 2
};

/// Clean samples kept on each side of an injected spike.
inline constexpr std::size_t kSpikeMargin = 2;

/// White Gaussian noise plus round(rate * n / fs) spikes of +-amplitude
/// spanning one or two samples. Spikes never touch the first or last two
/// samples and are separated by at least kSpikeMargin clean samples.
[[nodiscard]] inline NoiseSample gen_noise_with_truth(const NoiseModel& model, std::size_t n,
                                                      double fs_hz) {
  if (!(model.sigma_deg >= 0.0) || !(model.spike_rate_per_s >= 0.0) || !(fs_hz > 0.0)) {
    throw ArgumentError("noise model parameters must be non-negative");
  }
  Rng rng(model.seed);
  NoiseSample out;
  out.samples.resize(n);
  for (auto& v : out.samples) v = model.sigma_deg * rng.normal();

  if (model.kind == NoiseKind::white_gaussian) return out;
  const std::size_t width = model.kind == NoiseKind::white_plus_one_sample_spikes ? 1 : 2;
  out.spike_width = width;
  const auto count = static_cast<std::size_t>(
      std::llround(model.spike_rate_per_s * static_cast<double>(n) / fs_hz));
  if (count == 0) return out;
  const std::size_t lo = kSpikeMargin;
  if (n < lo + width + kSpikeMargin) throw ArgumentError("signal too short for spikes");
  const std::size_t positions = n - width - 2 * kSpikeMargin + 1;

  std::vector<bool> occupied(n, false);
  const std::size_t max_attempts = 1000 * count + 1000;
  std::size_t attempts = 0;
  while (out.spike_starts.size() < count) {
    if (++attempts > max_attempts) {
      throw ArgumentError("spike rate too high to place separated spikes");
    }
    const std::size_t p = lo + rng.below(positions);
    const std::size_t first = p - kSpikeMargin;
    const std::size_t last = std::min(n - 1, p + width - 1 + kSpikeMargin);
    bool clash = false;
    for (std::size_t k = first; k <= last && !clash; ++k) clash = occupied[k];
    if (clash) continue;
    const double delta = rng.sign() * model.spike_amplitude_deg;
    for (std::size_t k = p; k < p + width; ++k) {
      occupied[k] = true;
      out.samples[k] += delta;
    }
    out.spike_starts.push_back(p);
  }
  std::sort(out.spike_starts.begin(), out.spike_starts.end());
  return out;
}

[[nodiscard]] inline std::vector<double> gen_noise(const NoiseModel& model, std::size_t n,
                                                   double fs_hz) {
  return gen_noise_with_truth(model, n, fs_hz).samples;
}

/// Raised-cosine position step: A/2 (1 - cos(pi (t - start) / D)) over [start, start + D].
struct SaccadeProfile {
  double amplitude_deg = 0.0;  // signed, horizontal
  double duration_ms = 0.0;
  double start_ms = 0.0;

  [[nodiscard]] double analytic_peak_velocity_deg_s() const noexcept {
    return std::numbers::pi * std::abs(amplitude_deg) / (2.0 * duration_ms / 1000.0);
  }

  /// Displacement contributed at time t.
  [[nodiscard]] double position_at(double t_ms) const noexcept {
    if (t_ms <= start_ms) return 0.0;
    if (t_ms >= start_ms + duration_ms) return amplitude_deg;
    return amplitude_deg / 2.0 * (1.0 - std::cos(std::numbers::pi * (t_ms - start_ms) / duration_ms));
  }
};

struct SaccadeTruth {
  double onset_ms = 0.0;
  double offset_ms = 0.0;
  double amplitude_deg = 0.0;  // unsigned
  double peak_velocity_deg_s = 0.0;
  double duration_ms = 0.0;
};

struct SyntheticRecording {
  Recording recording;
  std::vector<SaccadeTruth> truth;
};

/// Sum of raised-cosine steps on x plus independent noise on both channels.
/// The y channel uses a seed derived from the model seed.
[[nodiscard]] inline SyntheticRecording gen_saccade_recording(std::span<const SaccadeProfile> profiles,
                                                              const NoiseModel& noise,
                                                              std::size_t n, double fs_hz) {
  if (n == 0) throw ArgumentError("recording needs at least one sample");
  const double duration_ms = static_cast<double>(n) * 1000.0 / fs_hz;
  std::vector<SaccadeProfile> sorted(profiles.begin(), profiles.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.start_ms < b.start_ms; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& p = sorted[i];
    if (p.amplitude_deg == 0.0 || !(p.duration_ms > 0.0)) {
      throw ArgumentError("saccade profile needs non-zero amplitude and positive duration");
    }
    if (p.start_ms < 0.0 || p.start_ms + p.duration_ms > duration_ms) {
      throw ArgumentError("saccade profile outside the recording");
    }
    if (i > 0 && sorted[i - 1].start_ms + sorted[i - 1].duration_ms > p.start_ms) {
      throw ArgumentError("overlapping saccade profiles");
    }
  }

  auto y_model = noise;
  y_model.seed = derive_seed(noise.seed, 1);
  const auto nx = gen_noise(noise, n, fs_hz);
  const auto ny = gen_noise(y_model, n, fs_hz);

  SyntheticRecording out;
  auto& rec = out.recording;
  rec.subject_id = "synthetic";
  rec.sample_rate_hz = fs_hz;
  rec.t_ms.resize(n);
  rec.x_deg.resize(n);
  rec.y_deg.resize(n);
  rec.valid.assign(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * 1000.0 / fs_hz;
    double x = 0.0;
    for (const auto& p : sorted) x += p.position_at(t);
    rec.t_ms[i] = t;
    rec.x_deg[i] = x + nx[i];
    rec.y_deg[i] = ny[i];
  }
  for (const auto& p : sorted) {
    out.truth.push_back({p.start_ms, p.start_ms + p.duration_ms, std::abs(p.amplitude_deg),
                         p.analytic_peak_velocity_deg_s(), p.duration_ms});
  }
  return out;
}

/// Two-segment power-law main sequence, v = v4 (A/4)^slope with the slope
/// switching at the cluster boundary.
struct MainSequenceModel {
  double small_slope = 0.673;
  double large_slope = 0.438;
  double split_deg = 4.0;
  double peak_at_split_deg_s = 250.0;

  [[nodiscard]] double peak_velocity(double amplitude_deg) const {
    const double slope = amplitude_deg <= split_deg ? small_slope : large_slope;
    return peak_at_split_deg_s * std::pow(amplitude_deg / split_deg, slope);
  }

  /// Raised-cosine duration producing that peak: D = pi A / (2 v).
  [[nodiscard]] double duration_ms(double amplitude_deg) const {
    return 1000.0 * std::numbers::pi * amplitude_deg / (2.0 * peak_velocity(amplitude_deg));
  }
};

struct LogLogCluster {
  std::vector<double> ln_amplitude;
  std::vector<double> ln_velocity;
};

/// Points on ln v = intercept + slope ln A, amplitudes log-uniform, with
/// Gaussian scatter in ln v. The first round(outlier_fraction * n) points are
/// shifted by +-U(1, 3) to act as gross outliers.
[[nodiscard]] inline LogLogCluster gen_main_sequence_cluster(double slope, double intercept,
                                                             double min_amp_deg, double max_amp_deg,
                                                             std::size_t n, double scatter,
                                                             double outlier_fraction,
                                                             std::uint64_t seed) {
  Rng rng(seed);
  LogLogCluster c;
  const auto outliers = static_cast<std::size_t>(std::llround(outlier_fraction * static_cast<double>(n)));
  for (std::size_t i = 0; i < n; ++i) {
    const double la = rng.uniform(std::log(min_amp_deg), std::log(max_amp_deg));
    double lv = intercept + slope * la + scatter * rng.normal();
    if (i < outliers) lv += rng.sign() * rng.uniform(1.0, 3.0);
    c.ln_amplitude.push_back(la);
    c.ln_velocity.push_back(lv);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Scenarios used by the CLI and the acceptance suite.

struct FixationScenario {
  std::size_t samples = 30000;
  double sample_rate_hz = 1000.0;
  double noise_sigma_deg = 0.005;
  double one_sample_spike_rate_per_s = 20.0;
  double two_sample_spike_rate_per_s = 10.0;
  double spike_amplitude_deg = 0.04;
  // Slow drift: a few low-frequency sines.
  std::size_t drift_components = 4;
  double drift_max_freq_hz = 1.5;
  double drift_max_amplitude_deg = 0.08;
};

struct SpikeTruth {
  std::size_t index = 0;
  std::size_t width = 0;
};

struct SyntheticFixation {
  Recording recording;
  std::vector<SpikeTruth> spikes;  // x channel only
};

[[nodiscard]] inline SyntheticFixation gen_fixation(const FixationScenario& cfg, std::uint64_t seed) {
  const std::size_t n = cfg.samples;
  const double fs = cfg.sample_rate_hz;
  SyntheticFixation out;
  auto& rec = out.recording;
  rec.subject_id = "synthetic";
  rec.sample_rate_hz = fs;
  rec.t_ms.resize(n);
  rec.valid.assign(n, true);
  for (std::size_t i = 0; i < n; ++i) rec.t_ms[i] = static_cast<double>(i) * 1000.0 / fs;

  auto drift = [&](std::uint64_t stream) {
    Rng rng(derive_seed(seed, stream));
    std::vector<double> d(n, 0.0);
    for (std::size_t c = 0; c < cfg.drift_components; ++c) {
      const double f = rng.uniform(0.1, cfg.drift_max_freq_hz);
      const double a = rng.uniform(0.25, 1.0) * cfg.drift_max_amplitude_deg;
      const double ph = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const auto s = gen_sine(f, a, ph, n, fs);
      for (std::size_t i = 0; i < n; ++i) d[i] += s[i];
    }
    return d;
  };

  auto x = drift(0);
  auto y = drift(1);
  const auto white_x = gen_noise({NoiseKind::white_gaussian, cfg.noise_sigma_deg, 0, 0, derive_seed(seed, 2)}, n, fs);
  const auto white_y = gen_noise({NoiseKind::white_gaussian, cfg.noise_sigma_deg, 0, 0, derive_seed(seed, 3)}, n, fs);
  const auto ones = gen_noise_with_truth({NoiseKind::white_plus_one_sample_spikes, 0.0,
                                          cfg.one_sample_spike_rate_per_s, cfg.spike_amplitude_deg,
                                          derive_seed(seed, 4)},
                                         n, fs);
  const auto twos = gen_noise_with_truth({NoiseKind::white_plus_two_sample_spikes, 0.0,
                                          cfg.two_sample_spike_rate_per_s, cfg.spike_amplitude_deg,
                                          derive_seed(seed, 5)},
                                         n, fs);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] += white_x[i] + ones.samples[i] + twos.samples[i];
    y[i] += white_y[i];
  }
  rec.x_deg = std::move(x);
  rec.y_deg = std::move(y);
  for (auto s : ones.spike_starts) out.spikes.push_back({s, 1});
  for (auto s : twos.spike_starts) out.spikes.push_back({s, 2});
  std::sort(out.spikes.begin(), out.spikes.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });
  return out;
}

struct SaccadeScenario {
  std::size_t count = 20;
  double min_amplitude_deg = 5.0;
  double max_amplitude_deg = 30.0;
  double interval_ms = 800.0;
  double lead_ms = 500.0;
  double sample_rate_hz = 1000.0;
  double noise_sigma_deg = 0.005;
  MainSequenceModel main_sequence{};
};

/// Saccades with log-uniform amplitudes on the main-sequence model, signs
/// chosen to keep the eye near the centre, one every `interval_ms`.
[[nodiscard]] inline SyntheticRecording gen_saccade_scenario(const SaccadeScenario& cfg,
                                                             std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0));
  std::vector<SaccadeProfile> profiles;
  double position = 0.0;
  for (std::size_t k = 0; k < cfg.count; ++k) {
    const double a = std::exp(rng.uniform(std::log(cfg.min_amplitude_deg), std::log(cfg.max_amplitude_deg)));
    const double signed_a = position > 0.0 ? -a : a;
    profiles.push_back({signed_a, cfg.main_sequence.duration_ms(a),
                        cfg.lead_ms + static_cast<double>(k) * cfg.interval_ms});
    position += signed_a;
  }
  const double total_ms = cfg.lead_ms * 2.0 + static_cast<double>(cfg.count) * cfg.interval_ms;
  const auto n = static_cast<std::size_t>(std::ceil(total_ms * cfg.sample_rate_hz / 1000.0));
  const NoiseModel noise{NoiseKind::white_gaussian, cfg.noise_sigma_deg, 0, 0, derive_seed(seed, 1)};
  return gen_saccade_recording(profiles, noise, n, cfg.sample_rate_hz);
}

}  // namespace oculofilt::synth

#endif  // OCULOFILT_SYNTH_HPP
