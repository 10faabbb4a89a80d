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

#ifndef OCULOFILT_SPECTRAL_HPP
#define OCULOFILT_SPECTRAL_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "oculofilt/error.hpp"
#include "oculofilt/fft.hpp"

namespace oculofilt {

inline constexpr std::size_t kDefaultSegmentLength = 256;

/// Coherent gain assumed for the Hann window when scaling amplitudes.
inline constexpr double kHannCoherentGain = 0.5;

/// Wraps an angle into (-pi, pi].
[[nodiscard]] inline double wrap_phase(double angle) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(angle, two_pi);  // [-pi, pi]
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

/// Residuals of the least-squares quadratic in sample index.
///
/// The fit projects onto an orthonormal basis of {1, u, u^2} over the
/// centred, scaled index u, built by modified Gram-Schmidt; the residual
/// mean is zero to rounding.
[[nodiscard]] inline std::vector<double> detrend_poly2(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 3) throw ArgumentError("detrend_poly2: need at least 3 samples");
  for (double v : x) {
    if (!std::isfinite(v)) throw ArgumentError("detrend_poly2: non-finite sample");
  }
  const double centre = (static_cast<double>(n) - 1.0) / 2.0;
  const double scale = centre > 0.0 ? centre : 1.0;

  std::vector<std::vector<double>> basis(3, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) - centre) / scale;
    basis[0][i] = 1.0;
    basis[1][i] = u;
    basis[2][i] = u * u;
  }
  auto dot = [n](const std::vector<double>& a, const auto& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
  };
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      const double c = dot(basis[j], basis[k]);
      for (std::size_t i = 0; i < n; ++i) basis[k][i] -= c * basis[j][i];
    }
    const double norm = std::sqrt(dot(basis[k], basis[k]));
    for (double& v : basis[k]) v /= norm;
  }

  std::vector<double> residual(x.begin(), x.end());
  for (const auto& q : basis) {
    const double c = dot(q, residual);
    for (std::size_t i = 0; i < n; ++i) residual[i] -= c * q[i];
  }
  return residual;
}

/// Symmetric Hann window, w[k] = 0.5 (1 - cos(2 pi k / (n - 1))).
[[nodiscard]] inline std::vector<double> hann_window(std::size_t n) {
  if (n < 2) throw ArgumentError("hann_window: n must be at least 2");
  std::vector<double> w(n);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / denom));
  }
  // Exact zeros at both ends and exact symmetry.
  for (std::size_t k = 0; k < n / 2; ++k) w[n - 1 - k] = w[k];
  w.front() = 0.0;
  w.back() = 0.0;
  return w;
}

/// Single-sided amplitude and phase on the grid k * fs / N, k = 0..N/2.
struct Spectrum {
  double sample_rate_hz = 1000.0;
  std::size_t segment_length = kDefaultSegmentLength;
  std::size_t n_segments_averaged = 0;
  std::vector<double> freqs_hz;
  std::vector<double> amplitude;  // degrees, window-corrected
  std::vector<double> phase_rad;  // (-pi, pi]

  [[nodiscard]] std::size_t bins() const noexcept { return freqs_hz.size(); }
  [[nodiscard]] double bin_width_hz() const noexcept {
    return sample_rate_hz / static_cast<double>(segment_length);
  }
};

[[nodiscard]] inline std::vector<double> frequency_grid(std::size_t segment_length, double fs_hz) {
  std::vector<double> freqs(segment_length / 2 + 1);
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    freqs[k] = static_cast<double>(k) * fs_hz / static_cast<double>(segment_length);
  }
  return freqs;
}

/// Detrend (quadratic), Hann window, FFT. Amplitudes are 2|X[k]| / (N * CG)
/// with CG = 0.5, except DC and Nyquist which drop the factor 2, so a unit
/// sine on a bin centre reads close to 1.
[[nodiscard]] inline Spectrum segment_spectrum(std::span<const double> x, double fs_hz,
                                               std::size_t segment_length = kDefaultSegmentLength) {
  if (!is_power_of_two(segment_length) || segment_length < 4) {
    throw ArgumentError("segment length must be a power of two, at least 4");
  }
  if (x.size() != segment_length) {
    throw ArgumentError("segment has " + std::to_string(x.size()) + " samples, expected " +
                        std::to_string(segment_length));
  }
  const auto detrended = detrend_poly2(x);
  const auto window = hann_window(segment_length);
  std::vector<std::complex<double>> data(segment_length);
  for (std::size_t i = 0; i < segment_length; ++i) data[i] = detrended[i] * window[i];
  fft_inplace<double>(data);

  Spectrum s;
  s.sample_rate_hz = fs_hz;
  s.segment_length = segment_length;
  s.n_segments_averaged = 1;
  s.freqs_hz = frequency_grid(segment_length, fs_hz);
  const std::size_t bins = s.freqs_hz.size();
  s.amplitude.resize(bins);
  s.phase_rad.resize(bins);
  const double base = static_cast<double>(segment_length) * kHannCoherentGain;
  for (std::size_t k = 0; k < bins; ++k) {
    const bool edge = k == 0 || k == bins - 1;
    s.amplitude[k] = (edge ? 1.0 : 2.0) * std::abs(data[k]) / base;
    s.phase_rad[k] = wrap_phase(std::arg(data[k]));
  }
  return s;
}

enum class PhaseAveraging { arithmetic, circular };

namespace detail {

inline void require_same_grid(const Spectrum& a, const Spectrum& b) {
  if (a.segment_length != b.segment_length || a.sample_rate_hz != b.sample_rate_hz ||
      a.freqs_hz.size() != b.freqs_hz.size()) {
    throw ArgumentError("spectra are on different frequency grids");
  }
}

}  // namespace detail

/// Count-weighted per-bin mean of amplitude and phase. Phases are wrapped
/// before averaging; PhaseAveraging::circular uses the mean resultant angle
/// instead of the arithmetic mean.
[[nodiscard]] inline Spectrum average_spectra(std::span<const Spectrum> spectra,
                                              PhaseAveraging mode = PhaseAveraging::arithmetic) {
  if (spectra.empty()) throw ArgumentError("average_spectra: no spectra");
  const auto& first = spectra.front();
  const std::size_t bins = first.bins();
  std::vector<double> amp(bins, 0.0), phase(bins, 0.0), sin_sum(bins, 0.0), cos_sum(bins, 0.0);
  std::size_t total = 0;
  for (const auto& s : spectra) {
    detail::require_same_grid(first, s);
    const double w = static_cast<double>(s.n_segments_averaged);
    for (std::size_t k = 0; k < bins; ++k) {
      const double p = wrap_phase(s.phase_rad[k]);
      amp[k] += w * s.amplitude[k];
      phase[k] += w * p;
      sin_sum[k] += w * std::sin(p);
      cos_sum[k] += w * std::cos(p);
    }
    total += s.n_segments_averaged;
  }
  if (total == 0) throw ArgumentError("average_spectra: spectra carry no segments");

  Spectrum out;
  out.sample_rate_hz = first.sample_rate_hz;
  out.segment_length = first.segment_length;
  out.n_segments_averaged = total;
  out.freqs_hz = first.freqs_hz;
  out.amplitude.resize(bins);
  out.phase_rad.resize(bins);
  const double denom = static_cast<double>(total);
  for (std::size_t k = 0; k < bins; ++k) {
    out.amplitude[k] = amp[k] / denom;
    out.phase_rad[k] = mode == PhaseAveraging::arithmetic
                           ? phase[k] / denom
                           : wrap_phase(std::atan2(sin_sum[k], cos_sum[k]));
  }
  return out;
}

/// Empirical per-bin response of a filter: filtered over unfiltered spectra.
struct FrequencyResponse {
  std::vector<double> freqs_hz;
  std::vector<double> gain;            // B / A; +inf where only A is zero
  std::vector<double> gain_db;         // 20 log10(gain)
  std::vector<double> phase_diff_rad;  // wrap(phase_B - phase_A)
  std::vector<bool> flagged;           // A == 0 while B != 0
  std::size_t n_segments_averaged = 0;
};

/// Amplitude ratio in decibels.
[[nodiscard]] inline double to_db(double gain) noexcept { return 20.0 * std::log10(gain); }

[[nodiscard]] inline FrequencyResponse estimate_frequency_response(const Spectrum& unfiltered,
                                                                   const Spectrum& filtered) {
  detail::require_same_grid(unfiltered, filtered);
  if (unfiltered.n_segments_averaged != filtered.n_segments_averaged) {
    throw ArgumentError("spectra average different numbers of segments");
  }
  const std::size_t bins = unfiltered.bins();
  FrequencyResponse r;
  r.freqs_hz = unfiltered.freqs_hz;
  r.n_segments_averaged = unfiltered.n_segments_averaged;
  r.gain.resize(bins);
  r.gain_db.resize(bins);
  r.phase_diff_rad.resize(bins);
  r.flagged.assign(bins, false);
  for (std::size_t k = 0; k < bins; ++k) {
    const double a = unfiltered.amplitude[k];
    const double b = filtered.amplitude[k];
    if (a == 0.0) {
      r.gain[k] = b == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
      r.flagged[k] = b != 0.0;
    } else {
      r.gain[k] = b / a;
    }
    r.gain_db[k] = to_db(r.gain[k]);
    r.phase_diff_rad[k] = wrap_phase(filtered.phase_rad[k] - unfiltered.phase_rad[k]);
  }
  return r;
}

}  // namespace oculofilt

#endif  // OCULOFILT_SPECTRAL_HPP
