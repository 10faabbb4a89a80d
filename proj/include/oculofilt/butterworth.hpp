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

#ifndef OCULOFILT_BUTTERWORTH_HPP
#define OCULOFILT_BUTTERWORTH_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oculofilt/error.hpp"

namespace oculofilt {

enum class ResponseType { lowpass, highpass, bandpass };

/// What a cascade was designed from. `high_hz` is unused for lowpass and
/// highpass designs, whose single edge lives in `low_hz`.
struct FilterDesign {
  ResponseType type = ResponseType::lowpass;
  int order = 1;
  double low_hz = 0.0;
  double high_hz = 0.0;
  double sample_rate_hz = 1000.0;
};

/// One second-order section, a0 normalized to 1.
///
///   H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)
///
/// First-order sections have b2 = a2 = 0.
struct Biquad {
  double b0 = 1.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;

  [[nodiscard]] std::complex<double> response(std::complex<double> z_inv) const noexcept {
    const auto num = b0 + z_inv * (b1 + z_inv * b2);
    const auto den = 1.0 + z_inv * (a1 + z_inv * a2);
    return num / den;
  }

  [[nodiscard]] double dc_gain() const noexcept { return (b0 + b1 + b2) / (1.0 + a1 + a2); }

  /// Poles of the section (both equal to the real root, or zero, for first order).
  [[nodiscard]] std::pair<std::complex<double>, std::complex<double>> poles() const noexcept {
    if (a2 == 0.0) return {std::complex<double>(-a1, 0.0), std::complex<double>(0.0, 0.0)};
    const auto disc = std::sqrt(std::complex<double>(a1 * a1 - 4.0 * a2, 0.0));
    return {(-a1 + disc) / 2.0, (-a1 - disc) / 2.0};
  }
};

/// A realized IIR filter as a cascade of second-order sections.
class BiquadCascade {
 public:
  BiquadCascade(std::vector<Biquad> sections, double overall_gain, FilterDesign design)
      : sections_(std::move(sections)), overall_gain_(overall_gain), design_(design) {}

  [[nodiscard]] const std::vector<Biquad>& sections() const noexcept { return sections_; }
  [[nodiscard]] double overall_gain() const noexcept { return overall_gain_; }
  [[nodiscard]] const FilterDesign& design() const noexcept { return design_; }
  [[nodiscard]] double sample_rate_hz() const noexcept { return design_.sample_rate_hz; }

  /// Transfer function on the unit circle at `freq_hz`.
  [[nodiscard]] std::complex<double> response_at(double freq_hz) const noexcept {
    const double w = 2.0 * std::numbers::pi * freq_hz / design_.sample_rate_hz;
    const auto z_inv = std::polar(1.0, -w);
    std::complex<double> h(overall_gain_, 0.0);
    for (const auto& s : sections_) h *= s.response(z_inv);
    return h;
  }

  [[nodiscard]] bool is_stable() const noexcept {
    for (const auto& s : sections_) {
      const auto [p1, p2] = s.poles();
      if (!(std::abs(p1) < 1.0) || !(std::abs(p2) < 1.0)) return false;
    }
    return true;
  }

 private:
  std::vector<Biquad> sections_;
  double overall_gain_;
  FilterDesign design_;
};

namespace detail {

using cplx = std::complex<double>;

/// Left-half-plane poles of the unit-cutoff analog Butterworth prototype.
/// Conjugate pairs are represented by their upper member only; the real pole
/// of an odd order comes last.
inline std::vector<cplx> butterworth_prototype_upper(int order) {
  std::vector<cplx> poles;
  for (int k = 0; k < order / 2; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + 1.0 + order) / (2.0 * order);
    auto p = std::polar(1.0, theta);
    if (p.imag() < 0.0) p = std::conj(p);
    poles.push_back(p);
  }
  if (order % 2 == 1) poles.emplace_back(-1.0, 0.0);
  return poles;
}

inline cplx bilinear(cplx s, double fs) { return (2.0 * fs + s) / (2.0 * fs - s); }

/// Pre-warped analog angular frequency for a digital edge.
inline double prewarp(double freq_hz, double fs) {
  return 2.0 * fs * std::tan(std::numbers::pi * freq_hz / fs);
}

/// Denominator of a section from two z-plane poles forming a conjugate pair or two reals.
inline Biquad section_from_poles(cplx z1, cplx z2, double b0, double b1, double b2) {
  Biquad s;
  s.b0 = b0;
  s.b1 = b1;
  s.b2 = b2;
  s.a1 = -(z1 + z2).real();
  s.a2 = (z1 * z2).real();
  return s;
}

inline Biquad first_order_section(cplx z, double b0, double b1) {
  Biquad s;
  s.b0 = b0;
  s.b1 = b1;
  s.a1 = -z.real();
  return s;
}

/// Scales a section's numerator so its gain at `z_inv` is one.
inline void normalize_at(Biquad& s, cplx z_inv) {
  const double g = 1.0 / std::abs(s.response(z_inv));
  s.b0 *= g;
  s.b1 *= g;
  s.b2 *= g;
}

}  // namespace detail

inline constexpr int kMaxButterworthOrder = 12;

/// Digital Butterworth filter by pre-warped bilinear transform of the analog
/// prototype, realized as second-order sections.
///
/// `edges_hz` holds the -3 dB point(s) of a single pass: one edge for
/// lowpass/highpass, two for bandpass. For bandpass, `order` is the prototype
/// order, so the realized filter has 2*order poles. Each section is scaled to
/// unit gain at the passband reference (DC, Nyquist, or the geometric band
/// centre), which keeps intermediate signal levels bounded.
[[nodiscard]] inline BiquadCascade design_butterworth(ResponseType type, int order,
                                                      std::span<const double> edges_hz,
                                                      double fs_hz) {
  using detail::cplx;
  if (!(fs_hz > 0.0) || !std::isfinite(fs_hz)) throw ArgumentError("sample rate must be positive");
  if (order < 1 || order > kMaxButterworthOrder) {
    throw ArgumentError("order must be in [1, " + std::to_string(kMaxButterworthOrder) + "], got " +
                        std::to_string(order));
  }
  const std::size_t needed = type == ResponseType::bandpass ? 2 : 1;
  if (edges_hz.size() != needed) {
    throw ArgumentError("expected " + std::to_string(needed) + " edge frequencies");
  }
  const double nyquist = fs_hz / 2.0;
  for (double e : edges_hz) {
    if (!(e > 0.0 && e < nyquist)) {
      throw ArgumentError("edge " + std::to_string(e) + " Hz outside (0, " +
                          std::to_string(nyquist) + ") Hz");
    }
  }
  if (type == ResponseType::bandpass && !(edges_hz[0] < edges_hz[1])) {
    throw ArgumentError("bandpass edges must be increasing");
  }

  FilterDesign design{type, order, edges_hz[0], needed == 2 ? edges_hz[1] : 0.0, fs_hz};
  const auto prototype = detail::butterworth_prototype_upper(order);
  std::vector<Biquad> sections;
  cplx reference_z_inv;

  switch (type) {
    case ResponseType::lowpass:
    case ResponseType::highpass: {
      const bool low = type == ResponseType::lowpass;
      const double wc = detail::prewarp(edges_hz[0], fs_hz);
      // Zeros sit at z = -1 (lowpass) or z = +1 (highpass).
      const double sign = low ? 1.0 : -1.0;
      reference_z_inv = cplx(sign, 0.0);
      for (const auto& p : prototype) {
        const cplx s = low ? p * wc : wc / p;
        const cplx z = detail::bilinear(s, fs_hz);
        if (p.imag() == 0.0) {
          sections.push_back(detail::first_order_section(z, 1.0, sign));
        } else {
          sections.push_back(detail::section_from_poles(z, std::conj(z), 1.0, 2.0 * sign, 1.0));
        }
      }
      break;
    }
    case ResponseType::bandpass: {
      const double w1 = detail::prewarp(edges_hz[0], fs_hz);
      const double w2 = detail::prewarp(edges_hz[1], fs_hz);
      const double bw = w2 - w1;
      const double w0_sq = w1 * w2;
      const double digital_centre = 2.0 * std::atan(std::sqrt(w0_sq) / (2.0 * fs_hz));
      reference_z_inv = std::polar(1.0, -digital_centre);
      // Each prototype pole p maps to the roots of s^2 - p*bw*s + w0^2.
      // One zero at z = +1 and one at z = -1 per section.
      for (const auto& p : prototype) {
        const cplx pb = p * bw;
        const cplx root = std::sqrt(pb * pb - 4.0 * w0_sq);
        const cplx s1 = (pb + root) / 2.0;
        const cplx s2 = (pb - root) / 2.0;
        const cplx z1 = detail::bilinear(s1, fs_hz);
        const cplx z2 = detail::bilinear(s2, fs_hz);
        if (p.imag() == 0.0) {
          sections.push_back(detail::section_from_poles(z1, z2, 1.0, 0.0, -1.0));
        } else {
          sections.push_back(detail::section_from_poles(z1, std::conj(z1), 1.0, 0.0, -1.0));
          sections.push_back(detail::section_from_poles(z2, std::conj(z2), 1.0, 0.0, -1.0));
        }
      }
      break;
    }
  }

  for (auto& s : sections) detail::normalize_at(s, reference_z_inv);
  std::complex<double> total(1.0, 0.0);
  for (const auto& s : sections) total *= s.response(reference_z_inv);
  const double overall = 1.0 / std::abs(total);

  BiquadCascade cascade(std::move(sections), overall, design);
  if (!cascade.is_stable() || !std::isfinite(overall)) {
    throw DesignError("Butterworth design produced an unstable or non-finite filter");
  }
  return cascade;
}

[[nodiscard]] inline BiquadCascade design_lowpass(int order, double cutoff_hz, double fs_hz) {
  const double edge[] = {cutoff_hz};
  return design_butterworth(ResponseType::lowpass, order, edge, fs_hz);
}

[[nodiscard]] inline BiquadCascade design_highpass(int order, double cutoff_hz, double fs_hz) {
  const double edge[] = {cutoff_hz};
  return design_butterworth(ResponseType::highpass, order, edge, fs_hz);
}

[[nodiscard]] inline BiquadCascade design_bandpass(int order, double low_hz, double high_hz,
                                                   double fs_hz) {
  const double edges[] = {low_hz, high_hz};
  return design_butterworth(ResponseType::bandpass, order, edges, fs_hz);
}

struct MagnitudePhase {
  std::vector<double> gain;
  std::vector<double> phase_rad;  // in (-pi, pi]
};

/// Single-pass gain and phase of the cascade at each frequency in [0, fs/2].
[[nodiscard]] inline MagnitudePhase magnitude_phase_at(const BiquadCascade& filter,
                                                       std::span<const double> freqs_hz) {
  MagnitudePhase out;
  out.gain.reserve(freqs_hz.size());
  out.phase_rad.reserve(freqs_hz.size());
  const double nyquist = filter.sample_rate_hz() / 2.0;
  for (double f : freqs_hz) {
    if (!(f >= 0.0 && f <= nyquist)) {
      throw ArgumentError("frequency " + std::to_string(f) + " Hz outside [0, Nyquist]");
    }
    const auto h = filter.response_at(f);
    double phase = std::arg(h);
    if (phase <= -std::numbers::pi) phase = std::numbers::pi;
    out.gain.push_back(std::abs(h));
    out.phase_rad.push_back(phase);
  }
  return out;
}

/// Frequency at which a single pass of a cutoff-`cutoff_hz` lowpass of the given
/// order must be designed so that the forward-backward composite is -3 dB at
/// `cutoff_hz` instead of -6 dB.
[[nodiscard]] inline double compensated_cutoff_hz(double cutoff_hz, int order, double fs_hz) {
  // Composite |H|^2 = 1/sqrt(2)  =>  (tan(pi fc/fs)/tan(pi f'/fs))^(2N) = sqrt(2) - 1.
  const double ratio = std::pow(std::numbers::sqrt2 - 1.0, 1.0 / (2.0 * order));
  return fs_hz / std::numbers::pi * std::atan(std::tan(std::numbers::pi * cutoff_hz / fs_hz) / ratio);
}

}  // namespace oculofilt

#endif  // OCULOFILT_BUTTERWORTH_HPP
