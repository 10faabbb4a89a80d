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

#ifndef OCULOFILT_BANDS_HPP
#define OCULOFILT_BANDS_HPP

#include <span>
#include <string>
#include <vector>

#include "oculofilt/butterworth.hpp"
#include "oculofilt/csv.hpp"
#include "oculofilt/error.hpp"
#include "oculofilt/filtfilt.hpp"

namespace oculofilt {

inline constexpr int kBandOrder = 7;

/// A frequency band. low_hz == 0 means lowpass at high_hz; high_hz == fs/2
/// means highpass at low_hz.
struct BandSpec {
  double low_hz = 0.0;
  double high_hz = 0.0;
  int order = kBandOrder;

  [[nodiscard]] std::string label() const {
    return "band_" + csv::format_number(low_hz) + "_" + csv::format_number(high_hz);
  }
};

/// Bands [0, e1], [e1+1, e2], ..., [ek+1, fs/2] from increasing integer-Hz
/// edges, so {50, 75, 100, 300} at 1000 Hz gives 0-50, 51-75, 76-100,
/// 101-300 and 301-500 Hz.
[[nodiscard]] inline std::vector<BandSpec> bands_from_edges(std::span<const double> edges_hz,
                                                           double fs_hz, int order = kBandOrder) {
  if (edges_hz.empty()) throw ArgumentError("need at least one band edge");
  std::vector<BandSpec> bands;
  double low = 0.0;
  for (double e : edges_hz) {
    if (!(e > low)) throw ArgumentError("band edges must be positive and increasing");
    bands.push_back({low, e, order});
    low = e + 1.0;
  }
  if (!(low < fs_hz / 2.0)) throw ArgumentError("last band edge leaves no room below Nyquist");
  bands.push_back({low, fs_hz / 2.0, order});
  return bands;
}

/// The five analysis bands at 1000 Hz.
[[nodiscard]] inline std::vector<BandSpec> default_bands(double fs_hz = 1000.0) {
  const double edges[] = {50.0, 75.0, 100.0, 300.0};
  return bands_from_edges(edges, fs_hz);
}

[[nodiscard]] inline BiquadCascade design_band(const BandSpec& band, double fs_hz) {
  const double nyquist = fs_hz / 2.0;
  if (!(band.low_hz >= 0.0 && band.low_hz < band.high_hz && band.high_hz <= nyquist)) {
    throw ArgumentError("invalid band " + csv::format_number(band.low_hz) + "-" +
                        csv::format_number(band.high_hz) + " Hz");
  }
  if (band.low_hz == 0.0 && band.high_hz == nyquist) {
    throw ArgumentError("band covers the whole spectrum");
  }
  if (band.low_hz == 0.0) return design_lowpass(band.order, band.high_hz, fs_hz);
  if (band.high_hz == nyquist) return design_highpass(band.order, band.low_hz, fs_hz);
  return design_bandpass(band.order, band.low_hz, band.high_hz, fs_hz);
}

/// Zero-phase filtered copy of `x` for each band, in band order.
[[nodiscard]] inline std::vector<std::vector<double>> band_decompose(
    std::span<const double> x, std::span<const BandSpec> bands, double fs_hz) {
  std::vector<std::vector<double>> out;
  out.reserve(bands.size());
  for (const auto& band : bands) out.push_back(filtfilt(design_band(band, fs_hz), x));
  return out;
}

}  // namespace oculofilt

#endif  // OCULOFILT_BANDS_HPP
