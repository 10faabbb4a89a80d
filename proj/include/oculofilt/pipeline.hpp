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

#ifndef OCULOFILT_PIPELINE_HPP
#define OCULOFILT_PIPELINE_HPP

// Filter conditions applied to whole recordings, and the fixation spectrum /
// frequency-response pipeline built on top of them.

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "oculofilt/bands.hpp"
#include "oculofilt/butterworth.hpp"
#include "oculofilt/error.hpp"
#include "oculofilt/filtfilt.hpp"
#include "oculofilt/heuristic.hpp"
#include "oculofilt/kinematics.hpp"
#include "oculofilt/recording.hpp"
#include "oculofilt/spectral.hpp"

namespace oculofilt {

struct NoFilter {};
struct StdFilter {};
struct ExtraFilter {};

/// Zero-phase Butterworth lowpass. With `compensate`, the component cutoff
/// is raised so the composite (not the single pass) is -3 dB at cutoff_hz.
struct ZeroPhaseLowPass {
  double cutoff_hz = 100.0;
  int order = 7;
  bool compensate = false;
};

/// Zero-phase band filter; see BandSpec for the edge conventions.
struct BandFilter {
  double low_hz = 0.0;
  double high_hz = 0.0;
  int order = kBandOrder;
};

using FilterKind = std::variant<NoFilter, StdFilter, ExtraFilter, ZeroPhaseLowPass, BandFilter>;

[[nodiscard]] inline FilterKind zlp100() { return ZeroPhaseLowPass{100.0, 7, false}; }
[[nodiscard]] inline FilterKind zlp50() { return ZeroPhaseLowPass{50.0, 7, false}; }

[[nodiscard]] inline std::string filter_name(const FilterKind& kind) {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, NoFilter>) {
          return "none";
        } else if constexpr (std::is_same_v<K, StdFilter>) {
          return "std";
        } else if constexpr (std::is_same_v<K, ExtraFilter>) {
          return "extra";
        } else if constexpr (std::is_same_v<K, ZeroPhaseLowPass>) {
          if (k.order == 7 && !k.compensate && (k.cutoff_hz == 100.0 || k.cutoff_hz == 50.0)) {
            return k.cutoff_hz == 100.0 ? "zlp100" : "zlp50";
          }
          return "zlp_" + csv::format_number(k.cutoff_hz) + "hz_order" + std::to_string(k.order) +
                 (k.compensate ? "_compensated" : "");
        } else {
          return "band_" + csv::format_number(k.low_hz) + "_" + csv::format_number(k.high_hz);
        }
      },
      kind);
}

/// Cascade for the IIR kinds; nullopt for the others.
[[nodiscard]] inline std::optional<BiquadCascade> cascade_for(const FilterKind& kind,
                                                              double fs_hz) {
  if (const auto* lp = std::get_if<ZeroPhaseLowPass>(&kind)) {
    const double fc = lp->compensate ? compensated_cutoff_hz(lp->cutoff_hz, lp->order, fs_hz)
                                     : lp->cutoff_hz;
    return design_lowpass(lp->order, fc, fs_hz);
  }
  if (const auto* band = std::get_if<BandFilter>(&kind)) {
    return design_band({band->low_hz, band->high_hz, band->order}, fs_hz);
  }
  return std::nullopt;
}

/// Shortest contiguous run the filter accepts.
[[nodiscard]] inline std::size_t min_span_length(const FilterKind& kind, double fs_hz) {
  if (std::holds_alternative<StdFilter>(kind)) return min_length(HeuristicLevel::std_filter);
  if (std::holds_alternative<ExtraFilter>(kind)) return min_length(HeuristicLevel::extra_filter);
  if (const auto cascade = cascade_for(kind, fs_hz)) return filtfilt_padding(*cascade) + 1;
  return 1;
}

/// Applies a filter to one contiguous run of samples.
class SignalFilter {
 public:
  SignalFilter(FilterKind kind, double fs_hz)
      : kind_(std::move(kind)), cascade_(cascade_for(kind_, fs_hz)),
        min_length_(min_span_length(kind_, fs_hz)) {}

  [[nodiscard]] std::vector<double> operator()(std::span<const double> x) const {
    if (cascade_) return filtfilt(*cascade_, x);
    if (std::holds_alternative<StdFilter>(kind_)) return std_filter(x);
    if (std::holds_alternative<ExtraFilter>(kind_)) {
      return apply_heuristic(HeuristicLevel::extra_filter, x);
    }
    return {x.begin(), x.end()};
  }

  [[nodiscard]] std::size_t min_length() const noexcept { return min_length_; }
  [[nodiscard]] const FilterKind& kind() const noexcept { return kind_; }

 private:
  FilterKind kind_;
  std::optional<BiquadCascade> cascade_;
  std::size_t min_length_;
};

/// What apply_filter does with valid runs too short for the filter.
enum class ShortSpanPolicy { invalidate, keep, error };

/// Filters both channels of every valid span independently.
[[nodiscard]] inline Recording apply_filter(const Recording& rec, const FilterKind& kind,
                                            ShortSpanPolicy policy = ShortSpanPolicy::invalidate) {
  const SignalFilter filter(kind, rec.sample_rate_hz);
  Recording out = rec;
  for (const auto& span : contiguous_valid_spans(rec, 1)) {
    if (span.length < filter.min_length()) {
      if (policy == ShortSpanPolicy::error) {
        throw DataError("valid span at rows " + std::to_string(span.start_index) + ".." +
                        std::to_string(span.end_index() - 1) + " too short for filter " +
                        filter_name(kind));
      }
      if (policy == ShortSpanPolicy::invalidate) {
        for (std::size_t i = span.start_index; i < span.end_index(); ++i) out.valid[i] = false;
      }
      continue;
    }
    const auto fx = filter(slice(rec.x_deg, span));
    const auto fy = filter(slice(rec.y_deg, span));
    std::copy(fx.begin(), fx.end(), out.x_deg.begin() + static_cast<std::ptrdiff_t>(span.start_index));
    std::copy(fy.begin(), fy.end(), out.y_deg.begin() + static_cast<std::ptrdiff_t>(span.start_index));
  }
  return out;
}

struct SpectrumConfig {
  FixationSegmentConfig segments{};
  PhaseAveraging phase_averaging = PhaseAveraging::arithmetic;
};

/// Average spectrum of `analysed` over subsegments at `starts`.
[[nodiscard]] inline Spectrum average_segment_spectrum(const Recording& analysed,
                                                       std::span<const std::size_t> starts,
                                                       const SpectrumConfig& cfg) {
  if (starts.empty()) throw DataError("no fixation segment passed the velocity veto");
  const auto& channel = channel_of(analysed, cfg.segments.channel);
  std::vector<Spectrum> spectra;
  spectra.reserve(starts.size());
  for (const auto& seg : extract_segments(channel, starts, cfg.segments.subsegment_length)) {
    spectra.push_back(
        segment_spectrum(seg.samples, analysed.sample_rate_hz, cfg.segments.subsegment_length));
  }
  return average_spectra(spectra, cfg.phase_averaging);
}

/// Segments are always chosen on the unfiltered recording; the same indices
/// are then cut from the filtered version.
[[nodiscard]] inline Spectrum fixation_spectrum(const Recording& unfiltered, const FilterKind& kind,
                                                const SpectrumConfig& cfg = {}) {
  const auto starts = fixation_segment_starts(unfiltered, cfg.segments);
  if (std::holds_alternative<NoFilter>(kind)) {
    return average_segment_spectrum(unfiltered, starts, cfg);
  }
  return average_segment_spectrum(apply_filter(unfiltered, kind), starts, cfg);
}

struct FrequencyResponseRun {
  Spectrum unfiltered;
  Spectrum filtered;
  FrequencyResponse response;
};

/// Segment selection, spectra of the unfiltered and filtered variants, B/A.
[[nodiscard]] inline FrequencyResponseRun measure_frequency_response(const Recording& unfiltered,
                                                                     const FilterKind& kind,
                                                                     const SpectrumConfig& cfg = {}) {
  const auto starts = fixation_segment_starts(unfiltered, cfg.segments);
  FrequencyResponseRun run{average_segment_spectrum(unfiltered, starts, cfg),
                           average_segment_spectrum(apply_filter(unfiltered, kind), starts, cfg),
                           {}};
  run.response = estimate_frequency_response(run.unfiltered, run.filtered);
  return run;
}

}  // namespace oculofilt

#endif  // OCULOFILT_PIPELINE_HPP
