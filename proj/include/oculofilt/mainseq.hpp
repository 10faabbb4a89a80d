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

#ifndef OCULOFILT_MAINSEQ_HPP
#define OCULOFILT_MAINSEQ_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oculofilt/error.hpp"
#include "oculofilt/saccades.hpp"

namespace oculofilt {

/// Amplitudes at or below this many degrees fall in the small cluster.
inline constexpr double kClusterSplitDeg = 4.0;

enum class Cluster { small, large };

[[nodiscard]] inline std::string_view to_string(Cluster c) noexcept {
  return c == Cluster::small ? "small" : "large";
}

struct ClusterSplit {
  std::vector<SaccadeRecord> small;
  std::vector<SaccadeRecord> large;
};

/// Partition on amplitude <= split_deg (inclusive).
[[nodiscard]] inline ClusterSplit split_clusters(std::span<const SaccadeRecord> saccades,
                                                 double split_deg = kClusterSplitDeg) {
  ClusterSplit out;
  for (const auto& s : saccades) {
    if (!(s.amplitude_deg > 0.0)) {
      throw DataError("saccade amplitude must be positive, got " +
                      std::to_string(s.amplitude_deg));
    }
    (s.amplitude_deg <= split_deg ? out.small : out.large).push_back(s);
  }
  return out;
}

struct RobustFitConfig {
  double tuning = 4.685;       // bisquare constant
  double mad_scale = 1.4826;   // MAD to sigma for Gaussian residuals
  double tolerance = 1e-6;     // on max coefficient change
  int max_iterations = 50;
};

struct MainSequenceFit {
  Cluster cluster = Cluster::small;
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t n_points = 0;
  bool converged = false;
  int iterations = 0;
};

namespace detail {

inline double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  double m = *mid;
  if (v.size() % 2 == 0) m = (m + *std::max_element(v.begin(), mid)) / 2.0;
  return m;
}

struct Line {
  double slope, intercept;
};

inline std::optional<Line> weighted_line(std::span<const double> x, std::span<const double> y,
                                         std::span<const double> w) {
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  if (!(sw > 0.0)) return std::nullopt;
  const double xm = sx / sw;
  const double ym = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - xm;
    sxx += w[i] * dx * dx;
    sxy += w[i] * dx * (y[i] - ym);
  }
  if (!(sxx > 0.0)) return std::nullopt;
  const double slope = sxy / sxx;
  return Line{slope, ym - slope * xm};
}

}  // namespace detail

/// Straight-line fit by iteratively reweighted least squares with Tukey
/// bisquare weights on residuals scaled by mad_scale * MAD, starting from
/// ordinary least squares. When the iteration cap is hit the last iterate is
/// returned with converged = false.
[[nodiscard]] inline MainSequenceFit robust_fit(std::span<const double> x,
                                                std::span<const double> y,
                                                const RobustFitConfig& cfg = {}) {
  if (x.size() != y.size()) throw ArgumentError("robust_fit: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw ArgumentError("robust_fit: need at least 3 points");
  double y_scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw ArgumentError("robust_fit: non-finite point");
    }
    y_scale = std::max(y_scale, std::abs(y[i]));
  }
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) {
    throw ArgumentError("robust_fit: rank-deficient design (all x equal)");
  }

  std::vector<double> w(n, 1.0);
  auto line = detail::weighted_line(x, y, w);
  MainSequenceFit fit;
  fit.n_points = n;
  fit.slope = line->slope;
  fit.intercept = line->intercept;

  // Residual scale below this is treated as an exact fit.
  const double exact = 1e-12 * (1.0 + y_scale);
  std::vector<double> residual(n), abs_dev(n);
  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    fit.iterations = iter;
    for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - (fit.intercept + fit.slope * x[i]);
    const double centre = detail::median(residual);
    for (std::size_t i = 0; i < n; ++i) abs_dev[i] = std::abs(residual[i] - centre);
    const double scale = std::max(cfg.mad_scale * detail::median(abs_dev), exact);
    const double cutoff = cfg.tuning * scale;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = residual[i] / cutoff;
      w[i] = std::abs(u) < 1.0 ? (1.0 - u * u) * (1.0 - u * u) : 0.0;
    }
    const auto next = detail::weighted_line(x, y, w);
    if (!next) return fit;  // weights collapsed; keep the last iterate
    const double change =
        std::max(std::abs(next->slope - fit.slope), std::abs(next->intercept - fit.intercept));
    fit.slope = next->slope;
    fit.intercept = next->intercept;
    if (change < cfg.tolerance) {
      fit.converged = true;
      return fit;
    }
  }
  return fit;
}

/// Robust fit of ln(peak velocity) on ln(amplitude) for each cluster with at
/// least 3 saccades.
[[nodiscard]] inline std::vector<MainSequenceFit> fit_main_sequence(
    std::span<const SaccadeRecord> saccades, double split_deg = kClusterSplitDeg,
    const RobustFitConfig& cfg = {}) {
  const auto split = split_clusters(saccades, split_deg);
  std::vector<MainSequenceFit> fits;
  for (const auto& [cluster, members] : {std::pair{Cluster::small, &split.small},
                                         std::pair{Cluster::large, &split.large}}) {
    if (members->size() < 3) continue;
    std::vector<double> lx, ly;
    for (const auto& s : *members) {
      lx.push_back(std::log(s.amplitude_deg));
      ly.push_back(std::log(s.peak_velocity_deg_s));
    }
    if (std::all_of(lx.begin(), lx.end(), [&](double v) { return v == lx[0]; })) continue;
    auto fit = robust_fit(lx, ly, cfg);
    fit.cluster = cluster;
    fits.push_back(fit);
  }
  return fits;
}

struct SlopeSummary {
  std::size_t n_fits = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample SD; 0 for a single fit
};

struct ConditionSummary {
  std::string condition;
  SlopeSummary small;
  SlopeSummary large;
};

/// Filter conditions in table order, with their display labels.
inline constexpr std::array<std::pair<std::string_view, std::string_view>, 5> kConditions{{
    {"none", "No Filter"},
    {"std", "STD"},
    {"extra", "EXTRA"},
    {"zlp100", "Z-LP100"},
    {"zlp50", "Z-LP50"},
}};

[[nodiscard]] inline std::string condition_label(std::string_view condition) {
  for (const auto& [key, label] : kConditions) {
    if (key == condition) return std::string(label);
  }
  return std::string(condition);
}

[[nodiscard]] inline SlopeSummary summarize_slopes(std::span<const double> slopes) {
  SlopeSummary s;
  s.n_fits = slopes.size();
  if (slopes.empty()) return s;
  double sum = 0.0;
  for (double v : slopes) sum += v;
  s.mean = sum / static_cast<double>(slopes.size());
  if (slopes.size() > 1) {
    double ss = 0.0;
    for (double v : slopes) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(slopes.size() - 1));
  }
  return s;
}

/// Mean and SD of slopes per condition and cluster. Known conditions come
/// first in table order, others follow alphabetically. Every condition needs
/// at least one fit in each cluster.
[[nodiscard]] inline std::vector<ConditionSummary> summarize_by_condition(
    const std::map<std::string, std::vector<MainSequenceFit>>& fits) {
  std::vector<std::string> order;
  for (const auto& [key, label] : kConditions) {
    if (fits.contains(std::string(key))) order.emplace_back(key);
  }
  for (const auto& [key, list] : fits) {
    if (std::find(order.begin(), order.end(), key) == order.end()) order.push_back(key);
  }

  std::vector<ConditionSummary> out;
  for (const auto& condition : order) {
    std::vector<double> small, large;
    for (const auto& f : fits.at(condition)) {
      (f.cluster == Cluster::small ? small : large).push_back(f.slope);
    }
    if (small.empty() || large.empty()) {
      throw DataError("condition '" + condition + "' lacks a fit for the " +
                      (small.empty() ? "small" : "large") + " cluster");
    }
    out.push_back({condition, summarize_slopes(small), summarize_slopes(large)});
  }
  return out;
}

}  // namespace oculofilt

#endif  // OCULOFILT_MAINSEQ_HPP
