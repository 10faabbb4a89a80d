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

#ifndef OCULOFILT_FFT_HPP
#define OCULOFILT_FFT_HPP

#include <bit>
#include <complex>
#include <concepts>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "oculofilt/error.hpp"

namespace oculofilt {

[[nodiscard]] constexpr bool is_power_of_two(std::size_t n) noexcept { return std::has_single_bit(n); }

/// In-place iterative radix-2 decimation-in-time FFT, forward sign
/// convention X[k] = sum x[n] exp(-2 pi i k n / N).
template <std::floating_point T>
void fft_inplace(std::span<std::complex<T>> data) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n)) throw ArgumentError("FFT length must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const T angle = -2 * std::numbers::pi_v<T> / static_cast<T>(len);
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        // Twiddle computed directly, not by recurrence.
        const auto w = std::polar(T{1}, angle * static_cast<T>(k));
        const auto u = data[start + k];
        const auto v = data[start + k + half] * w;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

template <std::floating_point T>
[[nodiscard]] std::vector<std::complex<T>> fft_real(std::span<const T> x) {
  std::vector<std::complex<T>> data(x.begin(), x.end());
  fft_inplace<T>(data);
  return data;
}

}  // namespace oculofilt

#endif  // OCULOFILT_FFT_HPP
