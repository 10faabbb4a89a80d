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

#ifndef OCULOFILT_ERROR_HPP
#define OCULOFILT_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace oculofilt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data that violates a documented contract (bad CSV, bad spacing, too-short span...).
class DataError : public Error {
 public:
  explicit DataError(const std::string& what, std::optional<std::size_t> row = std::nullopt)
      : Error(row ? what + " (row " + std::to_string(*row) + ")" : what), row_{row} {}

  /// Zero-based data row the error refers to, when there is one.
  [[nodiscard]] std::optional<std::size_t> row() const noexcept { return row_; }

 private:
  std::optional<std::size_t> row_;
};

/// Arguments outside an operation's domain (order out of range, edge above Nyquist...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// The IIR designer produced an unusable filter.
class DesignError : public Error {
 public:
  using Error::Error;
};

}  // namespace oculofilt

#endif  // OCULOFILT_ERROR_HPP
