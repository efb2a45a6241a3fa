// Copyright 2026 The TSGB Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace tsgb {

using RowIndex = std::uint32_t;
using FeatureIndex = std::int32_t;
using TaskId = std::int32_t;

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that violates a data invariant (e.g. non-binary label).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Invalid hyperparameters or command configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A model file that cannot be read or does not match the data.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Sample routed with a task id the model never saw under the strict policy.
class RoutingError : public Error {
 public:
  using Error::Error;
};

/// H + lambda <= 0 in a leaf-weight or gain computation.
class NumericError : public Error {
 public:
  using Error::Error;
};

using WarningHandler = std::function<void(const std::string&)>;

namespace detail {
inline WarningHandler& warning_handler() {
  static WarningHandler handler = [](const std::string& msg) {
    std::cerr << "[tsgb] warning: " << msg << '\n';
  };
  return handler;
}
}  // namespace detail

/// Replace the process-wide warning sink; returns the previous one.
inline WarningHandler set_warning_handler(WarningHandler handler) {
  return std::exchange(detail::warning_handler(), std::move(handler));
}

inline void warn(const std::string& msg) {
  if (detail::warning_handler()) detail::warning_handler()(msg);
}

}  // namespace tsgb
