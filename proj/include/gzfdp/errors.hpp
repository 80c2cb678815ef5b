// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The gzfdp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace gzfdp {

/// Base for every error raised by the library. The CLI maps the subclasses
/// onto its exit-code taxonomy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument value (negative power, out-of-range depth, beta >= 1, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Incompatible matrix or vector sizes, e.g. more users than antennas.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. `line` is 1-based; 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Well-formed input whose declared structure does not match its body.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Channel (or a projected sub-channel) is numerically rank deficient.
class RankError : public Error {
 public:
  RankError(const std::string& what, double smallest_singular_value)
      : Error(what), sigma_min_(smallest_singular_value) {}
  double smallest_singular_value() const noexcept { return sigma_min_; }

 private:
  double sigma_min_;
};

/// Request exceeds what an exhaustive method can do (e.g. N! too large).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// An experiment description failed validation; message lists every issue.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Monte Carlo run aborted because too many trials were rank deficient.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace gzfdp
