// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace gerost {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or ambient dimensions do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix expected to have full column rank does not.
class RankError : public Error {
 public:
  using Error::Error;
};

/// A scalar argument lies outside the admissible range.
class DomainError : public Error {
 public:
  using Error::Error;
};

class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration; `line` is 0 when the error is not tied to a file.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Too few usable samples to form an estimate.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Input is valid but carries no information (e.g. a single-class ROC).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace gerost
