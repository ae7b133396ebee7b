#pragma once

#include <stdexcept>
#include <string>

namespace vcnet {

/// Base for every error raised by the library. Callers that only need a
/// message can catch this; the subclasses exist so tests and the CLI can
/// tell failure kinds apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input layout: missing/duplicate columns, bad rows, bad years.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Two input rows describe the same (entity, year).
class DuplicateKeyError : public Error {
 public:
  DuplicateKeyError(std::string what, std::size_t first_row, std::size_t second_row)
      : Error(std::move(what)), first_row_(first_row), second_row_(second_row) {}

  std::size_t first_row() const noexcept { return first_row_; }
  std::size_t second_row() const noexcept { return second_row_; }

 private:
  std::size_t first_row_;
  std::size_t second_row_;
};

/// Unknown entity, variable, or year.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent normalization or analysis configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Caller broke an API precondition (length mismatch, foreign series, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Too few points to compute the requested statistic.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Statistic undefined on this input (zero variance, |subset| < 2, ...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Invalid synthetic-panel specification.
class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace vcnet
