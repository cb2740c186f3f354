#pragma once

#include <stdexcept>
#include <string>

namespace sliderule {

/// Base of every error raised by the library. `code()` is the stable
/// machine-readable kind used by the CLI exit codes and the HTTP API.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* code() const noexcept = 0;
};

/// A value lies outside the domain of a distance function.
class DomainError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "domain_error"; }
};

/// A value or distance lies outside the drawn range of a scale.
class RangeError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "range_error"; }
};

/// Two scales cannot be compared by the requested analysis.
class IncompatibleScales : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "incompatible_scales"; }
};

/// Malformed or inconsistent input (bad JSON, missing fields, invalid specs).
class InvalidInput : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "bad_request"; }
};

}  // namespace sliderule
