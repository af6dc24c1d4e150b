#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace perron {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad λ, coincident real parts, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Requested object exceeds a hard size cap.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// Malformed expression text.  `offset` is a byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset, std::vector<std::string> expected)
      : Error(message), offset_(offset), expected_(std::move(expected)) {}
  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Runtime failure while evaluating an expression at a specific t.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical method failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Picard updates kept growing.
class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& message, double growth, int iteration)
      : NumericError(message), growth_(growth), iteration_(iteration) {}
  double growth_factor() const noexcept { return growth_; }
  int iteration() const noexcept { return iteration_; }

 private:
  double growth_;
  int iteration_;
};

/// Invalid run configuration; `key` names the offending path (e.g. "quad.panel_order").
class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : Error(key + ": " + message), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace perron
