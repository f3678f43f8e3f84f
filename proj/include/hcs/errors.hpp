#pragma once

#include <stdexcept>
#include <string>

namespace hcs {

/// Invalid configuration or precondition violation (bad sizes, rates, ranges).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A required Pauli weight vanishes, so the inverse-weight estimator is undefined.
class IncompletenessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A projection with zero probability was requested (inconsistent shadow record).
class ContradictionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hcs
