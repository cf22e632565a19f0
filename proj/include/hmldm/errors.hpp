#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hmldm {

// Malformed input text; carries a 1-based line number when known (0 = unknown).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg, std::size_t line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Structurally invalid data or arguments (self-loops, bad partitions, infeasible requests).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values where the computation requires finite ones.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hmldm
