#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wylight {

// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unparseable transaction or label text. `line` is 1-based, 0 when unknown.
class MalformedInput : public Error {
 public:
  MalformedInput(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Permutation matrix with the wrong shape, non-binary entries or a wrong
// ones-count in some column.
class MalformedMatrix : public Error {
 public:
  MalformedMatrix(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Labels without a minor class (all objects share one label).
class DegenerateLabels : public Error {
 public:
  using Error::Error;
};

// The testable region cannot shrink any further.
class Exhausted : public Error {
 public:
  Exhausted() : Error("no smaller attainable threshold exists") {}
};

// Brute-force oracle asked to enumerate beyond its limits.
class LimitsExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace wylight
