#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace visenrich {

// Base for every error raised by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    if (line == 0) return what;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

// A taxonomy that cannot form a lattice (cycle, dangling parent, no roots, ...).
class TaxonomyError : public Error {
 public:
  using Error::Error;
};

class UnknownConceptError : public Error {
 public:
  explicit UnknownConceptError(const std::string& id)
      : Error("unknown concept '" + id + "'"), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

// A value outside its admissible interval (probabilities, weights, thresholds).
class RangeError : public Error {
 public:
  using Error::Error;
};

}  // namespace visenrich
