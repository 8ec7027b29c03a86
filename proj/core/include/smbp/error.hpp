#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smbp {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two curves (or a curve and a sample) live on different grids.
class GridMismatch : public Error {
 public:
  GridMismatch() : Error("curves are defined on different grids") {}
  explicit GridMismatch(const std::string& what) : Error(what) {}
};

// A precondition on an argument value is violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A malformed input file. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace smbp
