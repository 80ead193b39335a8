#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lsmdp {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed textual input (DIMACS files, descriptors). `line()` is 1-based;
/// 0 when the input has no line structure.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A hard size cap was exceeded (dense matrices, enumeration leaves).
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A coefficient was requested where its defining ratio has no support.
class UndefinedCoefficient : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An undiscounted value does not exist (reward keeps flowing in a recurrent
/// class) or an iterative solve failed to converge.
class DivergentValue : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lsmdp
