#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ncjulia {

// Base class for every error raised by the library. The CLI maps the
// subclasses onto its exit-code contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not match (non-square input, d mismatch, n mismatch).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold, e.g. a point
// outside G_delta or a direction outside the inward cone.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A matrix that must be invertible is numerically singular.
class SingularMatrixError : public PreconditionError {
 public:
  SingularMatrixError(const std::string& what, double smallest_singular_value)
      : PreconditionError(what), smallest_singular_value_(smallest_singular_value) {}

  double smallest_singular_value() const { return smallest_singular_value_; }

 private:
  double smallest_singular_value_;
};

// Numerical evidence contradicts the assumed structure, e.g. the limit of
// phi along a sequence is far from unitary.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

// Malformed polynomial text or JSON. `position` is a 0-based character
// offset into the input, or npos when unknown.
class ParseError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit ParseError(const std::string& what, std::size_t position = npos)
      : Error(position == npos ? what : what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace ncjulia
