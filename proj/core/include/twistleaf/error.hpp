#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace twistleaf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position` is the 0-based offset of the offending token
/// (equal to the text length when input ended early).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Evaluation hit a pole or branch point (division by zero, log/sqrt at 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Stereographic projection from the pole t = 1.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Projective point on the line at infinity [*,*,0,0].
class LineAtInfinityError : public Error {
 public:
  using Error::Error;
};

/// A finite-difference stencil was requested on a grid boundary point.
class BoundaryError : public Error {
 public:
  using Error::Error;
};

class SingularJacobianError : public Error {
 public:
  using Error::Error;
};

class NoConvergeError : public Error {
 public:
  using Error::Error;
};

class BranchPointError : public Error {
 public:
  using Error::Error;
};

class ClassificationError : public Error {
 public:
  using Error::Error;
};

class NonUniqueNearestPointError : public Error {
 public:
  using Error::Error;
};

/// Potential integration refused because the form is not closed enough.
class NotClosedError : public Error {
 public:
  using Error::Error;
};

/// Hopf map evaluated on the axis r = s = 0.
class AxisError : public Error {
 public:
  using Error::Error;
};

class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace twistleaf
