#pragma once

#include <stdexcept>
#include <string>

namespace geobs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid resolution below the supported minimum.
class InvalidResolution : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation (negative weight,
/// non-unit boundary vector, ball leaving the disk, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two fields defined on different grids were combined.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized field, checkpoint or configuration.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver exhausted its budget. Solver-specific subclasses
/// carry the last diagnostic state.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

}  // namespace geobs
