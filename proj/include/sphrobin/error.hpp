#pragma once

#include <stdexcept>
#include <string>

namespace sphrobin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates the documented domain of an operation.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A body or construction is geometrically invalid or degenerate.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed to bracket or converge.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace sphrobin
