#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace drfeas {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::ptrdiff_t expected, std::ptrdiff_t actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(actual)) {}
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The nearest-point map is not a finite set at the query point (e.g. the
/// centre of a sphere).
class DegenerateProjection : public Error {
 public:
  using Error::Error;
};

class EmptySet : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace drfeas
