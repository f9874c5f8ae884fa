#pragma once

#include <stdexcept>
#include <string>

namespace memnet {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument values (bad sizes, ranges, enum values, malformed input files).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Arguments are well-formed but the requested computation is not defined for
/// them (disconnected graph, unstable parameters, coupling gain out of range).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed (eigensolver did not converge, singular system).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace memnet
