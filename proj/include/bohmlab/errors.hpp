#pragma once

#include <stdexcept>
#include <string>

namespace bohmlab {

// Base class for every error the library throws.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidBoundsError : Error {
  using Error::Error;
};

struct ZeroNormError : Error {
  using Error::Error;
};

struct GridMismatchError : Error {
  using Error::Error;
};

struct OutOfRangeError : Error {
  using Error::Error;
};

struct OutOfGridError : Error {
  using Error::Error;
};

struct DegeneracyError : Error {
  using Error::Error;
};

struct SolverSingularError : Error {
  using Error::Error;
};

struct MissingFrameError : Error {
  using Error::Error;
};

struct InvalidIntervalError : Error {
  using Error::Error;
};

struct BumpOutsideGridError : Error {
  using Error::Error;
};

struct ResolutionError : Error {
  using Error::Error;
};

struct EmptyTrajectoryError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

// Thrown by the experiment pipeline; prefixes the failing stage name.
struct PipelineError : Error {
  PipelineError(const std::string& stage, const std::string& what)
      : Error(stage + ": " + what), stage(stage) {}
  std::string stage;
};

}  // namespace bohmlab
