#pragma once

#include <stdexcept>
#include <string>

namespace surfns {

/// Invalid numeric parameter (degree, radius, time step, ...).
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Geometry that cannot be built or is not supported by an operation.
class GeometryError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Fields or states that live on different grids / truncations.
class GridMismatchError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A discrete object failed an internal consistency test.
class ConsistencyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Configuration file or scenario schema violation. The message starts with
/// the offending key path.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Checkpoint I/O failure: unreadable, truncated, bad CRC or version.
class CheckpointError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace surfns
