#pragma once

#include <stdexcept>
#include <string>

namespace rangelab {

/// Invalid user input: distributions, configs, parameters. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation would exceed a memory or size budget. CLI exit code 3.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of a numerical operation does not hold (e.g. periodic walk
/// passed to the local CLT check, degenerate smoothing scale).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact identity failed on a concrete input. Always a bug. CLI exit code 4.
class IdentityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rangelab
