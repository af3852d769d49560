#pragma once

#include <stdexcept>
#include <string>

namespace d2d {

// Base for every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or unknown configuration key/value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Scenario generator could not satisfy a geometric constraint.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// Interference terms requested on a deployment where they are undefined.
class InterferenceError : public Error {
 public:
  using Error::Error;
};

// Capacities cannot host every link/device.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Exhaustive oracle asked to enumerate too many candidates.
class OracleGuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace d2d
