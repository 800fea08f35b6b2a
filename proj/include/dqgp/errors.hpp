#pragma once

#include <stdexcept>
#include <string>

namespace dqgp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value that must be a unit (dual) quaternion violates its invariants.
class NonUnitInput : public Error {
 public:
  using Error::Error;
};

/// Integration step outside (0, 0.1] s.
class StepTooLarge : public Error {
 public:
  using Error::Error;
};

/// Query time outside the trajectory's domain.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// Gram matrix could not be factorized even at the maximum jitter.
class FactorizationFailure : public Error {
 public:
  using Error::Error;
};

class InvalidConfidence : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A module error raised while running an episode, with the tick time
/// prepended to the message (CLI exit code 3).
class EpisodeError : public Error {
 public:
  using Error::Error;
};

}  // namespace dqgp
