#pragma once

#include <stdexcept>
#include <string>

namespace mmdiff {

// Base class for all engine errors. Subclasses encode the failure category so
// callers (and the CLI error reporter) can distinguish bad configuration from
// bad data or degenerate numerics.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid or inconsistent configuration (bad hyperparameters, malformed
// config files, incompatible option combinations). Reported before compute.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Argument outside its mathematical domain (e.g. time outside [0,1]).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Input data that cannot be processed (malformed files, shape mismatches).
class DataError : public Error {
 public:
  using Error::Error;
};

// Observed evidence has probability zero under the model.
class ImpossibleEvidenceError : public Error {
 public:
  using Error::Error;
};

// Geometric degeneracy: collinear backbones, rank-deficient covariance,
// coincident points where a gradient is singular.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Degenerate numerical state (zero-step sizes, all-zero weight ensembles).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace mmdiff
