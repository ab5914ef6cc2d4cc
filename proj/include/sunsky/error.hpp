#pragma once

#include <stdexcept>
#include <string>

namespace sunsky {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data could not be read or violates an ingestion invariant.
class IngestError : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied argument or configuration value is out of range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Two rasters that must be aligned have different shapes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An estimator could not produce a result (too few samples, degenerate input).
class EstimationError : public Error {
 public:
  using Error::Error;
};

void log_warning(const std::string& message);

}  // namespace sunsky
