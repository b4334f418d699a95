#pragma once

#include <stdexcept>
#include <string>

namespace tattr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter value (sigma <= 0, steps < 1, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Dimension mismatch between an input and what the callee expects.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input (model file, polynomial literal, manifest line).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Structurally well-formed input that violates an invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value encountered where a finite one is required.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Requested computation exceeds the configured enumeration budget.
class ComplexityError : public Error {
 public:
  using Error::Error;
};

/// Training diverged; carries the epoch at which the loss became non-finite.
class TrainingError : public Error {
 public:
  TrainingError(const std::string& msg, int epoch) : Error(msg), epoch(epoch) {}
  int epoch;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tattr
