#pragma once

#include <stdexcept>
#include <string>

namespace abwave {

/// Root of the library's exception hierarchy. Every error names the stage
/// or field that failed in its message.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical preconditions: anything that makes a requested computation
/// meaningless (non-finite input, undersampling, wrong regime, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class OverflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EvaluationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class GeometryError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Source sampling too coarse for the requested target angles.
class AliasingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Far-field shortcut requested outside the Fraunhofer regime.
class RegimeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CoverageError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MarginError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class GridMismatchError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SmoothnessError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace abwave
