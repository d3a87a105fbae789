#pragma once

#include <stdexcept>
#include <string>

namespace tscp {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user-supplied configuration (bad rate, bad fraction, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data violating a dataset invariant or a CSV contract.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A calibration stratum (cal0 or cal1) is empty.
class DegenerateCalibration : public Error {
 public:
  using Error::Error;
};

/// A fitter failed to reach its gradient tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// The Newton system could not be solved; raising the ridge usually helps.
class SingularHessian : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

}  // namespace tscp
