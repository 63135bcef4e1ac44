#ifndef DYONLAB_ERROR_HPP
#define DYONLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace dyonlab {

// Base for everything thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the valid coordinate domain of a metric or operator.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Evaluation at a genuine singular point (r = 0, Dirac string, J-axis).
class SingularityError : public Error {
 public:
  using Error::Error;
};

// Point closer than delta_min to a source center or another particle.
class ProximityError : public Error {
 public:
  using Error::Error;
};

// An iterative method failed to reach its tolerance; message carries the
// achieved residual.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// No feasible solution for the requested parameters (turning point search,
// bound-state window, |J| < |s|).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Config file rejected; message carries line/key diagnostics.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Filesystem failure; message carries the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dyonlab

#endif
