#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace hnls {

/// Short %.3g rendering for error messages.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}


// Precondition violations: bad grid sizes, incommensurate wave numbers,
// mismatched coefficient arrays.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failures: mask overflow, singular effective mass, ODE tolerance
// not met, unstable time integration.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EvolutionAborted : public NumericalError {
 public:
  EvolutionAborted(const std::string& what, double last_good_time)
      : NumericalError(what), last_good_time_(last_good_time) {}
  double last_good_time() const { return last_good_time_; }

 private:
  double last_good_time_;
};

}  // namespace hnls
