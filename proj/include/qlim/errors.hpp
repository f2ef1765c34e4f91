#pragma once

#include <stdexcept>
#include <string>

namespace qlim {

// Closed-loop denominator 1 - chi_qq * chi_FF fell below the singularity
// threshold. Carries the offending frequency so sweep code can flag the row
// instead of aborting.
class SingularLoopError : public std::runtime_error {
 public:
  SingularLoopError(double omega_rad, const std::string& what)
      : std::runtime_error(what), omega_rad_(omega_rad) {}
  double omega_rad() const { return omega_rad_; }

 private:
  double omega_rad_;
};

// Requested readout quadrature carries no signal (chi_ZF = 0).
class BlindQuadratureError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// S_FF = 0 (decoupled detector, g = 0): the estimation bound is not defined.
// Reported as a distinct error rather than returning infinity.
class UnboundedQcrbError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qlim
