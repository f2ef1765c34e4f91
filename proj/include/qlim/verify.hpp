#pragma once

#include <string>
#include <vector>

#include "qlim/config.hpp"

namespace qlim {

// One invariant check aggregated over the frequency grid: worst residual
// relative to its scaled tolerance, and where it happened.
struct CheckResult {
  std::string name;
  bool pass = true;
  double worst = 0.0;      // residual / (tolerance * scale); pass iff <= 1
  double worst_f_hz = 0.0;
  std::string note;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Runs the full identity/inequality suite for the configured detector and
// squeeze state: commutator constraint (field and detector), Kubo, the
// cross-spectrum identity, the uncertainty equality, the two-path bound
// agreement, the closed-form susceptibility pin, the bound audit, and the
// single-shot analytic checks. Validates the config first.
VerificationReport run_verification(const RunConfig& config);

std::string render_report(const VerificationReport& report);

}  // namespace qlim
