#pragma once

#include <string>
#include <vector>

#include "qlim/config.hpp"

namespace qlim {

// One grid frequency of the sensitivity sweep. Amplitudes are strain-
// referred (sqrt(sigma)/L_arm) double-sided values; single-sided
// presentation is applied at emit time. Rows at singular-loop frequencies
// carry NaNs and a nonempty flag instead of aborting the sweep.
struct SweepRow {
  double f_hz = 0.0;
  double sqrt_qcrb = 0.0;
  double sqrt_sql = 0.0;
  double sqrt_sigma_phase = 0.0;  // fixed-readout curve (see readout.mode)
  double sqrt_sigma_opt = 0.0;
  double theta_opt_rad = 0.0;
  double ratio_amp = 0.0;             // sqrt(sigma_opt / qcrb)
  double rmin_over_half_hbar = 0.0;   // R_min / (hbar/2)
  std::string flag;                   // "" or "singular-loop"
};

std::vector<SweepRow> run_sweep(const RunConfig& config);

// Fixed header, bit-exact:
//   f_hz,sqrt_qcrb,sqrt_sql,sqrt_sigma_phase,sqrt_sigma_opt,theta_opt_rad,
//   ratio_amp,rmin_over_half_hbar,flag
std::string render_csv(const std::vector<SweepRow>& rows,
                       const RunConfig& config);
std::string render_json(const std::vector<SweepRow>& rows,
                        const RunConfig& config);
std::string render_svg(const std::vector<SweepRow>& rows,
                       const RunConfig& config);

// Writes output.path in output.format, plus <path>.svg when requested.
// Returns the list of files written. Throws IoError with the path on
// unwritable targets.
std::vector<std::string> emit(const std::vector<SweepRow>& rows,
                              const RunConfig& config);

}  // namespace qlim
