#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "qlim/interferometer.hpp"
#include "qlim/squeeze.hpp"

namespace qlim::qcrb {

// Readout quadrature Z(theta) = Z1 sin(theta) + Z2 cos(theta); theta = 0 is
// the phase quadrature Z2. sigma_xx(theta) is pi-periodic, so angles are
// kept in the canonical range [0, pi).
struct ReadoutAngle {
  double theta = 0.0;

  static ReadoutAngle canonical(double raw) {
    double t = std::fmod(raw, std::numbers::pi);
    if (t < 0.0) t += std::numbers::pi;
    return ReadoutAngle{t};
  }
};

struct ThetaChoice {
  ReadoutAngle theta;
  bool exact = false;      // true when Im[Sbar_Z1F conj(Sbar_Z2F)] = 0 and the
                           // closed-form zero of Sbar_ZF(theta) exists
  bool degenerate = false; // both cross-spectra zero; any theta is uncorrelated
};

// Diagnostics of the correlation ratio R(theta) = |Sbar_ZF / chi_ZF|.
struct RminDiagnostics {
  Complex beta;            // F(-w) / conj(F(w)), detector level, in-state
  double beta_abs = 0.0;   // may be +inf when F(w) = 0
  double alpha_mag = 0.0;  // |conj(Z(theta_min, -w)) / Z(theta_min, w)|, must be 1
  double phi_alpha_prime = 0.0;
  double r_min_closed = 0.0;  // (hbar/2) |1 - |beta|| / (1 + |beta|)
  double r_min_grid = 0.0;    // 2048-point scan + golden polish
  double theta_min = 0.0;
};

// Signed margins of the inequality/equality chain at one frequency.
// decomposition/cancellation audits apply only when chi_FF = 0; NaN otherwise.
struct BoundAudit {
  double theta_opt = 0.0;
  bool theta_exact = false;
  double sigma_opt = 0.0;
  double qcrb_value = 0.0;
  double ratio_amp = 0.0;           // sqrt(sigma_opt / qcrb), in [1, sqrt 2]
  double min_sigma_margin = 0.0;    // min over sampled theta of sigma - qcrb
  double two_qcrb_margin = 0.0;     // 2 qcrb - sigma_opt
  double uncertainty_residual = 0.0, uncertainty_scale = 1.0;  // worst over sampled theta
  double qlimit_residual = 0.0, qlimit_scale = 1.0;
  bool tuned = false;
  double decomposition_residual = 0.0, decomposition_scale = 1.0;
  double cancellation_residual = 0.0, cancellation_scale = 1.0;
};

// Per-frequency bundle of symmetrized spectra and susceptibilities for the
// closed-loop detector in a given squeezed state. Everything theta-dependent
// reduces to quadratic/linear forms in (sin theta, cos theta) over this
// bundle. Immutable after construction; pure per-w evaluation.
class FrequencyAnalysis {
 public:
  FrequencyAnalysis(const DetectorAssembly& det, const SqueezeProfile& state,
                    double omega);

  double omega() const { return omega_; }
  double hbar() const { return hbar_; }

  // detector level, in-state
  double s_zz(double theta) const;
  Complex s_zf(double theta) const;
  Complex chi_zf(double theta) const;  // state-independent
  double s_ff() const { return sff_; }

  double sigma_xx(double theta) const;  // Sbar_ZZ / |chi_ZF|^2, m^2/Hz
  double qcrb() const;                  // hbar^2 / (4 Sbar_FF), detector level
  double qcrb_two_path() const;         // field form times |1 - chi_qq chi_FF|^2

  ThetaChoice optimal_theta() const;
  RminDiagnostics rmin_diagnostics() const;
  BoundAudit bound_audit() const;

  // field level, in-state
  double s_zz_field(double theta) const;
  Complex s_zf_field(double theta) const;
  Complex chi_zf_field(double theta) const;
  double s_ff_field() const { return fsff_; }

  Complex loop() const { return loop_; }
  double chi_qq() const { return chi_qq_; }
  double im_chi_ff_detector() const { return im_chi_ff_det_; }
  Complex chi_ff_field_closed() const { return chi_ff_field_; }
  Complex s_z1f() const { return s1f_; }
  Complex s_z2f() const { return s2f_; }

  // Largest unsymmetrized constituent of Sbar_ZkF: the symmetrized value can
  // sit many orders below its two halves, so residual checks scale against
  // the halves, not the cancelled sum.
  double s_z1f_part_scale() const;
  double s_z2f_part_scale() const;
  double s_zf_field_part_scale(double theta) const;

 private:
  double ratio_of_forms(double theta) const;  // s_zz / |chi_zf|^2, raw
  double r_of_theta(double theta) const;      // |s_zf / chi_zf|, +inf if blind

  double omega_ = 0.0, hbar_ = 0.0;
  // detector level (transformed by the state)
  double s11_ = 0.0, s22_ = 0.0, s12m_ = 0.0, sff_ = 0.0;
  Complex s1f_, s2f_;
  Complex chi1_, chi2_;  // untransformed: susceptibilities are state-free
  // transformed detector mode values at +/-w, for alpha diagnostics
  Complex z1p_, z1m_, z2p_, z2m_, fp_, fm_;
  // transformed field mode values at +/-w
  Complex w1p_, w1m_, w2p_, w2m_, wfp_, wfm_;
  // field level (transformed by the state)
  double fs11_ = 0.0, fs22_ = 0.0, fs12m_ = 0.0, fsff_ = 0.0;
  Complex fs1f_, fs2f_;
  Complex fchi1_, fchi2_;
  Complex loop_;
  Complex chi_ff_field_;      // closed-form value
  double im_chi_ff_det_ = 0.0;  // Kubo from detector-F commutator part
  double chi_qq_ = 0.0;
};

// Per-frequency sensitivity bundle, as consumed by sweeps and reports.
struct SensitivityPoint {
  double omega = 0.0;
  double sigma_xx = 0.0;   // at the requested readout angle, m^2/Hz
  double qcrb = 0.0;       // m^2/Hz
  double sql = 0.0;        // m^2/Hz
  double theta_opt = 0.0;
  bool theta_exact = false;
  double ratio_amp = 0.0;  // sqrt(sigma_xx(theta_opt) / qcrb), in [1, sqrt 2]
  double r_min = 0.0;      // J s
  double beta_abs = 0.0;
};

SensitivityPoint sensitivity_point(const DetectorAssembly& det,
                                   const SqueezeProfile& s, double omega,
                                   ReadoutAngle theta);

// (hbar/2) |1 - |beta|| / (1 + |beta|); the |beta| -> 0 and |beta| -> inf
// limits both saturate at hbar/2.
double rmin_closed_form(double beta_abs, double hbar);

// sigma_SQL = hbar |chi_qq| = 4 hbar / (M w^2)
double sql(const TestMass& mass, double omega);

// Convenience wrappers; each builds a FrequencyAnalysis internally.
double estimation_error(const DetectorAssembly& det, const SqueezeProfile& s,
                        ReadoutAngle theta, double omega);
double qcrb_bound(const DetectorAssembly& det, const SqueezeProfile& s,
                  double omega);
ThetaChoice optimal_theta(const DetectorAssembly& det, const SqueezeProfile& s,
                          double omega);
RminDiagnostics rmin_diagnostics(const DetectorAssembly& det,
                                 const SqueezeProfile& s, double omega);
BoundAudit bound_audit(const DetectorAssembly& det, const SqueezeProfile& s,
                       double omega);

}  // namespace qlim::qcrb
