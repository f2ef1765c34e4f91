#pragma once

#include <complex>
#include <string>

#include "qlim/constants.hpp"
#include "qlim/modes.hpp"

namespace qlim {

// Physical parameters of the mapped single-cavity optomechanical model of a
// LIGO-like detector. Angular quantities are rad/s.
struct InterferometerParams {
  double mass_kg = 40.0;            // mirror mass M
  double arm_length_m = 4000.0;     // L_arm
  double cavity_power_w = 8.0e5;    // intracavity power P_cav
  double laser_omega = 0.0;         // w_0
  double detuning = 0.0;            // Delta = w_0 - w_cav
  double half_bandwidth = 0.0;      // gamma, amplitude decay rate
  double light_speed = constants::light_speed;
  double hbar = constants::hbar;

  // throws std::invalid_argument naming the bad field
  void validate() const;

  double cavity_omega() const { return laser_omega - detuning; }

  // g = 2 sqrt(P_cav w_cav / (hbar L_arm c)); w_cav = w_0 - Delta is used
  // as-is, not approximated by w_0.
  double coupling_g() const;
};

// Differential mode of the four arm mirrors: chi_qq(w) = -4 / (M w^2).
struct TestMass {
  double mass_kg = 40.0;
  double hbar = constants::hbar;

  double chi_qq(double omega) const;  // domain_error at w = 0
};

// Field-level solution of the cavity quadrature dynamics at one frequency,
// with the e^{+iwt} convention (d/dt -> -iw):
//   Xdot = -gamma X - Delta Y + sqrt(2 gamma) X_in
//   Ydot = -gamma Y + Delta X + sqrt(2 gamma) Y_in + g q
//   X_out = sqrt(2 gamma) X - X_in,  Y_out = sqrt(2 gamma) Y - Y_in
// z1/z2 are the outgoing amplitude/phase quadrature c_plus coefficients,
// f = hbar g X is the radiation-pressure force observable, and the chi's
// are responses to a unit classical drive at the force port.
struct CavityPoint {
  Complex x, y;        // intracavity quadrature mode coefficients
  Complex z1, z2;      // X_out, Y_out
  Complex f;           // field force, Newtons
  Complex chi_ff;      // from the dynamical solve
  Complex chi_z1f, chi_z2f;
};

class CavityModel {
 public:
  explicit CavityModel(const InterferometerParams& p);

  CavityPoint solve_at(double omega) const;  // domain_error at w = 0

  // hbar g^2 Delta / [(w - Delta + i gamma)(w + Delta + i gamma)];
  // the solve must reproduce this to 1e-12 relative.
  Complex chi_ff_closed_form(double omega) const;

  ObservableModes field_z1() const;
  ObservableModes field_z2() const;
  ObservableModes field_f() const;

  const InterferometerParams& params() const { return params_; }
  double g() const { return g_; }

 private:
  InterferometerParams params_;
  double g_;  // cached coupling
};

// Closed-loop detector: cavity field + suspended test mass. Detector-level
// observables divide out the loop factor L(w) = 1 - chi_qq(w) chi_FF(w):
//   F = f / L,   Z_k = z_k + chi_{z_k f} chi_qq f / L.
// The lossless optical-spring pole is reported (SingularLoopError), never
// regularized.
class DetectorAssembly {
 public:
  explicit DetectorAssembly(const InterferometerParams& p,
                            double singular_tol = 1e-9);

  Complex loop_factor(double omega) const;

  ObservableModes detector_f() const;
  ObservableModes detector_z1() const;
  ObservableModes detector_z2() const;

  // chi_{Z_k F} at detector level = chi_{z_k f} / L, k in {1, 2}
  Complex chi_zf_detector(int k, double omega) const;

  Susceptibility chi_ff_field() const;
  Susceptibility chi_z1f_field() const;
  Susceptibility chi_z2f_field() const;

  const CavityModel& cavity() const { return cavity_; }
  const TestMass& test_mass() const { return mass_; }
  double singular_tol() const { return singular_tol_; }

 private:
  Complex checked_loop(double omega) const;  // throws SingularLoopError

  CavityModel cavity_;
  TestMass mass_;
  double singular_tol_;
};

// x = L_arm * h
double gw_signal_scale(const InterferometerParams& p, double strain);

}  // namespace qlim
