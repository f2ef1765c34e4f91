#include "qlim/interferometer.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qlim/errors.hpp"

namespace qlim {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

void InterferometerParams::validate() const {
  const auto fail = [](const std::string& msg) {
    throw std::invalid_argument("InterferometerParams: " + msg);
  };
  if (!(mass_kg > 0.0) || !std::isfinite(mass_kg)) fail("mass_kg must be finite and > 0");
  if (!(arm_length_m > 0.0) || !std::isfinite(arm_length_m))
    fail("arm_length_m must be finite and > 0");
  if (!(cavity_power_w >= 0.0) || !std::isfinite(cavity_power_w))
    fail("cavity_power_w must be finite and >= 0");
  if (!(laser_omega > 0.0) || !std::isfinite(laser_omega))
    fail("laser_omega must be finite and > 0");
  if (!std::isfinite(detuning)) fail("detuning must be finite");
  if (!(half_bandwidth > 0.0) || !std::isfinite(half_bandwidth))
    fail("half_bandwidth must be finite and > 0");
  if (!(light_speed > 0.0)) fail("light_speed must be > 0");
  if (!(hbar > 0.0)) fail("hbar must be > 0");
  if (!(cavity_omega() > 0.0)) fail("cavity frequency w_0 - Delta must be > 0");
}

double InterferometerParams::coupling_g() const {
  return 2.0 * std::sqrt(cavity_power_w * cavity_omega() /
                         (hbar * arm_length_m * light_speed));
}

double TestMass::chi_qq(double omega) const {
  if (omega == 0.0)
    throw std::domain_error("TestMass::chi_qq: undefined at w = 0");
  return -4.0 / (mass_kg * omega * omega);
}

CavityModel::CavityModel(const InterferometerParams& p) : params_(p) {
  params_.validate();
  g_ = params_.coupling_g();
}

CavityPoint CavityModel::solve_at(double omega) const {
  if (omega == 0.0)
    throw std::domain_error("CavityModel::solve_at: w = 0 excluded");

  const double gam = params_.half_bandwidth;
  const double del = params_.detuning;
  const double root2g = std::sqrt(2.0 * gam);
  const Complex iw{0.0, omega};

  // (gam - iw) X + del Y = b_x;  -del X + (gam - iw) Y = b_y
  const Complex a = Complex{gam, 0.0} - iw;
  const Complex det = a * a + del * del;
  const auto solve = [&](Complex b_x, Complex b_y) {
    return std::pair<Complex, Complex>{(a * b_x - del * b_y) / det,
                                       (del * b_x + a * b_y) / det};
  };

  // vacuum input quadratures: X_in = 1/sqrt2, Y_in = -i/sqrt2
  const Complex xin{1.0 / kSqrt2, 0.0};
  const Complex yin{0.0, -1.0 / kSqrt2};

  CavityPoint pt;
  auto [x0, y0] = solve(root2g * xin, root2g * yin);
  pt.x = x0;
  pt.y = y0;
  pt.z1 = root2g * x0 - xin;
  pt.z2 = root2g * y0 - yin;
  pt.f = params_.hbar * g_ * x0;

  // unit classical drive at the force port enters Ydot as +g
  auto [xd, yd] = solve(Complex{0.0, 0.0}, Complex{g_, 0.0});
  pt.chi_ff = params_.hbar * g_ * xd;
  pt.chi_z1f = root2g * xd;
  pt.chi_z2f = root2g * yd;
  return pt;
}

Complex CavityModel::chi_ff_closed_form(double omega) const {
  const double gam = params_.half_bandwidth;
  const double del = params_.detuning;
  const Complex d1{omega - del, gam};
  const Complex d2{omega + del, gam};
  return params_.hbar * g_ * g_ * del / (d1 * d2);
}

ObservableModes CavityModel::field_z1() const {
  CavityModel m = *this;
  return ObservableModes([m](double w) { return m.solve_at(w).z1; }, "1");
}

ObservableModes CavityModel::field_z2() const {
  CavityModel m = *this;
  return ObservableModes([m](double w) { return m.solve_at(w).z2; }, "1");
}

ObservableModes CavityModel::field_f() const {
  CavityModel m = *this;
  return ObservableModes([m](double w) { return m.solve_at(w).f; }, "N");
}

DetectorAssembly::DetectorAssembly(const InterferometerParams& p,
                                   double singular_tol)
    : cavity_(p), mass_{p.mass_kg, p.hbar}, singular_tol_(singular_tol) {}

Complex DetectorAssembly::loop_factor(double omega) const {
  return 1.0 - mass_.chi_qq(omega) * cavity_.solve_at(omega).chi_ff;
}

Complex DetectorAssembly::checked_loop(double omega) const {
  const Complex loop = loop_factor(omega);
  if (std::abs(loop) < singular_tol_) {
    std::ostringstream msg;
    msg << "DetectorAssembly: singular loop factor |1 - chi_qq chi_FF| = "
        << std::abs(loop) << " at w = " << omega << " rad/s";
    throw SingularLoopError(omega, msg.str());
  }
  return loop;
}

ObservableModes DetectorAssembly::detector_f() const {
  DetectorAssembly a = *this;
  return ObservableModes(
      [a](double w) { return a.cavity_.solve_at(w).f / a.checked_loop(w); },
      "N");
}

ObservableModes DetectorAssembly::detector_z1() const {
  DetectorAssembly a = *this;
  return ObservableModes(
      [a](double w) {
        const CavityPoint pt = a.cavity_.solve_at(w);
        return pt.z1 +
               pt.chi_z1f * a.mass_.chi_qq(w) * pt.f / a.checked_loop(w);
      },
      "1");
}

ObservableModes DetectorAssembly::detector_z2() const {
  DetectorAssembly a = *this;
  return ObservableModes(
      [a](double w) {
        const CavityPoint pt = a.cavity_.solve_at(w);
        return pt.z2 +
               pt.chi_z2f * a.mass_.chi_qq(w) * pt.f / a.checked_loop(w);
      },
      "1");
}

Complex DetectorAssembly::chi_zf_detector(int k, double omega) const {
  const CavityPoint pt = cavity_.solve_at(omega);
  const Complex chi = (k == 1) ? pt.chi_z1f : pt.chi_z2f;
  return chi / checked_loop(omega);
}

Susceptibility DetectorAssembly::chi_ff_field() const {
  CavityModel m = cavity_;
  return Susceptibility{[m](double w) { return m.solve_at(w).chi_ff; },
                        "force", "force", "N/m"};
}

Susceptibility DetectorAssembly::chi_z1f_field() const {
  CavityModel m = cavity_;
  return Susceptibility{[m](double w) { return m.solve_at(w).chi_z1f; },
                        "z1", "force", "1/m"};
}

Susceptibility DetectorAssembly::chi_z2f_field() const {
  CavityModel m = cavity_;
  return Susceptibility{[m](double w) { return m.solve_at(w).chi_z2f; },
                        "z2", "force", "1/m"};
}

double gw_signal_scale(const InterferometerParams& p, double strain) {
  return p.arm_length_m * strain;
}

}  // namespace qlim
