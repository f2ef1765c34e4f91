#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "qlim/linear_response.hpp"
#include "qlim/modes.hpp"

namespace qlim {

// Stationary pure Gaussian (multi-mode squeezed) detector state, defined by
// a squeeze factor r_s(w) >= 0 and angle phi_s(w). Both are even in w; the
// stored evaluators receive |w|, so evenness cannot be broken. Profiles come
// from closed-form parametric families, not tabulated data.
class SqueezeProfile {
 public:
  static SqueezeProfile vacuum() {
    SqueezeProfile s;
    s.r_ = [](double) { return 0.0; };
    s.phi_ = [](double) { return 0.0; };
    s.vacuum_ = true;
    return s;
  }

  static SqueezeProfile constant(double r, double phi) {
    if (!(r >= 0.0))
      throw std::invalid_argument("SqueezeProfile: squeeze factor r must be >= 0");
    SqueezeProfile s;
    s.r_ = [r](double) { return r; };
    s.phi_ = [phi](double) { return phi; };
    s.vacuum_ = (r == 0.0);
    return s;
  }

  // Both r and phi roll off as wp^2 / (wp^2 + w^2) from their w = 0 values.
  static SqueezeProfile single_pole(double r0, double phi0, double pole_omega) {
    if (!(r0 >= 0.0))
      throw std::invalid_argument("SqueezeProfile: squeeze factor r must be >= 0");
    if (!(pole_omega > 0.0))
      throw std::invalid_argument("SqueezeProfile: pole frequency must be > 0");
    SqueezeProfile s;
    const double wp2 = pole_omega * pole_omega;
    s.r_ = [r0, wp2](double aw) { return r0 * wp2 / (wp2 + aw * aw); };
    s.phi_ = [phi0, wp2](double aw) { return phi0 * wp2 / (wp2 + aw * aw); };
    s.vacuum_ = (r0 == 0.0 && phi0 == 0.0);
    return s;
  }

  double r(double omega) const { return r_(std::abs(omega)); }
  double phi(double omega) const { return phi_(std::abs(omega)); }
  bool is_vacuum() const { return vacuum_; }

 private:
  SqueezeProfile() = default;
  std::function<double(double)> r_, phi_;
  bool vacuum_ = false;
};

// Bogoliubov transform induced by the squeeze operator:
//   a'(w) = a(w) cosh r_s(w) + e^{-i phi_s(w)} conj(a(-w)) sinh r_s(w).
// Squeezed-state spectra of `a` equal vacuum spectra of the transformed
// observable. Hermiticity is preserved because r_s, phi_s are even.
inline ObservableModes bogoliubov_transform(const ObservableModes& a,
                                            const SqueezeProfile& state) {
  if (state.is_vacuum()) return a;
  return ObservableModes(
      [a, state](double w) {
        const double r = state.r(w);
        if (!(r >= 0.0))
          throw std::invalid_argument("bogoliubov_transform: negative squeeze factor");
        const double phi = state.phi(w);
        return a.c_plus(w) * std::cosh(r) +
               std::polar(1.0, -phi) * std::conj(a.c_plus(-w)) * std::sinh(r);
      },
      a.unit());
}

// Symmetrized spectrum of (a, b) in the given squeezed state; reduces all
// squeezed-state spectra to vacuum spectra of transformed modes.
inline SpectrumValue spectrum_in_state(const ObservableModes& a,
                                       const ObservableModes& b,
                                       const SqueezeProfile& state,
                                       double omega) {
  return linres::symmetrized_spectrum(bogoliubov_transform(a, state),
                                      bogoliubov_transform(b, state), omega);
}

}  // namespace qlim
