#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "qlim/constants.hpp"
#include "qlim/modes.hpp"

// Stationary-state spectral densities and susceptibilities of mode-function
// observables, plus the identity checks that define a detector at the
// quantum limit. All functions are pure in (modes, omega); safe to call
// concurrently across frequencies.
namespace qlim::linres {

// Unsymmetrized vacuum spectral density S_AB(w) = a(w) conj(b(w)).
// For a = b this is |a(w)|^2, real and non-negative.
inline Complex vacuum_unsym_spectrum(const ObservableModes& a,
                                     const ObservableModes& b, double omega) {
  return a.c_plus(omega) * std::conj(b.c_plus(omega));
}

// Symmetrized spectral density S_AB(w) together with the raw pair:
// Sbar_AB(w) = [S_AB(w) + S_BA(-w)] / 2.
inline SpectrumValue symmetrized_spectrum(const ObservableModes& a,
                                          const ObservableModes& b,
                                          double omega) {
  const Complex pos = vacuum_unsym_spectrum(a, b, omega);
  const Complex neg = vacuum_unsym_spectrum(b, a, -omega);
  return SpectrumValue(pos, neg, a.unit() + "*" + b.unit() + "/Hz");
}

// chi_ZF(w) = (i/hbar) [S_ZF(w) - S_FZ(-w)], valid for an output-port
// observable z measured against the input-port observable f (chi_ZZ =
// chi_FZ = 0). The right-hand side is a commutator, so the result is
// state-independent: Bogoliubov-transforming both observables with the
// same squeeze profile leaves it unchanged.
inline Complex susceptibility_from_modes(const ObservableModes& z,
                                         const ObservableModes& f,
                                         double omega) {
  const Complex kappa = z.c_plus(omega) * std::conj(f.c_plus(omega)) -
                        f.c_plus(-omega) * std::conj(z.c_plus(-omega));
  return Complex{0.0, 1.0 / constants::hbar} * kappa;
}

// The four commutator-constraint entries for a conjugate output pair:
//   Z_k(w) conj(Z_l(w)) - conj(Z_k(-w)) Z_l(-w) - (-sigma_y^{kl}).
// Returned in row-major order (k,l) = (1,1), (1,2), (2,1), (2,2).
inline std::array<Complex, 4> commutator_constraint_entries(
    const ObservableModes& z1, const ObservableModes& z2, double omega) {
  const Complex a1 = z1.c_plus(omega), a1m = z1.c_plus(-omega);
  const Complex a2 = z2.c_plus(omega), a2m = z2.c_plus(-omega);
  const auto bracket = [](Complex p, Complex pm, Complex q, Complex qm) {
    return p * std::conj(q) - std::conj(pm) * qm;
  };
  // -sigma_y = [[0, i], [-i, 0]]
  const Complex i{0.0, 1.0};
  return {bracket(a1, a1m, a1, a1m) - Complex{0.0, 0.0},
          bracket(a1, a1m, a2, a2m) - i,
          bracket(a2, a2m, a1, a1m) + i,
          bracket(a2, a2m, a2, a2m) - Complex{0.0, 0.0}};
}

// Largest absolute deviation of the four entries from -sigma_y.
inline double check_commutator_constraint(const ObservableModes& z1,
                                          const ObservableModes& z2,
                                          double omega) {
  const auto e = commutator_constraint_entries(z1, z2, omega);
  double worst = 0.0;
  for (const auto& v : e) worst = std::max(worst, std::abs(v));
  return worst;
}

// Magnitude of the dominant raw entry, for scaled-tolerance checks.
inline double commutator_constraint_scale(const ObservableModes& z1,
                                          const ObservableModes& z2,
                                          double omega) {
  const Complex a1 = z1.c_plus(omega), a1m = z1.c_plus(-omega);
  const Complex a2 = z2.c_plus(omega), a2m = z2.c_plus(-omega);
  double s = 1.0;
  for (const Complex& v : {a1 * std::conj(a1), std::conj(a1m) * a1m,
                           a1 * std::conj(a2), std::conj(a1m) * a2m,
                           a2 * std::conj(a2), std::conj(a2m) * a2m})
    s = std::max(s, std::abs(v));
  return s;
}

// Kubo's formula residual |Im chi_ff(w) - [S_FF(w) - S_FF(-w)] / (2 hbar)|.
// The spectra are the commutator (state-independent) part, evaluated in
// vacuum from the mode functions.
inline double kubo_check(const ObservableModes& f, Complex chi_ff,
                         double omega) {
  const double s_pos = std::norm(f.c_plus(omega));
  const double s_neg = std::norm(f.c_plus(-omega));
  return std::abs(chi_ff.imag() - (s_pos - s_neg) / (2.0 * constants::hbar));
}

}  // namespace qlim::linres
