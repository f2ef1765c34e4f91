#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace qlim {

using Complex = std::complex<double>;

// A Hermitian field observable written over the ingoing continuum field:
//
//   A(w) = c_plus(w) d(w) + c_minus(w) d^dag(-w)
//
// Only c_plus is stored; Hermiticity fixes c_minus(w) = conj(c_plus(-w)),
// so the invariant cannot be broken by construction. Mode functions are
// closed-form evaluators of w (rad/s), not sampled arrays.
class ObservableModes {
 public:
  using Evaluator = std::function<Complex(double)>;

  ObservableModes() : c_plus_([](double) { return Complex{0.0, 0.0}; }) {}

  explicit ObservableModes(Evaluator c_plus, std::string unit = "1")
      : c_plus_(std::move(c_plus)), unit_(std::move(unit)) {
    if (!c_plus_) throw std::invalid_argument("ObservableModes: null evaluator");
  }

  Complex c_plus(double omega) const { return c_plus_(omega); }
  Complex c_minus(double omega) const { return std::conj(c_plus_(-omega)); }

  const std::string& unit() const { return unit_; }

 private:
  Evaluator c_plus_;
  std::string unit_ = "1";
};

// Unsymmetrized pair S_AB(w), S_BA(-w) plus their symmetrized average.
// s_sym is computed from the stored pair, never independently, so the
// consistency invariant holds exactly as stored.
struct SpectrumValue {
  Complex s_unsym_pos;  // S_AB(w)
  Complex s_unsym_neg;  // S_BA(-w)
  Complex s_sym;        // (s_unsym_pos + s_unsym_neg) / 2
  std::string units;    // product of the two observables' units per Hz

  SpectrumValue(Complex pos, Complex neg, std::string u)
      : s_unsym_pos(pos),
        s_unsym_neg(neg),
        s_sym(0.5 * (pos + neg)),
        units(std::move(u)) {}
};

// Linear response of one observable to a classical drive at another,
// as a closed-form complex function of w. Reality of the time-domain
// kernel means value(-w) = conj(value(w)); tests enforce it.
struct Susceptibility {
  std::function<Complex(double)> value;
  std::string from_label;
  std::string to_label;
  std::string units;

  Complex operator()(double omega) const { return value(omega); }
};

}  // namespace qlim
