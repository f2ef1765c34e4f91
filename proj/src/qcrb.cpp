#include "qlim/qcrb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qlim/errors.hpp"
#include "qlim/linear_response.hpp"

namespace qlim::qcrb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kThetaScan = 2048;

// Golden-section polish inside a bracketing interval [a, b].
template <typename F>
double golden_min(F f, double a, double b, int iters = 120) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters && (b - a) > 1e-15; ++i) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return (f1 < f2) ? x1 : x2;
}

// Scan [0, pi) at n points, then polish around the best sample. The scan
// locates the basin; the polish reaches the stated 1e-6 relative tolerances
// that a raw grid cannot near a quadratic minimum.
template <typename F>
double scan_min_theta(F f, int n, double* theta_out) {
  double best = std::numeric_limits<double>::infinity();
  int ibest = 0;
  for (int j = 0; j < n; ++j) {
    const double v = f(kPi * j / n);
    if (v < best) { best = v; ibest = j; }
  }
  const double step = kPi / n;
  const double t = golden_min(f, kPi * ibest / n - step, kPi * ibest / n + step);
  const double vt = f(t);
  if (vt < best) {
    if (theta_out) *theta_out = ReadoutAngle::canonical(t).theta;
    return vt;
  }
  if (theta_out) *theta_out = ReadoutAngle::canonical(kPi * ibest / n).theta;
  return best;
}

}  // namespace

FrequencyAnalysis::FrequencyAnalysis(const DetectorAssembly& det,
                                     const SqueezeProfile& state,
                                     double omega)
    : omega_(omega), hbar_(det.cavity().params().hbar) {
  const ObservableModes dz1 = det.detector_z1();
  const ObservableModes dz2 = det.detector_z2();
  const ObservableModes df = det.detector_f();
  const ObservableModes tz1 = bogoliubov_transform(dz1, state);
  const ObservableModes tz2 = bogoliubov_transform(dz2, state);
  const ObservableModes tf = bogoliubov_transform(df, state);

  z1p_ = tz1.c_plus(omega); z1m_ = tz1.c_plus(-omega);
  z2p_ = tz2.c_plus(omega); z2m_ = tz2.c_plus(-omega);
  fp_ = tf.c_plus(omega);   fm_ = tf.c_plus(-omega);

  s11_ = 0.5 * (std::norm(z1p_) + std::norm(z1m_));
  s22_ = 0.5 * (std::norm(z2p_) + std::norm(z2m_));
  s12m_ = (0.5 * (z1p_ * std::conj(z2p_) + z2m_ * std::conj(z1m_))).real();
  s1f_ = 0.5 * (z1p_ * std::conj(fp_) + fm_ * std::conj(z1m_));
  s2f_ = 0.5 * (z2p_ * std::conj(fp_) + fm_ * std::conj(z2m_));
  sff_ = 0.5 * (std::norm(fp_) + std::norm(fm_));

  chi1_ = linres::susceptibility_from_modes(dz1, df, omega);
  chi2_ = linres::susceptibility_from_modes(dz2, df, omega);
  im_chi_ff_det_ =
      (std::norm(df.c_plus(omega)) - std::norm(df.c_plus(-omega))) /
      (2.0 * hbar_);

  const CavityModel& cav = det.cavity();
  const ObservableModes fz1t = bogoliubov_transform(cav.field_z1(), state);
  const ObservableModes fz2t = bogoliubov_transform(cav.field_z2(), state);
  const ObservableModes fft = bogoliubov_transform(cav.field_f(), state);
  w1p_ = fz1t.c_plus(omega); w1m_ = fz1t.c_plus(-omega);
  w2p_ = fz2t.c_plus(omega); w2m_ = fz2t.c_plus(-omega);
  wfp_ = fft.c_plus(omega);  wfm_ = fft.c_plus(-omega);
  fs11_ = 0.5 * (std::norm(w1p_) + std::norm(w1m_));
  fs22_ = 0.5 * (std::norm(w2p_) + std::norm(w2m_));
  fs12m_ = (0.5 * (w1p_ * std::conj(w2p_) + w2m_ * std::conj(w1m_))).real();
  fs1f_ = 0.5 * (w1p_ * std::conj(wfp_) + wfm_ * std::conj(w1m_));
  fs2f_ = 0.5 * (w2p_ * std::conj(wfp_) + wfm_ * std::conj(w2m_));
  fsff_ = 0.5 * (std::norm(wfp_) + std::norm(wfm_));

  const CavityPoint pt = cav.solve_at(omega);
  fchi1_ = pt.chi_z1f;
  fchi2_ = pt.chi_z2f;
  chi_ff_field_ = cav.chi_ff_closed_form(omega);
  chi_qq_ = det.test_mass().chi_qq(omega);
  loop_ = det.loop_factor(omega);
}

double FrequencyAnalysis::s_zz(double theta) const {
  const double u1 = std::sin(theta), u2 = std::cos(theta);
  return u1 * u1 * s11_ + 2.0 * u1 * u2 * s12m_ + u2 * u2 * s22_;
}

Complex FrequencyAnalysis::s_zf(double theta) const {
  return std::sin(theta) * s1f_ + std::cos(theta) * s2f_;
}

Complex FrequencyAnalysis::chi_zf(double theta) const {
  return std::sin(theta) * chi1_ + std::cos(theta) * chi2_;
}

double FrequencyAnalysis::s_zz_field(double theta) const {
  const double u1 = std::sin(theta), u2 = std::cos(theta);
  return u1 * u1 * fs11_ + 2.0 * u1 * u2 * fs12m_ + u2 * u2 * fs22_;
}

Complex FrequencyAnalysis::s_zf_field(double theta) const {
  return std::sin(theta) * fs1f_ + std::cos(theta) * fs2f_;
}

Complex FrequencyAnalysis::chi_zf_field(double theta) const {
  return std::sin(theta) * fchi1_ + std::cos(theta) * fchi2_;
}

double FrequencyAnalysis::s_z1f_part_scale() const {
  return 0.5 * std::max(std::abs(z1p_ * std::conj(fp_)),
                        std::abs(fm_ * std::conj(z1m_)));
}

double FrequencyAnalysis::s_z2f_part_scale() const {
  return 0.5 * std::max(std::abs(z2p_ * std::conj(fp_)),
                        std::abs(fm_ * std::conj(z2m_)));
}

double FrequencyAnalysis::s_zf_field_part_scale(double theta) const {
  const double u1 = std::sin(theta), u2 = std::cos(theta);
  const Complex zp = u1 * w1p_ + u2 * w2p_;
  const Complex zm = u1 * w1m_ + u2 * w2m_;
  return 0.5 * std::max(std::abs(zp * std::conj(wfp_)),
                        std::abs(wfm_ * std::conj(zm)));
}

double FrequencyAnalysis::ratio_of_forms(double theta) const {
  const double denom = std::norm(chi_zf(theta));
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return s_zz(theta) / denom;
}

double FrequencyAnalysis::r_of_theta(double theta) const {
  const double denom = std::abs(chi_zf(theta));
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(s_zf(theta)) / denom;
}

double FrequencyAnalysis::sigma_xx(double theta) const {
  const double denom = std::norm(chi_zf(theta));
  if (denom == 0.0)
    throw BlindQuadratureError(
        "sigma_xx: readout quadrature carries no signal (chi_ZF = 0)");
  return s_zz(theta) / denom;
}

double FrequencyAnalysis::qcrb() const {
  if (sff_ == 0.0)
    throw UnboundedQcrbError("qcrb: Sbar_FF = 0, bound undefined (g = 0?)");
  return hbar_ * hbar_ / (4.0 * sff_);
}

double FrequencyAnalysis::qcrb_two_path() const {
  if (fsff_ == 0.0)
    throw UnboundedQcrbError("qcrb: field Sbar_FF = 0, bound undefined");
  return hbar_ * hbar_ * std::norm(loop_) / (4.0 * fsff_);
}

ThetaChoice FrequencyAnalysis::optimal_theta() const {
  const double a1 = std::abs(s1f_), a2 = std::abs(s2f_);
  const double scale = std::sqrt(std::max(s11_, s22_) * sff_);

  if (a1 <= 1e-14 * scale && a2 <= 1e-14 * scale) {
    return ThetaChoice{ReadoutAngle{0.0}, true, true};
  }

  const double improd = (s1f_ * std::conj(s2f_)).imag();
  if (std::abs(improd) <= 1e-9 * a1 * a2 || a1 == 0.0 || a2 == 0.0) {
    // Common-phase case: Sbar_ZkF = e^{i psi} rho_k with rho_k real, and
    // tan(theta) = -rho_2 / rho_1 zeroes Sbar_ZF exactly.
    const Complex ref = (a1 >= a2) ? s1f_ : s2f_;
    const Complex phase = ref / std::abs(ref);
    const double rho1 = (s1f_ * std::conj(phase)).real();
    const double rho2 = (s2f_ * std::conj(phase)).real();
    return ThetaChoice{ReadoutAngle::canonical(std::atan2(-rho2, rho1)), true,
                       false};
  }

  // Im[chi_FF] != 0: no zero of Sbar_ZF exists. Minimize the generalized
  // Rayleigh quotient u^T A u / u^T B u, u = (sin theta, cos theta), with
  //   A = Sbar_ZZ form, B = |chi_ZF|^2 form.
  const double b11 = std::norm(chi1_), b22 = std::norm(chi2_);
  const double b12 = (chi1_ * std::conj(chi2_)).real();
  const double det_b_sqrt = (chi1_ * std::conj(chi2_)).imag();
  const double det_b = det_b_sqrt * det_b_sqrt;  // exact: det B = Im(chi1 chi2*)^2
  const double det_a = s11_ * s22_ - s12m_ * s12m_;
  const double tr = s11_ * b22 + s22_ * b11 - 2.0 * s12m_ * b12;

  double lam;
  if (det_b <= 1e-30 * b11 * b22) {
    // rank-1 B: one generalized eigenvalue escapes to infinity
    lam = det_a / tr;
  } else {
    const double disc = std::max(0.0, tr * tr - 4.0 * det_b * det_a);
    lam = 2.0 * det_a / (tr + std::sqrt(disc));  // subtraction-free root
  }
  // null vector of (A - lam B), taken from the better-conditioned row
  const double r1 = std::hypot(s11_ - lam * b11, s12m_ - lam * b12);
  const double r2 = std::hypot(s12m_ - lam * b12, s22_ - lam * b22);
  double theta_star =
      (r1 >= r2) ? std::atan2(s12m_ - lam * b12, -(s11_ - lam * b11))
                 : std::atan2(s22_ - lam * b22, -(s12m_ - lam * b12));
  theta_star = ReadoutAngle::canonical(theta_star).theta;

  // Mandatory grid cross-check guards against branch mistakes.
  double theta_grid;
  const double grid_val =
      scan_min_theta([this](double t) { return ratio_of_forms(t); }, kThetaScan,
                     &theta_grid);
  if (grid_val < ratio_of_forms(theta_star) * (1.0 - 1e-9))
    theta_star = theta_grid;

  return ThetaChoice{ReadoutAngle{theta_star}, false, false};
}

RminDiagnostics FrequencyAnalysis::rmin_diagnostics() const {
  RminDiagnostics d;
  const double afp = std::abs(fp_), afm = std::abs(fm_);
  if (afp == 0.0 && afm == 0.0)
    throw std::invalid_argument(
        "rmin_diagnostics: force mode vanishes at both +w and -w");

  if (afp == 0.0) {
    d.beta = Complex{std::numeric_limits<double>::infinity(), 0.0};
    d.beta_abs = std::numeric_limits<double>::infinity();
  } else {
    d.beta = fm_ / std::conj(fp_);
    d.beta_abs = std::abs(d.beta);
  }
  d.r_min_closed = rmin_closed_form(d.beta_abs, hbar_);

  d.r_min_grid = scan_min_theta(
      [this](double t) { return r_of_theta(t); }, kThetaScan, &d.theta_min);

  const double u1 = std::sin(d.theta_min), u2 = std::cos(d.theta_min);
  const Complex ap = u1 * z1p_ + u2 * z2p_;
  const Complex am = u1 * z1m_ + u2 * z2m_;
  const Complex alpha = std::conj(am) / ap;
  d.alpha_mag = std::abs(alpha);
  // R(theta) = (hbar/2) |1 + alpha beta| / |1 - alpha beta| is extremal when
  // alpha beta is real; phi'_alpha = arg(alpha beta) - pi/2 makes the
  // minimum sit at sin(phi'_alpha) = +1.
  d.phi_alpha_prime = std::isinf(d.beta_abs)
                          ? std::numeric_limits<double>::quiet_NaN()
                          : std::arg(alpha * d.beta) - 0.5 * kPi;
  return d;
}

BoundAudit FrequencyAnalysis::bound_audit() const {
  BoundAudit a;
  const ThetaChoice choice = optimal_theta();
  a.theta_opt = choice.theta.theta;
  a.theta_exact = choice.exact;
  a.sigma_opt = sigma_xx(a.theta_opt);
  a.qcrb_value = qcrb();
  a.ratio_amp = std::sqrt(a.sigma_opt / a.qcrb_value);
  a.two_qcrb_margin = 2.0 * a.qcrb_value - a.sigma_opt;

  a.tuned = (std::abs(chi_ff_field_) == 0.0);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  a.decomposition_residual = a.decomposition_scale = nan;
  a.cancellation_residual = a.cancellation_scale = nan;

  a.min_sigma_margin = std::numeric_limits<double>::infinity();
  a.uncertainty_residual = a.qlimit_residual = 0.0;
  a.uncertainty_scale = a.qlimit_scale = 1.0;
  // keeps the (residual, scale) pair with the worst residual/scale ratio
  const auto track_worst = [](double res, double scale, double* worst_res,
                              double* worst_scale) {
    scale = std::max(1e-300, scale);
    if (std::isnan(*worst_res) || res / scale > *worst_res / *worst_scale) {
      *worst_res = res;
      *worst_scale = scale;
    }
  };

  constexpr int kSample = 64;
  for (int j = 0; j < kSample; ++j) {
    const double t = kPi * j / kSample;
    const Complex chi = chi_zf(t);
    if (std::norm(chi) == 0.0) continue;
    const double szz = s_zz(t);
    const Complex szf = s_zf(t);
    const double sigma = szz / std::norm(chi);
    a.min_sigma_margin = std::min(a.min_sigma_margin, sigma - a.qcrb_value);

    // quantum-limit equality term Im[Sbar_ZZ chi_FF - conj(Sbar_ZF) chi_ZF]
    const double im_term =
        szz * im_chi_ff_det_ - (std::conj(szf) * chi).imag();
    const double ql_scale = std::max({std::abs(szz * im_chi_ff_det_),
                                      std::abs(szf) * std::abs(chi),
                                      hbar_ * std::norm(chi)});
    track_worst(std::abs(im_term), ql_scale, &a.qlimit_residual,
                &a.qlimit_scale);

    const double lhs = szz * sff_ - std::norm(szf);
    const double rhs =
        0.25 * hbar_ * hbar_ * std::norm(chi) + hbar_ * std::abs(im_term);
    const double un_scale = std::max({std::abs(szz * sff_), std::norm(szf),
                                      0.25 * hbar_ * hbar_ * std::norm(chi)});
    track_worst(std::abs(lhs - rhs), un_scale, &a.uncertainty_residual,
                &a.uncertainty_scale);

    if (a.tuned) {
      // three-term field-level decomposition of sigma_xx(theta)
      const Complex fchi = chi_zf_field(t);
      if (std::norm(fchi) > 0.0) {
        const double imp = s_zz_field(t) / std::norm(fchi);
        const double corr = 2.0 * chi_qq_ * (s_zf_field(t) / fchi).real();
        const double ba = chi_qq_ * chi_qq_ * fsff_;
        const double dec_scale = std::max({imp, std::abs(corr), ba, sigma});
        track_worst(std::abs(sigma - (imp + corr + ba)), dec_scale,
                    &a.decomposition_residual, &a.decomposition_scale);
      }
    }
  }

  if (a.tuned) {
    const Complex fchi_opt = chi_zf_field(a.theta_opt);
    if (std::norm(fchi_opt) > 0.0) {
      const Complex cond = s_zf_field(a.theta_opt) / fchi_opt +
                           chi_qq_ * fsff_;
      a.cancellation_residual = std::abs(cond);
      // dominant constituent includes the unsymmetrized halves of the
      // correlation term, which dwarf the backaction term at high frequency
      a.cancellation_scale = std::max(
          {1e-300, std::abs(chi_qq_) * fsff_,
           s_zf_field_part_scale(a.theta_opt) / std::abs(fchi_opt)});
    }
  }
  return a;
}

double rmin_closed_form(double beta_abs, double hbar) {
  if (!(beta_abs >= 0.0))
    throw std::invalid_argument("rmin_closed_form: |beta| must be >= 0");
  if (std::isinf(beta_abs)) return 0.5 * hbar;
  return 0.5 * hbar * std::abs(1.0 - beta_abs) / (1.0 + beta_abs);
}

double sql(const TestMass& mass, double omega) {
  return mass.hbar * std::abs(mass.chi_qq(omega));
}

SensitivityPoint sensitivity_point(const DetectorAssembly& det,
                                   const SqueezeProfile& s, double omega,
                                   ReadoutAngle theta) {
  const FrequencyAnalysis an(det, s, omega);
  const ThetaChoice opt = an.optimal_theta();
  SensitivityPoint pt;
  pt.omega = omega;
  pt.sigma_xx = an.sigma_xx(theta.theta);
  pt.qcrb = an.qcrb();
  pt.sql = sql(det.test_mass(), omega);
  pt.theta_opt = opt.theta.theta;
  pt.theta_exact = opt.exact;
  pt.ratio_amp = std::sqrt(an.sigma_xx(opt.theta.theta) / pt.qcrb);
  const RminDiagnostics rd = an.rmin_diagnostics();
  pt.r_min = rd.r_min_grid;
  pt.beta_abs = rd.beta_abs;
  return pt;
}

double estimation_error(const DetectorAssembly& det, const SqueezeProfile& s,
                        ReadoutAngle theta, double omega) {
  return FrequencyAnalysis(det, s, omega).sigma_xx(theta.theta);
}

double qcrb_bound(const DetectorAssembly& det, const SqueezeProfile& s,
                  double omega) {
  return FrequencyAnalysis(det, s, omega).qcrb();
}

ThetaChoice optimal_theta(const DetectorAssembly& det, const SqueezeProfile& s,
                          double omega) {
  return FrequencyAnalysis(det, s, omega).optimal_theta();
}

RminDiagnostics rmin_diagnostics(const DetectorAssembly& det,
                                 const SqueezeProfile& s, double omega) {
  return FrequencyAnalysis(det, s, omega).rmin_diagnostics();
}

BoundAudit bound_audit(const DetectorAssembly& det, const SqueezeProfile& s,
                       double omega) {
  return FrequencyAnalysis(det, s, omega).bound_audit();
}

}  // namespace qlim::qcrb
