#include "qlim/single_shot.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qlim/errors.hpp"
#include "qlim/rng.hpp"

namespace qlim::sshot {

SingleShotState covariance(double r, double phi) {
  if (!(r >= 0.0))
    throw std::invalid_argument("covariance: squeeze factor r must be >= 0");
  SingleShotState s;
  s.r = r;
  s.phi = phi;
  const double ch = std::cosh(2.0 * r), sh = std::sinh(2.0 * r);
  s.s_uu = 0.5 * (ch + std::cos(2.0 * phi) * sh);
  s.s_uv = 0.5 * std::sin(2.0 * phi) * sh;
  s.s_vv = 0.5 * (ch - std::cos(2.0 * phi) * sh);
  return s;
}

double sigma_zz(const SingleShotState& s, double theta) {
  const double sn = std::sin(theta), cs = std::cos(theta);
  return sn * sn * s.s_uu + 2.0 * sn * cs * s.s_uv + cs * cs * s.s_vv;
}

double sigma_zf(const SingleShotState& s, double theta) {
  return std::sin(theta) * s.s_uu + std::cos(theta) * s.s_uv;
}

// |cos(theta)| below this is treated as a blind readout; floating-point
// pi/2 itself gives cos ~ 6e-17, far under the cut.
constexpr double kBlindCos = 1e-12;

double sigma_xx_analytic(const SingleShotState& s, double theta) {
  const double cs = std::cos(theta);
  if (std::abs(cs) < kBlindCos)
    throw BlindQuadratureError("sigma_xx_analytic: cos(theta) = 0, no signal");
  return sigma_zz(s, theta) / (cs * cs);
}

double optimal_angle(const SingleShotState& s) {
  // Sigma_uu >= e^{-2r}/2 > 0, so theta* stays away from the blind pi/2
  double theta = std::atan(-s.s_uv / s.s_uu);
  if (theta < 0.0) theta += std::numbers::pi;
  assert(std::cos(theta) != 0.0);
  return theta;
}

SingleShotResult mc_estimate(const SingleShotState& s, double theta,
                             double x_true, uint64_t n_samples,
                             uint64_t seed) {
  if (n_samples < 2)
    throw std::invalid_argument("mc_estimate: need at least 2 samples");
  const double chi = std::cos(theta);
  if (std::abs(chi) < kBlindCos)
    throw BlindQuadratureError("mc_estimate: cos(theta) = 0, no signal");

  const double noise = std::sqrt(sigma_zz(s, theta));
  double sum = 0.0, sumsq = 0.0;
  for (uint64_t i = 0; i < n_samples; ++i) {
    const double z = chi * x_true + noise * rng::normal(seed, i);
    const double err = z / chi - x_true;
    const double sq = err * err;
    sum += sq;
    sumsq += sq * sq;
  }
  const double n = static_cast<double>(n_samples);
  const double mse = sum / n;
  const double var_sq = (sumsq - n * mse * mse) / (n - 1.0);

  SingleShotResult out;
  out.theta_used = theta;
  out.x_true = x_true;
  out.n_samples = n_samples;
  out.mse = mse;
  out.stderr_mse = std::sqrt(var_sq / n);
  out.qcrb = 1.0 / (4.0 * s.s_uu);
  return out;
}

}  // namespace qlim::sshot
