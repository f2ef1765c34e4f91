#pragma once

#include <cstdint>

// Single-shot Gaussian measurement toy model. Works in hbar = 1 units with
// vacuum variance 1/2 (the physical-scale modules use SI hbar instead; the
// conversion is a pure rescaling of variances by hbar).
//
// Phase-space variables: u is the signal-coupled observable F, v its
// conjugate, [u, v] = i. The readout is Z(theta) = u sin(theta) +
// v cos(theta), whose signal response is chi_ZF = cos(theta).
namespace qlim::sshot {

// Pure squeezed Gaussian state: covariance of (u, v) is
//   Sigma = R(phi) diag(e^{2r}, e^{-2r}) R(phi)^T / 2,  det Sigma = 1/4.
struct SingleShotState {
  double r = 0.0;
  double phi = 0.0;
  double s_uu = 0.5;
  double s_uv = 0.0;
  double s_vv = 0.5;
};

struct SingleShotResult {
  double theta_used = 0.0;
  double x_true = 0.0;
  uint64_t n_samples = 0;
  double mse = 0.0;
  double stderr_mse = 0.0;
  double qcrb = 0.0;  // 1 / (4 sigma_FF)
};

// throws std::invalid_argument for r < 0
SingleShotState covariance(double r, double phi);

// readout noise and cross-correlation at angle theta
double sigma_zz(const SingleShotState& s, double theta);
double sigma_zf(const SingleShotState& s, double theta);

// sigma_ZZ(theta) / cos^2(theta); throws BlindQuadratureError at cos = 0
double sigma_xx_analytic(const SingleShotState& s, double theta);

// theta* in [0, pi) solving sigma_ZF(theta) = 0, i.e. tan(theta*) =
// -Sigma_uv / Sigma_uu. cos(theta*) never vanishes for finite r.
double optimal_angle(const SingleShotState& s);

// Draws z ~ N(chi_ZF x_true, sigma_ZZ(theta)), estimates x = z / chi_ZF and
// returns the empirical mean squared error. Counter-based sampling:
// reproducible for a fixed seed regardless of how callers split the range.
SingleShotResult mc_estimate(const SingleShotState& s, double theta,
                             double x_true, uint64_t n_samples, uint64_t seed);

}  // namespace qlim::sshot
