#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qlim/errors.hpp"
#include "qlim/rng.hpp"
#include "qlim/single_shot.hpp"

using namespace qlim::sshot;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("vacuum covariance is the identity over two") {
  const auto s = covariance(0.0, 0.0);
  CHECK(s.s_uu == 0.5);
  CHECK(s.s_vv == 0.5);
  CHECK(s.s_uv == 0.0);
}

TEST_CASE("principal-axis squeezing gives a diagonal covariance") {
  const auto s = covariance(1.0, 0.0);
  CHECK(s.s_uu == doctest::Approx(0.5 * std::exp(2.0)).epsilon(1e-14));
  CHECK(s.s_vv == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-14));
  CHECK(s.s_uv == doctest::Approx(0.0));
}

TEST_CASE("rotated covariance matches the explicit matrix product") {
  // oracle: R(phi) diag(e^{2r}, e^{-2r}) R(phi)^T / 2 evaluated by hand
  const double r = 1.0, phi = kPi / 4.0;
  const double R[2][2] = {{std::cos(phi), -std::sin(phi)},
                          {std::sin(phi), std::cos(phi)}};
  const double D[2] = {std::exp(2.0 * r), std::exp(-2.0 * r)};
  double sigma[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      sigma[i][j] =
          0.5 * (R[i][0] * D[0] * R[j][0] + R[i][1] * D[1] * R[j][1]);

  const auto s = covariance(r, phi);
  CHECK(s.s_uu == doctest::Approx(sigma[0][0]).epsilon(1e-14));
  CHECK(s.s_uv == doctest::Approx(sigma[0][1]).epsilon(1e-14));
  CHECK(s.s_vv == doctest::Approx(sigma[1][1]).epsilon(1e-14));
  // and the closed forms: cosh(2)/2 and sinh(2)/2 at phi = pi/4
  CHECK(s.s_uu == doctest::Approx(0.5 * std::cosh(2.0)).epsilon(1e-14));
  CHECK(s.s_uv == doctest::Approx(0.5 * std::sinh(2.0)).epsilon(1e-14));
}

TEST_CASE("negative squeeze factor is a validation error") {
  CHECK_THROWS_AS(covariance(-0.1, 0.0), std::invalid_argument);
}

TEST_CASE("constructed states are pure: det Sigma = 1/4") {
  for (int k = 0; k < 200; ++k) {
    const double r = 3.0 * qlim::rng::uniform01(5, 2 * k);
    const double phi = 2.0 * kPi * qlim::rng::uniform01(5, 2 * k + 1);
    const auto s = covariance(r, phi);
    const double det = s.s_uu * s.s_vv - s.s_uv * s.s_uv;
    CHECK(std::abs(det - 0.25) <= 1e-12 * std::max(1.0, s.s_uu * s.s_vv));
  }
}

TEST_CASE("optimal angle zeroes the readout-signal correlation") {
  SUBCASE("vacuum measures the conjugate directly") {
    CHECK(optimal_angle(covariance(0.0, 0.0)) == 0.0);
  }
  SUBCASE("principal axes aligned with the signal") {
    CHECK(optimal_angle(covariance(1.3, 0.0)) == 0.0);
    // readout is pi-periodic; rounding of sin(2 phi) may land at pi - eps
    const double t = optimal_angle(covariance(1.3, kPi / 2));
    CHECK(std::min(t, kPi - t) <= 1e-12);
  }
  SUBCASE("figure formula magnitude at r=1, phi=pi/4") {
    const double tstar = optimal_angle(covariance(1.0, kPi / 4));
    CHECK(std::abs(std::tan(tstar)) ==
          doctest::Approx(std::tanh(2.0)).epsilon(1e-12));
  }
  SUBCASE("correlation vanishes and the pure-state floor is reached") {
    for (const auto& [r, phi] : {std::pair{0.7, 0.9}, {2.0, kPi / 3}}) {
      const auto s = covariance(r, phi);
      const double tstar = optimal_angle(s);
      CHECK(std::abs(sigma_zf(s, tstar)) <= 1e-12 * s.s_uu);
      CHECK(sigma_xx_analytic(s, tstar) ==
            doctest::Approx(1.0 / (4.0 * s.s_uu)).epsilon(1e-12));
    }
  }
}

TEST_CASE("pure-state equality holds at every angle") {
  for (const auto& [r, phi] : {std::pair{0.0, 0.0}, {1.0, kPi / 6}, {2.0, 2.2}}) {
    const auto s = covariance(r, phi);
    for (int j = 0; j < 64; ++j) {
      const double t = kPi * (j + 0.21) / 64.0;
      const double lhs =
          sigma_zz(s, t) * s.s_uu - sigma_zf(s, t) * sigma_zf(s, t);
      const double cs = std::cos(t);
      CHECK(std::abs(lhs - 0.25 * cs * cs) <=
            1e-12 * std::max(1.0, sigma_zz(s, t) * s.s_uu));
      // error never beats the bound; equality exactly when uncorrelated
      const double sigma = sigma_xx_analytic(s, t);
      const double bound = 1.0 / (4.0 * s.s_uu);
      CHECK(sigma >= bound * (1.0 - 1e-12));
      const double szf = sigma_zf(s, t);
      CHECK(sigma - bound ==
            doctest::Approx(szf * szf / (s.s_uu * cs * cs)).epsilon(1e-10));
    }
  }
}

TEST_CASE("monte carlo attains the bound at the optimal angle") {
  for (const auto& [r, phi] : {std::pair{0.0, 0.0}, {1.0, kPi / 6}, {2.0, kPi / 3}}) {
    const auto s = covariance(r, phi);
    const double tstar = optimal_angle(s);
    const auto res = mc_estimate(s, tstar, 0.7, 200000, 42);
    CHECK(res.qcrb == doctest::Approx(1.0 / (4.0 * s.s_uu)).epsilon(1e-14));
    CHECK(std::abs(res.mse - res.qcrb) <= 3.0 * res.stderr_mse);
    CHECK(res.stderr_mse > 0.0);
  }
}

TEST_CASE("vacuum at the conjugate quadrature: mse near one half") {
  const auto res = mc_estimate(covariance(0.0, 0.0), 0.0, 0.0, 1000000, 7);
  CHECK(res.qcrb == 0.5);
  CHECK(std::abs(res.mse - 0.5) <= 3.0 * res.stderr_mse);
}

TEST_CASE("suboptimal readout pays exactly the analytic excess") {
  const auto s = covariance(1.0, kPi / 6);
  const auto res = mc_estimate(s, 0.0, -1.3, 400000, 99);
  const double excess =
      sigma_zf(s, 0.0) * sigma_zf(s, 0.0) / s.s_uu;  // chi = cos(0) = 1
  const double expected = res.qcrb + excess;
  CHECK(expected == doctest::Approx(sigma_xx_analytic(s, 0.0)).epsilon(1e-12));
  CHECK(std::abs(res.mse - expected) <= 3.0 * res.stderr_mse);
}

TEST_CASE("estimator is unbiased over independent seeds") {
  const auto s = covariance(0.8, 1.0);
  const double t = 0.4;
  const double analytic = sigma_xx_analytic(s, t);
  double mean = 0.0;
  const int reps = 50;
  const uint64_t n = 20000;
  for (int k = 0; k < reps; ++k)
    mean += mc_estimate(s, t, 2.0, n, 1000 + k).mse;
  mean /= reps;
  // mse variance ~ 2 sigma^2 / n per repetition
  const double combined_se =
      analytic * std::sqrt(2.0 / static_cast<double>(n)) / std::sqrt(reps);
  CHECK(std::abs(mean - analytic) <= 4.0 * combined_se);
}

TEST_CASE("sampling is reproducible and split-invariant") {
  const auto s = covariance(1.0, 0.3);
  const double t = 0.2, x = 5.0;
  const auto a = mc_estimate(s, t, x, 5000, 123);
  const auto b = mc_estimate(s, t, x, 5000, 123);
  CHECK(a.mse == b.mse);
  CHECK(a.stderr_mse == b.stderr_mse);

  // counter-based streams: manual two-worker merge equals the serial run
  const double noise = std::sqrt(sigma_zz(s, t));
  const double chi = std::cos(t);
  double sum = 0.0;
  for (uint64_t i = 0; i < 2500; ++i) {  // worker 0
    const double z = chi * x + noise * qlim::rng::normal(123, i);
    sum += (z / chi - x) * (z / chi - x);
  }
  for (uint64_t i = 2500; i < 5000; ++i) {  // worker 1
    const double z = chi * x + noise * qlim::rng::normal(123, i);
    sum += (z / chi - x) * (z / chi - x);
  }
  CHECK(sum / 5000.0 == doctest::Approx(a.mse).epsilon(1e-15));

  const auto c = mc_estimate(s, t, x, 5000, 124);
  CHECK(a.mse != c.mse);
}

TEST_CASE("sampling rejects undersized runs and blind readouts") {
  const auto s = covariance(0.5, 0.1);
  CHECK_THROWS_AS(mc_estimate(s, 0.0, 0.0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(mc_estimate(s, kPi / 2, 0.0, 100, 1),
                  qlim::BlindQuadratureError);
  CHECK_THROWS_AS(sigma_xx_analytic(s, kPi / 2), qlim::BlindQuadratureError);
}

TEST_CASE("counter rng has sane uniform moments") {
  double sum = 0.0, sumsq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = qlim::rng::uniform01(2024, i);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(sumsq / n == doctest::Approx(1.0 / 3.0).epsilon(3e-3));
}
