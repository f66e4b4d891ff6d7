#include <doctest.h>

#include <gtube/errors.hpp>
#include <gtube/rate_fit.hpp>
#include <gtube/stationary_phase.hpp>

#include <cmath>
#include <random>

using namespace gtube;

TEST_CASE("reduced phase examples") {
  for (double tau : {0.5, 1.0, 2.0}) {
    CHECK(reduced_phase({0.0, 1.0 / tau, 1.0 / tau, 0.0}, tau) == 0.0);
    CHECK(std::abs(reduced_phase({1.0, 1.0 / tau, 1.0 / tau, 0.0}, tau)) < 1e-15);
    // affine in t
    const double a = reduced_phase({0.0, 0.7, 1.3, 0.2}, tau), b = reduced_phase({1.0, 0.7, 1.3, 0.2}, tau);
    CHECK(reduced_phase({2.5, 0.7, 1.3, 0.2}, tau) == doctest::Approx(a + 2.5 * (b - a)).epsilon(1e-14));
  }
}

TEST_CASE("critical data") {
  for (double tau : {0.25, 0.5, 1.0, 2.0}) {
    const auto r = phase_critical_data(tau);
    CHECK(r.gradient_norm < 1e-14);
    CHECK(r.hessian_deviation < 1e-8);
    CHECK(r.product_error < 1e-14);
    CHECK(r.determinant == doctest::Approx(tau * tau / 4.0).epsilon(1e-14));
    CHECK(r.signature == 0);
    CHECK(std::abs(r.gamma_lambda_tau - 8.0 * kPi * kPi) < 1e-12 * 8.0 * kPi * kPi);
    // independent cofactor expansion of the displayed Hessian
    const auto& H = r.displayed_hessian;
    CHECK((H - H.transpose()).norm() == 0.0);
    double det = 0.0;
    for (int j = 0; j < 4; ++j) {
      Eigen::Matrix3d M;
      for (int a = 1, ra = 0; a < 4; ++a, ++ra)
        for (int b = 0, cb = 0; b < 4; ++b)
          if (b != j) M(ra, cb++) = H(a, b);
      det += (j % 2 ? -1.0 : 1.0) * H(0, j) * M.determinant();
    }
    CHECK(det == doctest::Approx(tau * tau / 4.0).epsilon(1e-14));
  }
  const cplx g = leading_coefficient(100.0, 0.5);
  CHECK(std::abs(g) == doctest::Approx(8.0 * kPi * kPi / 50.0).epsilon(1e-13));
  CHECK(std::abs(std::abs(g) - 1.5791) < 1e-4);
}

TEST_CASE("L operator") {
  const double tau = 0.5;
  std::array<double, 4> p{0.3, 1.7, 2.2, -0.4};
  CHECK(apply_L_operator([](const std::array<double, 4>& x) { return x[1] * x[0]; }, p, tau) ==
        doctest::Approx(2.0 / tau).epsilon(1e-6));
  CHECK(apply_L_operator([](const std::array<double, 4>& x) { return x[2] * x[3]; }, p, tau) ==
        doctest::Approx(-4.0).epsilon(1e-6));
  CHECK(std::abs(apply_L_operator([](const std::array<double, 4>&) { return 3.0; }, p, tau)) < 1e-6);
  // a smooth test function against the analytic mixed derivatives
  auto f = [](const std::array<double, 4>& x) { return std::sin(x[0] * x[1]) + std::exp(0.3 * x[2] * x[3]); };
  const double t = p[0], s1 = p[1], s2 = p[2], w = p[3];
  const double f_s1t = std::cos(t * s1) - t * s1 * std::sin(t * s1);
  const double e = std::exp(0.3 * s2 * w);
  const double f_s2w = 0.3 * e + 0.09 * s2 * w * e;
  CHECK(apply_L_operator(f, p, tau) == doctest::Approx(2.0 / tau * f_s1t - 4.0 * f_s2w).epsilon(1e-6));
}

TEST_CASE("Gaussian integral") {
  std::array<cplx, 0> none{};
  CHECK(std::abs(gaussian_integral_check(1, 0.7, none) - 1.0) < 1e-15);
  CVec c0{0.0};
  CHECK(std::abs(gaussian_integral_check(2, 1.0, c0) - kPi) < 1e-8);
  CVec c1{cplx(1.0, 1.0)};
  CHECK(std::abs(gaussian_integral_check(2, 1.0, c1) - kPi) < 1e-8);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int m : {2, 3}) {
    for (int s = 0; s < 3; ++s) {
      CVec c;
      for (int j = 1; j < m; ++j) c.push_back({U(rng), U(rng)});
      const double tau = 0.5;
      const double ref = std::pow(tau * kPi, m - 1);
      CHECK(std::abs(gaussian_integral_check(m, tau, c) - ref) < 1e-6 * ref);
    }
  }
}

TEST_CASE("oscillatory oracle: Fresnel integral") {
  OscillatoryProblem p;
  p.dim = 1;
  p.phase = [](std::span<const double> x) { return x[0] * x[0]; };
  p.amplitude = [](std::span<const double>) { return cplx(1.0); };
  p.lo = {-6.0};
  p.hi = {6.0};
  const auto r = oscillatory_oracle(p, 100.0, 1e-10);
  const cplx exact = std::sqrt(kPi / 100.0) * std::exp(kI * kPi / 4.0);
  CHECK(std::abs(r.prediction - exact) < 1e-8 * std::abs(exact));
  // the truncated integral differs from the full one by boundary terms of size 1/(lambda L)
  CHECK(std::abs(r.integral - exact) < 2.0 / (100.0 * 6.0));
  CHECK(r.signature == 1);
}

TEST_CASE("oscillatory oracle: smooth amplitude converges like 1/lambda") {
  OscillatoryProblem p;
  p.dim = 2;
  p.phase = [](std::span<const double> x) { return x[0] * x[0] - 0.5 * x[1] * x[1] + 0.3 * x[0] * x[1]; };
  p.amplitude = [](std::span<const double> x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return r2 < 1.0 ? cplx(std::exp(-1.0 / (1.0 - r2) + 1.0) * (1.0 + 0.5 * x[0])) : cplx(0.0);
  };
  p.lo = {-1.0, -1.0};
  p.hi = {1.0, 1.0};
  RVec lam, dev;
  for (double l : {20.0, 40.0, 80.0, 160.0, 320.0}) {
    const auto r = oscillatory_oracle(p, l, 1e-9);
    lam.push_back(l);
    dev.push_back(r.relative_deviation);
  }
  CHECK(fit_rate(lam, dev).slope <= -0.8);
}

TEST_CASE("oscillatory oracle rejects unsupported phases") {
  OscillatoryProblem p;
  p.dim = 1;
  p.phase = [](std::span<const double> x) { return std::cos(3.0 * x[0]); };
  p.amplitude = [](std::span<const double>) { return cplx(1.0); };
  p.lo = {-2.0};
  p.hi = {2.0};
  CHECK_THROWS_AS(oscillatory_oracle(p, 50.0), UnsupportedPhaseError);
  p.phase = [](std::span<const double> x) { return x[0] * x[0] * x[0] * x[0]; };
  CHECK_THROWS_AS(oscillatory_oracle(p, 50.0), UnsupportedPhaseError);
}

TEST_CASE("reduced phase oracle") {
  const double tau = 0.5;
  RVec lam, dev, off;
  auto away = SeparableAmplitude::at_critical(tau);
  away.center[1] = 1.6 / tau;  // tau sigma_1 - 1 >= 0.35 on the support: no stationary point
  for (double l : {20.0, 40.0, 80.0, 160.0, 320.0}) {
    const auto r = reduced_phase_oracle(tau, l, SeparableAmplitude::at_critical(tau));
    lam.push_back(l);
    dev.push_back(r.relative_deviation);
    off.push_back(reduced_phase_oracle(tau, l, away).relative_deviation);
  }
  const auto f = fit_rate(lam, dev);
  INFO("slope " << f.slope);
  CHECK(f.slope <= -0.8);
  const auto g = fit_rate(lam, off);
  INFO("off slope " << g.slope << " floor " << g.floor_limited);
  CHECK((g.floor_limited || g.slope <= -3.0));
}

TEST_CASE("gradient lower bound away from the critical point") {
  CHECK(reduced_phase_min_gradient(0.5, 0.05, 0.5) > 0.1);
  CHECK(reduced_phase_min_gradient(1.0, 0.05, 0.5) > 0.1);
}
