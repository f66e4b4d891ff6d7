#include <doctest.h>

#include <gtube/errors.hpp>
#include <gtube/spectral_kernels.hpp>

#include <cmath>
#include <random>

using namespace gtube;

namespace {

KernelSumConfig config(KernelKind kind, const FlatModel& model, double lambda, double tau, double tol) {
  auto chi = make_chi(3.0);
  return {lambda, tau, choose_window(kind, model, *chi, lambda, tau, tol), tol};
}

CVec boundary(std::span<const double> x, std::span<const double> y) {
  CVec z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = {x[j], y[j]};
  return z;
}

}  // namespace

TEST_CASE("real spectral projection") {
  const auto C = FlatModel::circle();
  double x[1] = {0.3}, y[1] = {-1.1};
  CHECK(real_projection_E(C, 0.5, x, y) == doctest::Approx(1.0 / kTwoPi));
  CHECK(real_projection_E(C, 2.5, x, x) == doctest::Approx(5.0 / kTwoPi));
  const auto T = FlatModel::torus(2);
  double a[2] = {0.2, 0.7};
  double prev = 0.0;
  for (double L = 0.0; L < 12.0; L += 0.7) {
    const double e = real_projection_E(T, L, a, a);
    CHECK(e >= prev);
    prev = e;
  }
}

TEST_CASE("tempered projection") {
  const auto T = FlatModel::torus(2);
  CVec z{cplx(0.1, 0.3), cplx(-0.4, 0.4)}, w{cplx(0.5, 0.0), cplx(0.2, -0.5)};
  CHECK(std::abs(tempered_projection(T, 0.9, 0.5, z, w) - std::pow(kTwoPi, -2.0)) < 1e-15);
  const auto pzw = tempered_projection(T, 8.0, 0.5, z, w);
  const auto pwz = tempered_projection(T, 8.0, 0.5, w, z);
  CHECK(std::abs(pzw - std::conj(pwz)) < 1e-13);
  const auto pzz = tempered_projection(T, 8.0, 0.5, z, z);
  CHECK(pzz.real() > 0.0);
  CHECK(std::abs(pzz.imag()) < 1e-13);
}

TEST_CASE("damped mode weight is bounded on the boundary") {
  // e^{-2 tau |k|} sup_{|y| = tau} |phi_k|^2 = (2 pi)^{-m}
  for (int m : {1, 2}) {
    for (const auto& k : enumerate_modes(FlatModel::torus(m), 30.0)) {
      if (k.norm_sq() == 0) continue;
      const double tau = 0.5, r = k.eigenvalue();
      CVec z(m);
      for (int j = 0; j < m; ++j) z[j] = {0.0, -tau * k.k[j] / r};
      const double v = std::exp(-2.0 * tau * r) * std::norm(complexified_eigenfunction(k, z));
      CHECK(v == doctest::Approx(std::pow(kTwoPi, -m)).epsilon(1e-12));
    }
  }
}

TEST_CASE("Toeplitz eigenvalues") {
  const auto T = FlatModel::torus(2);
  CHECK(toeplitz_eigenvalue(T, LatticeMode{{0, 0}}, 1.0) == 0.0);
  const double oracle = 5.0 * std::cyl_bessel_i(1.0, 10.0) / std::cyl_bessel_i(0.0, 10.0);
  CHECK(std::abs(toeplitz_eigenvalue(T, LatticeMode{{3, 4}}, 1.0) - oracle) < 1e-8);
  CHECK(std::abs(oracle - 4.743) < 1e-3);
  // independent series oracle for the Bessel ratio
  double i0 = 0.0, i1 = 0.0, term = 1.0;
  for (int n = 0; n < 80; ++n) {
    if (n > 0) term *= 25.0 / (double(n) * n);
    i0 += term;
    i1 += term * 5.0 / (n + 1);
  }
  CHECK(std::abs(toeplitz_eigenvalue(T, 5.0, 1.0) - 5.0 * i1 / i0) < 1e-8);

  // circle: two boundary components, mu_n = |n| tanh(2 tau |n|)
  for (int n : {1, 2, 5, 20})
    CHECK(toeplitz_eigenvalue(FlatModel::circle(), LatticeMode{{n}}, 0.5) ==
          doctest::Approx(n * std::tanh(double(n))).epsilon(1e-13));

  for (double tau : {0.5, 1.0}) {
    for (double r = 20.0; r <= 200.0; r += 15.0) {
      const double mu = toeplitz_eigenvalue(T, r, tau);
      CHECK(mu > 0.0);
      CHECK(r - mu >= 0.0);
      CHECK(r - mu <= toeplitz_shift_bound(2, tau));
    }
    CHECK(toeplitz_eigenvalue(T, 200.0, tau) / 200.0 > 0.99);
  }
  CHECK_THROWS_AS(toeplitz_eigenvalue(T, 1.0, 0.0), DomainError);
}

TEST_CASE("smoothed projection on the circle against a full lattice sum") {
  const auto C = FlatModel::circle();
  auto chi = make_chi(3.0);
  const double tau = 0.5, lambda = 30.0;
  auto cfg = config(KernelKind::smoothed, C, lambda, tau, 1e-12);
  CVec z{cplx(0.3, tau)}, w{cplx(-0.2, tau)};
  auto v = smoothed_projection(C, chi, z, z, cfg);
  cplx full = 0.0, off = 0.0;
  for (int n = -400; n <= 400; ++n) {
    const double c = (*chi)(lambda - std::abs(n)) * std::exp(-2.0 * tau * std::abs(n)) / kTwoPi;
    full += c * std::exp(-2.0 * n * tau);
    off += c * std::exp(kI * double(n) * (z[0] - std::conj(w[0])));
  }
  CHECK(std::abs(v.value - full) < 1e-11);
  CHECK(std::abs(smoothed_projection(C, chi, z, w, cfg).value - off) < 1e-11);
  // dominated by the modes n ~ -lambda, each of weight 1/(2 pi)
  cplx neg = 0.0;
  for (int n = -400; n < 0; ++n) neg += (*chi)(lambda - std::abs(n)) / kTwoPi;
  CHECK(std::abs(v.value - neg) / std::abs(neg) < 1e-6);
}

TEST_CASE("kernels are Hermitian with positive diagonals") {
  const auto T = FlatModel::torus(2);
  auto chi = make_chi(3.0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (auto kind : {KernelKind::smoothed, KernelKind::toeplitz}) {
    const double tau = 0.5;
    SpectralSum S(kind, T, chi, config(kind, T, 40.0, tau, 1e-8));
    for (int s = 0; s < 20; ++s) {
      const double a = kPi * U(rng), b = kPi * U(rng);
      double xa[2] = {U(rng), U(rng)}, ya[2] = {tau * std::cos(a), tau * std::sin(a)};
      double xb[2] = {U(rng), U(rng)}, yb[2] = {tau * std::cos(b), tau * std::sin(b)};
      auto z = boundary(xa, ya), w = boundary(xb, yb);
      CHECK(std::abs(S.eval(z, w) - std::conj(S.eval(w, z))) < 1e-12 * std::abs(S.eval(z, z)));
      const auto d = S.eval(z, z);
      CHECK(d.real() > 0.0);
      CHECK(std::abs(d.imag()) < 1e-12 * d.real());
    }
  }
}

TEST_CASE("modulus is invariant under the boundary flow") {
  const auto T = FlatModel::torus(2);
  auto chi = make_chi(3.0);
  const double tau = 0.5;
  SpectralSum S(KernelKind::smoothed, T, chi, config(KernelKind::smoothed, T, 30.0, tau, 1e-8));
  BoundaryPoint p{{0.1, 0.2}, {0.3, 0.4}}, q{{-0.2, 0.5}, {0.3, 0.4}};
  const double base = std::abs(S.eval(p.z(), q.z()));
  for (double t : {0.1, 0.7, 2.0}) {
    auto pt = boundary_flow(T, t, p, kReebOrientation), qt = boundary_flow(T, t, q, kReebOrientation);
    CHECK(std::abs(std::abs(S.eval(pt.z(), qt.z())) - base) < 1e-12 * base);
  }
}

TEST_CASE("tail certification") {
  const auto T = FlatModel::torus(2);
  auto chi = make_chi(3.0);
  const double tau = 0.5, lambda = 100.0;
  for (auto kind : {KernelKind::smoothed, KernelKind::toeplitz}) {
    const double W = choose_window(kind, T, *chi, lambda, tau, 1e-4);
    CHECK(tail_bound(kind, T, *chi, lambda, tau, W) <= 1e-4);
    CHECK(tail_bound(kind, T, *chi, lambda, tau, W - 1) > 1e-4);
    SpectralSum a(kind, T, chi, {lambda, tau, W, 1e-4});
    SpectralSum b(kind, T, chi, {lambda, tau, 2 * W, 1e-4});
    CHECK(b.mode_count() > a.mode_count());
    BoundaryPoint p{{0.0, 0.0}, {0.0, tau}}, q{{0.05, 0.0}, {0.0, tau}};
    CHECK(std::abs(a.eval(p.z(), q.z()) - b.eval(p.z(), q.z())) <= a.tail_bound());
  }
  try {
    choose_window(KernelKind::toeplitz, T, *chi, 400.0, tau, 1e-30);
    FAIL("expected a configuration error");
  } catch (const ConfigurationError& e) {
    CHECK(e.smallest_certifiable > 1e-30);
  }
  CHECK_THROWS_AS(SpectralSum(KernelKind::smoothed, T, chi, {lambda, tau, 5.0, 1e-8}), ConfigurationError);
}

TEST_CASE("Toeplitz kernel on the circle against direct summation") {
  const auto C = FlatModel::circle();
  auto chi = make_chi(3.0);
  const double tau = 0.5, lambda = 20.0;
  auto cfg = config(KernelKind::toeplitz, C, lambda, tau, 1e-12);
  CVec z{cplx(0.4, tau)}, w{cplx(0.1, tau)};
  const auto v = toeplitz_localization(C, chi, z, w, cfg);
  cplx direct = 0.0;
  for (int n = -300; n <= 300; ++n) {
    const double mu = std::abs(n) * std::tanh(2.0 * tau * std::abs(n));
    const double h = kTwoPi * tau * 2.0 * std::cosh(2.0 * tau * n);
    direct += (*chi)(lambda - mu) * std::exp(kI * double(n) * (z[0] - std::conj(w[0]))) / h;
  }
  CHECK(std::abs(v.value - direct) < 1e-12);
  CHECK(v.tail_bound <= 1e-12);
}

TEST_CASE("Toeplitz trace identity") {
  auto chi = make_chi(3.0);
  const double tau = 0.5, lambda = 5.0;
  // circle: boundary measure tau dx on each component y = +-tau
  {
    const auto C = FlatModel::circle();
    SpectralSum S(KernelKind::toeplitz, C, chi, config(KernelKind::toeplitz, C, lambda, tau, 1e-12));
    CVec up{cplx(0.0, tau)}, dn{cplx(0.0, -tau)};
    const double tr = kTwoPi * tau * (S.eval(up, up) + S.eval(dn, dn)).real();
    double sum = 0.0;
    for (int n = -400; n <= 400; ++n) sum += (*chi)(lambda - toeplitz_eigenvalue(C, double(std::abs(n)), tau));
    CHECK(tr == doctest::Approx(sum).epsilon(1e-10));
  }
  // torus: measure tau^2 dx d(angle); the diagonal depends on the angle only
  {
    const auto T = FlatModel::torus(2);
    SpectralSum S(KernelKind::toeplitz, T, chi, config(KernelKind::toeplitz, T, lambda, tau, 1e-10));
    const int n = 256;
    double integral = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = kTwoPi * i / n;
      CVec z{cplx(0.0, tau * std::cos(a)), cplx(0.0, tau * std::sin(a))};
      integral += S.eval(z, z).real();
    }
    const double tr = tau * tau * kTwoPi * kTwoPi * integral * kTwoPi / n;
    double sum = 0.0;
    for (const auto& k : enumerate_modes(T, 200.0)) sum += (*chi)(lambda - toeplitz_eigenvalue(T, k, tau));
    CHECK(tr == doctest::Approx(sum).epsilon(1e-9));
  }
}
