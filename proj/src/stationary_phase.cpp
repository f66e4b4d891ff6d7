#include <gtube/stationary_phase.hpp>

#include <gtube/errors.hpp>
#include <gtube/quadrature.hpp>

#include <algorithm>
#include <cmath>

namespace gtube {

double reduced_phase(const ReducedPhasePoint& p, double tau) {
  return -p.t - 0.5 * p.sigma2 * p.w0_re + 0.5 * p.sigma1 * (p.w0_re + 2.0 * tau * p.t);
}

std::array<double, 4> reduced_phase_gradient(const ReducedPhasePoint& p, double tau) {
  return {-1.0 + tau * p.sigma1, 0.5 * (p.w0_re + 2.0 * tau * p.t), -0.5 * p.w0_re,
          0.5 * (p.sigma1 - p.sigma2)};
}

namespace {

Eigen::Matrix4d displayed_hessian(double tau) {
  Eigen::Matrix4d H;
  H << 0, tau, 0, 0,
       tau, 0, 0, 0.5,
       0, 0, 0, -0.5,
       0, 0.5, -0.5, 0;
  return H;
}

Eigen::Matrix4d displayed_inverse(double tau) {
  Eigen::Matrix4d Hi;
  Hi << 0, 1 / tau, 1 / tau, 0,
        1 / tau, 0, 0, 0,
        1 / tau, 0, 0, -2,
        0, 0, -2, 0;
  return Hi;
}

ReducedPhasePoint from_array(const std::array<double, 4>& x) { return {x[0], x[1], x[2], x[3]}; }

int signature_of(const Eigen::MatrixXd& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  int s = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > 1e-12 * scale) ++s;
    if (es.eigenvalues()(i) < -1e-12 * scale) --s;
  }
  return s;
}

// exp(1 - 1/(1 - x^2)) on |x| < 1
double unit_bump(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

// int_{-1}^{1} unit_bump(x) cos(k x) dx by the trapezoid rule (flat endpoints)
double bump_transform(double k) {
  constexpr int n = 600;
  const double dx = 1.0 / n;
  double s = 0.5 * unit_bump(0.0);
  for (int j = 1; j < n; ++j) s += unit_bump(j * dx) * std::cos(k * j * dx);
  return 2.0 * s * dx;
}

}  // namespace

PhaseReport phase_critical_data(double tau) {
  if (!(tau > 0)) throw DomainError("phase_critical_data: tau must be positive");
  PhaseReport r;
  r.tau = tau;
  r.critical_point = {0.0, 1.0 / tau, 1.0 / tau, 0.0};
  const ReducedPhasePoint c = from_array(r.critical_point);
  r.phase_at_critical = reduced_phase(c, tau);
  const auto g = reduced_phase_gradient(c, tau);
  r.gradient_norm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]);
  // The phase is quadratic, so the central second difference is exact up to rounding.
  const double h = 0.5;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      auto f = [&](double a, double b) {
        auto x = r.critical_point;
        x[i] += a;
        x[j] += b;
        return reduced_phase(from_array(x), tau);
      };
      r.hessian(i, j) = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h);
    }
  r.displayed_hessian = displayed_hessian(tau);
  r.inverse = displayed_inverse(tau);
  r.hessian_deviation = (r.hessian - r.displayed_hessian).cwiseAbs().maxCoeff();
  r.product_error = (r.hessian * r.inverse - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff();
  r.determinant = r.hessian.determinant();
  r.signature = signature_of(r.hessian);
  r.gamma_lambda_tau = std::real(leading_coefficient(1.0, tau)) * tau;
  return r;
}

cplx leading_coefficient(double lambda, double tau) {
  if (!(tau > 0) || !(lambda > 0)) throw DomainError("leading_coefficient: lambda, tau must be positive");
  const Eigen::Matrix4d H = displayed_hessian(tau);
  const ReducedPhasePoint c{0.0, 1.0 / tau, 1.0 / tau, 0.0};
  // det(sqrt(lambda) H / (2 pi i)) = lambda^2 det H / (2 pi i)^4, and (2 pi i)^4 = 16 pi^4
  const cplx d = lambda * lambda * H.determinant() / std::pow(cplx(0.0, kTwoPi), 4);
  return std::exp(kI * std::sqrt(lambda) * reduced_phase(c, tau)) / std::sqrt(d);
}

double apply_L_operator(const Field4& f, const std::array<double, 4>& p, double tau, double h) {
  if (!(tau > 0)) throw DomainError("apply_L_operator: tau must be positive");
  const Eigen::Matrix4d Hi = displayed_inverse(tau);
  auto second = [&](int i, int j, double hh) {
    auto at = [&](double a, double b) {
      auto x = p;
      x[i] += a;
      x[j] += b;
      const double v = f(x);
      if (!std::isfinite(v)) throw DomainError("apply_L_operator: stencil left the domain of f");
      return v;
    };
    if (i == j) return (at(hh, 0) - 2 * at(0, 0) + at(-hh, 0)) / (hh * hh);
    return (at(hh, hh) - at(hh, -hh) - at(-hh, hh) + at(-hh, -hh)) / (4 * hh * hh);
  };
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (Hi(i, j) == 0.0) continue;
      const double d = (4.0 * second(i, j, 0.5 * h) - second(i, j, h)) / 3.0;
      s += Hi(i, j) * d;
    }
  return s;
}

cplx gaussian_integral_check(int m, double tau, std::span<const cplx> c) {
  if (!(tau > 0)) throw DomainError("gaussian_integral_check: tau must be positive");
  if (m < 1 || c.size() != static_cast<std::size_t>(m - 1))
    throw DimensionError("gaussian_integral_check: c must have m-1 entries");
  const int d = m - 1;
  if (d == 0) return 1.0;
  if (d > 3) throw DimensionError("gaussian_integral_check: supported for m <= 4");
  const double st = std::sqrt(tau);
  // z_j = sqrt(tau)(xi + i eta): weight exp(-xi^2 - eta^2), Jacobian tau per factor
  auto rule_value = [&](int n) {
    const QuadRule q = gauss_hermite(n);
    const int dims = 2 * d;
    std::vector<int> idx(dims, 0);
    cplx total = 0.0;
    while (true) {
      double w = 1.0;
      cplx ex = 0.0;
      for (int j = 0; j < d; ++j) {
        const double xi = q.nodes[idx[2 * j]], eta = q.nodes[idx[2 * j + 1]];
        w *= q.weights[idx[2 * j]] * q.weights[idx[2 * j + 1]];
        ex += st * cplx(xi, eta) * c[j] / tau;
      }
      total += w * std::exp(ex);
      int k = 0;
      while (k < dims && ++idx[k] == n) idx[k++] = 0;
      if (k == dims) break;
    }
    return total * std::pow(tau, d);
  };
  int n = 12;
  cplx prev = rule_value(n);
  const int nmax = d == 1 ? 256 : (d == 2 ? 64 : 24);
  while (true) {
    const int n2 = std::min(2 * n, nmax);
    if (n2 == n) break;
    const cplx next = rule_value(n2);
    const double diff = std::abs(next - prev);
    prev = next;
    n = n2;
    if (diff <= 1e-13 * std::abs(next)) return next;
  }
  throw AccuracyError("gaussian_integral_check: Gauss-Hermite refinement did not converge", 0.0);
}

OracleResult oscillatory_oracle(const OscillatoryProblem& prob, double lambda, double rel_tol) {
  const int d = prob.dim;
  if (d < 1 || d > 2 || prob.lo.size() != static_cast<std::size_t>(d) || prob.hi.size() != prob.lo.size())
    throw DimensionError("oscillatory_oracle: dimension must be 1 or 2 with matching bounds");
  if (!(lambda >= 20)) throw DomainError("oscillatory_oracle: lambda must be >= 20");
  auto phi = [&](const RVec& x) { return prob.phase(x); };
  RVec scale(d);
  for (int i = 0; i < d; ++i) scale[i] = prob.hi[i] - prob.lo[i];
  auto grad = [&](const RVec& x) {
    RVec g(d);
    for (int i = 0; i < d; ++i) {
      const double h = 1e-6 * scale[i];
      RVec a = x, b = x;
      a[i] += h;
      b[i] -= h;
      g[i] = (phi(a) - phi(b)) / (2 * h);
    }
    return g;
  };
  auto hess = [&](const RVec& x) {
    Eigen::MatrixXd H(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const double hi = 1e-4 * scale[i], hj = 1e-4 * scale[j];
        auto at = [&](double a, double b) {
          RVec y = x;
          y[i] += a;
          y[j] += b;
          return phi(y);
        };
        H(i, j) = (at(hi, hj) - at(hi, -hj) - at(-hi, hj) + at(-hi, -hj)) / (4 * hi * hj);
      }
    return H;
  };
  auto gnorm = [&](const RVec& x) {
    double s = 0;
    for (double v : grad(x)) s += v * v;
    return std::sqrt(s);
  };
  // gradient-norm scan; Newton from every grid local minimum
  const int G = 41;
  std::vector<RVec> pts;
  RVec gn;
  std::vector<int> idx(d, 0);
  while (true) {
    RVec x(d);
    for (int i = 0; i < d; ++i) x[i] = prob.lo[i] + scale[i] * idx[i] / (G - 1.0);
    pts.push_back(x);
    gn.push_back(gnorm(x));
    int k = 0;
    while (k < d && ++idx[k] == G) idx[k++] = 0;
    if (k == d) break;
  }
  auto flat = [&](const std::vector<int>& ii) {
    int f = 0;
    for (int i = d - 1; i >= 0; --i) f = f * G + ii[i];
    return f;
  };
  std::vector<RVec> crit;
  std::vector<int> ii(d, 0);
  for (std::size_t p = 0; p < pts.size(); ++p) {
    int rem = static_cast<int>(p);
    for (int i = 0; i < d; ++i) ii[i] = rem % G, rem /= G;
    bool is_min = true;
    for (int i = 0; i < d && is_min; ++i)
      for (int s : {-1, 1}) {
        auto jj = ii;
        jj[i] += s;
        if (jj[i] < 0 || jj[i] >= G) continue;
        if (gn[flat(jj)] < gn[p]) is_min = false;
      }
    if (!is_min) continue;
    RVec x = pts[p];
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
      const RVec g = grad(x);
      const Eigen::MatrixXd H = hess(x);
      Eigen::VectorXd gv = Eigen::Map<const Eigen::VectorXd>(g.data(), d);
      Eigen::VectorXd dx = H.fullPivLu().solve(gv);
      if (!dx.allFinite()) break;
      for (int i = 0; i < d; ++i) x[i] -= dx(i);
      if (dx.norm() < 1e-13 * (1 + Eigen::Map<Eigen::VectorXd>(x.data(), d).norm())) {
        ok = true;
        break;
      }
    }
    if (!ok || gnorm(x) > 1e-7) continue;
    bool inside = true;
    for (int i = 0; i < d; ++i)
      if (x[i] <= prob.lo[i] || x[i] >= prob.hi[i]) inside = false;
    if (!inside) continue;
    bool dup = false;
    for (const auto& c : crit) {
      double dd = 0;
      for (int i = 0; i < d; ++i) dd += std::pow((c[i] - x[i]) / scale[i], 2);
      if (std::sqrt(dd) < 1e-6) dup = true;
    }
    if (!dup) crit.push_back(x);
  }
  if (crit.size() != 1)
    throw UnsupportedPhaseError("oscillatory_oracle: found " + std::to_string(crit.size()) +
                                " interior critical points (need exactly one)");
  OracleResult r;
  r.critical_point = crit[0];
  const Eigen::MatrixXd H = hess(crit[0]);
  r.hessian_det = H.determinant();
  // degeneracy is judged against the Hessian scale over the whole box
  double href = 0.0;
  for (const auto& x : pts) href = std::max(href, hess(x).cwiseAbs().maxCoeff());
  if (std::abs(r.hessian_det) < 1e-4 * std::pow(href, d))
    throw UnsupportedPhaseError("oscillatory_oracle: degenerate critical point");
  r.signature = signature_of(H);
  const cplx aC = prob.amplitude(r.critical_point);
  const cplx unit = std::exp(kI * lambda * phi(r.critical_point)) * std::pow(kTwoPi / lambda, 0.5 * d) /
                    std::sqrt(std::abs(r.hessian_det)) * std::exp(kI * kPi * double(r.signature) / 4.0);
  r.prediction = aC * unit;
  auto f = [&](std::span<const double> x) { return prob.amplitude(x) * std::exp(kI * lambda * prob.phase(x)); };
  const auto q = integrate_box(f, prob.lo, prob.hi, 1e-3 * rel_tol * std::abs(unit), rel_tol);
  r.integral = q.value;
  r.error_estimate = q.error;
  r.relative_deviation = std::abs(r.integral - r.prediction) / std::abs(unit);
  return r;
}

SeparableAmplitude SeparableAmplitude::at_critical(double tau, double r) {
  SeparableAmplitude a;
  a.center = {0.0, 1.0 / tau, 1.0 / tau, 0.0};
  a.radius = {r, r / tau, r / tau, r};
  return a;
}

double SeparableAmplitude::operator()(const std::array<double, 4>& x) const {
  double v = 1.0;
  for (int i = 0; i < 4; ++i) v *= unit_bump((x[i] - center[i]) / radius[i]);
  return v;
}

OracleResult reduced_phase_oracle(double tau, double lambda, const SeparableAmplitude& amp,
                                  double rel_tol) {
  if (!(tau > 0) || !(lambda > 0)) throw DomainError("reduced_phase_oracle: tau, lambda must be positive");
  // Psi = t (tau s1 - 1) + (w/2)(s1 - s2)
  // int a(t) e^{i k t} dt = e^{i k t_c} r_t F(k r_t), F the bump transform
  auto ft = [&](int i, double k) {
    return std::exp(kI * k * amp.center[i]) * amp.radius[i] * bump_transform(k * amp.radius[i]);
  };
  auto integrand = [&](std::span<const double> s) -> cplx {
    const double b = unit_bump((s[0] - amp.center[1]) / amp.radius[1]);
    const double c = unit_bump((s[1] - amp.center[2]) / amp.radius[2]);
    if (b == 0.0 || c == 0.0) return 0.0;
    return b * c * ft(0, lambda * (tau * s[0] - 1.0)) * ft(3, 0.5 * lambda * (s[0] - s[1]));
  };
  const double lo1 = amp.center[1] - amp.radius[1], hi1 = amp.center[1] + amp.radius[1];
  const double lo2 = amp.center[2] - amp.radius[2], hi2 = amp.center[2] + amp.radius[2];
  OracleResult r;
  r.critical_point = {0.0, 1.0 / tau, 1.0 / tau, 0.0};
  const PhaseReport pr = phase_critical_data(tau);
  r.hessian_det = pr.determinant;
  r.signature = pr.signature;
  const cplx unit = std::pow(kTwoPi / lambda, 2.0) / std::sqrt(std::abs(pr.determinant)) *
                    std::exp(kI * kPi * double(pr.signature) / 4.0);
  r.prediction = amp({r.critical_point[0], r.critical_point[1], r.critical_point[2], r.critical_point[3]}) * unit;
  // split the sigma_1 range at 1/tau where the t-transform peaks
  cplx total = 0.0;
  double err = 0.0;
  const double c1 = std::clamp(1.0 / tau, lo1, hi1);
  for (auto [a, b] : {std::pair{lo1, c1}, std::pair{c1, hi1}}) {
    if (b <= a) continue;
    auto outer = [&](double s1) {
      auto inner = [&](double s2) {
        const double p[2] = {s1, s2};
        return integrand(p);
      };
      const double m = std::clamp(s1, lo2, hi2);
      cplx v = 0.0;
      if (m > lo2) v += integrate<cplx>(inner, lo2, m, 1e-4 * rel_tol * std::abs(unit), 0.1 * rel_tol, 20000).value;
      if (hi2 > m) v += integrate<cplx>(inner, m, hi2, 1e-4 * rel_tol * std::abs(unit), 0.1 * rel_tol, 20000).value;
      return v;
    };
    const auto q = integrate<cplx>(outer, a, b, 1e-3 * rel_tol * std::abs(unit), rel_tol, 20000);
    total += q.value;
    err += q.error;
  }
  r.integral = total;
  r.error_estimate = err;
  r.relative_deviation = std::abs(r.integral - r.prediction) / std::abs(unit);
  return r;
}

double reduced_phase_min_gradient(double tau, double step, double exclusion) {
  const ReducedPhasePoint c{0.0, 1.0 / tau, 1.0 / tau, 0.0};
  auto axis = [&](double lo, double hi) {
    RVec v;
    const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
    for (int i = 0; i <= n; ++i) v.push_back(lo + i * step);
    return v;
  };
  const RVec T = axis(-1, 1), S = axis(0.5 / tau, 2.0 / tau), Wv = axis(-1, 1);
  double best = 1e300;
  for (double t : T)
    for (double s1 : S)
      for (double s2 : S)
        for (double w : Wv) {
          const double dist = std::max({std::abs(t - c.t), std::abs(s1 - c.sigma1), std::abs(s2 - c.sigma2),
                                        std::abs(w - c.w0_re)});
          if (dist < exclusion) continue;
          const auto g = reduced_phase_gradient({t, s1, s2, w}, tau);
          best = std::min(best, std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]));
        }
  return best;
}

}  // namespace gtube
