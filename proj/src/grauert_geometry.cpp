#include <gtube/grauert_geometry.hpp>

#include <gtube/run_config.hpp>
#include <gtube/errors.hpp>
#include <gtube/rate_fit.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace gtube {

namespace {

void check_dim(const FlatModel& model, std::size_t n, const char* what) {
  if (n != static_cast<std::size_t>(model.m))
    throw DimensionError(std::string(what) + ": expected " + std::to_string(model.m) +
                         " coordinates, got " + std::to_string(n));
}

Eigen::VectorXcd to_eigen(std::span<const cplx> v) {
  Eigen::VectorXcd e(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) e(j) = v[j];
  return e;
}

CVec from_eigen(const Eigen::VectorXcd& e) { return CVec(e.data(), e.data() + e.size()); }

// Real rotation mapping the unit vector a to e_{m-1} (0-based), acting only in
// span{a, e_{m-1}}.
Eigen::MatrixXd rotation_to_last_axis(const Eigen::VectorXd& a) {
  const int m = static_cast<int>(a.size());
  Eigen::MatrixXd R = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Unit(m, m - 1);
  const double c = a.dot(b);
  if (c >= 1.0 - 1e-15) return R;
  if (c <= -1.0 + 1e-15) {
    // antipodal: half turn in the (e_{m-2}, e_{m-1}) plane; reflection for m = 1
    if (m == 1) return -R;
    R(m - 2, m - 2) = -1.0;
    R(m - 1, m - 1) = -1.0;
    return R;
  }
  Eigen::VectorXd w = a - c * b;
  const double s = w.norm();
  w /= s;
  R += (c - 1.0) * (w * w.transpose() + b * b.transpose()) + s * (b * w.transpose() - w * b.transpose());
  return R;
}

}  // namespace

double defining_function(const FlatModel& model, std::span<const cplx> z, double tau) {
  const double r = grauert_sqrt_rho(model, z);
  return r * r - tau * tau;
}

cplx polarized_phi(const FlatModel& model, std::span<const cplx> z, std::span<const cplx> w,
                   double tau) {
  return -0.25 * complexified_distance_sq(model, z, w) - tau * tau;
}

cplx polarized_psi(const FlatModel& model, std::span<const cplx> z, std::span<const cplx> w,
                   double tau) {
  return polarized_phi(model, z, w, tau) / kI;
}

double diastasis(const FlatModel& model, std::span<const cplx> z, std::span<const cplx> w,
                 double tau) {
  const cplx d = polarized_phi(model, z, z, tau) + polarized_phi(model, w, w, tau) -
                 polarized_phi(model, z, w, tau) - polarized_phi(model, w, z, tau);
  return d.real();
}

TaylorData defining_function_taylor(const FlatModel& model, const BoundaryPoint& p, double tau) {
  check_dim(model, p.x.size(), "defining_function_taylor");
  const int m = model.m;
  TaylorData t;
  // phi = sum_j y_j^2 - tau^2 with y_j = (z_j - zbar_j) / 2i
  t.value = norm_sq(p.y) - tau * tau;
  t.grad.resize(m);
  for (int j = 0; j < m; ++j) t.grad(j) = -kI * p.y[j];
  t.levi = 0.5 * Eigen::MatrixXcd::Identity(m, m);
  t.hess = -0.5 * Eigen::MatrixXcd::Identity(m, m);
  return t;
}

CVec HeisenbergChart::to_chart(std::span<const cplx> z) const {
  check_dim(model, z.size(), "to_chart");
  Eigen::VectorXcd h(z.size());
  for (std::size_t j = 0; j < z.size(); ++j)
    h(j) = cplx(wrap_angle(z[j].real() - base.x[j]), z[j].imag() - base.y[j]);
  Eigen::VectorXcd zeta = linear_map * h;
  zeta(0) += (h.transpose() * quadratic * h)(0, 0);
  return from_eigen(zeta);
}

namespace {

// Newton inversion of zeta = A h + e_0 (h^T Q h) for the displacement h.
Eigen::VectorXcd invert_chart(const HeisenbergChart& c, const Eigen::VectorXcd& zt) {
  Eigen::VectorXcd h = c.linear_map.partialPivLu().solve(zt);
  for (int it = 0; it < 60; ++it) {
    Eigen::VectorXcd F = c.linear_map * h - zt;
    F(0) += (h.transpose() * c.quadratic * h)(0, 0);
    Eigen::MatrixXcd J = c.linear_map;
    J.row(0) += 2.0 * (c.quadratic * h).transpose();
    const Eigen::VectorXcd dh = J.partialPivLu().solve(F);
    h -= dh;
    if (dh.norm() <= 1e-16 * (1.0 + h.norm())) return h;
  }
  Eigen::VectorXcd F = c.linear_map * h - zt;
  F(0) += (h.transpose() * c.quadratic * h)(0, 0);
  if (F.norm() > 1e-13 * (1.0 + zt.norm()))
    throw ChartValidityError("from_chart: Newton inversion did not converge");
  return h;
}

}  // namespace

TubePoint HeisenbergChart::from_chart(std::span<const cplx> zeta, bool enforce) const {
  check_dim(model, zeta.size(), "from_chart");
  const Eigen::VectorXcd zt = to_eigen(zeta);
  if (enforce && zt.norm() > validity_radius)
    throw ChartValidityError("from_chart: |zeta| = " + format_real(zt.norm()) +
                             " exceeds validity radius " + format_real(validity_radius));
  const Eigen::VectorXcd h = invert_chart(*this, zt);
  TubePoint z = base.z();
  for (std::size_t j = 0; j < z.size(); ++j) z[j] += h(j);
  return z;
}

double HeisenbergChart::pushed_phi(std::span<const cplx> zeta) const {
  check_dim(model, zeta.size(), "pushed_phi");
  // eta = Im h directly: going through z = p + h loses the small displacement
  const Eigen::VectorXcd h = invert_chart(*this, to_eigen(zeta));
  double v = norm_sq(base.y) - tau * tau;
  for (int j = 0; j < h.size(); ++j) {
    const double eta = h(j).imag();
    v += 2.0 * base.y[j] * eta + eta * eta;
  }
  return v;
}

HeisenbergChart build_heisenberg_chart(const FlatModel& model, const BoundaryPoint& p, double tau) {
  if (!(tau > 0)) throw DomainError("build_heisenberg_chart: tau must be positive");
  check_dim(model, p.x.size(), "build_heisenberg_chart");
  check_dim(model, p.y.size(), "build_heisenberg_chart");
  if (std::abs(p.radius() - tau) > 1e-12)
    throw DomainError("build_heisenberg_chart: base point is not on the boundary |y| = tau");
  const int m = model.m;
  const TaylorData td = defining_function_taylor(model, p, tau);

  HeisenbergChart c;
  c.model = model;
  c.base = p;
  for (auto& x : c.base.x) x = wrap_angle(x);
  c.tau = tau;
  Eigen::VectorXd n(m);
  for (int j = 0; j < m; ++j) n(j) = p.y[j] / p.radius();
  c.rotation = rotation_to_last_axis(n);
  const Eigen::MatrixXcd R = c.rotation.cast<cplx>();

  // rotated data: h' = R h
  const Eigen::VectorXcd g = R * td.grad;
  const Eigen::MatrixXcd L = R * td.levi * R.transpose();
  if (std::abs(g(m - 1)) < 1e-300) throw DegenerateGeometryError("build_heisenberg_chart: vanishing gradient");

  c.linear_map.resize(m, m);
  // z0 = -i (2 g.h + h^T H h): -Im z0 reproduces the pluriharmonic part of phi
  c.linear_map.row(0) = -2.0 * kI * td.grad.transpose();
  c.quadratic = -kI * td.hess;
  if (m > 1) {
    // T^{1,0} frame: columns e_j - (g_j/g_m) e_m, j < m
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(m, m - 1);
    for (int j = 0; j < m - 1; ++j) {
      B(j, j) = 1.0;
      B(m - 1, j) = -g(j) / g(m - 1);
    }
    const Eigen::MatrixXcd N = (B.transpose() * L * B.conjugate()).transpose();
    Eigen::LLT<Eigen::MatrixXcd> llt(N);
    if (llt.info() != Eigen::Success)
      throw DegenerateGeometryError("build_heisenberg_chart: Levi form not positive definite");
    const Eigen::MatrixXcd C = llt.matrixL().adjoint();  // real positive diagonal
    // u = C P h' where P keeps the first m-1 rotated coordinates
    c.linear_map.bottomRows(m - 1) = C * R.topRows(m - 1);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c.linear_map);
  const auto& sv = svd.singularValues();
  c.condition_number = sv(0) / sv(sv.size() - 1);
  if (!(c.condition_number < kChartMaxCondition))
    throw DegenerateGeometryError("build_heisenberg_chart: linear part ill-conditioned");
  c.validity_radius = kChartValidityFactor * tau;
  return c;
}

PushforwardCoefficients pushforward_coefficients(const HeisenbergChart& chart, double h) {
  const int m = chart.dim();
  auto f = [&](int idx, double s) {
    CVec z(m, 0.0);
    z[idx / 2] = (idx % 2 == 0) ? cplx(s, 0) : cplx(0, s);
    return chart.pushed_phi(z);
  };
  auto d1 = [&](int idx) {
    auto D = [&](double hh) { return (f(idx, hh) - f(idx, -hh)) / (2 * hh); };
    return (4.0 * D(0.5 * h) - D(h)) / 3.0;
  };
  PushforwardCoefficients out;
  out.re_z0 = d1(0);
  out.im_z0 = d1(1);
  const double f0 = chart.pushed_phi(CVec(m, 0.0));
  for (int idx = 2; idx < 2 * m; ++idx) {
    out.linear_u = std::max(out.linear_u, std::abs(d1(idx)));
    auto D2 = [&](double hh) { return (f(idx, hh) - 2 * f0 + f(idx, -hh)) / (hh * hh); };
    const double d2 = (4.0 * D2(5e-4) - D2(1e-3)) / 3.0;
    out.levi_u_dev = std::max(out.levi_u_dev, std::abs(d2 - 2.0));
  }
  return out;
}

RVec default_remainder_radii(const HeisenbergChart& chart) {
  RVec r;
  for (int n = 0; n < 10; ++n) r.push_back(0.8 * chart.validity_radius * std::pow(2.0, -0.5 * n));
  return r;
}

bool RemainderFit::passes(double slack) const {
  for (const auto& s : series)
    if (!s.floor_limited && !(s.slope >= s.required - slack)) return false;
  return true;
}

RemainderFit chart_remainder_fit(const HeisenbergChart& chart, const RVec& radii) {
  const int m = chart.dim();
  for (double r : radii)
    if (!(r > 0) || r > chart.validity_radius)
      throw ChartValidityError("chart_remainder_fit: radius outside (0, validity radius]");
  // unit directions in zeta-space
  std::vector<cplx> phases;
  for (int k = 0; k < 8; ++k) phases.push_back(std::polar(1.0, kPi * k / 4.0));
  std::vector<CVec> dz0, du, dmix;
  for (auto ph : phases) {
    CVec d(m, 0.0);
    d[0] = ph;
    dz0.push_back(d);
  }
  for (int j = 1; j < m; ++j)
    for (auto ph : phases) {
      CVec d(m, 0.0);
      d[j] = ph;
      du.push_back(d);
    }
  if (m > 2)
    for (auto ph : phases) {
      CVec d(m, 0.0);
      for (int j = 1; j < m; ++j) d[j] = ph * std::polar(1.0 / std::sqrt(m - 1.0), 0.7 * j);
      du.push_back(d);
    }
  for (const auto& a : dz0)
    for (std::size_t b = 0; b < du.size(); b += 3) {
      CVec d(m, 0.0);
      d[0] = a[0] / std::sqrt(2.0);
      for (int j = 1; j < m; ++j) d[j] = du[b][j] / std::sqrt(2.0);
      dmix.push_back(d);
    }

  auto remainder = [&](const CVec& zeta) {
    double u2 = 0.0;
    for (int j = 1; j < m; ++j) u2 += std::norm(zeta[j]);
    return std::abs(chart.pushed_phi(zeta) - (-zeta[0].imag() + u2));
  };
  auto run = [&](const std::string& name, const std::vector<CVec>& dirs, double required) {
    RemainderSeries s;
    s.direction = name;
    s.required = required;
    s.radii = radii;
    for (double r : radii) {
      double sup = 0.0;
      for (const auto& d : dirs) {
        CVec z(m);
        for (int j = 0; j < m; ++j) z[j] = r * d[j];
        sup = std::max(sup, remainder(z));
      }
      s.sup_remainder.push_back(sup);
    }
    const LogLogFit f = loglog_fit(s.radii, s.sup_remainder, 1e-15);
    s.slope = f.slope;
    s.floor_limited = f.floor_limited;
    return s;
  };
  RemainderFit out;
  out.series.push_back(run("z0", dz0, 2.0));
  if (m > 1) {
    out.series.push_back(run("u", du, 3.0));
    out.series.push_back(run("mixed", dmix, 2.0));
  }
  return out;
}

FlowSample flow_in_chart(const HeisenbergChart& chart, double t, const BoundaryPoint* start,
                         int orientation) {
  if (std::abs(t) > 0.1 * chart.tau + 1e-15)
    throw ChartValidityError("flow_in_chart: |t| must be <= 0.1 tau");
  const BoundaryPoint q = start ? *start : chart.base;
  const BoundaryPoint qt = boundary_flow(chart.model, t, q, orientation);
  const CVec a = chart.to_chart(q.z());
  const CVec b = chart.to_chart(qt.z());
  double nb = 0.0;
  for (auto v : b) nb += std::norm(v);
  if (std::sqrt(nb) > chart.validity_radius)
    throw ChartValidityError("flow_in_chart: flowed point leaves the chart");
  FlowSample s;
  s.t = t;
  s.theta_defect = b[0].real() - a[0].real() + orientation * 2.0 * chart.tau * t;
  double du = 0.0;
  for (int j = 1; j < chart.dim(); ++j) du += std::norm(b[j] - a[j]);
  s.u_defect = std::sqrt(du);
  return s;
}

AmbientLift ambient_lift(const HeisenbergChart& chart, double theta, std::span<const cplx> u,
                         double lambda) {
  const int m = chart.dim();
  if (!(lambda >= 1.0)) throw DomainError("ambient_lift: lambda must be >= 1");
  if (u.size() != static_cast<std::size_t>(m - 1)) throw DimensionError("ambient_lift: u has wrong length");
  AmbientLift L;
  L.theta = theta / lambda;
  const double sl = std::sqrt(lambda);
  for (auto v : u) L.u.push_back(v / sl);
  CVec zeta(m);
  for (int j = 1; j < m; ++j) zeta[j] = L.u[j - 1];
  auto f = [&](double s) {
    zeta[0] = cplx(L.theta, s);
    return chart.pushed_phi(zeta);
  };
  auto inside = [&](double s) {
    zeta[0] = cplx(L.theta, s);
    double n = 0.0;
    for (auto v : zeta) n += std::norm(v);
    return std::sqrt(n) <= chart.validity_radius;
  };
  // phi ~ -s + |u|^2/lambda: bracket around that guess, widening only within the chart
  const double s0 = norm_sq(L.u);
  double d = 0.5 * std::max(s0, 1.0 / lambda) + 1e-12;
  double lo = s0 - d, hi = s0 + d;
  double flo = f(lo), fhi = f(hi);
  while (flo * fhi > 0) {
    d *= 2.0;
    lo = s0 - d;
    hi = s0 + d;
    if (!inside(lo) || !inside(hi))
      throw ChartValidityError("ambient_lift: root not bracketed inside the chart");
    flo = f(lo);
    fhi = f(hi);
  }
  for (int it = 0; it < 300 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  L.im_theta = 0.5 * (lo + hi);
  zeta[0] = cplx(L.theta, L.im_theta);
  L.z = chart.from_chart(zeta);
  L.residual = std::abs(chart.pushed_phi(zeta));
  return L;
}

DiastasisBound diastasis_lower_bound(const FlatModel& model, double tau, int samples,
                                     double max_sep, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::normal_distribution<double> G(0.0, 1.0);
  const int m = model.m;
  RVec ratios;
  while (static_cast<int>(ratios.size()) < samples) {
    RVec x(m), y(m), xw(m), yw(m);
    double ny = 0.0;
    for (int j = 0; j < m; ++j) {
      x[j] = kPi * U(rng);
      y[j] = G(rng);
      ny += y[j] * y[j];
    }
    ny = std::sqrt(ny);
    double nw = 0.0;
    for (int j = 0; j < m; ++j) {
      y[j] *= tau / ny;
      xw[j] = x[j] + max_sep * U(rng) / std::sqrt(double(m));
      yw[j] = y[j] + (m > 1 ? max_sep * U(rng) / std::sqrt(double(m)) : 0.0);
      nw += yw[j] * yw[j];
    }
    nw = std::sqrt(nw);
    for (auto& v : yw) v *= tau / nw;
    CVec z(m), w(m);
    double d2 = 0.0;
    for (int j = 0; j < m; ++j) {
      z[j] = {x[j], y[j]};
      w[j] = {xw[j], yw[j]};
      d2 += std::norm(z[j] - w[j]);
    }
    if (d2 < 1e-20) continue;
    ratios.push_back(diastasis(model, z, w, tau) / d2);
  }
  DiastasisBound b;
  b.samples = samples;
  std::sort(ratios.begin(), ratios.end());
  b.c_min = ratios.front();
  b.c_median = ratios[ratios.size() / 2];
  return b;
}

}  // namespace gtube
