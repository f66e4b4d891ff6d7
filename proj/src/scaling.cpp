#include <gtube/scaling.hpp>

#include <gtube/run_config.hpp>
#include <gtube/errors.hpp>
#include <gtube/heisenberg.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace gtube {

ComparisonGrid make_comparison_grid(int m, double rho, int per_axis) {
  if (m < 1) throw DimensionError("make_comparison_grid: m must be >= 1");
  if (!(rho > 0) || per_axis < 2) throw DomainError("make_comparison_grid: need rho > 0 and >= 2 points per axis");
  RVec axis(per_axis);
  for (int i = 0; i < per_axis; ++i) axis[i] = -rho + 2.0 * rho * i / (per_axis - 1);
  for (auto& a : axis)
    if (std::abs(a) < 1e-15) a = 0.0;
  // u candidates: 0, then x e_j and i x e_j for nonzero axis values x
  std::vector<CVec> us{CVec(m - 1, 0.0)};
  for (int j = 0; j < m - 1; ++j)
    for (cplx dir : {cplx(1, 0), cplx(0, 1)})
      for (double x : axis) {
        if (x == 0.0) continue;
        CVec u(m - 1, 0.0);
        u[j] = dir * x;
        us.push_back(u);
      }
  ComparisonGrid g;
  g.m = m;
  g.rho = rho;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> point_id;  // (theta idx, u idx)
  auto pid = [&](std::size_t ti, std::size_t ui) {
    auto key = std::make_pair(ti, ui);
    auto it = point_id.find(key);
    if (it != point_id.end()) return it->second;
    g.points.emplace_back(axis[ti], us[ui]);
    return point_id[key] = g.points.size() - 1;
  };
  const double slack = 1e-12;
  for (std::size_t a = 0; a < axis.size(); ++a)
    for (std::size_t b = 0; b < us.size(); ++b)
      for (std::size_t c = 0; c < axis.size(); ++c)
        for (std::size_t d = 0; d < us.size(); ++d) {
          const double l1 = std::abs(axis[a]) + std::sqrt(norm_sq(us[b])) + std::abs(axis[c]) +
                            std::sqrt(norm_sq(us[d]));
          if (l1 > rho + slack) continue;
          GridTuple t{axis[a], us[b], axis[c], us[d]};
          if (l1 == 0.0) g.diagonal_tuple = g.tuples.size();
          g.tuples.push_back(t);
          g.pair_index.emplace_back(pid(a, b), pid(c, d));
        }
  return g;
}

BoundaryPoint rescaled_point(const HeisenbergChart& chart, double theta, std::span<const cplx> u,
                             double lambda) {
  const AmbientLift L = ambient_lift(chart, theta, u, lambda);
  if (L.residual > 1e-12)
    throw ChartValidityError("rescaled_point: boundary residual " + format_real(L.residual) + " > 1e-12");
  return BoundaryPoint::from_tube(L.z);
}

std::pair<BoundaryPoint, BoundaryPoint> rescaled_pair(const HeisenbergChart& chart, const GridTuple& t,
                                                      double lambda) {
  return {rescaled_point(chart, t.theta, t.u, lambda), rescaled_point(chart, t.phi, t.v, lambda)};
}

namespace {

// Lower bound for the diagonal at the chart base (all diagonal terms are >= 0).
double diagonal_lower_bound(KernelKind kind, const HeisenbergChart& chart,
                            std::shared_ptr<const SmoothingFunction> chi, double lambda) {
  KernelSumConfig cfg{lambda, chart.tau, std::min(20.0, 0.5 * chi->s_max()),
                      std::numeric_limits<double>::infinity()};
  SpectralSum s(kind, chart.model, chi, cfg);
  const TubePoint z = chart.base.z();
  return s.eval(z, z).real();
}

cplx normalized_model(int m, double tau, const std::pair<double, CVec>& a, const std::pair<double, CVec>& b) {
  const cplx fab = theorem_leading_factor(m, tau, a.first, b.first, a.second, b.second);
  const cplx faa = theorem_leading_factor(m, tau, a.first, a.first, a.second, a.second);
  const cplx fbb = theorem_leading_factor(m, tau, b.first, b.first, b.second, b.second);
  return fab / std::sqrt(faa.real() * fbb.real());
}

}  // namespace

NormalizedError normalized_error(KernelKind kind, const HeisenbergChart& chart, const ComparisonGrid& grid,
                                 double lambda, const StudyOptions& opt) {
  if (grid.m != chart.dim()) throw DimensionError("normalized_error: grid and chart dimensions differ");
  auto chi = make_chi(opt.eps);
  NormalizedError out;
  out.lambda = lambda;
  std::vector<TubePoint> pts;
  for (const auto& p : grid.points) pts.push_back(rescaled_point(chart, p.first, p.second, lambda).z());

  const double d0 = diagonal_lower_bound(kind, chart, chi, lambda);
  if (!(d0 > 0)) throw DegenerateNormalizationError("normalized_error: vanishing diagonal at the base point");
  const double tol = opt.rel_tail * d0;
  out.window = choose_window(kind, chart.model, *chi, lambda, chart.tau, tol);
  SpectralSum sum(kind, chart.model, chi, {lambda, chart.tau, out.window, tol});
  out.tail = sum.tail_bound();
  out.modes = sum.mode_count();

  std::vector<std::pair<std::size_t, std::size_t>> pairs = grid.pair_index;
  const std::size_t nt = pairs.size();
  for (std::size_t i = 0; i < pts.size(); ++i) pairs.emplace_back(i, i);
  const std::vector<cplx> vals = sum.eval_batch(pts, pairs);
  RVec diag(pts.size());
  out.diagonal_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    diag[i] = vals[nt + i].real();
    if (!(diag[i] > 100.0 * out.tail) || !(diag[i] > 0))
      throw DegenerateNormalizationError("normalized_error: kernel diagonal below the numerical floor");
    out.diagonal_min = std::min(out.diagonal_min, diag[i]);
  }
  out.tuple_errors.resize(nt);
  out.normalized.resize(nt);
  for (std::size_t q = 0; q < nt; ++q) {
    const auto [i, j] = grid.pair_index[q];
    out.normalized[q] = vals[q] / std::sqrt(diag[i] * diag[j]);
    const cplx f = normalized_model(grid.m, chart.tau, grid.points[i], grid.points[j]);
    out.tuple_errors[q] = std::abs(out.normalized[q] - f);
    if (out.tuple_errors[q] > out.sup_error) {
      out.sup_error = out.tuple_errors[q];
      out.worst_tuple = q;
    }
  }
  return out;
}

bool nonincreasing_with_jitter(const RVec& e, double jitter) {
  for (std::size_t i = 1; i < e.size(); ++i)
    if (e[i] > (1.0 + jitter) * e[i - 1]) return false;
  return true;
}

ScalingReport scaling_study(KernelKind kind, const HeisenbergChart& chart, const ComparisonGrid& grid,
                            const RVec& lambdas, const StudyOptions& opt) {
  ScalingReport r;
  r.kind = kind;
  r.m = chart.dim();
  r.tau = chart.tau;
  r.eps = opt.eps;
  r.rho = grid.rho;
  r.grid_size = grid.tuples.size();
  r.lambdas = lambdas;
  for (double lam : lambdas) {
    r.details.push_back(normalized_error(kind, chart, grid, lam, opt));
    r.errors.push_back(r.details.back().sup_error);
  }
  r.monotone = nonincreasing_with_jitter(r.errors);
  if (lambdas.size() >= 5)
    r.fit = fit_rate(lambdas, r.errors);
  else
    r.fit = loglog_fit(lambdas, r.errors);
  return r;
}

CrossConsistency cross_consistency(const ScalingReport& a, const ScalingReport& b) {
  if (a.lambdas != b.lambdas || a.details.size() != b.details.size())
    throw DomainError("cross_consistency: reports use different lambda grids");
  CrossConsistency c;
  c.lambdas = a.lambdas;
  for (std::size_t i = 0; i < a.details.size(); ++i) {
    const auto& x = a.details[i].normalized;
    const auto& y = b.details[i].normalized;
    if (x.size() != y.size()) throw DomainError("cross_consistency: reports use different grids");
    double s = 0.0;
    for (std::size_t q = 0; q < x.size(); ++q) s = std::max(s, std::abs(x[q] - y[q]));
    c.differences.push_back(s);
  }
  c.fit = c.lambdas.size() >= 5 ? fit_rate(c.lambdas, c.differences) : loglog_fit(c.lambdas, c.differences);
  return c;
}

Localization localization_diagnostic(KernelKind kind, const HeisenbergChart& chart, double lambda,
                                     double delta, double C, const StudyOptions& opt) {
  const int m = chart.dim();
  if (m < 2) throw DimensionError("localization_diagnostic: needs a transverse direction (m >= 2)");
  if (!(delta > 0 && delta < 0.5)) throw DomainError("localization_diagnostic: delta must be in (0, 1/2)");
  auto chi = make_chi(opt.eps);
  Localization L;
  L.lambda = lambda;
  L.separation = 2.0 * C * std::pow(lambda, delta - 0.5);
  BoundaryPoint b = chart.base;
  for (int j = 0; j < m; ++j) b.x[j] += L.separation * chart.rotation(0, j);
  const TubePoint za = chart.base.z(), zb = b.z();

  const double d0 = diagonal_lower_bound(kind, chart, chi, lambda);
  const double tol = opt.rel_tail * d0;
  const double W = choose_window(kind, chart.model, *chi, lambda, chart.tau, tol);
  SpectralSum sum(kind, chart.model, chi, {lambda, chart.tau, W, tol});
  const auto v = sum.eval_batch({za, zb}, {{0, 1}, {0, 0}, {1, 1}});
  L.ratio = std::abs(v[0]) / std::sqrt(v[1].real() * v[2].real());
  const CVec zeta = chart.to_chart(zb);
  double u2 = 0.0;
  for (int j = 1; j < m; ++j) u2 += std::norm(zeta[j]);
  L.model_ratio = std::exp(-lambda * u2 / (2.0 * chart.tau));
  return L;
}

BoundaryPoint default_base_point(int m, double tau) {
  BoundaryPoint p;
  p.x.assign(m, 0.0);
  p.y.assign(m, 0.0);
  p.y[m - 1] = tau;
  return p;
}

RVec default_lambda_grid() { return {50, 71, 100, 141, 200, 283, 400}; }

}  // namespace gtube
