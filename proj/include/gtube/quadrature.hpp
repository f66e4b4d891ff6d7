#pragma once

#include <gtube/errors.hpp>
#include <gtube/types.hpp>

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace gtube {

struct QuadRule {
  RVec nodes;
  RVec weights;
};

// n-point Gauss-Legendre rule on [-1, 1] (Newton on the three-term recurrence).
const QuadRule& gauss_legendre(int n);
// n-point Gauss-Hermite rule for weight exp(-x^2) (Golub-Welsch).
QuadRule gauss_hermite(int n);

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  int evaluations = 0;
};

namespace detail {
// Gauss-Kronrod 7/15 abscissae and weights.
inline constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                   0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                   0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                   0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                   0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                   0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                   0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                  0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
inline double mag(const T& v) {
  return std::abs(v);
}

template <class T, class F>
void gk15(F& f, double a, double b, T& res, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const T fc = f(c);
  T rk = fc * kWgk[7];
  T rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const T s = f(c - dx) + f(c + dx);
    rk += s * kWgk[j];
    if (j % 2 == 1) rg += s * kWg[j / 2];
  }
  res = rk * h;
  err = mag(T((rk - rg) * h));
}
}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b]; T is
// double or complex<double>. Throws AccuracyError when the budget runs out.
template <class T, class F>
QuadResult<T> integrate(F&& f, double a, double b, double abs_tol, double rel_tol,
                        int max_intervals = 2000) {
  struct Piece {
    double a, b;
    T v;
    double e;
  };
  std::vector<Piece> pieces;
  Piece p0{a, b, T{}, 0.0};
  detail::gk15<T>(f, a, b, p0.v, p0.e);
  pieces.push_back(p0);
  T total = p0.v;
  double err = p0.e;
  int evals = 15;
  while (err > std::max(abs_tol, rel_tol * detail::mag(total))) {
    if (static_cast<int>(pieces.size()) >= max_intervals) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "integrate: interval budget exhausted, error estimate %.3e", err);
      throw AccuracyError(buf, err);
    }
    std::size_t worst = 0;
    for (std::size_t i = 1; i < pieces.size(); ++i)
      if (pieces[i].e > pieces[worst].e) worst = i;
    const Piece w = pieces[worst];
    const double mid = 0.5 * (w.a + w.b);
    Piece l{w.a, mid, T{}, 0.0}, r{mid, w.b, T{}, 0.0};
    detail::gk15<T>(f, l.a, l.b, l.v, l.e);
    detail::gk15<T>(f, r.a, r.b, r.v, r.e);
    evals += 30;
    pieces[worst] = l;
    pieces.push_back(r);
    total = T{};
    err = 0.0;
    for (const auto& p : pieces) {
      total += p.v;
      err += p.e;
    }
  }
  return {total, err, evals};
}

// Fixed composite Gauss-Legendre rule with `panels` equal panels of n nodes.
template <class T, class F>
T composite_gl(F&& f, double a, double b, int panels, int n) {
  const QuadRule& r = gauss_legendre(n);
  const double h = (b - a) / panels;
  T s{};
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    for (int i = 0; i < n; ++i) s += f(c + 0.5 * h * r.nodes[i]) * (0.5 * h * r.weights[i]);
  }
  return s;
}

// Nested adaptive integration over the box [lo_i, hi_i], dimension 1 or 2.
QuadResult<cplx> integrate_box(const std::function<cplx(std::span<const double>)>& f,
                               std::span<const double> lo, std::span<const double> hi,
                               double abs_tol, double rel_tol);

}  // namespace gtube
