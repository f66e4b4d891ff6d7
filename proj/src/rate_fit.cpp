#include <gtube/rate_fit.hpp>

#include <gtube/errors.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace gtube {

namespace {

// Ordinary least squares on (u, v); returns {slope, intercept}.
std::pair<double, double> ols(const RVec& u, const RVec& v) {
  const double n = static_cast<double>(u.size());
  double su = 0, sv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) su += u[i], sv += v[i];
  const double mu = su / n, mv = sv / n;
  double suu = 0, suv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suv += (u[i] - mu) * (v[i] - mv);
  }
  const double b = suv / suu;
  return {b, mv - b * mu};
}

}  // namespace

LogLogFit loglog_fit(const RVec& x, const RVec& y, double floor) {
  if (x.size() != y.size()) throw FitError("loglog_fit: size mismatch");
  RVec lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0)) throw FitError("loglog_fit: abscissae must be positive");
    if (y[i] > floor && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  LogLogFit f;
  f.used = static_cast<int>(lx.size());
  if (lx.size() < 2) {
    f.floor_limited = true;
    f.slope = f.ci_low = f.ci_high = std::numeric_limits<double>::quiet_NaN();
    f.intercept = std::numeric_limits<double>::quiet_NaN();
    return f;
  }
  std::tie(f.slope, f.intercept) = ols(lx, ly);
  double se = 0.0;
  if (lx.size() >= 3) {
    const std::size_t n = lx.size();
    RVec s(n);
    for (std::size_t i = 0; i < n; ++i) {
      RVec a, b;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) a.push_back(lx[j]), b.push_back(ly[j]);
      s[i] = ols(a, b).first;
    }
    double mean = 0;
    for (double v : s) mean += v;
    mean /= n;
    double var = 0;
    for (double v : s) var += (v - mean) * (v - mean);
    se = std::sqrt(var * (n - 1.0) / n);
  }
  f.ci_low = f.slope - 2.0 * se;
  f.ci_high = f.slope + 2.0 * se;
  f.non_convergent = f.slope > -0.05;
  return f;
}

LogLogFit fit_rate(const RVec& lambdas, const RVec& errors) {
  if (lambdas.size() < 5) throw FitError("fit_rate: need at least 5 lambda values");
  const auto [lo, hi] = std::minmax_element(lambdas.begin(), lambdas.end());
  if (*hi < 4.0 * *lo) throw FitError("fit_rate: lambda values must span a factor >= 4");
  return loglog_fit(lambdas, errors);
}

}  // namespace gtube
