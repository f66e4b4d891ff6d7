#pragma once

#include <gtube/types.hpp>

namespace gtube {

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ci_low = 0.0;   // jackknife band, slope -/+ 2 standard errors
  double ci_high = 0.0;
  int used = 0;          // points above the floor that entered the fit
  bool floor_limited = false;   // fewer than two points above the floor
  bool non_convergent = false;  // slope indistinguishable from zero or positive
};

inline constexpr double kErrorFloor = 1e-14;

// Least-squares slope of log y against log x, dropping y <= floor.
LogLogFit loglog_fit(const RVec& x, const RVec& y, double floor = kErrorFloor);

// Convergence exponent of errors against lambda; requires >= 5 values spanning
// a factor >= 4 (FitError otherwise).
LogLogFit fit_rate(const RVec& lambdas, const RVec& errors);

}  // namespace gtube
