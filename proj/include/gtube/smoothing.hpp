#pragma once

#include <gtube/types.hpp>

#include <memory>

namespace gtube {

// chi(s) = B(s)^2 / int beta^2 where beta(t) = exp(-1/(1 - (2t/eps)^2)) on
// |t| < eps/2 and B is its cosine transform. Then
//   chi_hat(t) = (1/2pi) int chi(s) e^{-ist} ds = (beta * beta)(t) / int beta^2,
// supported in [-eps, eps] with chi_hat(0) = 1, and int chi = 2 pi.
// Values are cached on a uniform grid (cubic Hermite interpolation); the cache
// is immutable after construction.
class SmoothingFunction {
 public:
  explicit SmoothingFunction(double eps, double s_max = 160.0, double step = 0.005);

  double eps() const { return eps_; }
  double s_max() const { return s_max_; }
  double step() const { return step_; }
  double beta_l2_sq() const { return beta_l2_sq_; }

  double operator()(double s) const;      // cached; falls back to direct() past s_max
  double direct(double s) const;          // adaptive quadrature of the cosine transform
  double hat(double t) const;             // (beta * beta)(t) / int beta^2 by quadrature
  // (1/2pi) int chi(s) e^{-ist} ds evaluated from the cached nodes (trapezoid
  // on [-s_max, s_max]); reproduces hat(t) when eps < pi/step.
  double inverse_transform(double t) const;
  // sup of |chi| over |s'| >= |s|: the cache maximum (slightly inflated for
  // the interpolation gaps), joined to derivative_bound past the cache.
  double envelope(double s) const;
  // |B(s)| <= min_N ||beta^(N)||_1 / s^N, squared and normalized: a bound for
  // chi(s) valid for every s > 0.
  double derivative_bound(double s) const;
  // C_N with |chi(s)| <= C_N (1 + |s|)^{-N}, fitted on the cache, N = 0..6.
  double decay_constant(int N) const;

 private:
  double beta(double t) const;
  double eps_, s_max_, step_, beta_l2_sq_ = 0.0;
  RVec val_, der_, suffix_max_;
  double cN_[7] = {};
  RVec deriv_l1_;  // ||beta^(N)||_1, N = 0..kMaxDerivative
  static constexpr int kMaxDerivative = 30;
};

// Shared instance per eps (construction costs a fraction of a second).
std::shared_ptr<const SmoothingFunction> make_chi(double eps);

}  // namespace gtube
