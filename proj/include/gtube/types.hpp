#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace gtube {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Bilinear (unconjugated) product sum a_j b_j.
inline cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

// Hermitian product sum a_j conj(b_j).
inline cplx hdot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * std::conj(b[j]);
  return s;
}

inline double norm_sq(std::span<const cplx> a) {
  double s = 0.0;
  for (auto v : a) s += std::norm(v);
  return s;
}

inline double norm_sq(std::span<const double> a) {
  double s = 0.0;
  for (auto v : a) s += v * v;
  return s;
}

}  // namespace gtube
