#pragma once

#include <gtube/flat_model.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace gtube {

// rho(z) - tau^2 with sqrt(rho) = |Im z|.
double defining_function(const FlatModel& model, std::span<const cplx> z, double tau);
// -r^2(z, conj w)/4 - tau^2; holomorphic in z, antiholomorphic in w.
cplx polarized_phi(const FlatModel& model, std::span<const cplx> z, std::span<const cplx> w,
                   double tau);
// polarized_phi / i
cplx polarized_psi(const FlatModel& model, std::span<const cplx> z, std::span<const cplx> w,
                   double tau);
double diastasis(const FlatModel& model, std::span<const cplx> z, std::span<const cplx> w,
                 double tau);

// Second-order Taylor data of the defining function at p:
//   phi(p+h) = phi(p) + 2 Re(g.h) + h^T L conj(h) + Re(h^T H h) + O(h^3)
struct TaylorData {
  double value = 0.0;
  Eigen::VectorXcd grad;   // d phi / d z_j
  Eigen::MatrixXcd levi;   // d^2 phi / d z_j d zbar_k
  Eigen::MatrixXcd hess;   // d^2 phi / d z_j d z_k
};
TaylorData defining_function_taylor(const FlatModel& model, const BoundaryPoint& p, double tau);

// Degree-2 holomorphic normal form at a boundary point p. With h = z - p,
//   zeta = A h + e_0 (h^T Q h),  zeta = (z0, u_1, ..., u_{m-1}),
// so that phi_tau = -Im z0 + |u|^2 + R.
struct HeisenbergChart {
  FlatModel model;
  BoundaryPoint base;
  double tau = 0.0;
  Eigen::MatrixXd rotation;       // real orthogonal, y_p -> tau e_m
  Eigen::MatrixXcd linear_map;    // A
  Eigen::MatrixXcd quadratic;     // Q, symmetric
  double condition_number = 0.0;
  double validity_radius = 0.0;   // in the Euclidean norm of zeta

  int dim() const { return model.m; }
  CVec to_chart(std::span<const cplx> z) const;
  // Newton inversion of the quadratic map; ChartValidityError outside the
  // validity radius unless `enforce` is false.
  TubePoint from_chart(std::span<const cplx> zeta, bool enforce = true) const;
  // phi_tau evaluated at from_chart(zeta), computed relative to p to avoid cancellation.
  double pushed_phi(std::span<const cplx> zeta) const;
};

inline constexpr double kChartValidityFactor = 0.3;
inline constexpr double kChartMaxCondition = 1e6;

HeisenbergChart build_heisenberg_chart(const FlatModel& model, const BoundaryPoint& p, double tau);

// Low-order coefficients of phi_tau o chart^{-1} at 0 by central differences.
struct PushforwardCoefficients {
  double re_z0 = 0.0;     // must vanish
  double im_z0 = 0.0;     // must be -1
  double linear_u = 0.0;  // max |coefficient| over Re u_j, Im u_j; must vanish
  double levi_u_dev = 0.0;  // max deviation of the u-Hessian from the identity form
};
PushforwardCoefficients pushforward_coefficients(const HeisenbergChart& chart, double h = 1e-5);

struct RemainderSeries {
  std::string direction;  // "z0", "u", "mixed"
  RVec radii;
  RVec sup_remainder;
  double slope = 0.0;
  bool floor_limited = false;
  double required = 0.0;
};
struct RemainderFit {
  std::vector<RemainderSeries> series;
  bool passes(double slack = 0.1) const;
};
// Sup of |phi o chart^{-1} - (-Im z0 + |u|^2)| along pure-z0, pure-u and mixed
// directions, fitted against r on a log-log scale.
RemainderFit chart_remainder_fit(const HeisenbergChart& chart, const RVec& radii);
RVec default_remainder_radii(const HeisenbergChart& chart);

struct FlowSample {
  double t = 0.0;
  double theta_defect = 0.0;  // Re z0(G^t q) - Re z0(q) - 2 tau t
  double u_defect = 0.0;      // |u(G^t q) - u(q)|
};
// Transfer the boundary flow into chart coordinates starting at q (default: base).
FlowSample flow_in_chart(const HeisenbergChart& chart, double t,
                         const BoundaryPoint* start = nullptr,
                         int orientation = kReebOrientation);

struct AmbientLift {
  double theta = 0.0;     // Re Theta = theta / lambda
  CVec u;                 // u / sqrt(lambda)
  double im_theta = 0.0;  // solves phi_tau = 0
  TubePoint z;            // ambient point chart^{-1}(Theta, u/sqrt(lambda))
  double residual = 0.0;  // |phi_tau(z)|
};
AmbientLift ambient_lift(const HeisenbergChart& chart, double theta, std::span<const cplx> u,
                         double lambda);

struct DiastasisBound {
  double c_min = 0.0;
  double c_median = 0.0;
  int samples = 0;
};
// D(z, w) >= c d(z, w)^2 over random near-diagonal boundary pairs.
DiastasisBound diastasis_lower_bound(const FlatModel& model, double tau, int samples,
                                     double max_sep, std::uint64_t seed);

}  // namespace gtube
