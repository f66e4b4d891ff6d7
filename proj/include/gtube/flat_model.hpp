#pragma once

#include <gtube/types.hpp>

#include <string>
#include <vector>

namespace gtube {

// Circle (m = 1) or flat m-torus R^m / (2 pi Z)^m.
struct FlatModel {
  enum class Kind { circle, torus };
  int m = 2;
  Kind kind = Kind::torus;

  static FlatModel circle() { return {1, Kind::circle}; }
  static FlatModel torus(int m);
  static FlatModel from_name(const std::string& name, int m);
  std::string name() const { return kind == Kind::circle ? "circle" : "torus"; }
};

struct LatticeMode {
  std::vector<int> k;
  int norm_sq() const {
    int s = 0;
    for (int v : k) s += v * v;
    return s;
  }
  double eigenvalue() const;  // |k|
};

// z = x + i y with x on the torus and y a cotangent vector.
using TubePoint = CVec;

struct BoundaryPoint {
  RVec x;
  RVec y;  // |y| = tau
  TubePoint z() const;
  double radius() const;
  static BoundaryPoint from_tube(const TubePoint& z);
};

// Representative of a in [-pi, pi).
double wrap_angle(double a);

std::vector<LatticeMode> enumerate_modes(const FlatModel& model, double Lambda);
// Number of k in Z^m with |k| <= Lambda, without materialising the list.
long long count_modes(int m, double Lambda);

// (2 pi)^{-m/2} exp(i k . z)
cplx complexified_eigenfunction(const LatticeMode& mode, std::span<const cplx> z);

// sum_j (z_j - conj(w_j))^2 on the near-diagonal branch; BranchError when
// |Re z_j - Re w_j| >= pi.
cplx complexified_distance_sq(const FlatModel& model, std::span<const cplx> z,
                              std::span<const cplx> w);

// (1/2i) sqrt(r^2(z, zbar)) = |Im z|
double grauert_sqrt_rho(const FlatModel& model, std::span<const cplx> z);

// Translate x by orientation * t * y/|y|; y is unchanged.
BoundaryPoint boundary_flow(const FlatModel& model, double t, const BoundaryPoint& p,
                            int orientation);

// Moments of the weight exp(-a omega.e) on the unit sphere S^{m-1}.
struct SphereMoments {
  double log_mass = 0.0;  // log of the integral of the weight
  double gap = 0.0;       // 1 + <omega.e>, in [0, 1]
};
SphereMoments sphere_exp_moments(int m, double a);

// L^2(boundary) norm of exp(i k.z), with the measure constant fixed to 1:
// tau^m (2 pi)^m int_{S^{m-1}} exp(-2 tau k.omega) d sigma.
double hardy_norm_sq(const FlatModel& model, const LatticeMode& k, double tau);
double log_hardy_norm_sq(const FlatModel& model, double knorm, double tau);

}  // namespace gtube

namespace gtube {
// Direction of the transferred geodesic flow used throughout: -y/|y|. With this
// choice the Toeplitz spectrum is nonnegative.
inline constexpr int kReebOrientation = -1;
}  // namespace gtube
