#pragma once

#include <gtube/types.hpp>

namespace gtube {

// Point of the reduced Heisenberg group of degree m-1.
struct HeisenbergPoint {
  double theta = 0.0;
  CVec zeta;  // m-1 entries, empty for m = 1
  int dim() const { return static_cast<int>(zeta.size()) + 1; }
};

// Point (zeta_0, ..., zeta_{m-1}) of C^m, compared against the Siegel boundary.
struct SiegelPoint {
  CVec zeta;
};

enum class SiegelRegion { interior, boundary, exterior };

inline constexpr double kSiegelBoundaryTol = 1e-10;

// (theta_a + theta_b + 2 Im(zeta_a . conj zeta_b), zeta_a + zeta_b)
HeisenbergPoint group_mul(const HeisenbergPoint& a, const HeisenbergPoint& b);
HeisenbergPoint group_inverse(const HeisenbergPoint& a);

// Level-one model Szego kernel. Reproducing with respect to d theta dA / (2 pi).
cplx model_szego_kernel(int m, const HeisenbergPoint& a, const HeisenbergPoint& b);

SiegelPoint affine_action(const HeisenbergPoint& h, const SiegelPoint& p);

// Im zeta_0 - sum_{j>=1} |zeta_j|^2; positive inside.
double siegel_defect(const SiegelPoint& p);
SiegelRegion siegel_classify(const SiegelPoint& p, double tol = kSiegelBoundaryTol);
const char* to_string(SiegelRegion r);

// exp((1/tau) (i/2 (theta - phi) - |u|^2/2 - |v|^2/2 + u . conj v))
cplx theorem_leading_factor(int m, double tau, double theta, double phi,
                            std::span<const cplx> u, std::span<const cplx> v);

}  // namespace gtube
