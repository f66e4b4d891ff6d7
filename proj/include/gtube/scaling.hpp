#pragma once

#include <gtube/grauert_geometry.hpp>
#include <gtube/rate_fit.hpp>
#include <gtube/spectral_kernels.hpp>

#include <memory>
#include <string>
#include <vector>

namespace gtube {

struct GridTuple {
  double theta = 0.0;
  CVec u;
  double phi = 0.0;
  CVec v;
};

// Tuples with |theta| + |u| + |phi| + |v| <= rho; theta, phi on a uniform axis
// of `per_axis` points, u, v on the real and imaginary coordinate axes.
// Distinct (theta, u) arguments are stored once; tuples refer to them by index.
struct ComparisonGrid {
  int m = 0;
  double rho = 0.0;
  std::vector<GridTuple> tuples;
  std::vector<std::pair<double, CVec>> points;                 // distinct (theta, u)
  std::vector<std::pair<std::size_t, std::size_t>> pair_index;  // per tuple
  std::size_t diagonal_tuple = 0;                               // index of (0,0,0,0)
};
ComparisonGrid make_comparison_grid(int m, double rho, int per_axis = 5);

// Boundary point chart^{-1}(Theta(lambda), u/sqrt(lambda)).
BoundaryPoint rescaled_point(const HeisenbergChart& chart, double theta, std::span<const cplx> u,
                             double lambda);
std::pair<BoundaryPoint, BoundaryPoint> rescaled_pair(const HeisenbergChart& chart, const GridTuple& t,
                                                      double lambda);

struct StudyOptions {
  double eps = 3.0;        // Fourier support of chi
  double rel_tail = 1e-8;  // tail tolerance relative to the diagonal
};

struct NormalizedError {
  double lambda = 0.0;
  double sup_error = 0.0;
  std::size_t worst_tuple = 0;
  RVec tuple_errors;
  std::vector<cplx> normalized;  // K(a,b)/sqrt(K(a,a)K(b,b)) per tuple
  double window = 0.0;
  double tail = 0.0;
  double diagonal_min = 0.0;
  std::size_t modes = 0;
};

// sup over the grid of |K(a,b)/sqrt(K(a,a)K(b,b)) - F(a,b)/sqrt(F(a,a)F(b,b))|
// with F the leading model factor.
NormalizedError normalized_error(KernelKind kind, const HeisenbergChart& chart, const ComparisonGrid& grid,
                                 double lambda, const StudyOptions& opt = {});

struct ScalingReport {
  KernelKind kind = KernelKind::smoothed;
  int m = 0;
  double tau = 0.0;
  double eps = 0.0;
  double rho = 0.0;
  std::size_t grid_size = 0;
  RVec lambdas;
  RVec errors;
  std::vector<NormalizedError> details;
  LogLogFit fit;
  bool monotone = false;  // nonincreasing up to 10% jitter
};
ScalingReport scaling_study(KernelKind kind, const HeisenbergChart& chart, const ComparisonGrid& grid,
                            const RVec& lambdas, const StudyOptions& opt = {});

bool nonincreasing_with_jitter(const RVec& e, double jitter = 0.10);

struct CrossConsistency {
  RVec lambdas;
  RVec differences;  // sup over tuples of |normalized Pi - normalized P|
  LogLogFit fit;
};
CrossConsistency cross_consistency(const ScalingReport& a, const ScalingReport& b);

struct Localization {
  double lambda = 0.0;
  double separation = 0.0;  // Euclidean distance of the translated point
  double ratio = 0.0;       // |K(a,b)| / sqrt(K(a,a) K(b,b))
  double model_ratio = 0.0; // |F| at the chart coordinates of b
};
// Ratio at separation 2 C lambda^{delta - 1/2} along the first transverse
// direction of the chart (a pure x-translation, so both points stay on the boundary).
Localization localization_diagnostic(KernelKind kind, const HeisenbergChart& chart, double lambda,
                                     double delta, double C = 0.5, const StudyOptions& opt = {});

// Default base point: x = 0, y = tau e_m.
BoundaryPoint default_base_point(int m, double tau);

RVec default_lambda_grid();

}  // namespace gtube
