#pragma once

#include <gtube/types.hpp>

#include <Eigen/Dense>

#include <array>
#include <functional>

namespace gtube {

// Coordinates (t, sigma_1, sigma_2, Re w_0) of the rescaled phase.
struct ReducedPhasePoint {
  double t = 0.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double w0_re = 0.0;
  std::array<double, 4> as_array() const { return {t, sigma1, sigma2, w0_re}; }
};

// -t - (sigma_2/2) Re w_0 + (sigma_1/2)(Re w_0 + 2 tau t)
double reduced_phase(const ReducedPhasePoint& p, double tau);
std::array<double, 4> reduced_phase_gradient(const ReducedPhasePoint& p, double tau);

struct PhaseReport {
  double tau = 0.0;
  std::array<double, 4> critical_point{};
  double phase_at_critical = 0.0;
  double gradient_norm = 0.0;
  Eigen::Matrix4d hessian;            // by central differences of the phase
  Eigen::Matrix4d displayed_hessian;  // the closed form
  Eigen::Matrix4d inverse;            // closed form of the inverse
  double hessian_deviation = 0.0;     // max |hessian - displayed_hessian|
  double product_error = 0.0;         // max |H H^{-1} - I|
  double determinant = 0.0;
  int signature = 0;
  double gamma_lambda_tau = 0.0;      // gamma * lambda * tau, expected 8 pi^2
};
PhaseReport phase_critical_data(double tau);

// e^{i sqrt(lambda) Psi(C)} det(sqrt(lambda) H / 2 pi i)^{-1/2}
cplx leading_coefficient(double lambda, double tau);

using Field4 = std::function<double(const std::array<double, 4>&)>;
// sum_ij (H^{-1})_ij d_i d_j f at p, mixed central differences with one
// Richardson step: (2/tau) f_{s1 t} + (2/tau) f_{s2 t} - 4 f_{s2 w}.
double apply_L_operator(const Field4& f, const std::array<double, 4>& p, double tau, double h = 1e-4);

// int_{C^{m-1}} exp((1/tau)(-|z|^2 + z.c)) dz by tensor Gauss-Hermite,
// refined until successive rules agree to 1e-13 relative.
cplx gaussian_integral_check(int m, double tau, std::span<const cplx> c);

struct OscillatoryProblem {
  int dim = 1;  // 1 or 2
  std::function<double(std::span<const double>)> phase;
  std::function<cplx(std::span<const double>)> amplitude;
  RVec lo, hi;
};

struct OracleResult {
  cplx integral;
  cplx prediction;           // a(C) e^{i lambda Phi(C)} (2 pi/lambda)^{d/2} |det|^{-1/2} e^{i pi sgn/4}
  double relative_deviation = 0.0;  // |integral / prediction - 1|
  double error_estimate = 0.0;
  RVec critical_point;
  double hessian_det = 0.0;
  int signature = 0;
};

// Adaptive quadrature of int e^{i lambda Phi} a over a box, compared against the
// leading stationary-phase term. UnsupportedPhaseError if the gradient scan
// finds no, several, or degenerate interior critical points.
OracleResult oscillatory_oracle(const OscillatoryProblem& prob, double lambda, double rel_tol = 1e-10);

// Product amplitude a(t) b(sigma_1) c(sigma_2) d(w) of smooth bumps, each
// equal to 1 at its center and supported in [center - radius, center + radius].
struct SeparableAmplitude {
  std::array<double, 4> center{};
  std::array<double, 4> radius{};
  static SeparableAmplitude at_critical(double tau, double r = 0.25);
  double operator()(const std::array<double, 4>& x) const;
};

// int e^{i lambda Psi} a over R^4 for the reduced phase: the t and w
// integrations are done as one-dimensional Fourier transforms, leaving a smooth
// two-dimensional integral over (sigma_1, sigma_2).
OracleResult reduced_phase_oracle(double tau, double lambda, const SeparableAmplitude& amp,
                                  double rel_tol = 1e-9);

// min |grad Psi| over a grid of the box {|t| <= 1, sigma_i in [1/2tau, 2/tau],
// |w| <= 1} restricted to points at max-norm distance >= exclusion from C.
double reduced_phase_min_gradient(double tau, double step, double exclusion);

}  // namespace gtube
