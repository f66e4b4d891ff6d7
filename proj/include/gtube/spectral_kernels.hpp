#pragma once

#include <gtube/flat_model.hpp>
#include <gtube/smoothing.hpp>

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace gtube {

enum class KernelKind {
  smoothed,  // P_{chi,lambda}: tempered eigenfunction sum smoothed by chi
  toeplitz   // Pi_{chi,lambda}: chi of the Toeplitz operator, normalized Hardy basis
};
KernelKind kernel_from_name(const std::string& s);
const char* to_string(KernelKind k);

struct KernelSumConfig {
  double lambda = 0.0;
  double tau = 0.0;
  double window = 0.0;    // W: modes with |nu_k - lambda| <= W are summed
  double tail_tol = 0.0;  // absolute bound the discarded modes must respect
};

struct KernelValue {
  cplx value;
  double tail_bound = 0.0;
};

// Sharp real spectral projection sum_{|k| <= lambda} phi_k(x) conj phi_k(y).
double real_projection_E(const FlatModel& model, double lambda, std::span<const double> x,
                         std::span<const double> y);

// sum_{|k| <= lambda} e^{-2 tau |k|} phi_k(z) conj phi_k(w)
cplx tempered_projection(const FlatModel& model, double lambda, double tau,
                         std::span<const cplx> z, std::span<const cplx> w);

// Eigenvalue of Pi D Pi on exp(i k.z): the weighted mean of orientation k.omega
// under exp(-2 tau k.omega) on the sphere. Nonnegative for the Reeb orientation.
double toeplitz_eigenvalue(const FlatModel& model, const LatticeMode& k, double tau,
                           int orientation = kReebOrientation);
// Same, from |k| alone.
double toeplitz_eigenvalue(const FlatModel& model, double knorm, double tau,
                           int orientation = kReebOrientation);
// Uniform bound |k| - mu_k <= toeplitz_shift_bound(m, tau).
double toeplitz_shift_bound(int m, double tau);

// Certified bound on the modes discarded by a window W, valid for every pair
// of points in the closed tube.
double tail_bound(KernelKind kind, const FlatModel& model, const SmoothingFunction& chi,
                  double lambda, double tau, double window);
// Smallest integer W with tail_bound <= tol. ConfigurationError (carrying the
// best achievable bound) if none up to the cache range of chi.
double choose_window(KernelKind kind, const FlatModel& model, const SmoothingFunction& chi,
                     double lambda, double tau, double tol);

// Mode window for one (kind, lambda, tau); evaluates the kernel at many pairs.
class SpectralSum {
 public:
  SpectralSum(KernelKind kind, const FlatModel& model, std::shared_ptr<const SmoothingFunction> chi,
              const KernelSumConfig& cfg);

  KernelKind kind() const { return kind_; }
  const KernelSumConfig& config() const { return cfg_; }
  double tail_bound() const { return tail_; }
  std::size_t mode_count() const { return weight_.size(); }

  cplx eval(std::span<const cplx> z, std::span<const cplx> w) const;
  // values[i] = K(points[pairs[i].first], points[pairs[i].second])
  std::vector<cplx> eval_batch(const std::vector<TubePoint>& points,
                               const std::vector<std::pair<std::size_t, std::size_t>>& pairs) const;

  // Modes are stored lexicographically; exposed for diagnostics.
  const std::vector<int>& lattice() const { return k_; }
  const RVec& spectral_values() const { return nu_; }

 private:
  KernelKind kind_;
  FlatModel model_;
  std::shared_ptr<const SmoothingFunction> chi_;
  KernelSumConfig cfg_;
  std::vector<int> k_;  // m entries per mode
  RVec nu_;             // |k| or mu_k
  RVec weight_;         // chi(lambda - nu)
  RVec half_log_c_;     // half the log of the per-mode coefficient
  double tail_ = 0.0;
};

KernelValue smoothed_projection(const FlatModel& model, std::shared_ptr<const SmoothingFunction> chi,
                                std::span<const cplx> z, std::span<const cplx> w,
                                const KernelSumConfig& cfg);
KernelValue toeplitz_localization(const FlatModel& model, std::shared_ptr<const SmoothingFunction> chi,
                                  std::span<const cplx> z, std::span<const cplx> w,
                                  const KernelSumConfig& cfg);

}  // namespace gtube
