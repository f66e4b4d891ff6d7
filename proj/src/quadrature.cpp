#include <gtube/quadrature.hpp>

#include <Eigen/Eigenvalues>

#include <map>
#include <mutex>

namespace gtube {

const QuadRule& gauss_legendre(int n) {
  static std::map<int, QuadRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  QuadRule r;
  if (n == 1) {
    r.nodes = {0.0};
    r.weights = {2.0};
    return cache.emplace(n, std::move(r)).first->second;
  }
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return cache.emplace(n, std::move(r)).first->second;
}

QuadRule gauss_hermite(int n) {
  if (n < 1) throw DomainError("gauss_hermite: n must be positive");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) J(i, i - 1) = J(i - 1, i) = std::sqrt(0.5 * i);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double mu0 = std::sqrt(kPi);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    r.weights[i] = mu0 * v * v;
  }
  return r;
}

QuadResult<cplx> integrate_box(const std::function<cplx(std::span<const double>)>& f,
                               std::span<const double> lo, std::span<const double> hi,
                               double abs_tol, double rel_tol) {
  if (lo.size() != hi.size() || lo.empty() || lo.size() > 2)
    throw DimensionError("integrate_box: dimension must be 1 or 2");
  int evals = 0;
  if (lo.size() == 1) {
    auto g = [&](double x) {
      ++evals;
      const double p[1] = {x};
      return f(p);
    };
    auto r = integrate<cplx>(g, lo[0], hi[0], abs_tol, rel_tol, 20000);
    r.evaluations = evals;
    return r;
  }
  double inner_err = 0.0;
  auto outer = [&](double x) {
    auto g = [&](double y) {
      ++evals;
      const double p[2] = {x, y};
      return f(p);
    };
    auto r = integrate<cplx>(g, lo[1], hi[1], 0.1 * abs_tol / (hi[0] - lo[0]), 0.1 * rel_tol, 20000);
    inner_err = std::max(inner_err, r.error);
    return r.value;
  };
  auto r = integrate<cplx>(outer, lo[0], hi[0], abs_tol, rel_tol, 20000);
  r.error += inner_err * (hi[0] - lo[0]);
  r.evaluations = evals;
  return r;
}

}  // namespace gtube
