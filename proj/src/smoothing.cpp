#include <gtube/smoothing.hpp>

#include <gtube/errors.hpp>
#include <gtube/parallel.hpp>
#include <gtube/quadrature.hpp>

#include <cmath>
#include <map>
#include <mutex>

namespace gtube {

double SmoothingFunction::beta(double t) const {
  const double x = 2.0 * t / eps_;
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

SmoothingFunction::SmoothingFunction(double eps, double s_max, double step)
    : eps_(eps), s_max_(s_max), step_(step) {
  if (!(eps > 0)) throw DomainError("make_chi: eps must be positive");
  if (!(step > 0) || !(s_max > step)) throw DomainError("make_chi: bad cache grid");
  const double h = 0.5 * eps_;
  beta_l2_sq_ = 2.0 * integrate<double>([&](double t) { double b = beta(t); return b * b; }, 0.0, h,
                                        1e-300, 1e-15)
                          .value;

  // Trapezoid nodes on (0, h): beta is flat at the endpoints, so the rule is
  // exact up to aliasing of B at frequency 2 pi / dt.
  const int nt = 1024;
  const double dt = h / nt;
  RVec tn(nt), bn(nt);
  for (int j = 0; j < nt; ++j) {
    tn[j] = j * dt;
    bn[j] = beta(tn[j]) * (j == 0 ? 1.0 : 2.0) * dt;
  }
  const std::size_t n = static_cast<std::size_t>(std::ceil(s_max_ / step_)) + 1;
  RVec B(n), dB(n);
  parallel_chunks(n, 512, [&](std::size_t, std::size_t a, std::size_t b) {
    for (std::size_t i = a; i < b; ++i) {
      const double s = i * step_;
      double c = 0.0, d = 0.0;
      for (int j = 0; j < nt; ++j) {
        c += bn[j] * std::cos(s * tn[j]);
        d -= bn[j] * tn[j] * std::sin(s * tn[j]);
      }
      B[i] = c;
      dB[i] = d;
    }
  });
  val_.resize(n);
  der_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    val_[i] = B[i] * B[i] / beta_l2_sq_;
    der_[i] = 2.0 * B[i] * dB[i] / beta_l2_sq_;
  }
  suffix_max_.resize(n);
  double run = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    run = std::max(run, std::abs(val_[i]));
    suffix_max_[i] = run;
  }
  // L1 norms of beta^(N) from Taylor coefficients of exp(-1/(1 - x^2)),
  // x = 2t/eps, on a fine trapezoid grid (inflated by 1% below).
  {
    constexpr int K = kMaxDerivative;
    const int nx = 40000;
    const double dx = 2.0 / nx;
    RVec acc(K + 1, 0.0);
    double q[3], r[K + 1], g[K + 1], e[K + 1];
    for (int i = 1; i < nx; ++i) {
      const double x0 = -1.0 + i * dx;
      q[0] = 1.0 - x0 * x0;
      q[1] = -2.0 * x0;
      q[2] = -1.0;
      r[0] = 1.0 / q[0];
      for (int k = 1; k <= K; ++k) r[k] = -(q[1] * r[k - 1] + (k >= 2 ? q[2] * r[k - 2] : 0.0)) / q[0];
      for (int k = 0; k <= K; ++k) g[k] = -r[k];
      e[0] = std::exp(g[0]);
      if (e[0] == 0.0) continue;
      double fact = 1.0;
      acc[0] += e[0] * dx;
      for (int k = 1; k <= K; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += j * g[j] * e[k - j];
        e[k] = s / k;
        fact *= k;
        acc[k] += std::abs(fact * e[k]) * dx;
      }
    }
    deriv_l1_.resize(K + 1);
    for (int k = 0; k <= K; ++k) deriv_l1_[k] = 1.01 * acc[k] * std::pow(2.0 / eps_, k) * (0.5 * eps_);
  }
  for (int N = 0; N <= 6; ++N) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c = std::max(c, std::abs(val_[i]) * std::pow(1.0 + i * step_, N));
    cN_[N] = 1.001 * c;
  }
}

double SmoothingFunction::operator()(double s) const {
  s = std::abs(s);
  if (s >= s_max_) return direct(s);
  const double q = s / step_;
  const std::size_t i = static_cast<std::size_t>(q);
  if (i + 1 >= val_.size()) return direct(s);
  const double x = q - i;
  const double x2 = x * x, x3 = x2 * x;
  const double h00 = 2 * x3 - 3 * x2 + 1, h10 = x3 - 2 * x2 + x;
  const double h01 = -2 * x3 + 3 * x2, h11 = x3 - x2;
  return h00 * val_[i] + h10 * step_ * der_[i] + h01 * val_[i + 1] + h11 * step_ * der_[i + 1];
}

double SmoothingFunction::direct(double s) const {
  const double h = 0.5 * eps_;
  const double B = 2.0 * integrate<double>([&](double t) { return beta(t) * std::cos(s * t); }, 0.0, h,
                                           1e-15, 1e-14, 20000)
                             .value;
  return B * B / beta_l2_sq_;
}

double SmoothingFunction::hat(double t) const {
  t = std::abs(t);
  if (t >= eps_) return 0.0;
  const double h = 0.5 * eps_;
  // (beta*beta)(t) = int beta(x) beta(t - x) dx over x in [t - h, h]
  const double v = integrate<double>([&](double x) { return beta(x) * beta(t - x); }, t - h, h, 1e-300,
                                     1e-14, 20000)
                       .value;
  return v / beta_l2_sq_;
}

double SmoothingFunction::inverse_transform(double t) const {
  // chi is even: (1/pi) int_0^S chi(s) cos(st) ds, trapezoid on the nodes
  const std::size_t n = val_.size();
  double s = 0.5 * val_[0];
  for (std::size_t i = 1; i + 1 < n; ++i) s += val_[i] * std::cos(i * step_ * t);
  s += 0.5 * val_[n - 1] * std::cos((n - 1) * step_ * t);
  return s * step_ / kPi;
}

double SmoothingFunction::derivative_bound(double s) const {
  s = std::abs(s);
  double b = deriv_l1_[0];
  double p = 1.0;
  for (std::size_t N = 1; N < deriv_l1_.size(); ++N) {
    p *= s;
    b = std::min(b, deriv_l1_[N] / p);
  }
  return b * b / beta_l2_sq_;
}

double SmoothingFunction::envelope(double s) const {
  s = std::abs(s);
  const std::size_t i = static_cast<std::size_t>(s / step_);
  if (i < suffix_max_.size()) return std::max(1.001 * suffix_max_[i], derivative_bound(s_max_));
  return derivative_bound(s);
}

double SmoothingFunction::decay_constant(int N) const {
  if (N < 0 || N > 6) throw DomainError("decay_constant: N must be in [0, 6]");
  return cN_[N];
}

std::shared_ptr<const SmoothingFunction> make_chi(double eps) {
  static std::map<double, std::shared_ptr<const SmoothingFunction>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(eps);
  if (it != cache.end()) return it->second;
  auto p = std::make_shared<const SmoothingFunction>(eps);
  cache.emplace(eps, p);
  return p;
}

}  // namespace gtube
