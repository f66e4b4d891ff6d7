#include <gtube/spectral_kernels.hpp>

#include <gtube/run_config.hpp>
#include <gtube/errors.hpp>
#include <gtube/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

namespace gtube {

namespace {

// Lattice points with lo <= |k| <= hi, lexicographic, flattened m per mode.
std::vector<int> annulus_modes(int m, double lo, double hi) {
  std::vector<int> out;
  if (hi < 0) return out;
  const double lo2 = lo > 0 ? lo * lo : 0.0, hi2 = hi * hi;
  std::vector<int> k(m, 0);
  std::function<void(int, double)> rec = [&](int j, double partial) {
    const double rest_hi = hi2 - partial;
    if (rest_hi < 0) return;
    const int vmax = static_cast<int>(std::floor(std::sqrt(rest_hi) + 1e-12));
    if (j == m - 1) {
      const double rest_lo = lo2 - partial;
      int vmin = 0;
      if (rest_lo > 0) vmin = static_cast<int>(std::ceil(std::sqrt(rest_lo) - 1e-12));
      auto emit = [&](int v) {
        const double n = partial + double(v) * v;
        if (n < lo2 - 1e-9 || n > hi2 + 1e-9) return;
        k[j] = v;
        out.insert(out.end(), k.begin(), k.end());
      };
      for (int v = -vmax; v <= -std::max(vmin, 1); ++v) emit(v);
      if (vmin == 0) emit(0);
      for (int v = std::max(vmin, 1); v <= vmax; ++v) emit(v);
      return;
    }
    for (int v = -vmax; v <= vmax; ++v) {
      k[j] = v;
      rec(j + 1, partial + double(v) * v);
    }
  };
  rec(0, 0.0);
  return out;
}

double ball_volume(int m) { return std::pow(kPi, 0.5 * m) / std::tgamma(0.5 * m + 1.0); }

// Upper bound on #{k : r0 <= |k| < r1}.
double shell_count(int m, double r0, double r1) {
  const double c = 0.5 * std::sqrt(double(m));
  const double a = std::max(0.0, r0 - c);
  return ball_volume(m) * (std::pow(r1 + c, m) - std::pow(a, m));
}

struct SpectralData {
  double mu;
  double log_hardy;
};

SpectralData spectral_data(const FlatModel& model, double r, double tau) {
  const SphereMoments s = sphere_exp_moments(model.m, 2.0 * tau * r);
  return {r * (1.0 - s.gap), model.m * std::log(kTwoPi * tau) + s.log_mass};
}

// sup over the closed tube of |coefficient * e^{ik.z} conj e^{ik.w}| at |k| = r
double mode_bound(KernelKind kind, const FlatModel& model, double r, double tau) {
  if (kind == KernelKind::smoothed) return std::pow(kTwoPi, -model.m);
  return std::exp(2.0 * tau * r - log_hardy_norm_sq(model, r, tau));
}

}  // namespace

KernelKind kernel_from_name(const std::string& s) {
  if (s == "smoothed" || s == "P" || s == "tempered") return KernelKind::smoothed;
  if (s == "toeplitz" || s == "Pi" || s == "szego") return KernelKind::toeplitz;
  throw DomainError("unknown kernel '" + s + "' (expected smoothed or toeplitz)");
}

const char* to_string(KernelKind k) { return k == KernelKind::smoothed ? "smoothed" : "toeplitz"; }

double real_projection_E(const FlatModel& model, double lambda, std::span<const double> x,
                         std::span<const double> y) {
  if (x.size() != static_cast<std::size_t>(model.m) || y.size() != x.size())
    throw DimensionError("real_projection_E: size mismatch");
  double s = 0.0;
  for (const auto& mode : enumerate_modes(model, lambda)) {
    double ph = 0.0;
    for (int j = 0; j < model.m; ++j) ph += mode.k[j] * (x[j] - y[j]);
    s += std::cos(ph);
  }
  return s * std::pow(kTwoPi, -model.m);
}

cplx tempered_projection(const FlatModel& model, double lambda, double tau,
                         std::span<const cplx> z, std::span<const cplx> w) {
  if (z.size() != static_cast<std::size_t>(model.m) || w.size() != z.size())
    throw DimensionError("tempered_projection: size mismatch");
  cplx s = 0.0;
  for (const auto& mode : enumerate_modes(model, lambda)) {
    cplx e = 0.0;
    for (int j = 0; j < model.m; ++j) e += double(mode.k[j]) * (z[j] - std::conj(w[j]));
    s += std::exp(kI * e - 2.0 * tau * mode.eigenvalue());
  }
  return s * std::pow(kTwoPi, -model.m);
}

double toeplitz_eigenvalue(const FlatModel& model, double knorm, double tau, int orientation) {
  if (!(tau > 0)) throw DomainError("toeplitz_eigenvalue: tau must be positive");
  if (orientation != 1 && orientation != -1) throw DomainError("toeplitz_eigenvalue: orientation must be +-1");
  if (knorm == 0.0) return 0.0;
  // <k.omega> = -|k| (1 - gap) under exp(-2 tau k.omega)
  return -orientation * knorm * (1.0 - sphere_exp_moments(model.m, 2.0 * tau * knorm).gap);
}

double toeplitz_eigenvalue(const FlatModel& model, const LatticeMode& k, double tau, int orientation) {
  if (k.k.size() != static_cast<std::size_t>(model.m)) throw DimensionError("toeplitz_eigenvalue: size mismatch");
  return toeplitz_eigenvalue(model, k.eigenvalue(), tau, orientation);
}

double toeplitz_shift_bound(int m, double tau) { return m / (2.0 * tau); }

double tail_bound(KernelKind kind, const FlatModel& model, const SmoothingFunction& chi,
                  double lambda, double tau, double window) {
  const int m = model.m;
  const double W = window;
  const double delta = kind == KernelKind::toeplitz ? toeplitz_shift_bound(m, tau) : 0.0;
  double total = 0.0;
  // inner shells: r < lambda - W + delta
  const double inner_end = lambda - W + delta;
  for (double r0 = 0.0; r0 < inner_end; r0 += 1.0) {
    const double r1 = std::min(r0 + 1.0, inner_end);
    const double d = std::max(W, lambda - r1);
    total += shell_count(m, r0, r1) * chi.envelope(d) * mode_bound(kind, model, r1, tau);
  }
  // outer shells: r >= lambda + W, geometrically widening
  double r0 = std::max(0.0, lambda + W);
  while (r0 - lambda < 1e6) {
    const double width = std::max(1.0, 0.02 * (r0 - lambda));
    const double r1 = r0 + width;
    const double d = std::max(W, r0 - delta - lambda);
    total += shell_count(m, r0, r1) * chi.envelope(d) * mode_bound(kind, model, r1, tau);
    r0 = r1;
  }
  return total;
}

double choose_window(KernelKind kind, const FlatModel& model, const SmoothingFunction& chi,
                     double lambda, double tau, double tol) {
  const int wmax = static_cast<int>(0.95 * chi.s_max());
  const double best = tail_bound(kind, model, chi, lambda, tau, wmax);
  if (best > tol)
    throw ConfigurationError("choose_window: tail tolerance " + format_real(tol) +
                                 " not certifiable; smallest certifiable is " + format_real(best),
                             best);
  int lo = 0, hi = wmax;  // tail(hi) <= tol
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (tail_bound(kind, model, chi, lambda, tau, mid) <= tol)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

SpectralSum::SpectralSum(KernelKind kind, const FlatModel& model,
                         std::shared_ptr<const SmoothingFunction> chi, const KernelSumConfig& cfg)
    : kind_(kind), model_(model), chi_(std::move(chi)), cfg_(cfg) {
  if (!(cfg.tau > 0)) throw DomainError("SpectralSum: tau must be positive");
  if (!(cfg.lambda >= 0)) throw DomainError("SpectralSum: lambda must be >= 0");
  if (!(cfg.window > 0)) throw DomainError("SpectralSum: window must be positive");
  const int m = model.m;
  const double lam = cfg.lambda, tau = cfg.tau, W = cfg.window;
  tail_ = gtube::tail_bound(kind, model, *chi_, lam, tau, W);
  if (tail_ > cfg.tail_tol)
    throw ConfigurationError("SpectralSum: certified tail " + format_real(tail_) +
                                 " exceeds tail_tol " + format_real(cfg.tail_tol),
                             tail_);
  const double delta = kind == KernelKind::toeplitz ? toeplitz_shift_bound(m, tau) : 0.0;
  const std::vector<int> cand = annulus_modes(m, lam - W, lam + W + delta);
  const std::size_t nc = cand.size() / m;

  std::vector<long> nsq(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    long s = 0;
    for (int j = 0; j < m; ++j) s += long(cand[i * m + j]) * cand[i * m + j];
    nsq[i] = s;
  }
  // spectral data per distinct |k|^2
  std::vector<long> distinct(nsq);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<SpectralData> data(distinct.size());
  if (kind == KernelKind::toeplitz) {
    parallel_chunks(distinct.size(), 256, [&](std::size_t, std::size_t a, std::size_t b) {
      for (std::size_t i = a; i < b; ++i) data[i] = spectral_data(model, std::sqrt(double(distinct[i])), tau);
    });
  }
  for (std::size_t i = 0; i < nc; ++i) {
    const double r = std::sqrt(double(nsq[i]));
    double nu, logc;
    if (kind == KernelKind::smoothed) {
      nu = r;
      logc = -m * std::log(kTwoPi) - 2.0 * tau * r;
    } else {
      const auto it = std::lower_bound(distinct.begin(), distinct.end(), nsq[i]);
      const SpectralData& d = data[it - distinct.begin()];
      nu = d.mu;
      logc = -d.log_hardy;
    }
    if (std::abs(nu - lam) > W) continue;
    k_.insert(k_.end(), cand.begin() + i * m, cand.begin() + (i + 1) * m);
    nu_.push_back(nu);
    weight_.push_back((*chi_)(lam - nu));
    half_log_c_.push_back(0.5 * logc);
  }
}

std::vector<cplx> SpectralSum::eval_batch(
    const std::vector<TubePoint>& points,
    const std::vector<std::pair<std::size_t, std::size_t>>& pairs) const {
  const int m = model_.m;
  for (const auto& p : points)
    if (p.size() != static_cast<std::size_t>(m)) throw DimensionError("SpectralSum: point has wrong dimension");
  for (const auto& pr : pairs)
    if (pr.first >= points.size() || pr.second >= points.size())
      throw DomainError("SpectralSum: pair index out of range");
  const std::size_t n = weight_.size(), np = points.size(), nq = pairs.size();
  constexpr std::size_t chunk = 2048;
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  std::vector<std::vector<cplx>> partial(nchunks, std::vector<cplx>(nq, 0.0));
  parallel_chunks(n, chunk, [&](std::size_t c, std::size_t a, std::size_t b) {
    const std::size_t len = b - a;
    // E[p][i] = exp(half log c_i + i k_i . z_p)
    std::vector<cplx> E(np * len);
    for (std::size_t p = 0; p < np; ++p) {
      const TubePoint& z = points[p];
      for (std::size_t i = 0; i < len; ++i) {
        const int* k = &k_[(a + i) * m];
        double re = half_log_c_[a + i], im = 0.0;
        for (int j = 0; j < m; ++j) {
          re -= k[j] * z[j].imag();
          im += k[j] * z[j].real();
        }
        E[p * len + i] = std::polar(std::exp(re), im);
      }
    }
    auto& out = partial[c];
    for (std::size_t q = 0; q < nq; ++q) {
      const cplx* ea = &E[pairs[q].first * len];
      const cplx* eb = &E[pairs[q].second * len];
      cplx s = 0.0;
      for (std::size_t i = 0; i < len; ++i) s += weight_[a + i] * ea[i] * std::conj(eb[i]);
      out[q] = s;
    }
  });
  std::vector<cplx> result(nq, 0.0);
  for (const auto& part : partial)
    for (std::size_t q = 0; q < nq; ++q) result[q] += part[q];
  return result;
}

cplx SpectralSum::eval(std::span<const cplx> z, std::span<const cplx> w) const {
  const std::vector<TubePoint> pts{TubePoint(z.begin(), z.end()), TubePoint(w.begin(), w.end())};
  return eval_batch(pts, {{0, 1}})[0];
}

KernelValue smoothed_projection(const FlatModel& model, std::shared_ptr<const SmoothingFunction> chi,
                                std::span<const cplx> z, std::span<const cplx> w,
                                const KernelSumConfig& cfg) {
  SpectralSum s(KernelKind::smoothed, model, std::move(chi), cfg);
  return {s.eval(z, w), s.tail_bound()};
}

KernelValue toeplitz_localization(const FlatModel& model, std::shared_ptr<const SmoothingFunction> chi,
                                  std::span<const cplx> z, std::span<const cplx> w,
                                  const KernelSumConfig& cfg) {
  SpectralSum s(KernelKind::toeplitz, model, std::move(chi), cfg);
  return {s.eval(z, w), s.tail_bound()};
}

}  // namespace gtube
