#include <gtube/flat_model.hpp>

#include <gtube/errors.hpp>
#include <gtube/quadrature.hpp>

#include <cmath>
#include <functional>

namespace gtube {

FlatModel FlatModel::torus(int m) {
  if (m < 1) throw DimensionError("FlatModel: dimension must be >= 1");
  return {m, m == 1 ? Kind::circle : Kind::torus};
}

FlatModel FlatModel::from_name(const std::string& name, int m) {
  if (name == "circle") {
    if (m != 1) throw DimensionError("circle model requires dim = 1");
    return circle();
  }
  if (name == "torus") return torus(m);
  throw DomainError("unknown model '" + name + "'");
}

double LatticeMode::eigenvalue() const { return std::sqrt(static_cast<double>(norm_sq())); }

TubePoint BoundaryPoint::z() const {
  TubePoint z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = {x[j], y[j]};
  return z;
}

double BoundaryPoint::radius() const { return std::sqrt(norm_sq(y)); }

BoundaryPoint BoundaryPoint::from_tube(const TubePoint& z) {
  BoundaryPoint p;
  for (auto v : z) {
    p.x.push_back(v.real());
    p.y.push_back(v.imag());
  }
  return p;
}

double wrap_angle(double a) {
  double r = std::fmod(a + kPi, kTwoPi);
  if (r < 0) r += kTwoPi;
  r -= kPi;
  return r >= kPi ? r - kTwoPi : r;
}

std::vector<LatticeMode> enumerate_modes(const FlatModel& model, double Lambda) {
  std::vector<LatticeMode> out;
  if (Lambda < 0) return out;
  const int m = model.m;
  const double L2 = Lambda * Lambda;
  std::vector<int> k(m, 0);
  // odometer in lexicographic order, pruning on the partial norm
  std::function<void(int, double)> rec = [&](int j, double partial) {
    if (j == m) {
      out.push_back({k});
      return;
    }
    const int lim = static_cast<int>(std::floor(std::sqrt(std::max(0.0, L2 - partial))));
    for (int v = -lim; v <= lim; ++v) {
      k[j] = v;
      rec(j + 1, partial + double(v) * v);
    }
  };
  rec(0, 0.0);
  return out;
}

long long count_modes(int m, double Lambda) {
  if (Lambda < 0) return 0;
  const double L2 = Lambda * Lambda;
  std::function<long long(int, double)> rec = [&](int j, double partial) -> long long {
    const int lim = static_cast<int>(std::floor(std::sqrt(std::max(0.0, L2 - partial))));
    if (j == m - 1) return 2LL * lim + 1;
    long long s = 0;
    for (int v = -lim; v <= lim; ++v) s += rec(j + 1, partial + double(v) * v);
    return s;
  };
  return rec(0, 0.0);
}

cplx complexified_eigenfunction(const LatticeMode& mode, std::span<const cplx> z) {
  if (mode.k.size() != z.size()) throw DimensionError("complexified_eigenfunction: size mismatch");
  cplx e = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) e += double(mode.k[j]) * z[j];
  return std::pow(kTwoPi, -0.5 * double(z.size())) * std::exp(kI * e);
}

cplx complexified_distance_sq(const FlatModel& model, std::span<const cplx> z,
                              std::span<const cplx> w) {
  if (z.size() != static_cast<std::size_t>(model.m) || w.size() != z.size())
    throw DimensionError("complexified_distance_sq: size mismatch");
  cplx s = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double dx = z[j].real() - w[j].real();
    if (!(std::abs(dx) < kPi))
      throw BranchError("complexified_distance_sq: |Re z_" + std::to_string(j) +
                        " - Re w_" + std::to_string(j) + "| >= pi (off the near-diagonal branch)");
    const cplx d = z[j] - std::conj(w[j]);
    s += d * d;
  }
  return s;
}

double grauert_sqrt_rho(const FlatModel& model, std::span<const cplx> z) {
  const cplx r2 = complexified_distance_sq(model, z, z);
  // r2 = -4|y|^2; the principal root gives 2i|y|
  return std::real(std::sqrt(r2) / (2.0 * kI));
}

BoundaryPoint boundary_flow(const FlatModel& model, double t, const BoundaryPoint& p,
                            int orientation) {
  if (p.x.size() != static_cast<std::size_t>(model.m) || p.y.size() != p.x.size())
    throw DimensionError("boundary_flow: size mismatch");
  if (orientation != 1 && orientation != -1) throw DomainError("boundary_flow: orientation must be +-1");
  const double r = p.radius();
  if (r == 0.0) throw DegenerateGeometryError("boundary_flow: |y| = 0, no flow direction");
  BoundaryPoint q = p;
  for (std::size_t j = 0; j < q.x.size(); ++j)
    q.x[j] = wrap_angle(p.x[j] + orientation * t * p.y[j] / r);
  return q;
}

SphereMoments sphere_exp_moments(int m, double a) {
  if (m < 1) throw DimensionError("sphere_exp_moments: m must be >= 1");
  if (a < 0) throw DomainError("sphere_exp_moments: a must be >= 0");
  SphereMoments out;
  if (m == 1) {
    // S^0 = {+-1} with counting measure
    out.log_mass = a + std::log1p(std::exp(-2.0 * a));
    out.gap = 2.0 * std::exp(-2.0 * a) / (1.0 + std::exp(-2.0 * a));
    return out;
  }
  // Polar angle from the maximising direction: weight e^{a} e^{-a(1-cos)} sin^{m-2}.
  const double p = m - 2;
  auto w = [&](double th) {
    const double s = std::sin(0.5 * th);
    return std::exp(-2.0 * a * s * s) * std::pow(std::sin(th), p);
  };
  auto wv = [&](double th) {
    const double s = std::sin(0.5 * th);
    return 2.0 * s * s * w(th);
  };
  const double split = std::min(kPi, 12.0 / std::sqrt(std::max(a, 1.0)));
  auto piece = [&](auto&& f) {
    double v = integrate<double>(f, 0.0, split, 1e-300, 1e-14, 4000).value;
    if (split < kPi) v += integrate<double>(f, split, kPi, 1e-300, 1e-14, 4000).value;
    return v;
  };
  const double I0 = piece(w);
  const double I1 = piece(wv);
  const double area = 2.0 * std::pow(kPi, 0.5 * (m - 1)) / std::tgamma(0.5 * (m - 1));
  out.log_mass = a + std::log(area * I0);
  out.gap = I1 / I0;
  return out;
}

double log_hardy_norm_sq(const FlatModel& model, double knorm, double tau) {
  if (!(tau > 0)) throw DomainError("hardy_norm_sq: tau must be positive");
  const int m = model.m;
  return m * std::log(tau * kTwoPi) + sphere_exp_moments(m, 2.0 * tau * knorm).log_mass;
}

double hardy_norm_sq(const FlatModel& model, const LatticeMode& k, double tau) {
  if (k.k.size() != static_cast<std::size_t>(model.m)) throw DimensionError("hardy_norm_sq: size mismatch");
  return std::exp(log_hardy_norm_sq(model, k.eigenvalue(), tau));
}

}  // namespace gtube
