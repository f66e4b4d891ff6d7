#include <gtube/heisenberg.hpp>

#include <gtube/errors.hpp>

#include <cmath>
#include <string>

namespace gtube {

namespace {

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw DimensionError(std::string(what) + ": degree mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
}

}  // namespace

HeisenbergPoint group_mul(const HeisenbergPoint& a, const HeisenbergPoint& b) {
  require_same(a.zeta.size(), b.zeta.size(), "group_mul");
  HeisenbergPoint r;
  r.theta = a.theta + b.theta + 2.0 * std::imag(hdot(a.zeta, b.zeta));
  r.zeta.resize(a.zeta.size());
  for (std::size_t j = 0; j < a.zeta.size(); ++j) r.zeta[j] = a.zeta[j] + b.zeta[j];
  return r;
}

HeisenbergPoint group_inverse(const HeisenbergPoint& a) {
  HeisenbergPoint r{-a.theta, a.zeta};
  for (auto& z : r.zeta) z = -z;
  return r;
}

cplx model_szego_kernel(int m, const HeisenbergPoint& a, const HeisenbergPoint& b) {
  if (m < 1) throw DimensionError("model_szego_kernel: m must be >= 1");
  require_same(a.zeta.size(), static_cast<std::size_t>(m - 1), "model_szego_kernel");
  require_same(b.zeta.size(), static_cast<std::size_t>(m - 1), "model_szego_kernel");
  const cplx e = kI * (a.theta - b.theta) + hdot(a.zeta, b.zeta) - 0.5 * norm_sq(a.zeta) -
                 0.5 * norm_sq(b.zeta);
  return std::pow(kPi, -(m - 1)) * std::exp(e);
}

SiegelPoint affine_action(const HeisenbergPoint& h, const SiegelPoint& p) {
  if (p.zeta.empty()) throw DimensionError("affine_action: empty Siegel point");
  require_same(h.zeta.size() + 1, p.zeta.size(), "affine_action");
  SiegelPoint r = p;
  cplx cross = 0.0;
  for (std::size_t j = 0; j < h.zeta.size(); ++j) {
    cross += p.zeta[j + 1] * std::conj(h.zeta[j]);
    r.zeta[j + 1] += h.zeta[j];
  }
  r.zeta[0] += h.theta + kI * norm_sq(h.zeta) + 2.0 * kI * cross;
  return r;
}

double siegel_defect(const SiegelPoint& p) {
  if (p.zeta.empty()) throw DimensionError("siegel_defect: empty Siegel point");
  double s = 0.0;
  for (std::size_t j = 1; j < p.zeta.size(); ++j) s += std::norm(p.zeta[j]);
  return p.zeta[0].imag() - s;
}

SiegelRegion siegel_classify(const SiegelPoint& p, double tol) {
  const double d = siegel_defect(p);
  if (std::abs(d) <= tol) return SiegelRegion::boundary;
  return d > 0 ? SiegelRegion::interior : SiegelRegion::exterior;
}

const char* to_string(SiegelRegion r) {
  switch (r) {
    case SiegelRegion::interior: return "interior";
    case SiegelRegion::boundary: return "boundary";
    case SiegelRegion::exterior: return "exterior";
  }
  return "?";
}

cplx theorem_leading_factor(int m, double tau, double theta, double phi,
                            std::span<const cplx> u, std::span<const cplx> v) {
  if (!(tau > 0)) throw DomainError("theorem_leading_factor: tau must be positive");
  if (m < 1) throw DimensionError("theorem_leading_factor: m must be >= 1");
  require_same(u.size(), static_cast<std::size_t>(m - 1), "theorem_leading_factor");
  require_same(v.size(), static_cast<std::size_t>(m - 1), "theorem_leading_factor");
  const cplx e = 0.5 * kI * (theta - phi) - 0.5 * norm_sq(u) - 0.5 * norm_sq(v) + hdot(u, v);
  return std::exp(e / tau);
}

}  // namespace gtube
