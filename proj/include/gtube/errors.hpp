#pragma once

#include <stdexcept>
#include <string>

namespace gtube {

// Base of every library exception; `kind()` is the machine-readable tag used
// in CLI failure manifests.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

struct DimensionError : Error {
  explicit DimensionError(const std::string& w) : Error("dimension", w) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error("domain", w) {}
};
// Complexified distance requested off the near-diagonal branch.
struct BranchError : Error {
  explicit BranchError(const std::string& w) : Error("branch", w) {}
};
// A quadrature or iteration did not reach its tolerance; `achieved` holds the
// last error estimate.
struct AccuracyError : Error {
  AccuracyError(const std::string& w, double achieved_tol)
      : Error("accuracy", w), achieved(achieved_tol) {}
  double achieved;
};
struct ChartValidityError : Error {
  explicit ChartValidityError(const std::string& w) : Error("chart_validity", w) {}
};
struct DegenerateGeometryError : Error {
  explicit DegenerateGeometryError(const std::string& w) : Error("degenerate_geometry", w) {}
};
// Tail of a windowed spectral sum could not be certified below the requested
// tolerance. `smallest_certifiable` is the bound actually achieved.
struct ConfigurationError : Error {
  ConfigurationError(const std::string& w, double smallest)
      : Error("configuration", w), smallest_certifiable(smallest) {}
  explicit ConfigurationError(const std::string& w)
      : Error("configuration", w), smallest_certifiable(0.0) {}
  double smallest_certifiable;
};
struct FitError : Error {
  explicit FitError(const std::string& w) : Error("fit", w) {}
};
struct UnsupportedPhaseError : Error {
  explicit UnsupportedPhaseError(const std::string& w) : Error("unsupported_phase", w) {}
};
struct DegenerateNormalizationError : Error {
  explicit DegenerateNormalizationError(const std::string& w)
      : Error("degenerate_normalization", w) {}
};

}  // namespace gtube
