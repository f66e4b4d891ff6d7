#pragma once

#include <gtube/types.hpp>

#include <cstdint>
#include <map>
#include <string>

namespace gtube {

struct RunConfig {
  std::string model = "torus";  // circle | torus
  int dim = 2;
  double tau = 0.5;
  double eps = 3.0;
  RVec lambda_grid = {50, 71, 100, 141, 200, 283, 400};
  double rho = 0.8;
  int per_axis = 5;
  std::string kernel = "both";  // smoothed | toeplitz | both
  std::string out = ".";
  std::uint64_t seed = 12345;
  int threads = 0;              // 0: THREADS env or hardware concurrency
  double lambda_max = 20.0;     // spectrum subcommand
  double rel_tail = 1e-8;

  // key = value lines; '#' starts a comment. Unknown keys are errors.
  static RunConfig from_file(const std::string& path);
  void set(const std::string& key, const std::string& value);
  std::map<std::string, std::string> echo() const;
  void validate() const;
};

RVec parse_real_list(const std::string& s);
std::string format_real(double v);

}  // namespace gtube
