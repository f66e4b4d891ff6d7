#pragma once

#include <gtube/run_config.hpp>
#include <gtube/serialization.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace gtube {

struct SuiteFailure {
  std::string suite;
  std::string kind;
  std::string message;
};

// Each command writes its outputs under cfg.out and returns the asserted
// suites that failed (empty on success).
std::vector<SuiteFailure> cmd_spectrum(const RunConfig& cfg, std::ostream& log);
std::vector<SuiteFailure> cmd_phase_report(const RunConfig& cfg, std::ostream& log);
std::vector<SuiteFailure> cmd_scaling_study(const RunConfig& cfg, std::ostream& log);
std::vector<SuiteFailure> cmd_chart_check(const RunConfig& cfg, std::ostream& log);
std::vector<SuiteFailure> cmd_kernel_eval(const RunConfig& cfg, std::ostream& log);

// Entry point: 0 when every asserted suite passes, 1 on suite failures, 2 on
// usage or runtime errors. Failures are recorded in <out>/failures.json.
int run_cli(int argc, char** argv);

}  // namespace gtube
