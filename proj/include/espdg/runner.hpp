#pragma once

#include <string>

#include "espdg/cases.hpp"

namespace espdg {

struct RunResult {
  int exit_code = 0;       // 0 clean, 2 non-finite solution
  double t_end = 0.0;
  long steps = 0;
  double final_entropy = 0.0;
  double final_velocity_norm = 0.0;
  double max_entropy = 0.0;
  std::string out_dir;
};

/// Drives the time loop with cadence-based diagnostics, snapshots, and a
/// run-summary manifest. On a non-finite state the last good snapshot is
/// persisted and the exit code is 2.
RunResult run_case(const CaseConfig &cfg);

}  // namespace espdg
