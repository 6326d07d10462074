#pragma once

#include <string>
#include <vector>

#include "cvx/audit.hpp"
#include "cvx/config.hpp"

namespace cvx {

/// CLI exit codes: 0 ok, 2 config error, 4 audit failure (solver errors are
/// mapped to 3 by the binary's top-level handler).
enum ExitCode : int { kOk = 0, kConfigError = 2, kSolverError = 3, kAuditFailure = 4 };

struct RunResult {
  int exit_code = kOk;
  std::vector<AuditOutcome> audits;
  std::vector<std::string> files_written;
};

/// Full pipeline: baseline once, the continuation sweep once, every enabled
/// audit; writes sweep.csv, audit.csv, field dumps, the SVG figures and the
/// effective-config echo into out_dir.
RunResult run_sweep(const RunConfig& cfg);

/// Single solve at the given eps (schedule head when eps <= 0).
RunResult run_solve(const RunConfig& cfg, double eps);

/// Baseline solve only.
RunResult run_baseline(const RunConfig& cfg);

/// Re-runs the sweep-level audits against a previously written output dir.
RunResult run_audit(const RunConfig& cfg, const std::string& input_dir);

/// Regenerates the SVG figures from a previously written output dir.  Needs
/// no configuration: the CSV dumps carry everything the figures use.
RunResult run_report(const std::string& input_dir, const std::string& out_dir);

}  // namespace cvx
