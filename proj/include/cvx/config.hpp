#pragma once

#include <set>
#include <string>

#include "cvx/geometry.hpp"
#include "cvx/model.hpp"
#include "cvx/solver.hpp"

namespace cvx {

/// Validated run configuration.  Parsed from a line-oriented `key = value`
/// file ('#' starts a comment); unknown or duplicate keys are rejected.
struct RunConfig {
  std::string model = "quadratic_test";  // quadratic_test | rochet_chone | exp
  double q = 2.0;
  double gamma = 1.0;
  std::string gamma_table;  // optional path; overrides the constant

  double R = 1.0;
  Vec2 center{0, 0};
  std::string inner_shape = "disk";  // disk | square
  double r0 = 0.5;

  int n = 33;
  EpsSchedule schedule;  // eps0 = 2^-4, ratio = 0.5, count = 8
  NewtonConfig newton;
  double mu_min = 1e-6;
  double margin = 0.25;
  double psi = 1.0;
  unsigned seed = 0;
  std::string out_dir = "out";
  std::set<std::string> audits = {"g_identity", "linfty", "convexity", "penalty_decay",
                                  "keyest"};

  DomainSpec domain_spec() const;
  LagrangianModel make_model() const;
  /// Re-serialize the effective configuration (all keys, defaults applied).
  std::string echo() const;
};

/// Parses and validates a config file.  ParseError carries the line and key;
/// ValidationError the offending key.
RunConfig parse_config(const std::string& path);

/// Same, from an in-memory string (for tests).
RunConfig parse_config_text(const std::string& text);

}  // namespace cvx
