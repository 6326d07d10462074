// cvxmin: approximates minimizers of convex variational problems under a
// convexity constraint by continuation on a log-det-barrier functional with
// a growth-adapted convex penalty, cross-checked against a directly
// constrained baseline solve.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>

#include "cvx/run.hpp"

namespace {

cvx::RunConfig load(const std::string& config_path, const std::string& out_override) {
  cvx::RunConfig cfg = cvx::parse_config(config_path);
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (const char* env = std::getenv("CVXMIN_OUT"); env && *env && out_override.empty())
    cfg.out_dir = env;
  return cfg;
}

int finish(const cvx::RunResult& res) {
  for (const cvx::AuditOutcome& a : res.audits)
    std::printf("audit %-16s %s  measured=%.6g threshold=%.6g  %s\n", a.name.c_str(),
                a.passed ? "PASS" : "FAIL", a.measured, a.threshold, a.context.c_str());
  for (const std::string& f : res.files_written) std::printf("wrote %s\n", f.c_str());
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convexity-constrained variational solver"};
  app.require_subcommand(1);

  std::string config_path, input_dir, out_override;
  double eps = 0;

  CLI::App* solve = app.add_subcommand("solve", "single solve at one eps");
  solve->add_option("--config", config_path)->required();
  solve->add_option("--eps", eps, "override eps (defaults to eps0)");
  solve->add_option("--out", out_override);

  CLI::App* sweep = app.add_subcommand("sweep", "baseline + continuation sweep + audits");
  sweep->add_option("--config", config_path)->required();
  sweep->add_option("--out", out_override);

  CLI::App* baseline = app.add_subcommand("baseline", "hard-constrained baseline only");
  baseline->add_option("--config", config_path)->required();
  baseline->add_option("--out", out_override);

  CLI::App* audit = app.add_subcommand("audit", "re-run audits on existing outputs");
  audit->add_option("--config", config_path)->required();
  audit->add_option("--input", input_dir)->required();
  audit->add_option("--out", out_override);

  CLI::App* report = app.add_subcommand("report", "regenerate figures from existing outputs");
  report->add_option("--input", input_dir)->required();
  report->add_option("--out", out_override);

  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) return finish(cvx::run_report(input_dir, out_override));
    const cvx::RunConfig cfg = load(config_path, out_override);
    if (solve->parsed()) return finish(cvx::run_solve(cfg, eps));
    if (sweep->parsed()) return finish(cvx::run_sweep(cfg));
    if (baseline->parsed()) return finish(cvx::run_baseline(cfg));
    if (audit->parsed()) return finish(cvx::run_audit(cfg, input_dir));
  } catch (const cvx::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return cvx::kConfigError;
  } catch (const cvx::SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return cvx::kSolverError;
  } catch (const cvx::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return cvx::kConfigError;
  }
  return 0;
}
