#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "cvx/report.hpp"
#include "cvx/run.hpp"

using namespace cvx;

namespace {

DomainSpec unit_disk_spec() {
  DomainSpec spec;
  spec.inner.radius = 0.5;
  spec.phi = BoundaryData::quadratic();
  return spec;
}

SolveReport sample_report(double eps) {
  SolveReport r;
  r.eps = eps;
  r.iters = 7;
  r.final_grad_norm = 3.2e-9;
  r.plain_j = 0.123456789012345;
  r.energy.total = -0.5;
  r.min_det = 0.25;
  r.penalty_quartic = 1e-6;
  r.keyest_monitor = 2e-3;
  r.el_residual = 0.75;
  r.err_K_vs_baseline = 0.01;
  r.wall_ms = 12.5;
  return r;
}

}  // namespace

TEST_CASE("sweep csv: schema, determinism, round trip") {
  const std::vector<SolveReport> reports = {sample_report(0.0625), sample_report(0.03125)};
  const std::string a = csv::sweep_table(reports);
  const std::string b = csv::sweep_table(reports);
  CHECK(a == b);  // byte-identical on identical input
  CHECK(a.rfind(csv::kSweepSchema, 0) == 0);

  const std::vector<SolveReport> back = csv::parse_sweep_table(a);
  REQUIRE(back.size() == 2);
  CHECK(back[0].eps == reports[0].eps);
  CHECK(back[0].plain_j == reports[0].plain_j);  // 17 significant digits survive
  CHECK(back[1].penalty_quartic == reports[1].penalty_quartic);
  CHECK_THROWS_AS(csv::parse_sweep_table("nonsense\n"), ParseError);
}

TEST_CASE("field csv round trip preserves values and masks") {
  const DomainSpec spec = unit_disk_spec();
  const Grid g = build_grid(spec, 17);
  const ScalarField u = ScalarField::sample(g, [](Vec2 x) { return std::sin(3 * x.x) + x.y; });
  const std::string table = csv::field_table(u);
  const ScalarField back = csv::parse_field_table(table, g);
  for (int k = 0; k < g.size(); ++k)
    if (g.is_inside(k)) CHECK(back[k] == u[k]);
}

TEST_CASE("svg emission") {
  const DomainSpec spec = unit_disk_spec();
  const Grid g = build_grid(spec, 17);

  SUBCASE("constant field gives a single-colour heatmap") {
    const ScalarField u(g, 2.0);
    const std::string s = svg::heatmap(u, "const");
    CHECK(s.find("<svg") != std::string::npos);
    CHECK(s.rfind("</svg>\n") == s.size() - 7);
    // every painted cell carries the same fill
    const std::size_t first = s.find("fill=\"#", s.find("<rect x"));
    const std::string color = s.substr(first + 6, 7);
    std::size_t pos = first, count = 0;
    while ((pos = s.find("fill=\"#", pos + 1)) != std::string::npos) {
      CHECK(s.substr(pos + 6, 7) == color);
      ++count;
    }
    CHECK(count > 100);
  }

  SUBCASE("decay series makes a polyline with the points") {
    svg::Series ser{"decay", {}, {}};
    for (int k = 0; k < 8; ++k) {
      ser.x.push_back(std::pow(0.5, 4 + k));
      ser.y.push_back(1e-3 * std::pow(0.5, 2 * (4 + k)));
    }
    const std::string s = svg::line_plot({ser}, "t", "eps", "pq", true, true);
    CHECK(s.find("<polyline") != std::string::npos);
    std::size_t pos = 0, circles = 0;
    while ((pos = s.find("<circle", pos + 1)) != std::string::npos) ++circles;
    CHECK(circles == 8);
  }

  SUBCASE("byte-identical on repeated invocation") {
    const ScalarField u = ScalarField::sample(g, [](Vec2 x) { return x.norm2(); });
    CHECK(svg::heatmap(u, "u") == svg::heatmap(u, "u"));
  }
}

TEST_CASE("run_sweep writes the full bundle and exits clean") {
  RunConfig cfg = parse_config_text(
      "model = quadratic_test\nn = 17\ncount = 4\neps0 = 0.0625\n");
  cfg.out_dir = (std::filesystem::temp_directory_path() / "cvxmin_test_run").string();
  std::filesystem::remove_all(cfg.out_dir);

  const RunResult res = run_sweep(cfg);
  CHECK(res.exit_code == 0);
  for (const char* name :
       {"sweep.csv", "audit.csv", "baseline.csv", "effective_config.txt", "heatmap_u.svg",
        "err_vs_eps.svg", "penalty_decay.svg", "u_eps_00.csv", "u_eps_03.csv"}) {
    CHECK(std::filesystem::exists(std::filesystem::path(cfg.out_dir) / name));
  }
  for (const AuditOutcome& a : res.audits) CHECK(a.passed);

  // Determinism across a rerun: identical sweep and audit tables.
  const std::string sweep1 = read_text_file(cfg.out_dir + "/sweep.csv");
  RunConfig cfg2 = cfg;
  cfg2.out_dir += "_2";
  std::filesystem::remove_all(cfg2.out_dir);
  run_sweep(cfg2);
  const std::string sweep2 = read_text_file(cfg2.out_dir + "/sweep.csv");
  // wall_ms differs between runs; compare all other columns
  auto strip_wall = [](std::string s) {
    std::string out;
    for (std::size_t i = 0; i < s.size();) {
      std::size_t nl = s.find('\n', i);
      if (nl == std::string::npos) nl = s.size();
      std::string line = s.substr(i, nl - i);
      const std::size_t comma = line.rfind(',');
      out += line.substr(0, comma);
      out += '\n';
      i = nl + 1;
    }
    return out;
  };
  CHECK(strip_wall(sweep1) == strip_wall(sweep2));

  // The audit subcommand reproduces passing audits from the written bundle.
  const RunResult audit_res = run_audit(cfg2, cfg.out_dir);
  CHECK(audit_res.exit_code == 0);
  const RunResult report_res = run_report(cfg.out_dir, cfg2.out_dir);
  CHECK(report_res.exit_code == 0);

  std::filesystem::remove_all(cfg.out_dir);
  std::filesystem::remove_all(cfg2.out_dir);
}

TEST_CASE("run_solve single-eps bundle") {
  RunConfig cfg = parse_config_text("model = quadratic_test\nn = 17\n");
  cfg.out_dir = (std::filesystem::temp_directory_path() / "cvxmin_test_solve").string();
  std::filesystem::remove_all(cfg.out_dir);
  const RunResult res = run_solve(cfg, 0.03125);
  CHECK(res.exit_code == 0);
  CHECK(std::filesystem::exists(std::filesystem::path(cfg.out_dir) / "solution.csv"));
  std::filesystem::remove_all(cfg.out_dir);
}

TEST_CASE("audit subcommand flags a doctored sweep with exit code 4") {
  RunConfig cfg = parse_config_text("model = quadratic_test\nn = 17\ncount = 4\n");
  cfg.out_dir = (std::filesystem::temp_directory_path() / "cvxmin_test_exit4").string();
  std::filesystem::remove_all(cfg.out_dir);

  // A stalled penalty column: constant penalty_quartic across eps.
  std::vector<SolveReport> reports;
  for (int k = 0; k < 4; ++k) {
    SolveReport r = sample_report(std::pow(0.5, 4 + k));
    r.penalty_quartic = 1e-3;
    r.keyest_monitor = 1e-2;
    reports.push_back(r);
  }
  std::filesystem::create_directories(cfg.out_dir);
  write_text_file(cfg.out_dir + "/sweep.csv", csv::sweep_table(reports));

  const RunResult res = run_audit(cfg, cfg.out_dir);
  CHECK(res.exit_code == kAuditFailure);
  bool saw_decay_fail = false;
  for (const AuditOutcome& a : res.audits)
    if (a.name == "penalty_decay" && !a.passed) saw_decay_fail = true;
  CHECK(saw_decay_fail);
  std::filesystem::remove_all(cfg.out_dir);
}

TEST_CASE("run_solve rejects an out-of-range eps override") {
  RunConfig cfg = parse_config_text("model = quadratic_test\nn = 17\n");
  cfg.out_dir = (std::filesystem::temp_directory_path() / "cvxmin_test_badeps").string();
  CHECK_THROWS_AS(run_solve(cfg, 1.5), ValidationError);
  std::filesystem::remove_all(cfg.out_dir);
}
