#include "cvx/run.hpp"

#include <cstdio>
#include <filesystem>
#include <random>

#include "cvx/report.hpp"

namespace cvx {

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void emit(RunResult& res, const std::string& path, const std::string& content) {
  write_text_file(path, content);
  res.files_written.push_back(path);
}

std::string out_dir_ready(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  return cfg.out_dir;
}

std::vector<double> identity_samples(unsigned seed) {
  // Deterministic spread plus a seeded handful of random abscissae.
  std::vector<double> xs = linspace(-10.0, 10.0, 201);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-10.0, 10.0);
  for (int i = 0; i < 55; ++i) xs.push_back(uni(rng));
  return xs;
}

std::vector<double> mu_ladder(double mu_min) {
  std::vector<double> mus;
  for (double mu = 1e-1; mu > mu_min; mu *= 0.1) mus.push_back(mu);
  mus.push_back(mu_min);
  return mus;
}

struct Problem {
  DomainSpec spec;
  Grid grid;
  LagrangianModel model;
  PenaltyG pen;
  ScalarField psi;
  std::vector<int> compact_mask;
};

Problem make_problem(const RunConfig& cfg) {
  Problem p;
  p.spec = cfg.domain_spec();
  p.grid = build_grid(p.spec, cfg.n);
  p.model = cfg.make_model();
  p.pen = build_penalty(p.model.envelopes);
  p.psi = ScalarField(p.grid, cfg.psi);
  p.compact_mask = compact_subset_mask(p.grid, cfg.margin);
  return p;
}

void collect(RunResult& res, const AuditOutcome& a) { res.audits.push_back(a); }

bool audit_enabled(const RunConfig& cfg, const std::string& name) {
  return cfg.audits.count(name) > 0;
}

}  // namespace

RunResult run_sweep(const RunConfig& cfg) {
  RunResult res;
  const std::string dir = out_dir_ready(cfg);
  Problem p = make_problem(cfg);
  emit(res, join(dir, "effective_config.txt"), cfg.echo());

  // Hard-constrained oracle first; the sweep reports errors against it.
  BaselineResult base = baseline_minimize(p.grid, p.spec, p.model, mu_ladder(cfg.mu_min),
                                          cfg.newton);
  emit(res, join(dir, "baseline.csv"), csv::field_table(base.u));

  SweepOptions opts;
  opts.baseline = &base.u;
  opts.compact_mask = &p.compact_mask;
  opts.psi = &p.psi;
  SweepReport sweep =
      continuation_sweep(p.spec, p.grid, p.model, p.pen, cfg.schedule, cfg.newton, opts);

  emit(res, join(dir, "sweep.csv"), csv::sweep_table(sweep.reports));
  for (std::size_t i = 0; i < sweep.solutions.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "u_eps_%02zu.csv", i);
    emit(res, join(dir, name), csv::field_table(sweep.solutions[i]));
  }

  // Audits.
  if (audit_enabled(cfg, "g_identity"))
    collect(res, check_G_identity(p.pen, identity_samples(cfg.seed)));
  if (audit_enabled(cfg, "linfty"))
    for (std::size_t i = 0; i < sweep.solutions.size(); ++i) {
      AuditOutcome a = check_linfty(sweep.solutions[i], p.spec);
      a.context += " (eps " + std::to_string(sweep.reports[i].eps) + ")";
      collect(res, a);
    }
  if (audit_enabled(cfg, "convexity"))
    for (std::size_t i = 0; i < sweep.solutions.size(); ++i) {
      AuditOutcome a = check_convexity(sweep.solutions[i]);
      a.context += " (eps " + std::to_string(sweep.reports[i].eps) + ")";
      collect(res, a);
    }
  if (audit_enabled(cfg, "penalty_decay")) {
    if (sweep.reports.size() >= 4) {
      collect(res, check_penalty_decay(sweep));
    } else {
      AuditOutcome skip;
      skip.name = "penalty_decay";
      skip.passed = true;
      skip.context = "skipped: fewer than 4 sweep points";
      collect(res, skip);
    }
  }
  if (audit_enabled(cfg, "keyest")) {
    if (sweep.reports.size() >= 2) {
      collect(res, check_keyest_bounded(sweep));
    } else {
      AuditOutcome skip;
      skip.name = "keyest_bounded";
      skip.passed = true;
      skip.context = "skipped: fewer than 2 sweep points";
      collect(res, skip);
    }
  }
  emit(res, join(dir, "audit.csv"), csv::audit_table(res.audits));

  // Figures.
  emit(res, join(dir, "heatmap_u.svg"),
       svg::heatmap(sweep.solutions.back(), "u at smallest eps"));
  svg::Series err{"err_K_vs_baseline", {}, {}};
  svg::Series decay{"penalty_quartic", {}, {}};
  for (const SolveReport& r : sweep.reports) {
    err.x.push_back(r.eps);
    err.y.push_back(r.err_K_vs_baseline);
    decay.x.push_back(r.eps);
    decay.y.push_back(r.penalty_quartic);
  }
  emit(res, join(dir, "err_vs_eps.svg"),
       svg::line_plot({err}, "error vs baseline on K", "eps", "sup error", true, true));
  emit(res, join(dir, "penalty_decay.svg"),
       svg::line_plot({decay}, "quartic penalty decay", "eps", "integral", true, true));

  for (const AuditOutcome& a : res.audits)
    if (!a.passed) res.exit_code = kAuditFailure;
  return res;
}

RunResult run_solve(const RunConfig& cfg, double eps) {
  RunResult res;
  const std::string dir = out_dir_ready(cfg);
  Problem p = make_problem(cfg);
  emit(res, join(dir, "effective_config.txt"), cfg.echo());

  const double e = eps > 0 ? eps : cfg.schedule.eps0;
  if (!(e > 0 && e < 1)) throw ValidationError("eps", "must be in (0,1)");
  const DefiningFunction rho = DefiningFunction::disk(p.spec.center, p.spec.radius);
  const ScalarField phi_eps = ScalarField::sample(p.grid, lifted_boundary(p.spec, rho, e, 2));

  NewtonResult nr = newton_minimize(feasible_start(p.grid, p.spec), e, p.model, p.pen,
                                    phi_eps, cfg.newton);
  nr.report.plain_j = plain_J(nr.u, p.model);
  nr.report.keyest_monitor = keyest_monitor_value(p.grid, p.pen, nr.u, phi_eps, e);
  {
    const AbreuResidual ar = abreu_residual(nr.u, e, p.model, p.pen, phi_eps, p.psi);
    std::vector<double> mags;
    for (int k : p.grid.interior_nodes) mags.push_back(std::abs(ar.lma_residual[k]));
    nr.report.el_residual = median(std::move(mags));
  }

  emit(res, join(dir, "solution.csv"), csv::field_table(nr.u));
  emit(res, join(dir, "sweep.csv"), csv::sweep_table({nr.report}));
  emit(res, join(dir, "heatmap_u.svg"), svg::heatmap(nr.u, "u"));

  if (audit_enabled(cfg, "g_identity"))
    collect(res, check_G_identity(p.pen, identity_samples(cfg.seed)));
  if (audit_enabled(cfg, "linfty")) collect(res, check_linfty(nr.u, p.spec));
  if (audit_enabled(cfg, "convexity")) collect(res, check_convexity(nr.u));
  emit(res, join(dir, "audit.csv"), csv::audit_table(res.audits));

  for (const AuditOutcome& a : res.audits)
    if (!a.passed) res.exit_code = kAuditFailure;
  return res;
}

RunResult run_baseline(const RunConfig& cfg) {
  RunResult res;
  const std::string dir = out_dir_ready(cfg);
  Problem p = make_problem(cfg);
  emit(res, join(dir, "effective_config.txt"), cfg.echo());

  BaselineResult base = baseline_minimize(p.grid, p.spec, p.model, mu_ladder(cfg.mu_min),
                                          cfg.newton);
  emit(res, join(dir, "baseline.csv"), csv::field_table(base.u));
  emit(res, join(dir, "heatmap_baseline.svg"), svg::heatmap(base.u, "baseline"));
  if (audit_enabled(cfg, "convexity")) collect(res, check_convexity(base.u));
  emit(res, join(dir, "audit.csv"), csv::audit_table(res.audits));
  for (const AuditOutcome& a : res.audits)
    if (!a.passed) res.exit_code = kAuditFailure;
  return res;
}

RunResult run_audit(const RunConfig& cfg, const std::string& input_dir) {
  RunResult res;
  const std::string dir = out_dir_ready(cfg);
  Problem p = make_problem(cfg);

  SweepReport sweep;
  sweep.reports = csv::parse_sweep_table(read_text_file(join(input_dir, "sweep.csv")));
  for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "u_eps_%02zu.csv", i);
    const std::string path = join(input_dir, name);
    if (fs::exists(path))
      sweep.solutions.push_back(csv::parse_field_table(read_text_file(path), p.grid));
  }

  if (audit_enabled(cfg, "g_identity"))
    collect(res, check_G_identity(p.pen, identity_samples(cfg.seed)));
  for (std::size_t i = 0; i < sweep.solutions.size(); ++i) {
    if (audit_enabled(cfg, "linfty"))
      collect(res, check_linfty(sweep.solutions[i], p.spec));
    if (audit_enabled(cfg, "convexity"))
      collect(res, check_convexity(sweep.solutions[i]));
  }
  if (audit_enabled(cfg, "penalty_decay") && sweep.reports.size() >= 4)
    collect(res, check_penalty_decay(sweep));
  if (audit_enabled(cfg, "keyest") && sweep.reports.size() >= 2)
    collect(res, check_keyest_bounded(sweep));

  emit(res, join(dir, "audit.csv"), csv::audit_table(res.audits));
  for (const AuditOutcome& a : res.audits)
    if (!a.passed) res.exit_code = kAuditFailure;
  return res;
}

RunResult run_report(const std::string& input_dir, const std::string& out_dir) {
  RunResult res;
  const std::string dir = out_dir.empty() ? input_dir : out_dir;
  fs::create_directories(dir);
  const std::vector<SolveReport> reports =
      csv::parse_sweep_table(read_text_file(join(input_dir, "sweep.csv")));

  svg::Series err{"err_K_vs_baseline", {}, {}};
  svg::Series decay{"penalty_quartic", {}, {}};
  for (const SolveReport& r : reports) {
    err.x.push_back(r.eps);
    err.y.push_back(r.err_K_vs_baseline);
    decay.x.push_back(r.eps);
    decay.y.push_back(r.penalty_quartic);
  }
  emit(res, join(dir, "err_vs_eps.svg"),
       svg::line_plot({err}, "error vs baseline on K", "eps", "sup error", true, true));
  emit(res, join(dir, "penalty_decay.svg"),
       svg::line_plot({decay}, "quartic penalty decay", "eps", "integral", true, true));

  // Heatmap from the last field dump when present.
  for (int i = 99; i >= 0; --i) {
    char name[32];
    std::snprintf(name, sizeof name, "u_eps_%02d.csv", i);
    const std::string path = join(input_dir, name);
    if (fs::exists(path)) {
      int n = 0;
      const auto cells = csv::parse_field_cells(read_text_file(path), n);
      emit(res, join(dir, "heatmap_u.svg"),
           svg::heatmap_cells(n, cells, "u at smallest eps"));
      break;
    }
  }
  return res;
}

}  // namespace cvx
