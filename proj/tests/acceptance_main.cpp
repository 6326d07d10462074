// Acceptance suite: runs every gate criterion end to end and prints one
// PASS/FAIL line per criterion.  Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <random>
#include <vector>

#include "cvx/audit.hpp"
#include "cvx/run.hpp"

using namespace cvx;

namespace {

struct Criterion {
  std::string id;
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

DomainSpec quadratic_spec() {
  DomainSpec spec;
  spec.inner.radius = 0.5;
  spec.phi = BoundaryData::quadratic();
  return spec;
}

double u_star(Vec2 x) { return std::max(0.125, 0.5 * x.norm2()); }

// ── criterion 1: penalty identity suite ──────────────────────────────────

Criterion criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  Criterion c;
  c.id = "C1";

  GrowthEnvelope trivial;
  trivial.f0 = trivial.g0 = trivial.f1 = trivial.g1 = trivial.f2 = trivial.g2 = trivial.f3 =
      trivial.g3 = Envelope::constant(1.0);

  struct Named {
    const char* name;
    PenaltyG pen;
  };
  const std::vector<Named> sets = {
      {"quadratic_test", build_penalty(quadratic_test_model().envelopes)},
      {"rochet_chone", build_penalty(rochet_chone(2.0, GammaField::constant(1.0)).envelopes)},
      {"exp", build_penalty(exp_lagrangian().envelopes)},
      {"trivial", build_penalty(trivial)},
  };

  double worst = 0;
  bool ineq_ok = true;
  const std::vector<double> xs = linspace(-10.0, 10.0, 1000);
  for (const Named& s : sets) {
    for (double x : xs) {
      const double a = s.pen.Gp(x);
      const double b = 2 * x * s.pen.H(x * x);
      if (a != b) worst = std::max(worst, std::abs(a - b) / (1 + std::abs(a)));
      // H(t) >= t and G'(x) x >= 2 x^4, exact (infinities compare correctly).
      if (!(s.pen.H(x * x) >= x * x)) ineq_ok = false;
      const double gx = a * x;
      if (!(gx >= 2 * x * x * x * x) && std::isfinite(gx)) ineq_ok = false;
      if (std::isnan(gx) && x != 0.0) ineq_ok = false;
    }
  }
  const double dt = seconds_since(t0);
  c.pass = worst <= 1e-10 && ineq_ok && dt < 1.0;
  c.detail = fmt("G'=2xH(x^2) worst rel err %.3g (<=1e-10), H>=t and G'x>=2x^4 %s, %d sets x "
                 "1000 samples, %.2fs (<1s)",
                 worst, ineq_ok ? "exact" : "VIOLATED", int(sets.size()), dt);
  return c;
}

// ── criterion 2: derivative oracle suite ─────────────────────────────────

ScalarField random_admissible(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uc(0.6, 1.4), ub(-1.0, 1.0), uk(0.5, 3.0);
  const double cc = uc(rng);
  const Vec2 b{ub(rng), ub(rng)};
  struct Bump {
    double a;
    Vec2 k;
    double ph;
  };
  std::vector<Bump> bumps(3);
  for (Bump& bb : bumps) bb = {ub(rng), {uk(rng), uk(rng)}, ub(rng) * 3.14};
  double amp = 0.1;
  for (int tries = 0; tries < 40; ++tries, amp *= 0.5) {
    ScalarField u = ScalarField::sample(g, [&](Vec2 x) {
      double v = 0.5 * cc * x.norm2() + b.dot(x);
      for (const Bump& bb : bumps) v += amp * bb.a * std::cos(bb.k.dot(x) + bb.ph);
      return v;
    });
    const HessianField hf = hessian_h(u);
    if (hf.positive_definite() && hf.min_det >= 0.3) return u;
  }
  throw Error("admissible field generator failed");
}

double fd_error(const DiscreteObjective& obj, const ScalarField& u) {
  std::vector<double> grad;
  const EnergyEval ev = eval_energy_gradient(obj, u, grad);
  if (!ev.feasible) throw OutOfDomain(ev.bad_node);
  ScalarField up = u;
  double worst = 0, gsup = sup_norm(grad);
  for (std::size_t i = 0; i < obj.free_nodes.size(); ++i) {
    const int k = obj.free_nodes[i];
    const double d = 1e-6 * std::max(1.0, std::abs(u[k]));
    up.v[k] = u[k] + d;
    const double ep = eval_energy(obj, up).energy.total;
    up.v[k] = u[k] - d;
    const double em = eval_energy(obj, up).energy.total;
    up.v[k] = u[k];
    worst = std::max(worst, std::abs((ep - em) / (2 * d) - grad[i]));
  }
  return worst / (1 + gsup);
}

Criterion criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  Criterion c;
  c.id = "C2";

  const DomainSpec spec = quadratic_spec();
  const Grid g = build_grid(spec, 17);
  const LagrangianModel rc = rochet_chone(2.0, GammaField::constant(1.0));
  const PenaltyG pen = build_penalty(rc.envelopes);
  const DefiningFunction rho = DefiningFunction::disk({0, 0}, 1.0);
  const double eps = 0.125;
  const ScalarField phi_eps = ScalarField::sample(g, lifted_boundary(spec, rho, eps, 2));

  // Four flavours: barrier alone, F alone, G alone, assembled J_eps.
  DiscreteObjective full = DiscreteObjective::jeps(g, rc, pen, phi_eps, eps);
  DiscreteObjective barrier_only = full;
  barrier_only.model = nullptr;
  barrier_only.pen = nullptr;
  DiscreteObjective f_only = full;
  f_only.pen = nullptr;
  f_only.barrier_weight = 0;
  f_only.barrier_nodes.clear();
  DiscreteObjective g_only = full;
  g_only.model = nullptr;
  g_only.barrier_weight = 0;
  g_only.barrier_nodes.clear();

  std::mt19937_64 rng(2024);
  double worst_barrier = 0, worst_f = 0, worst_g = 0, worst_total = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const ScalarField u = random_admissible(g, rng);
    worst_barrier = std::max(worst_barrier, fd_error(barrier_only, u));
    worst_f = std::max(worst_f, fd_error(f_only, u));
    worst_g = std::max(worst_g, fd_error(g_only, u));
    worst_total = std::max(worst_total, fd_error(full, u));
  }
  const double dt = seconds_since(t0);
  const double worst = std::max({worst_barrier, worst_f, worst_g, worst_total});
  c.pass = worst <= 1e-6 && dt < 30.0;
  c.detail = fmt("sup rel err vs central FD over 20 fields: barrier %.2e, F %.2e, G %.2e, "
                 "total %.2e (<=1e-6), %.1fs (<30s)",
                 worst_barrier, worst_f, worst_g, worst_total, dt);
  return c;
}

// ── criteria 3-5 share one 33x33 sweep ───────────────────────────────────

struct SweepBundle {
  Grid grid;
  BaselineResult base;
  SweepReport sweep;
  std::vector<int> mask;
  double seconds = 0;
};

SweepBundle run_quadratic_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  SweepBundle b;
  const DomainSpec spec = quadratic_spec();
  b.grid = build_grid(spec, 33);
  const LagrangianModel m = quadratic_test_model();
  const PenaltyG pen = build_penalty(m.envelopes);
  NewtonConfig cfg;
  b.base = baseline_minimize(b.grid, spec, m, {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}, cfg);
  b.mask = compact_subset_mask(b.grid, 0.25);
  EpsSchedule sched;  // 2^-4 .. 2^-11
  SweepOptions opts;
  ScalarField psi(b.grid, 1.0);
  opts.baseline = &b.base.u;
  opts.compact_mask = &b.mask;
  opts.psi = &psi;
  b.sweep = continuation_sweep(spec, b.grid, m, pen, sched, cfg, opts);
  b.seconds = seconds_since(t0);
  return b;
}

Criterion criterion3(const SweepBundle& b) {
  Criterion c;
  c.id = "C3";
  auto err_K = [&](const ScalarField& u) {
    double e = 0;
    for (int k : b.mask) e = std::max(e, std::abs(u[k] - u_star(b.grid.coord(k))));
    return e;
  };
  const double base_err = err_K(b.base.u);
  const double err_first = err_K(b.sweep.solutions.front());
  const double err_last = err_K(b.sweep.solutions.back());
  const bool a_ok = base_err <= 1e-2;
  const bool b_ok = err_last <= 2e-2 && err_last < err_first;
  c.pass = a_ok && b_ok && b.seconds < 300.0;
  c.detail = fmt("(a) baseline |u-u*| on K = %.4g (<=1e-2, %s); (b) sweep err %.4g -> %.4g "
                 "(<=2e-2 %s, decreasing %s); %.1fs (<5min)",
                 base_err, a_ok ? "ok" : "FAIL", err_first, err_last,
                 err_last <= 2e-2 ? "ok" : "FAIL", err_last < err_first ? "ok" : "FAIL",
                 b.seconds);
  return c;
}

Criterion criterion4(const SweepBundle& b) {
  Criterion c;
  c.id = "C4";
  const AuditOutcome a = check_penalty_decay(b.sweep);
  c.pass = a.passed;
  c.detail = fmt("log-log slope of quartic penalty over last 4 eps = %.3f (>=0.9)", a.measured);
  return c;
}

Criterion criterion5(const SweepBundle& b) {
  Criterion c;
  c.id = "C5";
  const DomainSpec spec = quadratic_spec();
  bool linf_ok = true, convex_ok = true;
  double worst_margin = -1e300, worst_eig = 1e300;
  for (const ScalarField& u : b.sweep.solutions) {
    const AuditOutcome lf = check_linfty(u, spec);
    const AuditOutcome cv = check_convexity(u);
    linf_ok = linf_ok && lf.passed;
    convex_ok = convex_ok && cv.passed;
    worst_margin = std::max(worst_margin, lf.measured);
    worst_eig = std::min(worst_eig, cv.measured);
  }
  const AuditOutcome key = check_keyest_bounded(b.sweep);
  c.pass = linf_ok && convex_ok && key.passed;
  c.detail = fmt("sup u - sup phi = %.3g (<=1e-8 %s); min eig D2u = %.3g (>=-1e-8 %s); "
                 "keyest monitor max %.3g bounded %s",
                 worst_margin, linf_ok ? "ok" : "FAIL", worst_eig, convex_ok ? "ok" : "FAIL",
                 key.measured, key.passed ? "ok" : "FAIL");
  return c;
}

// ── criterion 6: Euler-Lagrange consistency on Rochet-Chone ──────────────

Criterion criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  Criterion c;
  c.id = "C6";
  const DomainSpec spec = quadratic_spec();
  const Grid g = build_grid(spec, 33);
  const LagrangianModel m = rochet_chone(2.0, GammaField::constant(1.0));
  const PenaltyG pen = build_penalty(m.envelopes);
  const DefiningFunction rho = DefiningFunction::disk({0, 0}, 1.0);
  NewtonConfig cfg;
  EpsSchedule sched;
  sched.eps0 = 1.0 / 16;
  sched.count = 5;  // warm-started ladder down to 2^-8
  const SweepReport sweep = continuation_sweep(spec, g, m, pen, sched, cfg, {});

  const double eps = sweep.reports.back().eps;
  const ScalarField phi_eps = ScalarField::sample(g, lifted_boundary(spec, rho, eps, 2));
  const ScalarField psi(g, 1.0);
  const AbreuResidual ar =
      abreu_residual(sweep.solutions.back(), eps, m, pen, phi_eps, psi);
  std::vector<double> res, fmag;
  for (int k : g.interior_nodes) {
    res.push_back(std::abs(ar.lma_residual[k]));
    fmag.push_back(std::abs(ar.f_eps[k]) / eps);
  }
  const double med_res = median(res), med_f = median(fmag);
  const double threshold = 10 * g.h * med_f;
  const double dt = seconds_since(t0);
  c.pass = med_res <= threshold && dt < 120.0;
  c.detail = fmt("eps=2^-8: med|U:D2w - f/eps| = %.4g vs 10h x med|f|/eps = %.4g (ratio "
                 "%.2f), %.1fs (<2min)",
                 med_res, threshold, med_res / threshold, dt);
  return c;
}

// ── criterion 7: non-quadratic Lagrangian smoke ──────────────────────────

Criterion criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  Criterion c;
  c.id = "C7";

  RunConfig cfg = parse_config_text("model = exp\n");
  cfg.out_dir =
      (std::filesystem::temp_directory_path() / "cvxmin_acceptance_exp").string();
  std::filesystem::remove_all(cfg.out_dir);

  int exit_code = -1;
  std::string fail_names;
  try {
    const RunResult res = run_sweep(cfg);
    exit_code = res.exit_code;
    for (const AuditOutcome& a : res.audits)
      if (!a.passed) fail_names += " " + a.name;
  } catch (const Error& e) {
    fail_names = std::string(" exception: ") + e.what();
    exit_code = kSolverError;
  }
  std::filesystem::remove_all(cfg.out_dir);
  const double dt = seconds_since(t0);
  c.pass = exit_code == 0 && dt < 600.0;
  c.detail = fmt("exp Lagrangian default sweep exit %d%s%s, %.1fs (<10min)", exit_code,
                 fail_names.empty() ? "" : ", failing audits:", fail_names.c_str(), dt);
  return c;
}

}  // namespace

int main() {
  setvbuf(stdout, nullptr, _IONBF, 0);
  std::vector<Criterion> cs;

  cs.push_back(criterion1());
  cs.push_back(criterion2());
  const SweepBundle bundle = run_quadratic_sweep();
  cs.push_back(criterion3(bundle));
  cs.push_back(criterion4(bundle));
  cs.push_back(criterion5(bundle));
  cs.push_back(criterion6());
  cs.push_back(criterion7());

  int failed = 0;
  for (const Criterion& c : cs) {
    std::printf("[%s] %s: %s\n", c.pass ? "PASS" : "FAIL", c.id.c_str(), c.detail.c_str());
    if (!c.pass) ++failed;
  }
  std::printf("%d/%zu acceptance criteria passed\n", int(cs.size()) - failed, cs.size());
  return failed;
}
