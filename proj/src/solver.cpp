#include "cvx/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

namespace cvx {

void NewtonConfig::validate() const {
  if (!(tol_grad > 0) && !std::isinf(tol_grad))
    throw InvalidArgument("NewtonConfig: tol_grad must be positive");
  if (max_iters < 0) throw InvalidArgument("NewtonConfig: max_iters must be >= 0");
  if (!(armijo_c > 0)) throw InvalidArgument("NewtonConfig: armijo_c must be positive");
  if (!(backtrack > 0 && backtrack < 1))
    throw InvalidArgument("NewtonConfig: backtrack factor must be in (0,1)");
  if (!(cg_tol > 0)) throw InvalidArgument("NewtonConfig: cg_tol must be positive");
  if (cg_max < 1) throw InvalidArgument("NewtonConfig: cg_max must be >= 1");
}

std::vector<double> EpsSchedule::values() const {
  if (!(eps0 > 0 && eps0 < 1)) throw InvalidArgument("EpsSchedule: eps0 must be in (0,1)");
  if (!(ratio > 0 && ratio < 1)) throw InvalidArgument("EpsSchedule: ratio must be in (0,1)");
  if (count < 1) throw InvalidArgument("EpsSchedule: count must be >= 1");
  std::vector<double> v(count);
  double e = eps0;
  for (int k = 0; k < count; ++k, e *= ratio) {
    if (!(e > 0 && e < 1)) throw InvalidArgument("EpsSchedule: all eps must lie in (0,1)");
    v[k] = e;
  }
  return v;
}

// ── feasible start ───────────────────────────────────────────────────────

namespace {

ScalarField start_candidate(const Grid& g, const DomainSpec& spec, double alpha) {
  ScalarField u(g);
  const double r2 = spec.radius * spec.radius;
  for (int k = 0; k < g.size(); ++k) {
    const Vec2 x = g.coord(k);
    u[k] = spec.phi.value(x);
    if (g.is_interior(k)) u[k] += alpha * ((x - spec.center).norm2() - r2);
  }
  return u;
}

bool start_ok(const ScalarField& u) {
  const HessianField h = hessian_h(u);
  return h.positive_definite() && h.min_det >= 1e-3;
}

}  // namespace

ScalarField feasible_start(const Grid& grid, const DomainSpec& spec) {
  ScalarField u = start_candidate(grid, spec, 0.0);
  if (start_ok(u)) return u;
  for (double alpha = 1e-3; alpha <= 10.0; alpha *= 2) {
    u = start_candidate(grid, spec, alpha);
    if (start_ok(u)) return u;
  }
  u = start_candidate(grid, spec, 10.0);
  if (start_ok(u)) return u;
  throw StartFailure("feasible_start: no alpha in [1e-3, 10] yields a convex start");
}

// ── preconditioned CG on the free nodes ──────────────────────────────────

namespace {

struct CgOutcome {
  std::vector<double> x;
  int iters = 0;
  bool indefinite = false;
};

CgOutcome pcg(const DiscreteObjective& obj, const HessianCache& cache,
              const std::vector<double>& b, const std::vector<double>& diag, double tol,
              int max_iters) {
  const std::size_t m = b.size();
  CgOutcome out;
  out.x.assign(m, 0.0);
  std::vector<double> r = b, z(m), p(m), ap(m);
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0) return out;

  for (std::size_t i = 0; i < m; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = dot(r, z);
  for (int it = 0; it < max_iters; ++it) {
    apply_hessian(obj, cache, p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0)) {
      out.indefinite = true;
      return out;  // caller falls back to steepest descent on x == 0
    }
    const double alpha = rz / pap;
    for (std::size_t i = 0; i < m; ++i) {
      out.x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    ++out.iters;
    if (std::sqrt(dot(r, r)) <= tol * bnorm) break;
    for (std::size_t i = 0; i < m; ++i) z[i] = r[i] / diag[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < m; ++i) p[i] = z[i] + beta * p[i];
  }
  return out;
}

double wall_ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

// ── Newton ───────────────────────────────────────────────────────────────

NewtonResult newton_on(const DiscreteObjective& obj, const ScalarField& u0,
                       const NewtonConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const Grid& g = *obj.grid;

  NewtonResult res;
  res.u = u0;
  std::vector<double> grad;
  EnergyEval ev = eval_energy_gradient(obj, res.u, grad);
  if (!ev.feasible) throw OutOfDomain(ev.bad_node);
  res.energy_history.push_back(ev.energy.total);

  int iter = 0;
  for (; iter <= cfg.max_iters; ++iter) {
    const double gn = sup_norm(grad);
    if (gn <= cfg.tol_grad) {
      res.report.final_grad_norm = gn;
      break;
    }
    if (iter == cfg.max_iters)
      throw MaxIterations("newton: gradient " + std::to_string(gn) + " after " +
                          std::to_string(iter) + " iterations");

    HessianCache cache = build_hessian_cache(obj, res.u);
    const std::vector<double> diag = hessian_diagonal(obj, cache);
    std::vector<double> rhs(grad.size());
    for (std::size_t i = 0; i < grad.size(); ++i) rhs[i] = -grad[i];
    CgOutcome cg = pcg(obj, cache, rhs, diag, cfg.cg_tol, cfg.cg_max);

    std::vector<double> dir = cg.x;
    double gtd = dot(grad, dir);
    if (cg.indefinite || !(gtd < 0)) {
      dir = rhs;  // steepest descent fallback
      gtd = dot(grad, dir);
      ++res.cg_indefinite_hits;
      if (cfg.verbose) std::printf("newton[%d]: CG fallback to steepest descent\n", iter);
    }

    // Feasibility-first backtracking, then Armijo on the total energy.  The
    // sufficient-decrease test carries a machine-noise allowance so that the
    // final Newton steps are not rejected once the true decrease falls below
    // the roundoff of the energy itself.
    const double noise =
        16 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(ev.energy.total));
    ScalarField trial = res.u;
    double step = 1.0;
    EnergyEval trial_ev;
    while (true) {
      for (std::size_t i = 0; i < obj.free_nodes.size(); ++i)
        trial.v[obj.free_nodes[i]] = res.u.v[obj.free_nodes[i]] + step * dir[i];
      trial_ev = eval_energy(obj, trial);
      if (trial_ev.feasible &&
          trial_ev.energy.total <= ev.energy.total + cfg.armijo_c * step * gtd + noise)
        break;
      step *= cfg.backtrack;
      if (step < 1e-14)
        throw LineSearchStall("newton: step collapsed below 1e-14 at iteration " +
                              std::to_string(iter));
    }

    res.u = trial;
    ev = eval_energy_gradient(obj, res.u, grad);
    if (!ev.feasible) throw OutOfDomain(ev.bad_node);  // cannot happen: trial was feasible
    res.energy_history.push_back(ev.energy.total);
    if (cfg.verbose)
      std::printf("newton[%d]: E=%.12g |g|=%.3e step=%.3g cg=%d\n", iter, ev.energy.total,
                  sup_norm(grad), step, cg.iters);
  }

  const HessianField hf = hessian_h(res.u);
  res.report.iters = iter;
  res.report.energy = ev.energy;
  // min det over the nodes the objective actually constrains (all interior
  // nodes for the penalized solve, the free region for the baseline).
  double min_det = std::numeric_limits<double>::infinity();
  for (int k : obj.barrier_nodes) min_det = std::min(min_det, hf.det[k]);
  res.report.min_det = min_det;
  res.report.linfty_u = res.u.sup_inside();
  res.report.wall_ms = wall_ms_since(t0);
  if (obj.pen && obj.target)
    res.report.penalty_quartic = penalty_quartic_value(g, res.u, *obj.target);
  return res;
}

NewtonResult newton_minimize(const ScalarField& u0, double eps, const LagrangianModel& model,
                             const PenaltyG& pen, const ScalarField& phi_eps,
                             const NewtonConfig& cfg) {
  DiscreteObjective obj = DiscreteObjective::jeps(*u0.grid, model, pen, phi_eps, eps);
  NewtonResult res = newton_on(obj, u0, cfg);
  res.report.eps = eps;
  return res;
}

// ── sweep ────────────────────────────────────────────────────────────────

double penalty_quartic_value(const Grid& grid, const ScalarField& u,
                             const ScalarField& phi_eps) {
  double s = 0;
  for (int k : grid.interior_nodes) {
    if (grid.inner[k]) continue;
    const double r = u[k] - phi_eps[k];
    s += grid.qw[k] * r * r * r * r;
  }
  return s;
}

double keyest_monitor_value(const Grid& grid, const PenaltyG& pen, const ScalarField& u,
                            const ScalarField& phi_eps, double eps) {
  double s = 0;
  for (int k : grid.interior_nodes) {
    if (grid.inner[k]) continue;
    const double r = u[k] - phi_eps[k];
    s += grid.qw[k] * pen.Gp(r) * r;
  }
  return s / (2 * eps);
}

SweepReport continuation_sweep(const DomainSpec& spec, const Grid& grid,
                               const LagrangianModel& model, const PenaltyG& pen,
                               const EpsSchedule& schedule, const NewtonConfig& cfg,
                               const SweepOptions& opts) {
  const std::vector<double> ladder = schedule.values();
  const DefiningFunction rho = DefiningFunction::disk(spec.center, spec.radius);

  SweepReport sweep;
  ScalarField u = feasible_start(grid, spec);

  for (double eps : ladder) {
    const ScalarField phi_eps =
        ScalarField::sample(grid, lifted_boundary(spec, rho, eps, 2));

    // Warm starts stay feasible (the PD cone does not depend on eps); blend
    // back toward the canonical start only if the determinant degenerated.
    HessianField hf = hessian_h(u);
    if (!hf.positive_definite() || hf.min_det < 1e-12) {
      const ScalarField fresh = feasible_start(grid, spec);
      for (double lambda : {0.25, 0.5, 0.75, 1.0}) {
        ScalarField blend = u;
        for (int k : grid.interior_nodes)
          blend[k] = (1 - lambda) * u[k] + lambda * fresh[k];
        hf = hessian_h(blend);
        if (hf.positive_definite() && hf.min_det >= 1e-12) {
          u = blend;
          break;
        }
      }
    }

    NewtonResult res;
    try {
      res = newton_minimize(u, eps, model, pen, phi_eps, cfg);
    } catch (const SolverError& e) {
      throw SolverError("sweep at eps=" + std::to_string(eps) + ": " + e.what());
    }
    u = res.u;

    SolveReport rep = res.report;
    rep.plain_j = plain_J(u, model);
    rep.keyest_monitor = keyest_monitor_value(grid, pen, u, phi_eps, eps);
    if (opts.baseline && opts.compact_mask) {
      double err = 0;
      for (int k : *opts.compact_mask) err = std::max(err, std::abs(u[k] - (*opts.baseline)[k]));
      rep.err_K_vs_baseline = err;
    }
    if (opts.psi) {
      const AbreuResidual ar = abreu_residual(u, eps, model, pen, phi_eps, *opts.psi);
      std::vector<double> mags;
      mags.reserve(grid.interior_nodes.size());
      for (int k : grid.interior_nodes) mags.push_back(std::abs(ar.lma_residual[k]));
      rep.el_residual = median(std::move(mags));
    }
    if (opts.verbose)
      std::printf("sweep eps=%.6g: iters=%d Jeps=%.8g J=%.8g pq=%.3e errK=%.3e\n", eps,
                  rep.iters, rep.energy.total, rep.plain_j, rep.penalty_quartic,
                  rep.err_K_vs_baseline);

    sweep.reports.push_back(rep);
    sweep.solutions.push_back(u);
  }
  return sweep;
}

// ── baseline ─────────────────────────────────────────────────────────────

namespace {

ScalarField baseline_start(const Grid& g, const DomainSpec& spec) {
  // phi everywhere; if D2 phi is not PD on Omega_0, dip the free nodes with a
  // paraboloid centred on the inner region (the pinned ring is untouched, so
  // the kink at the interface only adds convexity there).
  auto candidate = [&](double alpha) {
    ScalarField u = ScalarField::sample(g, spec.phi.value);
    double reach2 = 0;
    for (int k : g.inner_nodes)
      reach2 = std::max(reach2, (g.coord(k) - spec.inner.center).norm2());
    const double r2 = reach2 + g.h * g.h;
    for (int k : g.inner_nodes)
      u[k] += alpha * ((g.coord(k) - spec.inner.center).norm2() - r2);
    return u;
  };
  auto ok = [&](const ScalarField& u) {
    const HessianField h = hessian_h(u);
    double min_det = std::numeric_limits<double>::infinity();
    for (int k : g.inner_nodes) {
      if (!(h.det[k] > 0 && h.m[k].a11 > 0)) return false;
      min_det = std::min(min_det, h.det[k]);
    }
    return min_det >= 1e-3;
  };
  ScalarField u = candidate(0.0);
  if (ok(u)) return u;
  for (double alpha = 1e-3; alpha <= 10.0; alpha *= 2) {
    u = candidate(alpha);
    if (ok(u)) return u;
  }
  throw StartFailure("baseline_minimize: no feasible start found");
}

}  // namespace

BaselineResult baseline_minimize(const Grid& grid, const DomainSpec& spec,
                                 const LagrangianModel& model,
                                 const std::vector<double>& mu_schedule,
                                 const NewtonConfig& cfg) {
  if (mu_schedule.empty()) throw InvalidArgument("baseline_minimize: empty mu schedule");
  BaselineResult out;
  out.u = baseline_start(grid, spec);
  for (double mu : mu_schedule) {
    if (!(mu > 0)) throw InvalidArgument("baseline_minimize: mu must be positive");
    DiscreteObjective obj = DiscreteObjective::baseline(grid, model, mu);
    NewtonResult res = newton_on(obj, out.u, cfg);
    out.u = res.u;
    res.report.eps = mu;
    res.report.plain_j = plain_J(out.u, model);
    out.stages.push_back(res.report);
  }
  return out;
}

// ── Euler-Lagrange residual ──────────────────────────────────────────────

AbreuResidual abreu_residual(const ScalarField& u, double eps, const LagrangianModel& model,
                             const PenaltyG& pen, const ScalarField& phi_eps,
                             const ScalarField& psi) {
  const Grid& g = *u.grid;
  const HessianField hf = hessian_h(u);
  if (!hf.positive_definite()) throw OutOfDomain(hf.first_nonconvex);
  for (int k : g.boundary_nodes)
    if (!(psi[k] > 0))
      throw InvalidArgument("abreu_residual: psi must be positive on the boundary ring");

  AbreuResidual out;
  out.w = ScalarField(g, 0.0);
  out.lma_residual.assign(g.size(), std::nan(""));
  out.f_eps.assign(g.size(), std::nan(""));

  for (int k : g.interior_nodes) out.w[k] = 1.0 / hf.det[k];
  for (int k : g.boundary_nodes) out.w[k] = psi[k];

  const std::vector<Vec2> du = gradient_h(u);
  const double invh2 = 1.0 / (g.h * g.h), inv4h2 = 0.25 * invh2;

  for (int k : g.interior_nodes) {
    const Vec2 x = g.coord(k);
    double f;
    if (g.inner[k]) {
      // F_z - (F_{p_i x_i} + F_{p_i z} D_i u + F_{p_i p_j} D_ij u), the
      // nondivergence expansion of the Euler-Lagrange right-hand side.
      f = model.F_z(x, u[k], du[k]) -
          (model.F_px_trace(x, u[k], du[k]) + model.F_pz(x, u[k], du[k]).dot(du[k]) +
           model.F_pp(x, u[k], du[k]).inner(hf.m[k]));
    } else {
      f = pen.Gp(u[k] - phi_eps[k]) / eps;
    }
    out.f_eps[k] = f;

    Sym2 d2w;
    d2w.a11 = (out.w[k + 1] - 2 * out.w[k] + out.w[k - 1]) * invh2;
    d2w.a22 = (out.w[k + g.n] - 2 * out.w[k] + out.w[k - g.n]) * invh2;
    d2w.a12 = (out.w[k + g.n + 1] + out.w[k - g.n - 1] - out.w[k + g.n - 1] -
               out.w[k - g.n + 1]) *
              inv4h2;
    out.lma_residual[k] = hf.cof[k].inner(d2w) - f / eps;
  }
  return out;
}

}  // namespace cvx
