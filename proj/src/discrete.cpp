#include "cvx/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace cvx {

std::vector<Vec2> gradient_h(const ScalarField& u) {
  const Grid& g = *u.grid;
  std::vector<Vec2> out(g.size());
  const double inv2h = 1.0 / (2 * g.h), invh = 1.0 / g.h;

  auto diff = [&](int k, int step) {
    const bool plus = g.is_inside(k + step), minus = g.is_inside(k - step);
    if (plus && minus) return (u[k + step] - u[k - step]) * inv2h;
    if (plus) return (u[k + step] - u[k]) * invh;
    if (minus) return (u[k] - u[k - step]) * invh;
    return 0.0;
  };

  for (int k = 0; k < g.size(); ++k) {
    if (!g.is_inside(k)) continue;
    if (g.is_interior(k)) {
      out[k] = {(u[k + 1] - u[k - 1]) * inv2h, (u[k + g.n] - u[k - g.n]) * inv2h};
    } else {
      out[k] = {diff(k, 1), diff(k, g.n)};  // one-sided fallback on the ring
    }
  }
  return out;
}

HessianField hessian_h(const ScalarField& u) {
  const Grid& g = *u.grid;
  HessianField out;
  out.grid = &g;
  out.m.assign(g.size(), Sym2{});
  out.det.assign(g.size(), 0.0);
  out.cof.assign(g.size(), Sym2{});
  out.min_det = std::numeric_limits<double>::infinity();

  const double invh2 = 1.0 / (g.h * g.h), inv4h2 = 0.25 * invh2;
  for (int k : g.interior_nodes) {
    Sym2 a;
    a.a11 = (u[k + 1] - 2 * u[k] + u[k - 1]) * invh2;
    a.a22 = (u[k + g.n] - 2 * u[k] + u[k - g.n]) * invh2;
    a.a12 = (u[k + g.n + 1] + u[k - g.n - 1] - u[k + g.n - 1] - u[k - g.n + 1]) * inv4h2;
    out.m[k] = a;
    out.det[k] = a.det();
    out.cof[k] = a.cofactor();
    if (out.det[k] < out.min_det) {
      out.min_det = out.det[k];
      out.argmin_det = k;
    }
    // PD on the symmetric 2x2 cone: det > 0 together with a11 > 0.
    if (out.first_nonconvex < 0 && !(out.det[k] > 0 && a.a11 > 0)) out.first_nonconvex = k;
  }
  return out;
}

// ── objective assembly ───────────────────────────────────────────────────

void DiscreteObjective::set_free(const std::vector<int>& nodes) {
  free_nodes = nodes;
  free_index.assign(grid->size(), -1);
  for (std::size_t i = 0; i < free_nodes.size(); ++i) free_index[free_nodes[i]] = int(i);
}

DiscreteObjective DiscreteObjective::jeps(const Grid& g, const LagrangianModel& m,
                                          const PenaltyG& p, const ScalarField& phi_eps,
                                          double eps) {
  DiscreteObjective o;
  o.grid = &g;
  o.model = &m;
  o.lagrangian_nodes = g.inner_nodes;
  o.pen = &p;
  o.target = &phi_eps;
  o.penalty_weight = 1.0 / eps;
  o.barrier_weight = eps;
  o.barrier_nodes = g.interior_nodes;
  for (int k : g.interior_nodes)
    if (!g.inner[k]) o.penalty_nodes.push_back(k);
  o.set_free(g.interior_nodes);
  return o;
}

DiscreteObjective DiscreteObjective::baseline(const Grid& g, const LagrangianModel& m,
                                              double mu) {
  DiscreteObjective o;
  o.grid = &g;
  o.model = &m;
  o.lagrangian_nodes = g.inner_nodes;
  o.barrier_weight = mu;
  o.barrier_nodes = g.inner_nodes;
  o.set_free(g.inner_nodes);
  return o;
}

namespace {

// Gradient / Hessian-apply share one stencil-adjoint: given a symmetric
// matrix field M over the barrier nodes, accumulate
//   out_k += coeff_i * tr(M_i dA_i/du_k)
// over the 9-point Hessian stencil, restricted to free nodes.
template <class Coeff>
void hessian_stencil_adjoint(const Grid& g, const std::vector<int>& nodes,
                             const std::vector<Sym2>& m, Coeff coeff,
                             const std::vector<int>& free_index, std::vector<double>& out) {
  const double invh2 = 1.0 / (g.h * g.h), inv2h2 = 0.5 * invh2;
  auto add = [&](int k, double val) {
    const int f = free_index[k];
    if (f >= 0) out[f] += val;
  };
  for (std::size_t idx = 0; idx < nodes.size(); ++idx) {
    const int k = nodes[idx];
    const double c = coeff(idx, k);
    if (c == 0) continue;
    const Sym2& mm = m[k];
    add(k, -2 * c * (mm.a11 + mm.a22) * invh2);
    add(k + 1, c * mm.a11 * invh2);
    add(k - 1, c * mm.a11 * invh2);
    add(k + g.n, c * mm.a22 * invh2);
    add(k - g.n, c * mm.a22 * invh2);
    add(k + g.n + 1, c * mm.a12 * inv2h2);
    add(k - g.n - 1, c * mm.a12 * inv2h2);
    add(k + g.n - 1, -c * mm.a12 * inv2h2);
    add(k - g.n + 1, -c * mm.a12 * inv2h2);
  }
}

Sym2 d2_of(const Grid& g, const std::vector<double>& v, int k) {
  const double invh2 = 1.0 / (g.h * g.h), inv4h2 = 0.25 * invh2;
  Sym2 b;
  b.a11 = (v[k + 1] - 2 * v[k] + v[k - 1]) * invh2;
  b.a22 = (v[k + g.n] - 2 * v[k] + v[k - g.n]) * invh2;
  b.a12 = (v[k + g.n + 1] + v[k - g.n - 1] - v[k + g.n - 1] - v[k - g.n + 1]) * inv4h2;
  return b;
}

// The F term is integrated with the symmetric short-difference pair
//   p+ = ((u_E - u)/h, (u_N - u)/h),   p- = ((u - u_W)/h, (u - u_S)/h),
// averaging F over both.  The average restores O(h^2) consistency while the
// adjoint couples nearest neighbours; the wide central-difference adjoint
// decouples the even/odd sublattices and lets an O(h^2) parity mode into the
// minimizer that wrecks det D2u and the Euler-Lagrange residual.
struct ShortGrads {
  Vec2 fwd, bwd;
};

ShortGrads short_grads(const Grid& g, const std::vector<double>& v, int k) {
  const double invh = 1.0 / g.h;
  return {{(v[k + 1] - v[k]) * invh, (v[k + g.n] - v[k]) * invh},
          {(v[k] - v[k - 1]) * invh, (v[k] - v[k - g.n]) * invh}};
}

double lagrangian_value_at(const LagrangianModel& m, const Grid& g,
                           const std::vector<double>& v, int k, double z) {
  const ShortGrads s = short_grads(g, v, k);
  const Vec2 x = g.coord(k);
  return 0.5 * (m.F(x, z, s.fwd) + m.F(x, z, s.bwd));
}

}  // namespace

EnergyEval eval_energy(const DiscreteObjective& obj, const ScalarField& u) {
  const Grid& g = *obj.grid;
  EnergyEval ev;

  for (int k : obj.barrier_nodes) {
    const Sym2 a = d2_of(g, u.v, k);
    const double det = a.det();
    if (!(det > 0 && a.a11 > 0) || !std::isfinite(det)) {
      ev.feasible = false;
      ev.bad_node = k;
      return ev;
    }
    ev.energy.barrier_term -= obj.barrier_weight * g.qw[k] * std::log(det);
  }

  if (obj.model) {
    for (int k : obj.lagrangian_nodes)
      ev.energy.lagrangian_term += g.qw[k] * lagrangian_value_at(*obj.model, g, u.v, k, u[k]);
  }
  if (obj.pen) {
    for (int k : obj.penalty_nodes) {
      const double r = u[k] - (*obj.target)[k];
      ev.energy.penalty_term += obj.penalty_weight * g.qw[k] * obj.pen->G(r);
    }
  }
  ev.energy.total =
      ev.energy.lagrangian_term + ev.energy.penalty_term + ev.energy.barrier_term;
  ev.feasible = std::isfinite(ev.energy.total);
  if (!ev.feasible) ev.bad_node = -1;  // numeric overflow rather than cone exit
  return ev;
}

EnergyEval eval_energy_gradient(const DiscreteObjective& obj, const ScalarField& u,
                                std::vector<double>& grad_free) {
  const Grid& g = *obj.grid;
  grad_free.assign(obj.free_nodes.size(), 0.0);

  EnergyEval ev;
  // Barrier term: value plus the stencil adjoint of cof(A)/det(A).
  std::vector<Sym2> mfield(g.size());
  std::vector<double> coeffs(obj.barrier_nodes.size(), 0.0);
  for (std::size_t idx = 0; idx < obj.barrier_nodes.size(); ++idx) {
    const int k = obj.barrier_nodes[idx];
    const Sym2 a = d2_of(g, u.v, k);
    const double det = a.det();
    if (!(det > 0 && a.a11 > 0) || !std::isfinite(det)) {
      ev.feasible = false;
      ev.bad_node = k;
      return ev;
    }
    ev.energy.barrier_term -= obj.barrier_weight * g.qw[k] * std::log(det);
    mfield[k] = a.cofactor() * (1.0 / det);
    coeffs[idx] = -obj.barrier_weight * g.qw[k];
  }
  hessian_stencil_adjoint(
      g, obj.barrier_nodes, mfield, [&](std::size_t idx, int) { return coeffs[idx]; },
      obj.free_index, grad_free);

  if (obj.model) {
    const double invh = 1.0 / g.h;
    auto add = [&](int k, double val) {
      const int f = obj.free_index[k];
      if (f >= 0) grad_free[f] += val;
    };
    for (int k : obj.lagrangian_nodes) {
      const Vec2 x = g.coord(k);
      const ShortGrads s = short_grads(g, u.v, k);
      const double w = 0.5 * g.qw[k];
      ev.energy.lagrangian_term +=
          w * (obj.model->F(x, u[k], s.fwd) + obj.model->F(x, u[k], s.bwd));
      add(k, w * (obj.model->F_z(x, u[k], s.fwd) + obj.model->F_z(x, u[k], s.bwd)));
      const Vec2 fpf = obj.model->F_p(x, u[k], s.fwd);
      const Vec2 fpb = obj.model->F_p(x, u[k], s.bwd);
      add(k, -w * (fpf.x + fpf.y) * invh);
      add(k + 1, w * fpf.x * invh);
      add(k + g.n, w * fpf.y * invh);
      add(k, w * (fpb.x + fpb.y) * invh);
      add(k - 1, -w * fpb.x * invh);
      add(k - g.n, -w * fpb.y * invh);
    }
  }

  if (obj.pen) {
    for (int k : obj.penalty_nodes) {
      const double r = u[k] - (*obj.target)[k];
      ev.energy.penalty_term += obj.penalty_weight * g.qw[k] * obj.pen->G(r);
      const int f = obj.free_index[k];
      if (f >= 0) grad_free[f] += obj.penalty_weight * g.qw[k] * obj.pen->Gp(r);
    }
  }

  ev.energy.total =
      ev.energy.lagrangian_term + ev.energy.penalty_term + ev.energy.barrier_term;
  ev.feasible = std::isfinite(ev.energy.total);
  return ev;
}

HessianCache build_hessian_cache(const DiscreteObjective& obj, const ScalarField& u) {
  const Grid& g = *obj.grid;
  HessianCache c;
  c.hess = hessian_h(u);

  c.ainv.assign(g.size(), Sym2{});
  for (int k : obj.barrier_nodes) {
    if (!(c.hess.det[k] > 0 && c.hess.m[k].a11 > 0)) return c;  // infeasible
    c.ainv[k] = c.hess.m[k].inverse();
  }
  if (obj.model) {
    c.fpp_f.assign(g.size(), Sym2{});
    c.fpp_b.assign(g.size(), Sym2{});
    c.fpz_f.assign(g.size(), Vec2{});
    c.fpz_b.assign(g.size(), Vec2{});
    c.fzz.assign(g.size(), 0.0);
    for (int k : obj.lagrangian_nodes) {
      const Vec2 x = g.coord(k);
      const ShortGrads s = short_grads(g, u.v, k);
      c.fpp_f[k] = obj.model->F_pp(x, u[k], s.fwd);
      c.fpp_b[k] = obj.model->F_pp(x, u[k], s.bwd);
      c.fpz_f[k] = obj.model->F_pz(x, u[k], s.fwd);
      c.fpz_b[k] = obj.model->F_pz(x, u[k], s.bwd);
      c.fzz[k] = 0.5 * (obj.model->F_zz(x, u[k], s.fwd) + obj.model->F_zz(x, u[k], s.bwd));
    }
  }
  if (obj.pen) {
    c.pen_diag.assign(g.size(), 0.0);
    for (int k : obj.penalty_nodes) {
      const double r = u[k] - (*obj.target)[k];
      c.pen_diag[k] = obj.penalty_weight * g.qw[k] * obj.pen->Gpp(r);
    }
  }
  c.feasible = true;
  return c;
}

void apply_hessian(const DiscreteObjective& obj, const HessianCache& cache,
                   const std::vector<double>& v_free, std::vector<double>& out_free) {
  const Grid& g = *obj.grid;
  out_free.assign(obj.free_nodes.size(), 0.0);

  // Scatter the free direction to a full node vector (pinned nodes stay 0).
  std::vector<double> v(g.size(), 0.0);
  for (std::size_t i = 0; i < obj.free_nodes.size(); ++i) v[obj.free_nodes[i]] = v_free[i];

  // Barrier: second variation  eps * sum w tr(A^-1 B A^-1 dA/du_k).
  std::vector<Sym2> sfield(g.size());
  for (int k : obj.barrier_nodes) sfield[k] = sandwich(cache.ainv[k], d2_of(g, v, k));
  hessian_stencil_adjoint(
      g, obj.barrier_nodes, sfield,
      [&](std::size_t, int k) { return obj.barrier_weight * g.qw[k]; }, obj.free_index,
      out_free);

  if (obj.model) {
    const double invh = 1.0 / g.h;
    auto add = [&](int k, double val) {
      const int f = obj.free_index[k];
      if (f >= 0) out_free[f] += val;
    };
    for (int k : obj.lagrangian_nodes) {
      const double w = 0.5 * g.qw[k];
      const double dz = v[k];
      const ShortGrads dp = short_grads(g, v, k);
      add(k, 2 * w * cache.fzz[k] * dz + w * cache.fpz_f[k].dot(dp.fwd) +
                 w * cache.fpz_b[k].dot(dp.bwd));
      const Vec2 gpf = (cache.fpz_f[k] * dz + cache.fpp_f[k].apply(dp.fwd)) * w;
      const Vec2 gpb = (cache.fpz_b[k] * dz + cache.fpp_b[k].apply(dp.bwd)) * w;
      add(k, -(gpf.x + gpf.y) * invh);
      add(k + 1, gpf.x * invh);
      add(k + g.n, gpf.y * invh);
      add(k, (gpb.x + gpb.y) * invh);
      add(k - 1, -gpb.x * invh);
      add(k - g.n, -gpb.y * invh);
    }
  }

  if (obj.pen) {
    for (int k : obj.penalty_nodes) {
      const int f = obj.free_index[k];
      if (f >= 0) out_free[f] += cache.pen_diag[k] * v[k];
    }
  }
}

std::vector<double> hessian_diagonal(const DiscreteObjective& obj, const HessianCache& cache) {
  const Grid& g = *obj.grid;
  std::vector<double> diag(obj.free_nodes.size(), 0.0);
  const double invh2 = 1.0 / (g.h * g.h), inv4h2 = 0.25 * invh2;

  auto add = [&](int k, double val) {
    const int f = obj.free_index[k];
    if (f >= 0) diag[f] += val;
  };

  // Barrier: tr(A^-1 E A^-1 E) for each stencil basis matrix E.
  for (int k : obj.barrier_nodes) {
    const Sym2& ai = cache.ainv[k];
    const double w = obj.barrier_weight * g.qw[k];
    const Sym2 e_center{-2 * invh2, 0, -2 * invh2};
    add(k, w * sandwich(ai, e_center).inner(e_center));
    const Sym2 e_x{invh2, 0, 0}, e_y{0, 0, invh2};
    const double dx = w * sandwich(ai, e_x).inner(e_x);
    const double dy = w * sandwich(ai, e_y).inner(e_y);
    add(k + 1, dx);
    add(k - 1, dx);
    add(k + g.n, dy);
    add(k - g.n, dy);
    const Sym2 e_c{0, inv4h2, 0};
    const double dc = w * sandwich(ai, e_c).inner(e_c);
    add(k + g.n + 1, dc);
    add(k - g.n - 1, dc);
    add(k + g.n - 1, dc);
    add(k - g.n + 1, dc);
  }

  if (obj.model) {
    const double invh = 1.0 / g.h, invh2c = invh * invh;
    for (int k : obj.lagrangian_nodes) {
      const double w = 0.5 * obj.grid->qw[k];
      const Sym2& pf = cache.fpp_f[k];
      const Sym2& pb = cache.fpp_b[k];
      // own entry: both pieces see u_k through z and through p
      add(k, 2 * w * cache.fzz[k] +
                 w * (-2 * invh) * (cache.fpz_f[k].x + cache.fpz_f[k].y) +
                 w * (2 * invh) * (cache.fpz_b[k].x + cache.fpz_b[k].y) +
                 w * invh2c * (pf.a11 + 2 * pf.a12 + pf.a22) +
                 w * invh2c * (pb.a11 + 2 * pb.a12 + pb.a22));
      add(k + 1, w * pf.a11 * invh2c);
      add(k + g.n, w * pf.a22 * invh2c);
      add(k - 1, w * pb.a11 * invh2c);
      add(k - g.n, w * pb.a22 * invh2c);
    }
  }

  if (obj.pen)
    for (int k : obj.penalty_nodes) add(k, cache.pen_diag[k]);

  for (double& d : diag) d = std::max(d, 1e-300);
  return diag;
}

// ── spec-level wrappers ──────────────────────────────────────────────────

namespace {

std::vector<double> scatter_gradient(const DiscreteObjective& obj,
                                     const std::vector<double>& grad_free) {
  std::vector<double> full(obj.grid->size(), 0.0);
  for (std::size_t i = 0; i < obj.free_nodes.size(); ++i)
    full[obj.free_nodes[i]] = grad_free[i];
  return full;
}

}  // namespace

BarrierResult barrier(const ScalarField& u, double eps) {
  const Grid& g = *u.grid;
  DiscreteObjective obj;
  obj.grid = &g;
  obj.barrier_weight = eps;
  obj.barrier_nodes = g.interior_nodes;
  // Derivatives with respect to every inside node, Dirichlet ring included:
  // the standalone operator reports the unrestricted variation (globally
  // affine directions are annihilated exactly); solvers restrict separately.
  std::vector<int> inside = g.interior_nodes;
  inside.insert(inside.end(), g.boundary_nodes.begin(), g.boundary_nodes.end());
  std::sort(inside.begin(), inside.end());
  obj.set_free(inside);

  std::vector<double> grad_free;
  EnergyEval ev = eval_energy_gradient(obj, u, grad_free);
  if (!ev.feasible) throw OutOfDomain(ev.bad_node);

  BarrierResult out;
  out.value = ev.energy.barrier_term;
  out.gradient = scatter_gradient(obj, grad_free);

  auto cache = std::make_shared<HessianCache>(build_hessian_cache(obj, u));
  auto obj_ptr = std::make_shared<DiscreteObjective>(obj);
  out.hessian_action = [cache, obj_ptr](const std::vector<double>& v) {
    std::vector<double> v_free(obj_ptr->free_nodes.size());
    for (std::size_t i = 0; i < obj_ptr->free_nodes.size(); ++i)
      v_free[i] = v[obj_ptr->free_nodes[i]];
    std::vector<double> out_free;
    apply_hessian(*obj_ptr, *cache, v_free, out_free);
    std::vector<double> full(obj_ptr->grid->size(), 0.0);
    for (std::size_t i = 0; i < obj_ptr->free_nodes.size(); ++i)
      full[obj_ptr->free_nodes[i]] = out_free[i];
    return full;
  };
  return out;
}

JepsResult assemble_Jeps(const ScalarField& u, const LagrangianModel& model, const PenaltyG& pen,
                         const ScalarField& phi_eps, double eps) {
  DiscreteObjective obj = DiscreteObjective::jeps(*u.grid, model, pen, phi_eps, eps);
  std::vector<double> grad_free;
  EnergyEval ev = eval_energy_gradient(obj, u, grad_free);
  if (!ev.feasible) throw OutOfDomain(ev.bad_node);
  return {ev.energy, scatter_gradient(obj, grad_free)};
}

double plain_J(const ScalarField& u, const LagrangianModel& model) {
  const Grid& g = *u.grid;
  double j = 0;
  for (int k : g.inner_nodes) j += g.qw[k] * lagrangian_value_at(model, g, u.v, k, u[k]);
  return j;
}

}  // namespace cvx
