#pragma once

#include <functional>
#include <vector>

#include "cvx/field.hpp"
#include "cvx/model.hpp"
#include "cvx/penalty.hpp"

namespace cvx {

/// Central-difference gradient; one-sided at Dirichlet-layer nodes where a
/// neighbour is missing.  Entries outside Omega are zero.
std::vector<Vec2> gradient_h(const ScalarField& u);

/// Discrete Hessian at interior nodes: standard second differences on the
/// diagonal, 4-point cross stencil for the mixed term.  Exact on quadratics.
HessianField hessian_h(const ScalarField& u);

/// Per-term breakdown of the approximating functional.
struct EnergyBreakdown {
  double lagrangian_term = 0;  // integral of F over Omega_0
  double penalty_term = 0;     // (1/eps) integral of G(u - phi_eps) over Omega \ Omega_0
  double barrier_term = 0;     // -eps integral of log det D2u over Omega
  double total = 0;
};

/// Generic discrete objective: which nodes carry which term, which nodes are
/// free.  The penalized functional and the hard-constrained baseline are two
/// instances.  Quadrature weight is the grid's per-node weight throughout.
struct DiscreteObjective {
  const Grid* grid = nullptr;
  const LagrangianModel* model = nullptr;  // may be null (no F term)
  std::vector<int> lagrangian_nodes;
  const PenaltyG* pen = nullptr;  // may be null (no G term)
  const ScalarField* target = nullptr;
  double penalty_weight = 0;  // 1/eps
  double barrier_weight = 0;  // eps (or mu for the baseline)
  std::vector<int> penalty_nodes;
  std::vector<int> barrier_nodes;
  std::vector<int> free_nodes;
  std::vector<int> free_index;  // node id -> position in free_nodes, or -1

  void set_free(const std::vector<int>& nodes);

  /// Penalized objective J_eps: F over Omega_0, G over the free band,
  /// barrier over all interior nodes, all interior nodes free.
  static DiscreteObjective jeps(const Grid& g, const LagrangianModel& m, const PenaltyG& p,
                                const ScalarField& phi_eps, double eps);

  /// Baseline objective: plain J plus mu times the barrier, with only the
  /// Omega_0 nodes free (u is hard-pinned to phi on all of Omega \ Omega_0).
  static DiscreteObjective baseline(const Grid& g, const LagrangianModel& m, double mu);
};

/// Energy evaluation; feasible == false means some barrier node left the
/// positive-definite cone (bad_node is the first, row-major).
struct EnergyEval {
  bool feasible = false;
  int bad_node = -1;
  EnergyBreakdown energy;
};

EnergyEval eval_energy(const DiscreteObjective& obj, const ScalarField& u);

/// Energy plus the exact discrete gradient with respect to the free nodes.
/// The F term averages F over the forward/backward short-difference
/// gradients (O(h^2) consistent by symmetry, and the adjoint couples
/// nearest neighbours instead of decoupling the sublattices), so the
/// discrete Euler-Lagrange operator is F_z - sum_i D_i(F_{p_i}) by
/// summation by parts, up to quadrature.
EnergyEval eval_energy_gradient(const DiscreteObjective& obj, const ScalarField& u,
                                std::vector<double>& grad_free);

/// Second-derivative data frozen at the current iterate, applied matrix-free.
/// The F-term data comes in forward/backward pairs matching the symmetric
/// short-difference quadrature of the Lagrangian.
struct HessianCache {
  HessianField hess;                 // of u, also used for min-det reporting
  std::vector<Sym2> ainv;            // (D2u)^-1 at barrier nodes
  std::vector<Sym2> fpp_f, fpp_b;    // at lagrangian nodes
  std::vector<Vec2> fpz_f, fpz_b;
  std::vector<double> fzz;           // averaged over both evaluation points
  std::vector<double> pen_diag;      // penalty_weight * w_k * G''(r_k)
  bool feasible = false;
};

HessianCache build_hessian_cache(const DiscreteObjective& obj, const ScalarField& u);
void apply_hessian(const DiscreteObjective& obj, const HessianCache& cache,
                   const std::vector<double>& v_free, std::vector<double>& out_free);
std::vector<double> hessian_diagonal(const DiscreteObjective& obj, const HessianCache& cache);

// ── spec-level single-term operations ────────────────────────────────────

struct BarrierResult {
  double value = 0;
  std::vector<double> gradient;  // full node-indexed vector, zero at pinned nodes
  /// Second variation v -> H v (v and the result node-indexed; v is read
  /// only at interior nodes).  Positive semidefinite.
  std::function<std::vector<double>(const std::vector<double>&)> hessian_action;
};

/// The log-det barrier term -eps * sum w log det D2u over interior nodes.
/// Throws OutOfDomain (with node) if any interior Hessian is not PD.
BarrierResult barrier(const ScalarField& u, double eps);

struct JepsResult {
  EnergyBreakdown energy;
  std::vector<double> gradient;  // full node-indexed vector, zero at pinned nodes
};

/// Assembles J_eps(u) and its exact discrete gradient.
JepsResult assemble_Jeps(const ScalarField& u, const LagrangianModel& model, const PenaltyG& pen,
                         const ScalarField& phi_eps, double eps);

/// Midpoint quadrature of F(x, u, Du) over the Omega_0 nodes.
double plain_J(const ScalarField& u, const LagrangianModel& model);

}  // namespace cvx
