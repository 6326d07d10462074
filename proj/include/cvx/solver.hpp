#pragma once

#include <vector>

#include "cvx/discrete.hpp"

namespace cvx {

struct NewtonConfig {
  double tol_grad = 1e-8;   // sup norm of the reduced gradient
  int max_iters = 200;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double cg_tol = 1e-10;    // relative residual
  int cg_max = 2000;
  bool verbose = false;

  void validate() const;
};

/// Geometric ladder eps_k = eps0 * ratio^k, k = 0..count-1, all in (0, 1).
struct EpsSchedule {
  double eps0 = 1.0 / 16;
  double ratio = 0.5;
  int count = 8;

  std::vector<double> values() const;
};

struct SolveReport {
  double eps = 0;
  int iters = 0;
  double final_grad_norm = 0;
  EnergyBreakdown energy;
  double min_det = 0;
  double linfty_u = 0;
  double penalty_quartic = 0;  // integral of (u - phi_eps)^4 over the free band
  double el_residual = 0;      // interior median |U^ij D_ij w - f_eps/eps|
  double wall_ms = 0;
  // Filled by the continuation sweep; NaN for standalone solves.
  double err_K_vs_baseline = std::nan("");
  double keyest_monitor = std::nan("");  // (1/2eps) integral of G'(r) r
  double plain_j = std::nan("");
};

struct NewtonResult {
  ScalarField u;
  SolveReport report;
  std::vector<double> energy_history;  // accepted iterates, non-increasing
  int cg_indefinite_hits = 0;
};

/// Strictly discretely convex start u0 = phi + alpha (|x-c|^2 - R^2) with the
/// Dirichlet ring pinned to phi; alpha = 0 is tried first, then a doubling
/// ladder in [1e-3, 10] until min det D2_h u0 >= 1e-3 over the interior.
ScalarField feasible_start(const Grid& grid, const DomainSpec& spec);

/// Damped Newton on J_eps: feasibility-first backtracking (the PD cone is
/// convex, so shrinking a feasible step keeps it feasible), then Armijo.
/// Throws MaxIterations or LineSearchStall; OutOfDomain if u0 is infeasible.
NewtonResult newton_minimize(const ScalarField& u0, double eps, const LagrangianModel& model,
                             const PenaltyG& pen, const ScalarField& phi_eps,
                             const NewtonConfig& cfg);

/// Generic Newton driver over any discrete objective (used by the penalized
/// solve and the baseline alike).
NewtonResult newton_on(const DiscreteObjective& obj, const ScalarField& u0,
                       const NewtonConfig& cfg);

struct SweepOptions {
  const ScalarField* baseline = nullptr;      // for err_K reporting
  const std::vector<int>* compact_mask = nullptr;
  const ScalarField* psi = nullptr;           // w boundary data for the residual
  bool verbose = false;
};

struct SweepReport {
  std::vector<SolveReport> reports;    // decreasing eps order
  std::vector<ScalarField> solutions;
};

/// Solves the eps ladder in decreasing order with warm starts, recording the
/// per-eps error against the baseline on the compact mask, the quartic
/// penalty integral, and the monitored boundary-estimate quantity.
SweepReport continuation_sweep(const DomainSpec& spec, const Grid& grid,
                               const LagrangianModel& model, const PenaltyG& pen,
                               const EpsSchedule& schedule, const NewtonConfig& cfg,
                               const SweepOptions& opts = {});

struct BaselineResult {
  ScalarField u;
  std::vector<SolveReport> stages;  // one per mu
};

/// Direct oracle for the constrained problem: minimizes plain J plus
/// mu * barrier with u hard-pinned to phi at every node of Omega \ Omega_0,
/// continuing mu down the given ladder.  Cross-interface convexity is not
/// enforced, only audited.
BaselineResult baseline_minimize(const Grid& grid, const DomainSpec& spec,
                                 const LagrangianModel& model,
                                 const std::vector<double>& mu_schedule,
                                 const NewtonConfig& cfg);

/// The Euler-Lagrange system residual at u: w = (det D2_h u)^-1 pinned to psi
/// on the ring, f_eps the two-branch right-hand side, and per-interior-node
///   U^ij D_ij w - f_eps / eps.
struct AbreuResidual {
  ScalarField w;
  std::vector<double> lma_residual;  // NaN off the interior mask
  std::vector<double> f_eps;
};

AbreuResidual abreu_residual(const ScalarField& u, double eps, const LagrangianModel& model,
                             const PenaltyG& pen, const ScalarField& phi_eps,
                             const ScalarField& psi);

/// (1/2eps) sum w G'(u - phi_eps)(u - phi_eps) over the free band.
double keyest_monitor_value(const Grid& grid, const PenaltyG& pen, const ScalarField& u,
                            const ScalarField& phi_eps, double eps);

/// sum w (u - phi_eps)^4 over the free band.
double penalty_quartic_value(const Grid& grid, const ScalarField& u,
                             const ScalarField& phi_eps);

}  // namespace cvx
