#include "cvx/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cvx {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

AuditOutcome check_G_identity(const PenaltyG& pen, const std::vector<double>& samples) {
  AuditOutcome out;
  out.name = "G_identity";
  out.threshold = 1e-10;
  double worst = 0;
  double worst_x = 0;
  for (double x : samples) {
    const double a = pen.Gp(x);
    const double b = 2 * x * pen.H(x * x);
    if (a == b) continue;  // covers exact closed forms and matching overflow
    const double err = std::abs(a - b) / (1 + std::abs(a));
    if (!(err <= worst)) {
      worst = err;
      worst_x = x;
    }
  }
  out.measured = worst;
  out.passed = worst <= out.threshold;
  out.context = "worst at x=" + fmt(worst_x) + " over " + std::to_string(samples.size()) +
                " samples";
  return out;
}

AuditOutcome check_linfty(const ScalarField& u, const DomainSpec& spec) {
  const Grid& g = *u.grid;
  AuditOutcome out;
  out.name = "linfty_bound";
  out.threshold = 1e-8;

  double sup_phi_ring = -1e300, sup_abs_phi_ring = 0;
  for (int k : g.boundary_nodes) {
    const double p = spec.phi.value(g.coord(k));
    sup_phi_ring = std::max(sup_phi_ring, p);
    sup_abs_phi_ring = std::max(sup_abs_phi_ring, std::abs(p));
  }

  // Case-1 constant: C1 = sup |phi| + sup |e^rho - 1| + 1, with the chord
  // ratio dist(Omega_0, bdry) / diam(Omega) taken from the grid.
  const DefiningFunction rho = DefiningFunction::disk(spec.center, spec.radius);
  double sup_abs_phi = 0, sup_lift = 0;
  for (int k = 0; k < g.size(); ++k) {
    if (!g.is_inside(k)) continue;
    sup_abs_phi = std::max(sup_abs_phi, std::abs(spec.phi.value(g.coord(k))));
    sup_lift = std::max(sup_lift, std::abs(std::exp(rho.value(g.coord(k))) - 1.0));
  }
  const double c1 = sup_abs_phi + sup_lift + 1.0;
  double dist = 1e300;
  for (int k : g.inner_nodes) dist = std::min(dist, g.dist_to_boundary(k));
  const double chord_ratio = dist / (2 * spec.radius);
  const double lower_bound = (c1 + sup_abs_phi_ring) / chord_ratio;

  const double max_u = u.max_inside();
  const double min_u = u.min_inside();
  out.measured = max_u - sup_phi_ring;
  out.passed = (out.measured <= out.threshold) && (min_u >= -lower_bound);
  out.context = "max u - sup phi = " + fmt(out.measured) + ", min u = " + fmt(min_u) +
                " vs lower bound -" + fmt(lower_bound);
  return out;
}

AuditOutcome check_penalty_decay(const SweepReport& sweep) {
  const int count = int(sweep.reports.size());
  if (count < 4) throw InsufficientData("check_penalty_decay: need at least 4 sweep points");
  const int window = std::max(4, count / 2);
  std::vector<double> lx, ly;
  for (int i = count - window; i < count; ++i) {
    lx.push_back(std::log(sweep.reports[i].eps));
    ly.push_back(std::log(sweep.reports[i].penalty_quartic));
  }
  AuditOutcome out;
  out.name = "penalty_decay";
  out.threshold = 0.9;
  out.measured = ls_slope(lx, ly);
  out.passed = out.measured >= out.threshold;
  out.context = "log-log slope over final " + std::to_string(window) + " points";
  return out;
}

AuditOutcome check_convexity(const ScalarField& u) {
  const Grid& g = *u.grid;
  const HessianField hf = hessian_h(u);
  AuditOutcome out;
  out.name = "convexity";
  out.threshold = -1e-8;

  double min_eig = 1e300, min_eig_interface = 1e300;
  int argmin = -1;
  for (int k : g.interior_nodes) {
    const double e = hf.m[k].eig_min();
    if (e < min_eig) {
      min_eig = e;
      argmin = k;
    }
    bool interface = false;
    if (!g.inner.empty()) {
      const bool self = g.inner[k];
      for (int dj = -1; dj <= 1 && !interface; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const int nb = k + dj * g.n + di;
          if (g.is_inside(nb) && bool(g.inner[nb]) != self) {
            interface = true;
            break;
          }
        }
    }
    if (interface) min_eig_interface = std::min(min_eig_interface, e);
  }
  out.measured = min_eig;
  out.passed = min_eig >= out.threshold;
  out.context = "argmin node " + std::to_string(argmin) + ", interface min eig " +
                (min_eig_interface == 1e300 ? std::string("n/a") : fmt(min_eig_interface));
  return out;
}

AuditOutcome check_keyest_bounded(const SweepReport& sweep) {
  if (sweep.reports.size() < 2)
    throw InsufficientData("check_keyest_bounded: need at least 2 sweep points");
  AuditOutcome out;
  out.name = "keyest_bounded";
  double vmax = 0;
  bool finite = true;
  for (const SolveReport& r : sweep.reports) {
    if (!std::isfinite(r.keyest_monitor)) finite = false;
    vmax = std::max(vmax, r.keyest_monitor);
  }
  const double v0 = sweep.reports.front().keyest_monitor;  // largest eps solves first
  out.measured = vmax;
  out.threshold = 1e3 * v0;
  out.passed = finite && vmax <= out.threshold;
  out.context = "value at largest eps " + fmt(v0);
  return out;
}

}  // namespace cvx
