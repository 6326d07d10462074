#pragma once

#include <string>
#include <vector>

#include "cvx/penalty.hpp"
#include "cvx/solver.hpp"

namespace cvx {

/// One executable check of an identity, bound or decay rate.
struct AuditOutcome {
  std::string name;
  bool passed = false;
  double measured = 0;
  double threshold = 0;
  std::string context;
};

/// G'(x) = 2 x H(x^2) over the samples; relative error against 1 + |G'|.
/// Exactly equal values (including matching overflow to infinity for
/// fast-growing envelopes) count as zero error.
AuditOutcome check_G_identity(const PenaltyG& pen, const std::vector<double>& samples);

/// Upper bound max u <= sup_ring phi + 1e-8, and the geometric lower bound
/// estimated from the chord argument with the grid's actual
/// dist(Omega_0, bdry) and diam(Omega).
AuditOutcome check_linfty(const ScalarField& u, const DomainSpec& spec);

/// Least-squares slope of log penalty_quartic against log eps over the final
/// max(4, count/2) sweep points; passes at slope >= 0.9.  Throws
/// InsufficientData below 4 points.
AuditOutcome check_penalty_decay(const SweepReport& sweep);

/// Min eigenvalue of D2_h u over interior nodes >= -1e-8; the minimum over
/// the nodes whose stencil crosses the Omega_0 interface is reported
/// separately in the context.
AuditOutcome check_convexity(const ScalarField& u);

/// The monitored quantity (1/2eps) int G'(r) r is finite at every eps and its
/// sweep maximum stays within 1e3 of its value at the largest eps.  Throws
/// InsufficientData below 2 points.
AuditOutcome check_keyest_bounded(const SweepReport& sweep);

}  // namespace cvx
