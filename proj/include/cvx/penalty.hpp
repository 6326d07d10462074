#pragma once

#include <functional>

#include "cvx/model.hpp"

namespace cvx {

/// The penalty pair (H, G) built from the growth envelopes:
///
///   H(t) = t (1 + f0(t) g0(t) + f2(t) g2(t) + t f3(t) g3(t)),
///   G(x) = integral of H over [0, x^2],
///
/// so that G'(x) = 2 x H(x^2) and G''(x) = 2 H(x^2) + 4 x^2 H'(x^2) hold as
/// identities.  G is even, convex, quartic-flat at the origin, and H(t) >= t.
/// When every envelope is polynomial the integral is closed-form; otherwise
/// adaptive Simpson quadrature with absolute tolerance 1e-12 is used (a
/// relative floor guards integrands that overflow the absolute target).
struct PenaltyG {
  std::function<double(double)> H;
  std::function<double(double)> Hp;  // H'
  std::function<double(double)> G;
  std::function<double(double)> Gp;   // G' = 2 x H(x^2)
  std::function<double(double)> Gpp;  // G''
  bool closed_form = false;
};

PenaltyG build_penalty(const GrowthEnvelope& env);

/// Adaptive Simpson on [a, b]; abs_tol is promoted to a relative tolerance
/// for very large integrals.  Throws QuadratureFailure when refinement
/// bottoms out; returns +/-inf if the integrand overflows.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol);

}  // namespace cvx
