#pragma once

#include <functional>
#include <optional>
#include <string>

#include "cvx/common.hpp"
#include "cvx/polynomial.hpp"

namespace cvx {

/// One growth-envelope function: smooth, nonnegative and nondecreasing on
/// [0, inf).  Carries its derivative; polynomial envelopes additionally carry
/// their coefficients so the penalty integral can be done in closed form.
struct Envelope {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::optional<Polynomial> poly;

  double operator()(double t) const { return f(t); }

  static Envelope zero();
  static Envelope constant(double c);
  static Envelope from_poly(Polynomial p);
  static Envelope generic(std::function<double(double)> f, std::function<double(double)> df);

  bool is_poly() const { return poly.has_value(); }
};

/// The envelope family (f_k, g_k) of the growth conditions: f_0 g_0 bounds
/// |F_z| + max_i |F_{p_i}|, f_1 g_1 the Hessian, f_2 g_2 the mixed x-trace,
/// f_3 g_3 the p-z coupling.  (f_1, g_1) feed only the optional audit.
struct GrowthEnvelope {
  Envelope f0, g0, f1, g1, f2, g2, f3, g3;
};

/// Scalar weight gamma(x) for the Rochet-Chone model: a constant or a
/// bilinearly interpolated table.
struct GammaField {
  std::function<double(Vec2)> value;
  std::function<Vec2(Vec2)> gradient;
  double max_value = 0;
  double lipschitz = 0;

  static GammaField constant(double c);
  /// Table over [x0,x1]x[y0,y1], row-major values (ny rows of nx).
  static GammaField table(int nx, int ny, Vec2 lo, Vec2 hi, std::vector<double> values);
};

/// Lagrangian F(x, z, p) with the partial derivatives the scheme needs.
/// F_px_trace is sum_i d^2F / dp_i dx_i.  All callbacks are pure and safe to
/// call concurrently.
struct LagrangianModel {
  std::string name;
  std::function<double(Vec2, double, Vec2)> F;
  std::function<double(Vec2, double, Vec2)> F_z;
  std::function<Vec2(Vec2, double, Vec2)> F_p;
  std::function<Sym2(Vec2, double, Vec2)> F_pp;
  std::function<double(Vec2, double, Vec2)> F_px_trace;
  std::function<Vec2(Vec2, double, Vec2)> F_pz;
  /// Second z-derivative; zero for every built-in model.  Used only to make
  /// the Newton Hessian exact.
  std::function<double(Vec2, double, Vec2)> F_zz;
  GrowthEnvelope envelopes;
};

/// Rochet-Chone monopolist Lagrangian F = (|p|^q / q - x.p + z) gamma(x) for
/// q > 1.  For q < 2 the derivative callbacks regularize |p| as
/// sqrt(|p|^2 + delta^2) with delta = 1e-8 so the Hessian stays finite at
/// p = 0.  domain_radius enters only the growth envelopes (sup |x| over
/// Omega).
LagrangianModel rochet_chone(double q, GammaField gamma, double domain_radius = 1.0);

/// F = e^{|p|^2}: the non-quadratic-growth example.
LagrangianModel exp_lagrangian();

/// F = |p|^2 / 2, used by the closed-form constrained-minimizer test.
LagrangianModel quadratic_test_model();

/// F identically zero (trivial envelopes); for barrier-only runs and tests.
LagrangianModel zero_lagrangian();

}  // namespace cvx
