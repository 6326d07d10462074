#include "cvx/penalty.hpp"

#include <cmath>
#include <limits>

namespace cvx {

namespace {

struct SimpsonPanel {
  double a, b, fa, fm, fb, s;
};

double simpson(double fa, double fm, double fb, double w) { return w / 6 * (fa + 4 * fm + fb); }

double simpson_recurse(const std::function<double(double)>& f, SimpsonPanel p, double tol,
                       int depth) {
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m), rm = 0.5 * (m + p.b);
  const double flm = f(lm), frm = f(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm) || !std::isfinite(p.s))
    return std::numeric_limits<double>::infinity();
  const double sl = simpson(p.fa, flm, p.fm, m - p.a);
  const double sr = simpson(p.fm, frm, p.fb, p.b - m);
  const double err = sl + sr - p.s;
  if (std::abs(err) <= 15 * tol) return sl + sr + err / 15;
  if (depth <= 0) throw QuadratureFailure("adaptive Simpson did not reach tolerance");
  return simpson_recurse(f, {p.a, m, p.fa, flm, p.fm, sl}, tol / 2, depth - 1) +
         simpson_recurse(f, {m, p.b, p.fm, frm, p.fb, sr}, tol / 2, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol) {
  if (a == b) return 0.0;
  const double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb))
    return std::numeric_limits<double>::infinity();
  const double s = simpson(fa, fm, fb, b - a);
  // Absolute 1e-12 is unattainable for huge integrands; fall back to a
  // relative target there so the line search can still probe wild states.
  const double tol = std::max(abs_tol, 1e-14 * std::abs(s));
  return simpson_recurse(f, {a, b, fa, fm, fb, s}, tol, 52);
}

PenaltyG build_penalty(const GrowthEnvelope& env) {
  PenaltyG pen;

  const bool poly = env.f0.is_poly() && env.g0.is_poly() && env.f2.is_poly() &&
                    env.g2.is_poly() && env.f3.is_poly() && env.g3.is_poly();

  if (poly) {
    // H(t) = t (1 + f0 g0 + f2 g2 + t f3 g3) assembled symbolically.
    const Polynomial t = Polynomial::x();
    const Polynomial inner = Polynomial::constant(1.0) + (*env.f0.poly) * (*env.g0.poly) +
                             (*env.f2.poly) * (*env.g2.poly) + t * (*env.f3.poly) * (*env.g3.poly);
    const Polynomial h = t * inner;
    const Polynomial hp = h.derivative();
    const Polynomial gint = h.antiderivative();
    pen.H = [h](double x) { return h(std::max(x, 0.0)); };
    pen.Hp = [hp](double x) { return hp(std::max(x, 0.0)); };
    pen.G = [gint](double x) { return gint(x * x); };
    pen.closed_form = true;
  } else {
    auto f0 = env.f0.f, g0 = env.g0.f, f2 = env.f2.f, g2 = env.g2.f, f3 = env.f3.f,
         g3 = env.g3.f;
    auto df0 = env.f0.df, dg0 = env.g0.df, df2 = env.f2.df, dg2 = env.g2.df, df3 = env.f3.df,
         dg3 = env.g3.df;
    pen.H = [=](double x) {
      const double s = std::max(x, 0.0);
      return s * (1.0 + f0(s) * g0(s) + f2(s) * g2(s) + s * f3(s) * g3(s));
    };
    pen.Hp = [=](double x) {
      const double s = std::max(x, 0.0);
      const double inner = 1.0 + f0(s) * g0(s) + f2(s) * g2(s) + s * f3(s) * g3(s);
      const double dinner = df0(s) * g0(s) + f0(s) * dg0(s) + df2(s) * g2(s) + f2(s) * dg2(s) +
                            f3(s) * g3(s) + s * (df3(s) * g3(s) + f3(s) * dg3(s));
      return inner + s * dinner;
    };
    auto h = pen.H;
    pen.G = [h](double x) { return adaptive_simpson(h, 0.0, x * x, 1e-12); };
    pen.closed_form = false;
  }

  auto h = pen.H;
  auto hp = pen.Hp;
  pen.Gp = [h](double x) { return 2 * x * h(x * x); };
  pen.Gpp = [h, hp](double x) { return 2 * h(x * x) + 4 * x * x * hp(x * x); };
  return pen;
}

}  // namespace cvx
