#include "cvx/model.hpp"

#include <algorithm>
#include <cmath>

namespace cvx {

Envelope Envelope::zero() { return from_poly(Polynomial()); }

Envelope Envelope::constant(double c) { return from_poly(Polynomial::constant(c)); }

Envelope Envelope::from_poly(Polynomial p) {
  Envelope e;
  Polynomial dp = p.derivative();
  e.f = [p](double t) { return p(t); };
  e.df = [dp](double t) { return dp(t); };
  e.poly = std::move(p);
  return e;
}

Envelope Envelope::generic(std::function<double(double)> f, std::function<double(double)> df) {
  Envelope e;
  e.f = std::move(f);
  e.df = std::move(df);
  return e;
}

// ── gamma ────────────────────────────────────────────────────────────────

GammaField GammaField::constant(double c) {
  if (c < 0) throw InvalidArgument("gamma must be nonnegative");
  GammaField g;
  g.value = [c](Vec2) { return c; };
  g.gradient = [](Vec2) { return Vec2{}; };
  g.max_value = c;
  g.lipschitz = 0;
  return g;
}

GammaField GammaField::table(int nx, int ny, Vec2 lo, Vec2 hi, std::vector<double> values) {
  if (nx < 2 || ny < 2 || int(values.size()) != nx * ny)
    throw InvalidArgument("gamma table needs nx, ny >= 2 and nx*ny values");
  for (double v : values)
    if (v < 0 || !std::isfinite(v)) throw InvalidArgument("gamma table values must be >= 0");
  const double hx = (hi.x - lo.x) / (nx - 1), hy = (hi.y - lo.y) / (ny - 1);
  if (hx <= 0 || hy <= 0) throw InvalidArgument("gamma table extent must be positive");

  auto cell = [=](Vec2 p, int& i, int& j, double& s, double& t) {
    s = std::clamp((p.x - lo.x) / hx, 0.0, double(nx - 1) - 1e-12);
    t = std::clamp((p.y - lo.y) / hy, 0.0, double(ny - 1) - 1e-12);
    i = int(s);
    j = int(t);
    s -= i;
    t -= j;
  };
  auto at = [values, nx](int i, int j) { return values[j * nx + i]; };

  GammaField g;
  g.value = [=](Vec2 p) {
    int i, j;
    double s, t;
    cell(p, i, j, s, t);
    return (1 - s) * (1 - t) * at(i, j) + s * (1 - t) * at(i + 1, j) +
           (1 - s) * t * at(i, j + 1) + s * t * at(i + 1, j + 1);
  };
  g.gradient = [=](Vec2 p) {
    int i, j;
    double s, t;
    cell(p, i, j, s, t);
    const double gx =
        ((1 - t) * (at(i + 1, j) - at(i, j)) + t * (at(i + 1, j + 1) - at(i, j + 1))) / hx;
    const double gy =
        ((1 - s) * (at(i, j + 1) - at(i, j)) + s * (at(i + 1, j + 1) - at(i + 1, j))) / hy;
    return Vec2{gx, gy};
  };
  g.max_value = *std::max_element(values.begin(), values.end());
  double lip = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (i + 1 < nx) lip = std::max(lip, std::abs(at(i + 1, j) - at(i, j)) / hx);
      if (j + 1 < ny) lip = std::max(lip, std::abs(at(i, j + 1) - at(i, j)) / hy);
    }
  g.lipschitz = lip;
  return g;
}

// ── Rochet-Chone ─────────────────────────────────────────────────────────

namespace {

constexpr double kPRegular = 1e-8;  // |p| -> sqrt(|p|^2 + delta^2) in derivatives

// |p|^e with the regularized norm; e may be negative.
double rpow(double pn, double e) { return std::pow(pn, e); }

bool near_integer(double q) { return std::abs(q - std::round(q)) < 1e-12; }

GrowthEnvelope rochet_chone_envelopes(double q, const GammaField& gamma, double R) {
  GrowthEnvelope env;
  const double gmax = gamma.max_value;
  const double lip = gamma.lipschitz;

  // |F_z| + max_i |F_{p_i}| <= gamma (1 + |p|^{q-1} + R) <= f0(|z|) g0(|p|).
  env.f0 = Envelope::from_poly(Polynomial{gmax, gmax});  // gmax (1 + t)
  auto power_majorant = [&](double scale, double offset) {
    // offset + scale * t^{q-1}, convexified for q < 2 via t^{q-1} <= 1 + t.
    if (q < 2.0) return Envelope::from_poly(Polynomial{offset + scale, 2 * scale});
    if (near_integer(q)) {
      std::vector<double> c(std::size_t(std::lround(q)), 0.0);
      c[0] = offset;
      c.back() = scale;
      return Envelope::from_poly(Polynomial(c));
    }
    return Envelope::generic(
        [=](double t) { return offset + scale * std::pow(t, q - 1); },
        [=](double t) { return scale * (q - 1) * std::pow(t, q - 2); });
  };
  env.g0 = power_majorant(1.0, 1.0 + R);

  // Hessian bound; with the p-regularization the largest eigenvalue is at
  // most gamma (q-1) max(1, |p|)^{q-2} for q >= 2 and gamma delta^{q-2} below.
  env.f1 = Envelope::constant(gmax);
  if (q >= 2.0) {
    env.g1 = power_majorant(q - 1, q - 1);
  } else {
    env.g1 = Envelope::constant((q - 1) * std::pow(kPRegular, q - 2.0));
  }

  // |sum_i F_{p_i x_i}| <= n gamma + lip (|p|^{q-1} + R) <= n f2 g2.
  env.f2 = Envelope::constant(gmax + lip);
  env.g2 = lip == 0 ? Envelope::constant(1.0) : power_majorant(1.0, 1.0 + R);

  env.f3 = Envelope::zero();  // F_pz = 0
  env.g3 = Envelope::zero();
  return env;
}

}  // namespace

LagrangianModel rochet_chone(double q, GammaField gamma, double domain_radius) {
  if (!(q > 1.0)) throw InvalidArgument("rochet_chone: q must be > 1");

  LagrangianModel m;
  m.name = "rochet_chone";
  auto gval = gamma.value;
  auto ggrad = gamma.gradient;

  m.F = [gval, q](Vec2 x, double z, Vec2 p) {
    return (std::pow(p.norm(), q) / q - x.dot(p) + z) * gval(x);
  };
  m.F_z = [gval](Vec2 x, double, Vec2) { return gval(x); };
  m.F_p = [gval, q](Vec2 x, double, Vec2 p) {
    const double pn = std::sqrt(p.norm2() + kPRegular * kPRegular);
    return (p * rpow(pn, q - 2) - x) * gval(x);
  };
  m.F_pp = [gval, q](Vec2 x, double, Vec2 p) {
    const double pn = std::sqrt(p.norm2() + kPRegular * kPRegular);
    Sym2 h = Sym2::identity(rpow(pn, q - 2)) + Sym2::outer(p) * ((q - 2) * rpow(pn, q - 4));
    return h * gval(x);
  };
  m.F_px_trace = [gval, ggrad, q](Vec2 x, double, Vec2 p) {
    const double pn = std::sqrt(p.norm2() + kPRegular * kPRegular);
    return -2.0 * gval(x) + (p * rpow(pn, q - 2) - x).dot(ggrad(x));
  };
  m.F_pz = [](Vec2, double, Vec2) { return Vec2{}; };
  m.F_zz = [](Vec2, double, Vec2) { return 0.0; };
  m.envelopes = rochet_chone_envelopes(q, gamma, domain_radius);
  return m;
}

LagrangianModel exp_lagrangian() {
  LagrangianModel m;
  m.name = "exp";
  m.F = [](Vec2, double, Vec2 p) { return std::exp(p.norm2()); };
  m.F_z = [](Vec2, double, Vec2) { return 0.0; };
  m.F_p = [](Vec2, double, Vec2 p) { return p * (2 * std::exp(p.norm2())); };
  m.F_pp = [](Vec2, double, Vec2 p) {
    const double e = std::exp(p.norm2());
    return Sym2::identity(2 * e) + Sym2::outer(p) * (4 * e);
  };
  m.F_px_trace = [](Vec2, double, Vec2) { return 0.0; };
  m.F_pz = [](Vec2, double, Vec2) { return Vec2{}; };
  m.F_zz = [](Vec2, double, Vec2) { return 0.0; };

  m.envelopes.f0 = Envelope::constant(1.0);
  m.envelopes.g0 = Envelope::generic(
      [](double t) { return 2 * (1 + t) * std::exp(t * t); },
      [](double t) { return 2 * std::exp(t * t) * (1 + 2 * t * (1 + t)); });
  m.envelopes.f1 = Envelope::constant(1.0);
  m.envelopes.g1 = Envelope::generic(
      [](double t) { return 2 * (1 + 2 * t * t) * std::exp(t * t); },
      [](double t) { return 2 * std::exp(t * t) * t * (6 + 4 * t * t); });
  m.envelopes.f2 = Envelope::zero();
  m.envelopes.g2 = Envelope::zero();
  m.envelopes.f3 = Envelope::zero();
  m.envelopes.g3 = Envelope::zero();
  return m;
}

LagrangianModel quadratic_test_model() {
  LagrangianModel m;
  m.name = "quadratic_test";
  m.F = [](Vec2, double, Vec2 p) { return 0.5 * p.norm2(); };
  m.F_z = [](Vec2, double, Vec2) { return 0.0; };
  m.F_p = [](Vec2, double, Vec2 p) { return p; };
  m.F_pp = [](Vec2, double, Vec2) { return Sym2::identity(); };
  m.F_px_trace = [](Vec2, double, Vec2) { return 0.0; };
  m.F_pz = [](Vec2, double, Vec2) { return Vec2{}; };
  m.F_zz = [](Vec2, double, Vec2) { return 0.0; };

  m.envelopes.f0 = Envelope::constant(1.0);
  m.envelopes.g0 = Envelope::from_poly(Polynomial{0.0, 1.0});  // |F_p| <= |p|
  m.envelopes.f1 = Envelope::constant(1.0);
  m.envelopes.g1 = Envelope::constant(1.0);
  m.envelopes.f2 = Envelope::zero();
  m.envelopes.g2 = Envelope::zero();
  m.envelopes.f3 = Envelope::zero();
  m.envelopes.g3 = Envelope::zero();
  return m;
}

LagrangianModel zero_lagrangian() {
  LagrangianModel m;
  m.name = "zero";
  m.F = [](Vec2, double, Vec2) { return 0.0; };
  m.F_z = [](Vec2, double, Vec2) { return 0.0; };
  m.F_p = [](Vec2, double, Vec2) { return Vec2{}; };
  m.F_pp = [](Vec2, double, Vec2) { return Sym2{}; };
  m.F_px_trace = [](Vec2, double, Vec2) { return 0.0; };
  m.F_pz = [](Vec2, double, Vec2) { return Vec2{}; };
  m.F_zz = [](Vec2, double, Vec2) { return 0.0; };
  m.envelopes.f0 = Envelope::zero();
  m.envelopes.g0 = Envelope::zero();
  m.envelopes.f1 = Envelope::zero();
  m.envelopes.g1 = Envelope::zero();
  m.envelopes.f2 = Envelope::zero();
  m.envelopes.g2 = Envelope::zero();
  m.envelopes.f3 = Envelope::zero();
  m.envelopes.g3 = Envelope::zero();
  return m;
}

}  // namespace cvx
