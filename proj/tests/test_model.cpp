#include <doctest.h>

#include <cmath>
#include <random>

#include "cvx/model.hpp"

using namespace cvx;

namespace {

// Central finite differences of F against the analytic callbacks.
void check_derivatives(const LagrangianModel& m, std::mt19937_64& rng, int samples) {
  std::uniform_real_distribution<double> ux(-0.9, 0.9), uz(-2.0, 2.0), up(-1.5, 1.5);
  const double d = 1e-6;
  for (int s = 0; s < samples; ++s) {
    const Vec2 x{ux(rng), ux(rng)};
    const double z = uz(rng);
    Vec2 p{up(rng), up(rng)};
    if (p.norm() < 0.1) p.x += 0.2;  // keep away from the q<2 regularization scale

    const double fz_fd = (m.F(x, z + d, p) - m.F(x, z - d, p)) / (2 * d);
    CHECK(m.F_z(x, z, p) == doctest::Approx(fz_fd).epsilon(1e-6));

    const Vec2 fp = m.F_p(x, z, p);
    const double fpx_fd = (m.F(x, z, {p.x + d, p.y}) - m.F(x, z, {p.x - d, p.y})) / (2 * d);
    const double fpy_fd = (m.F(x, z, {p.x, p.y + d}) - m.F(x, z, {p.x, p.y - d})) / (2 * d);
    CHECK(fp.x == doctest::Approx(fpx_fd).epsilon(1e-6));
    CHECK(fp.y == doctest::Approx(fpy_fd).epsilon(1e-6));

    const Sym2 fpp = m.F_pp(x, z, p);
    const Vec2 dpx = (m.F_p(x, z, {p.x + d, p.y}) - m.F_p(x, z, {p.x - d, p.y})) * (0.5 / d);
    const Vec2 dpy = (m.F_p(x, z, {p.x, p.y + d}) - m.F_p(x, z, {p.x, p.y - d})) * (0.5 / d);
    CHECK(fpp.a11 == doctest::Approx(dpx.x).epsilon(1e-5));
    CHECK(fpp.a12 == doctest::Approx(dpx.y).epsilon(1e-5));
    CHECK(fpp.a12 == doctest::Approx(dpy.x).epsilon(1e-5));
    CHECK(fpp.a22 == doctest::Approx(dpy.y).epsilon(1e-5));
    CHECK(fpp.eig_min() >= -1e-10);  // convexity in p

    const Vec2 fpz = m.F_pz(x, z, p);
    const Vec2 dz = (m.F_p(x, z + d, p) - m.F_p(x, z - d, p)) * (0.5 / d);
    CHECK(fpz.x == doctest::Approx(dz.x).epsilon(1e-5));
    CHECK(fpz.y == doctest::Approx(dz.y).epsilon(1e-5));

    const double tr_fd =
        (m.F_p({x.x + d, x.y}, z, p).x - m.F_p({x.x - d, x.y}, z, p).x) / (2 * d) +
        (m.F_p({x.x, x.y + d}, z, p).y - m.F_p({x.x, x.y - d}, z, p).y) / (2 * d);
    CHECK(m.F_px_trace(x, z, p) == doctest::Approx(tr_fd).epsilon(1e-5).scale(1.0));

    // Convexity of F in z along the sampled line.
    const double second = m.F(x, z + d, p) - 2 * m.F(x, z, p) + m.F(x, z - d, p);
    CHECK(second >= -1e-10);
  }
}

// The growth estimates with tolerance zero at random samples.
void check_envelopes(const LagrangianModel& m, std::mt19937_64& rng, int samples) {
  std::uniform_real_distribution<double> ux(-0.9, 0.9), uz(-3.0, 3.0), up(-2.0, 2.0);
  const GrowthEnvelope& e = m.envelopes;
  for (int s = 0; s < samples; ++s) {
    const Vec2 x{ux(rng), ux(rng)};
    const double z = uz(rng);
    const Vec2 p{up(rng), up(rng)};
    const double az = std::abs(z), ap = p.norm();

    const Vec2 fp = m.F_p(x, z, p);
    CHECK(std::abs(m.F_z(x, z, p)) + std::max(std::abs(fp.x), std::abs(fp.y)) <=
          e.f0(az) * e.g0(ap));
    CHECK(std::abs(m.F_px_trace(x, z, p)) <= 2 * e.f2(az) * e.g2(ap));
    const Vec2 fpz = m.F_pz(x, z, p);
    CHECK(std::max(std::abs(fpz.x), std::abs(fpz.y)) <= e.f3(az) * e.g3(ap));
    // Hessian bound: largest eigenvalue under f1 g1.  The exp envelope is
    // exactly tight, so allow a few ulp on an otherwise zero-tolerance check.
    const Sym2 fpp = m.F_pp(x, z, p);
    const double eig_max = 0.5 * fpp.trace() + std::hypot(0.5 * (fpp.a11 - fpp.a22), fpp.a12);
    // (the sqrt/square round-trip through |p| costs ~|p|^2 eps relative)
    const double bound = e.f1(az) * e.g1(ap);
    CHECK(eig_max <= bound * (1 + 1e-13) + 1e-15);
  }
}

void check_envelope_monotone(const GrowthEnvelope& e) {
  for (const Envelope* env : {&e.f0, &e.g0, &e.f1, &e.g1, &e.f2, &e.g2, &e.f3, &e.g3}) {
    double prev = -1;
    for (double t = 0; t <= 10.0; t += 0.25) {
      const double v = (*env)(t);
      CHECK(v >= 0);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

}  // namespace

TEST_CASE("rochet_chone q=2, gamma=1: closed-form values") {
  const LagrangianModel m = rochet_chone(2.0, GammaField::constant(1.0));
  const Vec2 x{0.5, 0.5};

  CHECK(m.F(x, 1.0, {1, 0}) == doctest::Approx(1.0));  // 0.5 - 0.5 + 1
  CHECK(m.F_z(x, 1.0, {1, 0}) == doctest::Approx(1.0));
  const Vec2 fp = m.F_p(x, 1.0, {1, 0});
  CHECK(fp.x == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(fp.y == doctest::Approx(-0.5).epsilon(1e-9));

  // p = x, z = 0 minimizes the quadratic part: F = -|x|^2 / 2.
  CHECK(m.F(x, 0.0, x) == doctest::Approx(-0.5 * x.norm2()));

  const Sym2 fpp = m.F_pp(x, 0.0, {0.3, -0.8});
  CHECK(fpp.a11 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fpp.a22 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fpp.a12 == doctest::Approx(0.0).epsilon(1e-9));

  // Mixed trace of the nondivergence expansion: sum_i dF_{p_i}/dx_i = -n gamma.
  CHECK(m.F_px_trace(x, 0.0, {1, 1}) == doctest::Approx(-2.0));
}

TEST_CASE("rochet_chone q<2 stays finite at p=0") {
  const LagrangianModel m = rochet_chone(1.5, GammaField::constant(1.0));
  const Sym2 fpp = m.F_pp({0, 0}, 0.0, {0, 0});
  CHECK(std::isfinite(fpp.a11));
  CHECK(std::isfinite(fpp.a22));
  CHECK(fpp.eig_min() >= 0);
  CHECK_THROWS_AS(rochet_chone(0.5, GammaField::constant(1.0)), InvalidArgument);
  CHECK_THROWS_AS(rochet_chone(1.0, GammaField::constant(1.0)), InvalidArgument);
}

TEST_CASE("exp lagrangian values and envelope") {
  const LagrangianModel m = exp_lagrangian();
  CHECK(m.F({0, 0}, 0, {0, 0}) == doctest::Approx(1.0));
  CHECK(m.F_p({0, 0}, 0, {0, 0}).norm() == doctest::Approx(0.0));
  const Sym2 h0 = m.F_pp({0, 0}, 0, {0, 0});
  CHECK(h0.a11 == doctest::Approx(2.0));
  CHECK(h0.a22 == doctest::Approx(2.0));

  CHECK(m.F({0, 0}, 0, {1, 0}) == doctest::Approx(std::exp(1.0)));
  CHECK(m.F_p({0, 0}, 0, {1, 0}).x == doctest::Approx(2 * std::exp(1.0)));

  // |F_p| at p=(1,1) under the envelope: 2 sqrt2 e^2 <= 2 (1 + sqrt2) e^2.
  const double lhs = m.F_p({0, 0}, 0, {1, 1}).norm();
  const double rhs = m.envelopes.f0(0.0) * m.envelopes.g0(std::sqrt(2.0));
  CHECK(lhs <= rhs);
  CHECK(lhs == doctest::Approx(2 * std::sqrt(2.0) * std::exp(2.0)));
  CHECK(rhs == doctest::Approx(2 * (1 + std::sqrt(2.0)) * std::exp(2.0)));
}

TEST_CASE("derivative consistency against finite differences") {
  std::mt19937_64 rng(7);
  check_derivatives(rochet_chone(2.0, GammaField::constant(1.0)), rng, 12);
  check_derivatives(rochet_chone(3.0, GammaField::constant(0.7)), rng, 12);
  check_derivatives(exp_lagrangian(), rng, 12);
  check_derivatives(quadratic_test_model(), rng, 12);
}

TEST_CASE("growth estimates hold at random samples") {
  std::mt19937_64 rng(11);
  check_envelopes(rochet_chone(2.0, GammaField::constant(1.0)), rng, 200);
  check_envelopes(rochet_chone(2.5, GammaField::constant(0.5)), rng, 200);
  check_envelopes(exp_lagrangian(), rng, 200);
  check_envelopes(quadratic_test_model(), rng, 200);
}

TEST_CASE("envelopes are nonnegative and nondecreasing on [0, 10]") {
  check_envelope_monotone(rochet_chone(2.0, GammaField::constant(1.0)).envelopes);
  check_envelope_monotone(exp_lagrangian().envelopes);
  check_envelope_monotone(quadratic_test_model().envelopes);
}

TEST_CASE("gamma table bilinear interpolation") {
  // 3x3 table of gamma(x, y) = 1 + x over [-1,1]^2.
  GammaField g = GammaField::table(3, 3, {-1, -1}, {1, 1}, {0, 1, 2, 0, 1, 2, 0, 1, 2});
  CHECK(g.value({0, 0}) == doctest::Approx(1.0));
  CHECK(g.value({0.5, -0.3}) == doctest::Approx(1.5));
  CHECK(g.gradient({0.25, 0.25}).x == doctest::Approx(1.0));
  CHECK(g.max_value == doctest::Approx(2.0));
  CHECK(g.lipschitz == doctest::Approx(1.0));

  std::mt19937_64 rng(3);
  const LagrangianModel m = rochet_chone(2.0, g);
  check_derivatives(m, rng, 8);
  check_envelopes(m, rng, 100);
}
