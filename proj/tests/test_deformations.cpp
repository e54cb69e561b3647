#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "virdet/deformations.hpp"

using namespace virdet;

TEST_CASE("field DSL") {
  auto v = VectorField::parse("cos(1)");
  CHECK(std::abs(v.series.coeff(1) - 0.5) < 1e-15);
  CHECK(std::abs(v.series.coeff(-1) - 0.5) < 1e-15);
  CHECK(v.is_real);

  auto w = VectorField::parse("i*sin(1)");
  CHECK(std::abs(w.series.coeff(1) - cplx(0.0, 1.0) * cplx(0.0, -0.5)) < 1e-15);
  CHECK_FALSE(w.is_real);

  auto u = VectorField::parse("0.5*cos(2), -0.25*sin(1), 2");
  CHECK(std::abs(u.eval(cplx(0.3)) -
                 (0.5 * std::cos(0.6) - 0.25 * std::sin(0.3) + 2.0)) < 1e-13);

  auto c = VectorField::parse("i*1");
  CHECK(std::abs(c.eval(cplx(1.0)) - cplx(0.0, 1.0)) < 1e-15);

  CHECK_THROWS_AS(VectorField::parse("tan(1)"), usage_error);
  CHECK_THROWS_AS(VectorField::parse("cos(x)"), usage_error);
  CHECK_THROWS_AS(VectorField::parse(""), usage_error);
}

TEST_CASE("flow of constant fields") {
  // v = i generates vertical translation; v = 1 rigid rotation.
  auto vi = VectorField::parse("i*1", 64);
  const CircleMap up = flow(vi, 0.3);
  CHECK(std::abs(up.apply(cplx(1.0)) - cplx(1.0, 0.3)) < 1e-12);
  CHECK(up.strip_bound() == doctest::Approx(0.3).epsilon(1e-10));

  auto v1 = VectorField::parse("1", 64);
  const CircleMap rot = flow(v1, 0.5);
  CHECK(std::abs(rot.apply(cplx(2.0)) - cplx(2.5)) < 1e-12);
  CHECK(rot.is_real());
}

TEST_CASE("flow(v, 0) is the identity exactly") {
  auto v = VectorField::parse("cos(1)", 64);
  const CircleMap id = flow(v, 0.0);
  CHECK(id.displacement().max_abs_coeff() == 0.0);
}

TEST_CASE("flow matches a high-resolution reference integration") {
  auto v = VectorField::parse("cos(1)", 64);
  const CircleMap a = flow(v, 0.05);         // default step count
  const CircleMap b = flow(v, 0.05, 20000);  // dense reference
  const auto va = a.boundary_values();
  const auto vb = b.boundary_values();
  double worst = 0.0;
  for (size_t j = 0; j < va.size(); ++j)
    worst = std::max(worst, std::abs(va[j] - vb[j]));
  CHECK(worst < 1e-9);
}

TEST_CASE("one-parameter group law") {
  auto v = VectorField::parse("cos(1), 0.5*sin(2)", 96);
  const double t = 0.03, s = 0.04;
  const CircleMap lhs = flow(v, t + s);
  const CircleMap rhs = compose(flow(v, t), flow(v, s));
  const auto la = lhs.boundary_values(), rb = rhs.boundary_values();
  double worst = 0.0;
  for (size_t j = 0; j < la.size(); ++j)
    worst = std::max(worst, std::abs(la[j] - rb[j]));
  CHECK(worst < 1e-8);
}

TEST_CASE("real flows stay real with positive circle derivative") {
  auto v = VectorField::parse("cos(1), -0.4*sin(3)", 96);
  REQUIRE(v.is_real);
  const CircleMap m = flow(v, 0.05);
  CHECK(m.is_real());
  const auto th = AnalyticPeriodic::grid_angles(m.order());
  for (size_t j = 0; j < th.size(); j += 7)
    CHECK(m.map_deriv(cplx(th[j])).real() > 0.0);
}

TEST_CASE("compose: identity and translations") {
  auto psi = flow(VectorField::parse("cos(1)", 64), 0.04);
  const CircleMap id = CircleMap::identity(64);
  const auto c = compose(id, psi);
  double worst = 0.0;
  for (int n = -64; n <= 64; ++n)
    worst = std::max(worst, std::abs(c.displacement().coeff(n) -
                                     psi.displacement().coeff(n)));
  CHECK(worst < 1e-12);

  auto ta = flow(VectorField::parse("i*1", 64), 0.1);
  auto tb = flow(VectorField::parse("i*1", 64), 0.15);
  const auto tc = compose(ta, tb);
  CHECK(std::abs(tc.apply(cplx(0.7)) - cplx(0.7, 0.25)) < 1e-12);
}

TEST_CASE("compose matches dense pointwise evaluation") {
  const CircleMap phi = flow(VectorField::parse("cos(1)", 96), 0.03);
  const CircleMap psi = flow(VectorField::parse("sin(1)", 96), 0.04);
  const CircleMap c = compose(phi, psi);
  double worst = 0.0;
  for (int j = 0; j < 113; ++j) {
    const double t = 2.0 * pi * j / 113.0;
    const cplx direct = phi.apply(psi.apply(cplx(t)));
    worst = std::max(worst, std::abs(c.apply(cplx(t)) - direct));
  }
  CHECK(worst < 1e-9);

  // Associativity with a third map.
  const CircleMap chi = flow(VectorField::parse("i*cos(2)", 96), 0.02);
  const auto left = compose(compose(phi, psi), chi);
  const auto right = compose(phi, compose(psi, chi));
  double wa = 0.0;
  for (int j = 0; j < 61; ++j) {
    const double t = 2.0 * pi * j / 61.0;
    wa = std::max(wa, std::abs(left.apply(cplx(t)) - right.apply(cplx(t))));
  }
  CHECK(wa < 1e-10);
}

TEST_CASE("inverse: closed forms and flow reversal") {
  auto ta = flow(VectorField::parse("i*1", 64), 0.2);
  const auto tinv = ta.inverse();
  CHECK(std::abs(tinv.apply(cplx(0.3)) - cplx(0.3, -0.2)) < 1e-12);

  auto rot = flow(VectorField::parse("1", 64), 0.7);
  CHECK(std::abs(rot.inverse().apply(cplx(1.0)) - cplx(0.3)) < 1e-12);

  const CircleMap phi = flow(VectorField::parse("cos(1)", 96), 0.05);
  const CircleMap rev = flow(VectorField::parse("cos(1)", 96), -0.05);
  const auto inv = phi.inverse();
  double worst = 0.0;
  for (int j = 0; j < 51; ++j) {
    const double t = 2.0 * pi * j / 51.0;
    worst = std::max(worst, std::abs(inv.apply(cplx(t)) - rev.apply(cplx(t))));
  }
  CHECK(worst < 1e-8);

  // compose(phi, inverse(phi)) = id
  const auto round = compose(phi, inv);
  CHECK(round.displacement().max_abs_coeff() < 1e-10);
}

TEST_CASE("dersq closed forms and finite-difference oracle") {
  auto ta = flow(VectorField::parse("i*1", 64), 0.13);
  CHECK(dersq(ta, cplx(0.4, 0.2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dersq(CircleMap::identity(64), cplx(1.0, 0.5)) == doctest::Approx(1.0));

  const CircleMap phi = flow(VectorField::parse("cos(1)", 96), 0.05);
  const auto inv = phi.inverse();
  const cplx z(0.3, 0.1);
  const double h = 1e-5;
  const cplx d = (inv.apply(z + h) - inv.apply(z - h)) / (2.0 * h);
  CHECK(std::abs(dersq(phi, z) - std::norm(d)) < 1e-7);
}

TEST_CASE("d/dt dersq(flow(v,t), z) at t=0 equals -2 Re v'(z)") {
  auto v = VectorField::parse("cos(1), 0.3*sin(2)", 96);
  const auto vp = v.series.derivative(1);
  const double h = 1e-3;
  const DersqEvaluator dp(flow(v, h)), dm(flow(v, -h));
  const DersqEvaluator dp2(flow(v, 2 * h)), dm2(flow(v, -2 * h));
  double worst = 0.0;
  for (int j = 0; j < 12; ++j) {
    const cplx z(2.0 * pi * j / 12.0, 0.25);
    const double der =
        (-dp2(z) + 8.0 * dp(z) - 8.0 * dm(z) + dm2(z)) / (12.0 * h);
    worst = std::max(worst, std::abs(der + 2.0 * vp.eval(z).real()));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("dersq jet matches finite differences") {
  const CircleMap phi = flow(VectorField::parse("cos(1), i*0.5*sin(1)", 96), 0.04);
  const DersqEvaluator d(phi);
  const cplx z(1.2, 0.3);
  const double h = 1e-5;
  const auto j = d.jet(z);
  CHECK(std::abs(j.F - d(z)) < 1e-14);
  CHECK(std::abs(j.Ft - (d(z + cplx(h)) - d(z - cplx(h))) / (2 * h)) < 1e-8);
  CHECK(std::abs(j.Fx - (d(z + cplx(0, h)) - d(z - cplx(0, h))) / (2 * h)) < 1e-8);
  const double lap_fd = -(d(z + cplx(h)) + d(z - cplx(h)) + d(z + cplx(0, h)) +
                          d(z - cplx(0, h)) - 4.0 * d(z)) /
                        (h * h);
  CHECK(std::abs(j.lap - lap_fd) < 1e-4 * std::max(1.0, std::abs(j.lap)));
}

TEST_CASE("error paths") {
  // Fold: theta - 1.2 sin(theta) has negative derivative near 0.
  const auto th = AnalyticPeriodic::grid_angles(64);
  std::vector<cplx> disp(th.size());
  for (size_t j = 0; j < th.size(); ++j) disp[j] = cplx(-1.2 * std::sin(th[j]));
  CHECK_THROWS_AS(CircleMap(AnalyticPeriodic::fit(disp)), numeric_error);

  // Leaving the strip |Im| < 1.
  for (size_t j = 0; j < th.size(); ++j) disp[j] = cplx(0.0, 1.05);
  CHECK_THROWS_AS(CircleMap(AnalyticPeriodic::fit(disp)), numeric_error);

  // Flow blowing past the strip guard mid-integration.
  auto vi = VectorField::parse("i*1", 64);
  CHECK_THROWS_AS(flow(vi, 1.5), numeric_error);
}

TEST_CASE("JSON round trip") {
  const CircleMap phi = flow(VectorField::parse("cos(2)", 64), 0.03);
  const CircleMap back = CircleMap::from_json(phi.to_json());
  CHECK(back.strip_bound() == doctest::Approx(phi.strip_bound()));
  CHECK(std::abs(back.apply(cplx(1.1)) - phi.apply(cplx(1.1))) < 1e-14);
}
