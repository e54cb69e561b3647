#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "virdet/detline.hpp"

using namespace virdet;

namespace {
const CylinderGrid kGrid(128, 129, 0.0, 1.0);
const Charge kC{1.7};
}  // namespace

TEST_CASE("det_add: inverses, zero, commutativity") {
  std::mt19937_64 rng(2);
  auto g = make_admissible_factor(kGrid, 0.1, &rng);
  auto h = make_admissible_factor(kGrid, 0.08, &rng);

  const DetVector one(1.0, g, kC), minus(-1.0, g, kC);
  CHECK(det_add(one, minus).lambda() == 0.0);

  const DetVector lam(2.7, g, kC), zero(0.0, h, kC);
  const auto sum = det_add(lam, zero);
  CHECK(sum.lambda() == 2.7);

  const DetVector a(0.9, g, kC), b(1.4, h, kC);
  CHECK(det_add(a, b).equals(det_add(b, a)));
}

TEST_CASE("equality relation follows the anomaly factor") {
  std::mt19937_64 rng(4);
  auto g = make_admissible_factor(kGrid, 0.1, &rng);
  auto h = make_admissible_factor(kGrid, 0.07, &rng);
  const DetVector a(1.25, g, kC);
  const auto b = a.normalized_to(h);
  CHECK(b.lambda() == doctest::Approx(std::exp(kC.c * pairing(h, g)) * 1.25));
  CHECK(a.equals(b));
  CHECK(b.normalized_to(g).lambda() == doctest::Approx(1.25).epsilon(1e-12));
  // normalize is idempotent
  CHECK(b.normalized_to(h).lambda() == b.lambda());
}

TEST_CASE("charge and grid mismatches are rejected") {
  std::mt19937_64 rng(6);
  auto g = make_admissible_factor(kGrid, 0.1, &rng);
  const DetVector a(1.0, g, Charge{1.0}), b(1.0, g, Charge{2.0});
  CHECK_THROWS_AS(det_add(a, b), usage_error);
  const CylinderGrid g2(128, 129, 0.0, 0.5);
  const DetVector c(1.0, ConformalFactor::flat(g2), Charge{1.0});
  CHECK_THROWS_AS(det_add(a, c), usage_error);
}

TEST_CASE("mu_c trivial cylinders") {
  MuOptions opt;
  opt.n_theta = 128;
  opt.n_x = 129;
  opt.unif_modes = 24;

  // Standard cylinder: 1[flat].
  const auto m = mu_c(DeformedCylinder::standard(64), kC, opt);
  const DetVector one_flat(1.0, ConformalFactor::flat(m.factor().grid()), kC);
  CHECK(m.equals(one_flat));
  CHECK(m.lambda() > 0.0);

  // Vertical translate: uniformizer is a translation, tau = 1 - a.
  const CircleMap up = flow(VectorField::parse("i*1", 64), 0.25);
  const auto mt = mu_c(DeformedCylinder(up, 1.0), kC, opt);
  CHECK(mt.factor().grid().x_hi == doctest::Approx(0.75).epsilon(1e-12));
  const DetVector unit(1.0, ConformalFactor::flat(mt.factor().grid()), kC);
  CHECK(mt.equals(unit));
}

TEST_CASE("mu_c independent of the internal admissible metric") {
  MuOptions o1;
  o1.n_theta = 128;
  o1.n_x = 129;
  o1.unif_modes = 24;
  MuOptions o2 = o1;
  std::mt19937_64 rng(9);
  o2.eps = 0.06;
  o2.rng = &rng;
  const CircleMap phi =
      flow(VectorField::parse("cos(1), i*0.5*sin(1)", 96), 0.03);
  const DeformedCylinder A(phi, 1.0);
  const auto m1 = mu_c(A, kC, o1);
  const auto m2 = mu_c(A, kC, o2);
  CHECK(std::abs(m1.ratio_against(m2) - 1.0) < 1e-8);
}

TEST_CASE("sew multiplies scalars and joins factors") {
  const CylinderGrid ga(128, 65, 0.0, 0.5), gb(128, 65, 0.0, 0.5);
  std::mt19937_64 rng(12);
  auto fa = make_admissible_factor(ga, 0.1, &rng);
  auto fb = make_admissible_factor(gb, 0.12, &rng);

  const auto s = sew(DetVector(2.0, fa, kC), DetVector(3.0, fb, kC));
  CHECK(s.lambda() == 6.0);
  CHECK(s.factor().grid().n_x == 129);
  CHECK(s.factor().grid().x_hi == doctest::Approx(1.0));

  // 1[flat] (x) 1[flat] -> 1[flat] on the stacked cylinder.
  const auto sf = sew(DetVector(1.0, ConformalFactor::flat(ga), kC),
                      DetVector(1.0, ConformalFactor::flat(gb), kC));
  CHECK(sf.lambda() == 1.0);
  for (double v : sf.factor().values()) CHECK(v == 0.0);

  // Locality of the anomaly across the seam.
  const double left = pairing(fa, ConformalFactor::flat(ga));
  const double right = pairing(fb, ConformalFactor::flat(gb));
  const double joined =
      pairing(s.factor(), ConformalFactor::flat(s.factor().grid()));
  CHECK(std::abs(joined - left - right) < 1e-9);
}

TEST_CASE("sew rejects bad seams") {
  const CylinderGrid ga(128, 65, 0.0, 0.5);
  const CylinderGrid gb(128, 65, 0.0, 0.4);  // different spacing
  std::mt19937_64 rng(13);
  auto fa = make_admissible_factor(ga, 0.1, &rng);
  auto fb = make_admissible_factor(gb, 0.1, &rng);
  CHECK_THROWS_AS(sew(DetVector(1, fa, kC), DetVector(1, fb, kC)),
                  numeric_error);

  // Non-admissible at the seam: a factor with no declared margins.
  auto loose = ConformalFactor::sample(
      ga, [](double, double x) { return 0.05 * std::sin(pi * x); });
  CHECK_THROWS_AS(sew(DetVector(1, loose, kC), DetVector(1, fa, kC)),
                  numeric_error);
}

TEST_CASE("straight-cylinder sewing cocycle is trivial and positive") {
  MuOptions opt;
  opt.n_theta = 128;
  opt.n_x = 129;
  const double lg = log_gamma_cyl(0.5, 0.5, kC, opt);
  CHECK(std::abs(lg) < 1e-10);  // flats align: Gamma = 1
  CHECK(std::exp(lg) > 0.0);
}
