#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "virdet/detline.hpp"

using namespace virdet;

namespace {
const CylinderGrid kGrid(128, 129, 0.0, 1.0);
}

TEST_CASE("laplacian0 eigen cases") {
  // Constant -> 0.
  auto c = ConformalFactor::sample(kGrid, [](double, double) { return 2.5; });
  for (double v : laplacian0(c)) CHECK(std::abs(v) < 1e-9);

  // sin(theta) is an eigenfunction with eigenvalue 1.
  auto s = ConformalFactor::sample(kGrid, [](double th, double) { return std::sin(th); });
  const auto ls = laplacian0(s);
  double worst = 0.0;
  for (size_t i = 0; i < ls.size(); ++i)
    worst = std::max(worst, std::abs(ls[i] - s.values()[i]));
  CHECK(worst < 1e-9);

  // x^2 -> -2 exactly for the 4th-order stencil (polynomial exactness).
  auto q = ConformalFactor::sample(kGrid, [](double, double x) { return x * x; });
  const auto lq = laplacian0(q);
  double wq = 0.0;
  for (double v : lq) wq = std::max(wq, std::abs(v + 2.0));
  CHECK(wq < 1e-8);
}

TEST_CASE("cutoff profiles") {
  for (auto kind : {CutoffProfile::Kind::SmoothstepQuintic,
                    CutoffProfile::Kind::ExpBump}) {
    const CutoffProfile chi(kind, 0.3, 0.7);
    CHECK(chi(0.1) == 1.0);
    CHECK(chi(0.9) == 0.0);
    CHECK(chi(0.5) == doctest::Approx(0.5).epsilon(1e-12));
    // Monotone decreasing, C^2 (bounded second difference across the seam).
    double prev = 1.0, w2 = 0.0;
    const double h = 1e-3;
    for (int i = 1; i <= 1000; ++i) {
      const double x = i * 1e-3;
      const double v = chi(x);
      CHECK(v <= prev + 1e-15);
      prev = v;
      if (i > 1 && i < 1000)
        w2 = std::max(w2, std::abs(chi(x + h) - 2 * v + chi(x - h)) / (h * h));
    }
    CHECK(w2 < 1e3);  // |chi''| stays bounded

    // Analytic jet agrees with finite differences inside the band.
    const double hj = 1e-4;
    for (double x : {0.35, 0.5, 0.62}) {
      const auto j = chi.jet(x);
      const double d1 = (chi(x + hj) - chi(x - hj)) / (2 * hj);
      const double d2 = (chi(x + hj) - 2 * chi(x) + chi(x - hj)) / (hj * hj);
      CHECK(std::abs(j.d1 - d1) < 1e-5);
      CHECK(std::abs(j.d2 - d2) < 1e-4);
    }
  }
  CHECK_THROWS_AS(CutoffProfile(CutoffProfile::Kind::SmoothstepQuintic, 0.7, 0.3),
                  usage_error);
}

TEST_CASE("pairing basics") {
  std::mt19937_64 rng(11);
  auto f1 = make_admissible_factor(kGrid, 0.1, &rng);
  auto f2 = make_admissible_factor(kGrid, 0.15, &rng);

  // Identical metrics pair to zero, exactly.
  CHECK(pairing(f1, f1) == 0.0);
  // Bit-exact antisymmetry.
  CHECK(pairing(f1, f2) + pairing(f2, f1) == 0.0);

  // Grid mismatch is rejected.
  const CylinderGrid other(128, 129, 0.0, 0.5);
  auto g2 = ConformalFactor::flat(other);
  CHECK_THROWS_AS(pairing(f1, g2), usage_error);
}

TEST_CASE("pairing of translated flat factors vanishes") {
  auto z1 = ConformalFactor::flat(kGrid);
  const CylinderGrid shifted(128, 129, 0.25, 1.25);
  auto z2 = ConformalFactor::flat(shifted);
  CHECK(pairing(z1, z1) == 0.0);
  CHECK(pairing(z2, z2) == 0.0);
}

TEST_CASE("liouville action: oracle and pairing relation") {
  // sigma = s(x): S_L = (1/12) \int s'(x)^2 dx for the flat base.
  const CylinderGrid fine(128, 257, 0.0, 1.0);
  auto sigma = ConformalFactor::sample(
      fine, [](double, double x) { return bump_profile(x, 0.0, 1.0); }, 0.05,
      0.05);
  const double la = liouville_action(sigma, ConformalFactor::flat(fine));
  const int nf = 200001;
  const double hh = 1.0 / (nf - 1);
  double oracle = 0.0;
  for (int i = 0; i < nf; ++i) {
    const double x = i * hh;
    const double sp =
        (bump_profile(x + 0.5e-6, 0, 1) - bump_profile(x - 0.5e-6, 0, 1)) / 1e-6;
    oracle += (i == 0 || i == nf - 1 ? 0.5 : 1.0) * sp * sp * hh;
  }
  oracle /= 12.0;
  CHECK(std::abs(la - oracle) < 5e-6);

  // sigma == 0 -> 0.
  CHECK(liouville_action(ConformalFactor::flat(kGrid),
                         ConformalFactor::flat(kGrid)) == 0.0);

  // pairing(base, e^{2 sigma} base) = -liouville_action(sigma, base) for a
  // flat and for a non-flat admissible base (gentle, resolved amplitudes).
  std::mt19937_64 rng(5);
  auto base = make_admissible_factor(kGrid, 0.015, &rng);
  auto s2 = ConformalFactor::sample(
      kGrid, [](double, double x) { return 0.03 * bump_profile(x, 0.0, 1.0); },
      0.05, 0.05);
  std::vector<double> ff(base.values());
  for (size_t i = 0; i < ff.size(); ++i) ff[i] += 2.0 * s2.values()[i];
  const ConformalFactor weyl(kGrid, std::move(ff), 0.04, 0.04);
  const double lhs = pairing(base, weyl);
  const double rhs = -liouville_action(s2, base);
  CHECK(std::abs(lhs - rhs) < 1e-8);
}

TEST_CASE("admissibility margins are enforced") {
  std::vector<double> f(kGrid.size(), 0.1);
  CHECK_THROWS_AS(ConformalFactor(kGrid, std::move(f), 0.1, 0.1), numeric_error);
  std::vector<double> bad(kGrid.size(), 0.0);
  bad[0] = std::nan("");
  CHECK_THROWS_AS(ConformalFactor(kGrid, std::move(bad)), numeric_error);
}

TEST_CASE("CSV round trip") {
  std::mt19937_64 rng(3);
  auto f = make_admissible_factor(kGrid, 0.12, &rng);
  std::stringstream ss;
  f.write_csv(ss);
  const auto back = ConformalFactor::read_csv(ss);
  CHECK(back.grid() == f.grid());
  double worst = 0.0;
  for (size_t i = 0; i < f.values().size(); ++i)
    worst = std::max(worst, std::abs(f.values()[i] - back.values()[i]));
  CHECK(worst == 0.0);
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(CylinderGrid(63, 129, 0.0, 1.0), usage_error);
  CHECK_THROWS_AS(CylinderGrid(65, 129, 0.0, 1.0), usage_error);
  CHECK_THROWS_AS(CylinderGrid(128, 64, 0.0, 1.0), usage_error);
  CHECK_THROWS_AS(CylinderGrid(128, 129, 1.0, 0.0), usage_error);
}
