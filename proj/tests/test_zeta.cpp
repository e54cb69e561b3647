#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "virdet/detline.hpp"
#include "virdet/zeta.hpp"

using namespace virdet;

namespace {
const CylinderGrid kGrid(128, 129, 0.0, 1.0);
}

TEST_CASE("pa_anomaly: constants and decomposition") {
  auto c = ConformalFactor::sample(kGrid, [](double, double) { return 0.8; });
  const auto r = pa_anomaly(c, ConformalFactor::flat(kGrid));
  CHECK(std::abs(r.log_ratio) < 1e-10);
  CHECK(std::abs(r.bulk) < 1e-10);
  CHECK(r.boundary_k == 0.0);
  CHECK(std::abs(r.boundary_normal) < 1e-10);

  // The decomposition always reassembles the log-ratio exactly.
  std::mt19937_64 rng(1);
  auto f = make_admissible_factor(kGrid, 0.1, &rng);
  const auto p = pa_anomaly(f, ConformalFactor::flat(kGrid));
  CHECK(p.log_ratio == -p.bulk / (6.0 * pi) - p.boundary_k / (6.0 * pi) -
                           p.boundary_normal / (4.0 * pi));
}

TEST_CASE("pa_anomaly equals -2 liouville_action on admissible sigma") {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 4; ++k) {
    auto f = make_admissible_factor(kGrid, 0.09, &rng);
    std::vector<double> sv(f.values());
    for (auto& v : sv) v *= 0.5;
    const ConformalFactor sigma(kGrid, std::move(sv), f.margin_lo(),
                                f.margin_hi());
    const auto pa = pa_anomaly(sigma, ConformalFactor::flat(kGrid));
    CHECK(std::abs(pa.boundary_normal) < 1e-12);
    CHECK(std::abs(pa.log_ratio +
                   2.0 * liouville_action(sigma, ConformalFactor::flat(kGrid))) <
          1e-8);
  }
}

TEST_CASE("detz dual schemes agree across tau and match the mode sum") {
  for (double tau : {0.5, 1.0, 2.0}) {
    const auto r = detz_flat_cylinder(tau);
    CHECK(r.scheme_gap < 1e-6);
    // Independent oracle: Gelfand-Yaglom mode factorization,
    // log det = log(2 tau) - tau/6 - log(2 pi) + 2 sum log(1 - e^{-2 n tau}).
    long double s = 0.0L;
    for (int n = 1; n < 400; ++n) s += std::log1p(-std::exp(-2.0 * n * tau));
    const double gy = std::log(2.0 * tau) - tau / 6.0 -
                      std::log(2.0 * pi) + 2.0 * double(s);
    CHECK(std::abs(r.logdet - gy) < 1e-10);
  }
  CHECK_THROWS_AS(detz_flat_cylinder(0.01), usage_error);
  CHECK_THROWS_AS(detz_flat_cylinder(20.0), usage_error);
}

TEST_CASE("logdet depends smoothly and monotonically on tau") {
  double prev = 0.0;
  bool first = true;
  for (double tau = 0.4; tau <= 1.6; tau += 0.1) {
    const double ld = detz_flat_cylinder(tau).logdet;
    if (!first) {
      CHECK(ld > prev);                 // increasing over this range
      CHECK(std::abs(ld - prev) < 1.0);  // no jumps
    }
    prev = ld;
    first = false;
  }
}

TEST_CASE("zeta(0) vanishes for the flat cylinder") {
  CHECK(std::abs(zeta0_flat_cylinder(1.0)) < 1e-6);
  CHECK(std::abs(zeta0_flat_cylinder(0.5)) < 1e-6);
}

TEST_CASE("mu_zeta_vs_mu: zero field, two-route defect, contract") {
  const auto flat = ConformalFactor::flat(kGrid);
  CHECK(mu_zeta_vs_mu(1.0, flat, 1.0) < 1e-14);

  std::mt19937_64 rng(3);
  auto f = make_admissible_factor(kGrid, 0.02, &rng);
  std::vector<double> sv(f.values());
  for (auto& v : sv) v *= 0.5;
  const ConformalFactor sigma(kGrid, std::move(sv), f.margin_lo(), f.margin_hi());
  CHECK(mu_zeta_vs_mu(1.0, sigma, 2.5) < 1e-8);

  // Inadmissible sigma is rejected with a precondition error.
  auto loose = ConformalFactor::sample(
      kGrid, [](double, double x) { return 0.02 * std::sin(pi * x); });
  CHECK_THROWS_AS(mu_zeta_vs_mu(1.0, loose, 1.0), usage_error);
}
