#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "virdet/cocycle.hpp"

using namespace virdet;

namespace {

// Trimmed settings: the full-resolution battery lives in the acceptance
// suite; unit tests exercise the structure.
CocycleOptions coarse() {
  CocycleOptions opt;
  opt.n_theta = 64;
  opt.n_x = 65;
  opt.unif_modes = 24;
  opt.richardson = false;
  return opt;
}

}  // namespace

TEST_CASE("gelfand_fuks closed forms") {
  const Charge c1{1.0};
  auto v = VectorField::parse("cos(1)");
  CHECK(std::abs(gelfand_fuks(v, v, c1)) < 1e-15);  // total derivative

  auto w = VectorField::parse("i*sin(1)");
  CHECK(std::abs(gelfand_fuks(v, w, c1) - cplx(0.0, 1.0 / 24.0)) < 1e-15);

  auto v2 = VectorField::parse("sin(2)");
  auto w2 = VectorField::parse("i*cos(2)");
  CHECK(std::abs(gelfand_fuks(v2, w2, Charge{3.0}) - cplx(0.0, -1.0)) < 1e-14);

  // Exact antisymmetry of the closed form.
  const cplx a = gelfand_fuks(v, w, c1), b = gelfand_fuks(w, v, c1);
  CHECK(std::abs(a + b) < 1e-15);

  // Bilinearity on the coefficient formula.
  auto v3 = VectorField::parse("2*cos(1)");
  CHECK(std::abs(gelfand_fuks(v3, w, c1) - 2.0 * a) < 1e-15);
}

TEST_CASE("metric system: trivial deformations give flat factors") {
  const auto opt = coarse();
  const CircleMap id = CircleMap::identity(64);
  const MetricSystem ms(id, id, opt);
  const CylinderGrid g(64, 65, 0.0, 1.0);
  for (const auto& f : {ms.sample_phi(g), ms.sample_psi(g), ms.sample_phipsi(g)}) {
    double worst = 0.0;
    for (double v : f.values()) worst = std::max(worst, std::abs(v));
    CHECK(worst < 1e-13);
  }

  const CircleMap ta = flow(VectorField::parse("i*1", 64), 0.02);
  const CircleMap tb = flow(VectorField::parse("i*1", 64), 0.015);
  const MetricSystem mt(ta, tb, opt);
  double worst = 0.0;
  for (double v : mt.sample_phipsi(g).values())
    worst = std::max(worst, std::abs(v));
  CHECK(worst < 1e-12);
}

TEST_CASE("metric system: admissibility and the pullback identity") {
  const auto opt = coarse();
  const CircleMap phi = flow(VectorField::parse("cos(1)", 96), 0.02);
  const CircleMap psi = flow(VectorField::parse("i*sin(1)", 96), 0.02);
  const MetricSystem ms(phi, psi, opt);

  // Factors are exactly flat above the cut-off supports (margins hold).
  const CylinderGrid g(64, 65, 0.0, 1.0);
  const auto fphi = ms.sample_phi(g);
  CHECK(fphi.margin_hi() > 0.0);

  // Lemma-style pullback identity (phi^{-1})* g(U<psi) = g(V<psi).
  CHECK(ms.pullback_defect() < 1e-8);

  // Chain rule F_{phi psi} = (F_psi o phi^{-1}) F_phi on sample points.
  const auto inv = phi.inverse();
  double worst = 0.0;
  for (int j = 0; j < 8; ++j) {
    const cplx z(2.0 * pi * j / 8.0, 0.05);
    const cplx w = inv.apply(z);
    worst = std::max(worst, std::abs(ms.dersq_phipsi(z) -
                                     ms.dersq_psi(w) * ms.dersq_phi(z)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("cut-off support violations are reported") {
  // A strong shear folds the collar image below the curve tops, leaving no
  // room for the chi1 band.
  auto opt = coarse();
  const CircleMap phi = flow(VectorField::parse("i*cos(1)", 96), 0.1);
  CHECK_THROWS_AS(MetricSystem(phi, phi, opt), numeric_error);
}

TEST_CASE("log_gamma: identity and translation legs vanish") {
  const auto opt = coarse();
  const Charge c{1.0};
  const CircleMap id = CircleMap::identity(96);
  const CircleMap psi = flow(VectorField::parse("i*sin(1)", 96), 0.02);
  CHECK(std::abs(log_gamma(id, psi, c, opt)) < 1e-8);
  CHECK(std::abs(log_gamma(psi, id, c, opt)) < 1e-8);

  const CircleMap ta = flow(VectorField::parse("i*1", 96), 0.015);
  const CircleMap tb = flow(VectorField::parse("i*1", 96), 0.02);
  CHECK(std::abs(log_gamma(ta, tb, c, opt)) < 1e-12);
}

TEST_CASE("gamma_lie: structure at trimmed resolution") {
  const auto opt = coarse();
  auto v = VectorField::parse("cos(1)");
  auto w = VectorField::parse("i*sin(1)");

  const auto r = gamma_lie(v, w, Charge{1.0}, opt);
  CHECK(r.rel_err < 2e-2);
  CHECK(r.gf_imag == doctest::Approx(1.0 / 24.0));
  CHECK(r.richardson_order == 0);
  CHECK(r.stencil_h == 0.02);

  // Exact antisymmetry of the antisymmetrized stencil.
  const auto rv = gamma_lie(w, v, Charge{1.0}, opt);
  CHECK(r.gamma + rv.gamma == 0.0);

  // Exact linearity in the central charge.
  const auto r2 = gamma_lie(v, w, Charge{2.0}, opt);
  CHECK(std::abs(r2.gamma - 2.0 * r.gamma) <= 1e-10 * std::abs(r2.gamma));

  // Bilinearity within the finite-difference noise floor.
  auto v2 = VectorField::parse("2*cos(1)");
  const auto rs = gamma_lie(v2, w, Charge{1.0}, opt);
  CHECK(std::abs(rs.gamma - 2.0 * r.gamma) <= 0.02 * std::abs(rs.gamma));

  // Stencil size contract.
  auto bad = opt;
  bad.stencil_h = 0.2;
  CHECK_THROWS_AS(gamma_lie(v, w, Charge{1.0}, bad), usage_error);
}

TEST_CASE("real fields give a vanishing cocycle") {
  const auto opt = coarse();
  auto v = VectorField::parse("cos(1)");
  auto w = VectorField::parse("sin(1)");
  const auto r = gamma_lie(v, w, Charge{24.0}, opt);
  CHECK(std::abs(r.gamma) < 2.4e-2);

  // Harmonics up to k = 3 stay within the strip machinery.
  const auto r3 = gamma_lie(VectorField::parse("cos(3)"),
                            VectorField::parse("sin(3)"), Charge{24.0}, opt);
  CHECK(std::abs(r3.gamma) < 2.4e-2);
}

TEST_CASE("metric-log derivative checks (proof-level identities)") {
  const auto opt = coarse();
  auto v = VectorField::parse("cos(1)");
  auto w = VectorField::parse("i*sin(1)");
  const auto d = metric_log_derivative_check(v, w, opt);
  CHECK(d.defect_t < 1e-6);
  CHECK(d.defect_s < 1e-6);
}

TEST_CASE("stencil truncation decays at second order in h") {
  auto opt = coarse();
  opt.n_theta = 128;
  auto v = VectorField::parse("cos(1)");
  auto w = VectorField::parse("i*sin(1)");
  double err[3];
  const double hs[3] = {0.04, 0.02, 0.01};
  for (int k = 0; k < 3; ++k) {
    opt.stencil_h = hs[k];
    err[k] = std::abs(gamma_lie(v, w, Charge{1.0}, opt).gamma - 1.0 / 24.0);
  }
  // Successive halvings shrink the defect by ~4; allow [2.5, 6].
  for (int k = 0; k < 2; ++k) {
    const double ratio = err[k] / std::max(err[k + 1], 1e-300);
    CHECK(ratio > 2.5);
    CHECK(ratio < 6.0);
  }
}

TEST_CASE("cut-off profile independence of log Gamma") {
  auto opt = coarse();
  const CircleMap phi = flow(VectorField::parse("cos(1)", 96), 0.02);
  const CircleMap psi = flow(VectorField::parse("i*sin(1)", 96), 0.02);
  auto o2 = opt;
  o2.cutoff_kind = CutoffProfile::Kind::ExpBump;
  const double d = std::abs(log_gamma(phi, psi, Charge{1.0}, opt) -
                            log_gamma(phi, psi, Charge{1.0}, o2));
  CHECK(d < 1e-6);

  // Moving the bands within their admissible range must not matter either.
  auto o3 = opt;
  o3.chi1_lo_frac = 0.4;
  o3.chi1_hi_frac = 0.7;
  o3.chi2_lo = 0.6;
  o3.chi2_hi = 0.95;
  const double d2 = std::abs(log_gamma(phi, psi, Charge{1.0}, opt) -
                             log_gamma(phi, psi, Charge{1.0}, o3));
  CHECK(d2 < 1e-6);
}
