// The central-extension cocycle on complex deformations: the admissible
// metric system on the standard cylinder, log Gamma_c(phi, psi), and the
// Lie-algebra cocycle gamma_c extracted by finite differences against the
// Gel'fand-Fuks oracle.
#pragma once

#include <memory>

#include "virdet/detline.hpp"

namespace virdet {

struct CocycleOptions {
  int n_theta = 256;
  int n_x = 129;
  int unif_modes = 48;
  double stencil_h = 0.02;
  bool richardson = true;
  double collar_r = 0.0;  // <= 0 selects 0.5 * min(strip radii, 0.3)
  CutoffProfile::Kind cutoff_kind = CutoffProfile::Kind::SmoothstepQuintic;
  // chi1 transition as fractions of the collar height; chi2 in absolute x.
  double chi1_lo_frac = 0.30;
  double chi1_hi_frac = 0.80;
  double chi2_lo = 0.75;
  double chi2_hi = 0.90;
  bool concurrent = true;
};

// The system of admissible metrics for the cylinders A, A<phi, A<psi,
// A<phi psi (conformal factors only; the base strip is S^1 x [0,1]).
// chi1' is supported inside the collar image V = phi(S^1 x [0, r]),
// chi2' above it, and rho is chi1 transported through phi.
class MetricSystem {
 public:
  MetricSystem(const CircleMap& phi, const CircleMap& psi,
               const CocycleOptions& opt);

  const CircleMap& phi() const { return phi_; }
  const CircleMap& psi() const { return psi_; }
  const CircleMap& phipsi() const { return phipsi_; }
  double collar() const { return r_; }
  const CutoffProfile& chi1() const { return chi1_; }
  const CutoffProfile& chi2() const { return chi2_; }

  // Conformal factors e^f dz dzbar of the metric system, as functions of the
  // strip coordinate z:
  double factor_phi(cplx z) const;     // F_phi chi2 + 1 - chi2
  double factor_psi(cplx z) const;     // F_psi rho + 1 - rho
  double factor_phipsi(cplx z) const;  // F_phipsi chi1 + F_phi (chi2-chi1) + 1-chi2
  double rho(cplx z) const;            // the transported cut-off

  double dersq_phi(cplx z) const { return dphi_(z); }
  double dersq_psi(cplx z) const { return dpsi_(z); }
  double dersq_phipsi(cplx z) const { return dphipsi_(z); }

  // Closed-form value/gradient/Laplacian of one metric factor G at z. Since
  // log of a single pushforward factor is harmonic, (Lap log G) vanishes
  // identically outside the cut-off transition bands.
  struct FactorJet {
    double G = 1.0, Gt = 0.0, Gx = 0.0, lap = 0.0;
    double lap_log() const { return lap / G + (Gt * Gt + Gx * Gx) / (G * G); }
  };
  enum class Leg { Phi, Psi, PhiPsi };
  FactorJet factor_jet(Leg leg, cplx z) const;

  // Transition bands of a factor, described by level sets. For Phi/PhiPsi the
  // levels are in Im z; for Psi they are levels of Im phi(z) (the transported
  // cut-off rho).
  struct Band {
    double lo = 0.0, hi = 0.0;
    bool transported = false;
  };
  std::vector<Band> bands(Leg leg) const;

  // Height of the level function for a band at z.
  double band_height(const Band& b, cplx z) const {
    if (!b.transported) return z.imag();
    return (z + phi_.displacement().eval(z)).imag();
  }

  // Pullback identity (phi^{-1})* g(U<psi) = g(V<psi): max pointwise defect
  // over a sample of the collar.
  double pullback_defect(int n_theta = 64, int n_x = 17) const;

  // The four factors sampled on a grid over the coordinate strip.
  ConformalFactor sample_flat(const CylinderGrid& g) const;
  ConformalFactor sample_phi(const CylinderGrid& g) const;
  ConformalFactor sample_psi(const CylinderGrid& g) const;
  ConformalFactor sample_phipsi(const CylinderGrid& g) const;

 private:
  CircleMap phi_, psi_, phipsi_;
  DersqEvaluator dphi_, dpsi_, dphipsi_;
  AnalyticPeriodic phi_fwd_deriv_;
  double r_;
  CutoffProfile chi1_, chi2_;
};

// log Gamma_c(phi, psi) / c: the bracket
//   <Fhat^2_{phi psi}|g(A<phi psi)> - <Fhat^2_phi|g(A<phi)> - <Fhat^2_psi|g(A<psi)>,
// each term pushed forward along its uniformizer onto S^1 x [0, tau].
double log_gamma_bracket(const CircleMap& phi, const CircleMap& psi,
                         const CocycleOptions& opt = {});

inline double log_gamma(const CircleMap& phi, const CircleMap& psi,
                        Charge charge, const CocycleOptions& opt = {}) {
  return charge.c * log_gamma_bracket(phi, psi, opt);
}

struct CocycleResult {
  double gamma = 0.0;
  double gf_imag = 0.0;
  double stencil_h = 0.0;
  int richardson_order = 0;
  double rel_err = 0.0;
};

// (c/(24 pi)) \int v' w'' dtheta, exact on band-limited fields.
cplx gelfand_fuks(const VectorField& v, const VectorField& w, Charge charge);

// gamma_c(v, w) by the antisymmetrized 4-point mixed stencil on
// log Gamma(flow(v,t), flow(w,s)), Richardson-extrapolated over h, h/2.
CocycleResult gamma_lie(const VectorField& v, const VectorField& w,
                        Charge charge, const CocycleOptions& opt = {});

// Max pointwise defects of the first derivatives of the metric-system
// logarithms at t = s = 0 against their closed forms:
//   d/dt log(F_{phi_t psi_0} chi1 + F_{phi_t}(1 - chi1)) = -2 Re v'(z),
//   d/ds log(F_{phi_0 psi_s} chi1 + F_{phi_0}(1 - chi1)) = -2 Re w'(z) chi1.
struct DerivCheckResult {
  double defect_t = 0.0;
  double defect_s = 0.0;
};
DerivCheckResult metric_log_derivative_check(const VectorField& v,
                                             const VectorField& w,
                                             const CocycleOptions& opt = {});

}  // namespace virdet
