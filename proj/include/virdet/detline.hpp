// Real determinant lines of cylinders: vectors lambda[g] modulo the anomaly
// relation, the global section mu_c built from uniformized representatives,
// sewing of straight-seam cylinders, and the sewing cocycle Gamma_c(A, B).
#pragma once

#include <random>

#include "virdet/anomaly.hpp"
#include "virdet/uniformize.hpp"

namespace virdet {

struct Charge {
  double c = 1.0;
};

// Smooth bump in x: 0 on both 10% margins, sin^6 arch in between. Used as
// the canonical admissible test metric e^{2 eps s(x)}.
double bump_profile(double x, double x_lo, double x_hi, double margin_frac = 0.1);

// Canonical admissible factor f = 2*eps*s(x)*(1 + sum of small harmonics);
// harmonics drawn from `rng` when provided (deterministic given the seed).
ConformalFactor make_admissible_factor(const CylinderGrid& g, double eps = 0.1,
                                       std::mt19937_64* rng = nullptr);

class DetVector {
 public:
  DetVector(double lambda, ConformalFactor factor, Charge charge);

  double lambda() const { return lambda_; }
  const ConformalFactor& factor() const { return factor_; }
  Charge charge() const { return charge_; }

  // lambda1[g1] == lambda2[g2] iff lambda1 = e^{c <g1|g2>} lambda2, tested to
  // `tol` relative.
  bool equals(const DetVector& other, double tol = 1e-8) const;
  // Scalar such that *this = factor_of(other) * other, i.e.
  // lambda1 / (e^{c<g1|g2>} lambda2).
  double ratio_against(const DetVector& other) const;

  DetVector scaled(double mu) const { return DetVector(mu * lambda_, factor_, charge_); }
  // Re-express on another admissible metric of the same grid.
  DetVector normalized_to(const ConformalFactor& g) const;

  std::string to_json() const;

 private:
  double lambda_;
  ConformalFactor factor_;
  Charge charge_;
};

// (lambda1 + e^{c <g1|g2>} lambda2)[g1].
DetVector det_add(const DetVector& a, const DetVector& b);

struct MuOptions {
  int n_theta = 256;
  int n_x = 129;
  int unif_modes = 48;
  double eps = 0.1;
  std::mt19937_64* rng = nullptr;  // optional harmonics in the test metric
};

// Global section mu_c(A) represented on the uniformized straight grid
// S^1 x [0, tau_A]: e^{-c <flat|g>} [g] for an internally chosen admissible g.
DetVector mu_c(const DeformedCylinder& A, Charge charge, const MuOptions& opt = {});

// Straight-seam sewing: both vectors on S^1 x [0, tau] grids with matching
// spacing and admissible factors at the seam.
DetVector sew(const DetVector& a, const DetVector& b);

// log Gamma_c(A, B) for straight cylinders A = S^1 x [0, tau_a],
// B = S^1 x [0, tau_b]:
//   c [ <flat_A|g_A> + <flat_B|g_B> - <flat_{A.B}|g_A u g_B> ].
double log_gamma_cyl(double tau_a, double tau_b, Charge charge,
                     const MuOptions& opt = {});

}  // namespace virdet
