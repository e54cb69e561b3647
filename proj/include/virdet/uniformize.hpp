// Uniformized representative of a deformed cylinder: the modulus tau and the
// conformal map Fhat : {between phi(S^1) and Im z = h} -> S^1 x [0, tau],
// normalized by Fhat(i h) = (0, tau).
#pragma once

#include "virdet/deformations.hpp"

namespace virdet {

// Strip-type domain between the analytic lower curve phi(S^1) and the
// horizontal line Im z = upper_height. The standard cylinder has lower = id,
// upper_height = 1; the collar A_r has upper_height = r.
struct DeformedCylinder {
  CircleMap lower;
  double upper_height = 1.0;

  DeformedCylinder(CircleMap l, double h);

  static DeformedCylinder standard(int order = 128, double height = 1.0) {
    return DeformedCylinder(CircleMap::identity(order), height);
  }
};

// Fhat(z) = z + alpha + sum_{n=1..M} a_n e^{inz} + sum_{n=1..M} b_n e^{-inz}.
// alpha is complex: a vertical component is required already for translated
// lower boundaries.
class UniformizationResult {
 public:
  double tau() const { return tau_; }
  cplx alpha() const { return alpha_; }
  double residual() const { return residual_; }
  double condition() const { return condition_; }
  int modes() const { return M_; }

  cplx map(cplx z) const;        // Fhat(z)
  cplx map_deriv(cplx z) const;  // Fhat'(z)

  // |Fhat'(z)|^2, the conformal factor of the uniformizer.
  double unif_factor(cplx z) const { return std::norm(map_deriv(z)); }

  // Newton solve of Fhat(z) = w starting from z = w.
  cplx invert_map(cplx w) const;

  std::string to_json() const;

  friend UniformizationResult uniformize(const DeformedCylinder& c, int M,
                                         int n_theta_oversample);

 private:
  int M_ = 0;
  double tau_ = 0.0;
  cplx alpha_;
  std::vector<cplx> a_, b_;          // raw coefficients, n = 1..M
  std::vector<cplx> a_scaled_, b_scaled_;  // vs anchors below
  double anchor_lo_ = 0.0, anchor_hi_ = 1.0;
  double residual_ = 0.0;
  double condition_ = 0.0;
};

// Least-squares collocation with 4M points per boundary (times the optional
// oversample factor) plus a normalization row. Throws numeric_error on
// ill-conditioning, large residual, or a degenerate conformal factor.
UniformizationResult uniformize(const DeformedCylinder& c, int M = 48,
                                int n_theta_oversample = 1);

}  // namespace virdet
