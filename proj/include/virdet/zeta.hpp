// Polyakov-Alvarez anomaly on flat cylinders and the zeta-regularized
// Dirichlet Laplacian determinant via heat-kernel regularization.
#pragma once

#include "virdet/anomaly.hpp"

namespace virdet {

struct PAResult {
  double log_ratio = 0.0;       // log det ratio under the Weyl change
  double bulk = 0.0;            // \iint (|grad sigma|^2/2 + R sigma) vol
  double boundary_k = 0.0;      // \int k_g sigma
  double boundary_normal = 0.0; // \int <grad sigma, N>
};

// Weyl change by sigma over a flat cylinder base (R0 = 0, k0 = 0):
// log_ratio = -(1/6pi) bulk - (1/6pi) boundary_k - (1/4pi) boundary_normal.
PAResult pa_anomaly(const ConformalFactor& sigma, const ConformalFactor& base);

struct DetZetaResult {
  double logdet = 0.0;
  double scheme_gap = 0.0;  // relative disagreement of the two truncations
};

// log det_zeta for the Dirichlet spectrum { n^2 + (pi k / tau)^2 } on
// S^1 x [0, tau]. Two independent truncation schemes must agree to 1e-6
// relative, else a numeric_error is raised.
DetZetaResult detz_flat_cylinder(double tau);

// zeta(0) evaluated from the integral representation at s = +-eps and
// averaged; must be ~0 for this geometry.
double zeta0_flat_cylinder(double tau, double eps = 1e-4);

// Defect of the Prop-style relation between the two global sections reduced
// to admissible sigma: |pa_anomaly(sigma).log_ratio - 2 <flat|e^{2 sigma} flat>|.
// sigma must be admissible (rejected otherwise).
double mu_zeta_vs_mu(double tau, const ConformalFactor& sigma, double charge);

}  // namespace virdet
