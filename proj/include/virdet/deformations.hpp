// Complex deformations and real-analytic diffeomorphisms of the circle:
// flows of vector fields, composition, inversion, and the conformal factor
// |(phi^{-1})'|^2 of a boundary pushforward.
#pragma once

#include <string>

#include "virdet/fourier.hpp"

namespace virdet {

// A vector field v(theta) on the circle, possibly complex-valued.
struct VectorField {
  AnalyticPeriodic series;
  bool is_real = false;

  explicit VectorField(AnalyticPeriodic s);

  // Comma list of terms: `a*cos(k)`, `a*sin(k)`, `i*a*cos(k)`, `i*a*sin(k)`,
  // `a`, `i*a`. Bare `cos(k)` etc. mean coefficient 1.
  static VectorField parse(const std::string& spec, int order = 128);

  cplx eval(cplx z) const { return series.eval(z); }
};

// phi(theta) = theta + p(theta) with p periodic; a complex deformation of the
// circle inside the strip |Im| < 1, or a real analytic diffeomorphism when
// Im p == 0.
class CircleMap {
 public:
  explicit CircleMap(AnalyticPeriodic displacement);

  static CircleMap identity(int order);

  const AnalyticPeriodic& displacement() const { return disp_; }
  double strip_bound() const { return strip_bound_; }
  bool is_real(double tol = 1e-12) const { return disp_.is_real(tol); }
  int order() const { return disp_.order(); }

  cplx apply(cplx z) const { return z + disp_.eval(z); }
  cplx map_deriv(cplx z) const { return cplx(1.0) + dderiv_.eval(z); }

  // Grid values phi(theta_j) on the fit grid.
  std::vector<cplx> boundary_values() const;

  CircleMap inverse() const;  // Newton per node, then re-fit

  std::string to_json() const;
  static CircleMap from_json(const std::string& text);

 private:
  AnalyticPeriodic disp_;
  AnalyticPeriodic dderiv_;  // p'
  double strip_bound_ = 0.0;
};

// Flow of v for time t from the identity, classical 4th-order fixed-step
// integration on the fit grid. steps <= 0 selects max(64, ceil(|t|/1e-3)).
CircleMap flow(const VectorField& v, double t, int steps = 0);

// (phi o psi)(theta) = phi(psi(theta)), re-fitted.
CircleMap compose(const CircleMap& phi, const CircleMap& psi);

// F_phi(z) = |(phi^{-1})'(z)|^2, the conformal factor of the pushforward of
// the flat metric along phi. Computes the inverse map internally; hot paths
// should hold a DersqEvaluator instead.
double dersq(const CircleMap& phi, cplx z);

// Precomputed |(phi^{-1})'|^2 evaluator (inverse map fitted once).
class DersqEvaluator {
 public:
  explicit DersqEvaluator(const CircleMap& phi)
      : inv_(phi.inverse()),
        dinv_(inv_.displacement().derivative(1)),
        ddinv_(inv_.displacement().derivative(2)) {}

  double operator()(cplx z) const {
    const cplx d = cplx(1.0) + dinv_.eval(z);
    return std::norm(d);
  }

  // F = |u|^2 with u = (phi^{-1})' holomorphic: the theta/x gradient and the
  // positive Laplacian -grad^2 F = -4|u'|^2 in closed form.
  struct Jet {
    double F = 1.0, Ft = 0.0, Fx = 0.0, lap = 0.0;
  };
  Jet jet(cplx z) const {
    const cplx u = cplx(1.0) + dinv_.eval(z);
    const cplx up = ddinv_.eval_unchecked(z);
    const cplx cu = std::conj(u) * up;
    Jet j;
    j.F = std::norm(u);
    j.Ft = 2.0 * cu.real();
    j.Fx = -2.0 * cu.imag();
    j.lap = -4.0 * std::norm(up);
    return j;
  }

  const CircleMap& inverse_map() const { return inv_; }

 private:
  CircleMap inv_;
  AnalyticPeriodic dinv_;
  AnalyticPeriodic ddinv_;
};

}  // namespace virdet
