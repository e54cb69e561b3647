// Truncated Fourier series of 2*pi-periodic analytic functions, evaluable at
// complex arguments z = theta + i*x. Coefficients are indexed n = -N..N.
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "virdet/numerics.hpp"

namespace virdet {

class AnalyticPeriodic {
 public:
  AnalyticPeriodic() : AnalyticPeriodic(std::vector<cplx>{cplx(0.0)}) {}

  // coeffs.size() must be odd (2N+1), ordered n = -N..N.
  explicit AnalyticPeriodic(std::vector<cplx> coeffs, bool inherited_flag = false);

  // Exact trigonometric interpolation of samples at the 2N+1 equispaced
  // angles theta_j = 2*pi*j/(2N+1). Sets the under-resolved flag from the
  // tail ratio.
  static AnalyticPeriodic fit(std::span<const cplx> samples,
                              double tail_threshold = kTailThreshold);

  static AnalyticPeriodic zero(int order) {
    return AnalyticPeriodic(std::vector<cplx>(2 * size_t(order) + 1, cplx(0.0)));
  }

  int order() const { return order_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx coeff(int n) const { return coeffs_[size_t(n + order_)]; }
  bool under_resolved() const { return under_resolved_; }
  double tail_ratio() const { return tail_ratio_; }

  // Sum c_n e^{inz}. Throws numeric_error("strip exceeded ...") when
  // |Im z| >= strip_radius().
  cplx eval(cplx z) const;
  cplx eval_unchecked(cplx z) const;

  // Samples on the fit grid of 2*order+1 equispaced real angles.
  std::vector<cplx> grid_values() const;
  static std::vector<double> grid_angles(int order);

  AnalyticPeriodic derivative(int order = 1) const;
  // Requires (numerically) zero mean; inverse of derivative on that subspace.
  AnalyticPeriodic antiderivative() const;

  AnalyticPeriodic conj() const;
  bool is_real(double tol = 1e-12) const;

  // Decay-based estimate of the strip of analyticity: least-squares fit of
  // log|c_n| over the outer half of the numerically nonzero range, scaled by
  // the 0.8 safety factor. Trigonometric polynomials report +infinity.
  double strip_radius() const { return strip_radius_; }

  double max_abs_coeff() const;

  AnalyticPeriodic operator+(const AnalyticPeriodic& o) const;
  AnalyticPeriodic operator-(const AnalyticPeriodic& o) const;
  AnalyticPeriodic operator*(cplx s) const;

  // Pointwise values of this series at the given inner values, re-fitted.
  // Preconditions: every |Im inner| below the strip radius.
  AnalyticPeriodic compose_values(std::span<const cplx> inner_values) const;

  std::string to_json() const;
  static AnalyticPeriodic from_json(const std::string& text);

  static constexpr double kTailThreshold = 1e-10;

 private:
  void finalize();

  int order_ = 0;
  std::vector<cplx> coeffs_;
  bool under_resolved_ = false;
  double tail_ratio_ = 0.0;
  double strip_radius_ = 0.0;
};

}  // namespace virdet
