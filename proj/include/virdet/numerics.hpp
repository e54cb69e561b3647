// Low-level numerical kernels shared by the library: DFT/FFT, finite
// difference weights, and 1-D quadrature rules.
#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace virdet {

using cplx = std::complex<double>;
inline constexpr double pi = 3.141592653589793238462643383279502884;

// Error kinds map onto the CLI exit-code contract: usage errors exit 2,
// numeric failures exit 3.
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace fft {

// In-place complex DFT, sign = -1 forward / +1 inverse (inverse is unscaled;
// callers divide by n). Radix-2 fast path; O(n^2) direct transform otherwise.
void transform(std::vector<cplx>& a, int sign);

std::vector<cplx> forward(std::span<const cplx> a);   // includes 1/n scaling
std::vector<cplx> inverse(std::span<const cplx> a);   // unscaled inverse of forward*n

// Signed frequency of bin k for length n, i.e. k mapped into [-n/2, n/2).
int freq(int k, int n);

}  // namespace fft

namespace fd {

// Fornberg weights: derivative of order m at point xi from the given nodes.
std::vector<double> weights(double xi, std::span<const double> nodes, int m);

// Differentiation matrix rows for a uniform grid of n points with spacing h:
// interior rows use a centered (2*half+1)-point stencil, the first/last
// `half` rows use one-sided stencils of the same order on `width` nodes.
struct UniformStencil {
  int n = 0;
  int half = 0;
  int width = 0;
  // offsets[j] + weights per row class; rows 0..half-1 and n-half..n-1 are
  // stored explicitly, interior rows share one stencil.
  std::vector<std::vector<double>> boundary_lo, boundary_hi;
  std::vector<double> interior;

  static UniformStencil second_derivative(int n, double h);
  static UniformStencil first_derivative(int n, double h);

  // y = D x along a strided array: x[i*stride], i = 0..n-1.
  void apply(const double* x, int stride, double* y, int ystride) const;
};

}  // namespace fd

namespace quad {

// Composite Simpson weights on n (odd) uniform points with spacing h.
std::vector<double> simpson_weights(int n, double h);

// Integral of samples on a uniform periodic grid over [0, 2*pi).
double trapezoid_periodic(std::span<const double> f);

// Gauss-Legendre nodes/weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& x,
                    std::vector<double>& w);

}  // namespace quad

}  // namespace virdet
