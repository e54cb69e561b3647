#include "virdet/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace virdet {

namespace fft {

namespace {

bool is_pow2(size_t n) { return n && (n & (n - 1)) == 0; }

void radix2(std::vector<cplx>& a, int sign) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * pi / double(len);
    const cplx wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        cplx u = a[i + k];
        cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

void direct_dft(std::vector<cplx>& a, int sign) {
  const size_t n = a.size();
  std::vector<cplx> tw(n);
  for (size_t k = 0; k < n; ++k) {
    const double ang = sign * 2.0 * pi * double(k) / double(n);
    tw[k] = cplx(std::cos(ang), std::sin(ang));
  }
  std::vector<cplx> out(n, cplx(0.0));
  for (size_t k = 0; k < n; ++k) {
    cplx s(0.0);
    for (size_t j = 0; j < n; ++j) s += a[j] * tw[(j * k) % n];
    out[k] = s;
  }
  a = std::move(out);
}

}  // namespace

void transform(std::vector<cplx>& a, int sign) {
  if (a.empty()) return;
  if (is_pow2(a.size()))
    radix2(a, sign);
  else
    direct_dft(a, sign);
}

std::vector<cplx> forward(std::span<const cplx> a) {
  std::vector<cplx> v(a.begin(), a.end());
  transform(v, -1);
  const double inv = 1.0 / double(v.size());
  for (auto& c : v) c *= inv;
  return v;
}

std::vector<cplx> inverse(std::span<const cplx> a) {
  std::vector<cplx> v(a.begin(), a.end());
  transform(v, +1);
  return v;
}

int freq(int k, int n) { return (k <= n / 2 - (n % 2 == 0 ? 1 : 0)) ? k : k - n; }

}  // namespace fft

namespace fd {

std::vector<double> weights(double xi, std::span<const double> nodes, int m) {
  // Fornberg (1988) recursion.
  const int nd = int(nodes.size()) - 1;
  std::vector<std::vector<double>> c(nd + 1, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - xi;
  c[0][0] = 1.0;
  for (int i = 1; i <= nd; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - xi;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(nd + 1);
  for (int i = 0; i <= nd; ++i) w[i] = c[i][m];
  return w;
}

namespace {

UniformStencil make(int n, double h, int m) {
  // 5-point centered interior (4th order for m=2 and m=1 on uniform grids),
  // 6-point one-sided closures of matching order at the edges.
  UniformStencil s;
  s.n = n;
  s.half = 2;
  s.width = 6;
  if (n < s.width) throw numeric_error("grid too small for stencil");
  std::vector<double> nodes(s.width);
  for (int j = 0; j < s.width; ++j) nodes[j] = h * j;
  for (int r = 0; r < s.half; ++r)
    s.boundary_lo.push_back(weights(h * r, nodes, m));
  for (int r = 0; r < s.half; ++r) {
    auto w = weights(h * (s.width - 1 - r), nodes, m);
    std::reverse(w.begin(), w.end());
    s.boundary_hi.push_back(std::move(w));  // row n-1-r, nodes n-width..n-1 reversed
  }
  std::vector<double> cn(5);
  for (int j = 0; j < 5; ++j) cn[j] = h * (j - 2);
  s.interior = weights(0.0, cn, m);
  return s;
}

}  // namespace

UniformStencil UniformStencil::second_derivative(int n, double h) { return make(n, h, 2); }
UniformStencil UniformStencil::first_derivative(int n, double h) { return make(n, h, 1); }

void UniformStencil::apply(const double* x, int stride, double* y, int ystride) const {
  for (int r = 0; r < half; ++r) {
    double s = 0.0;
    for (int j = 0; j < width; ++j) s += boundary_lo[r][j] * x[j * stride];
    y[r * ystride] = s;
  }
  for (int r = half; r < n - half; ++r) {
    double s = 0.0;
    for (int j = 0; j < 5; ++j) s += interior[j] * x[(r - 2 + j) * stride];
    y[r * ystride] = s;
  }
  for (int r = 0; r < half; ++r) {
    double s = 0.0;
    for (int j = 0; j < width; ++j)
      s += boundary_hi[r][width - 1 - j] * x[(n - width + j) * stride];
    y[(n - 1 - r) * ystride] = s;
  }
}

}  // namespace fd

namespace quad {

std::vector<double> simpson_weights(int n, double h) {
  if (n < 3 || n % 2 == 0)
    throw usage_error("composite Simpson needs an odd point count >= 3");
  std::vector<double> w(n, 0.0);
  for (int i = 0; i + 2 < n; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  return w;
}

double trapezoid_periodic(std::span<const double> f) {
  double s = 0.0;
  for (double v : f) s += v;
  return s * (2.0 * pi / double(f.size()));
}

void gauss_legendre(int n, double a, double b, std::vector<double>& x,
                    std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p0 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
    x[i] = xm - xl * z;
    x[n - 1 - i] = xm + xl * z;
    w[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

}  // namespace quad

}  // namespace virdet
