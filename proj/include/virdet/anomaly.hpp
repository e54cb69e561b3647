// Tensor-grid conformal factors on straight cylinders S^1 x [x_lo, x_hi],
// cut-off profiles, the flat-metric Laplacian, and the conformal-anomaly
// pairing <g1|g2> and Liouville action.
#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "virdet/numerics.hpp"

namespace virdet {

struct CylinderGrid {
  int n_theta = 256;  // even, >= 64
  int n_x = 129;      // odd, >= 65
  double x_lo = 0.0;
  double x_hi = 1.0;

  CylinderGrid() = default;
  CylinderGrid(int nt, int nx, double lo, double hi);

  double dtheta() const { return 2.0 * pi / n_theta; }
  double dx() const { return (x_hi - x_lo) / (n_x - 1); }
  double theta(int i) const { return dtheta() * i; }
  double x(int j) const { return x_lo + dx() * j; }
  size_t size() const { return size_t(n_theta) * size_t(n_x); }

  bool operator==(const CylinderGrid& o) const;
};

// chi: [x_lo, x_hi] -> [0, 1], identically 1 below `lo`, identically 0 above
// `hi`, monotone and C^2 across the transition.
struct CutoffProfile {
  enum class Kind { SmoothstepQuintic, ExpBump };
  Kind kind = Kind::SmoothstepQuintic;
  double lo = 0.0;
  double hi = 1.0;

  CutoffProfile() = default;
  CutoffProfile(Kind k, double lo_, double hi_);

  double operator()(double x) const;

  struct Jet {
    double v = 0.0, d1 = 0.0, d2 = 0.0;
  };
  // Value and first two x-derivatives (closed forms).
  Jet jet(double x) const;
};

// Log-density f of a metric g = e^f dz dzbar sampled theta-major:
// f[i*n_x + j] at (theta_i, x_j). admissible margins are widths near each
// boundary on which f must vanish identically.
class ConformalFactor {
 public:
  ConformalFactor(CylinderGrid grid, std::vector<double> f,
                  double margin_lo = 0.0, double margin_hi = 0.0);

  static ConformalFactor flat(const CylinderGrid& g) {
    return ConformalFactor(g, std::vector<double>(g.size(), 0.0),
                           0.5 * (g.x_hi - g.x_lo), 0.5 * (g.x_hi - g.x_lo));
  }
  static ConformalFactor sample(const CylinderGrid& g,
                                const std::function<double(double, double)>& fn,
                                double margin_lo = 0.0, double margin_hi = 0.0);

  const CylinderGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return f_; }
  double at(int i, int j) const { return f_[size_t(i) * grid_.n_x + j]; }
  double margin_lo() const { return margin_lo_; }
  double margin_hi() const { return margin_hi_; }
  bool admissible() const { return margin_lo_ > 0.0 && margin_hi_ > 0.0; }

  void write_csv(std::ostream& os) const;
  static ConformalFactor read_csv(std::istream& is);

 private:
  CylinderGrid grid_;
  std::vector<double> f_;
  double margin_lo_ = 0.0, margin_hi_ = 0.0;
};

// Positive flat Laplacian -(d^2/dtheta^2 + d^2/dx^2): spectral in theta,
// 4th-order finite differences in x with one-sided edge closures.
std::vector<double> laplacian0(const ConformalFactor& f);
std::vector<double> laplacian0(const CylinderGrid& g, std::span<const double> f);

// <g1|g2> = (1/(96 pi)) \iint (f1 - f2) Lap0(f1 + f2) dtheta dx.
// Trapezoid (theta) x composite Simpson (x); antisymmetric bit-exactly.
double pairing(const ConformalFactor& f1, const ConformalFactor& f2);

// S_L^0(sigma, base) = (1/(12 pi)) \iint (|grad sigma|^2/2 + R sigma) vol.
// sigma is the Weyl field itself (g = e^{2 sigma} base).
double liouville_action(const ConformalFactor& sigma, const ConformalFactor& base);

// Quadrature of an arbitrary sampled integrand over the grid (same rules
// as the pairing).
double integrate(const CylinderGrid& g, std::span<const double> values);

// d/dtheta and d/dx of a sampled field (spectral / 4th-order FD).
std::vector<double> d_theta(const CylinderGrid& g, std::span<const double> f);
std::vector<double> d_x(const CylinderGrid& g, std::span<const double> f);

}  // namespace virdet
