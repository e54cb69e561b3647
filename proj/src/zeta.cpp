#include "virdet/zeta.hpp"

#include <cmath>

namespace virdet {

PAResult pa_anomaly(const ConformalFactor& sigma, const ConformalFactor& base) {
  if (!(sigma.grid() == base.grid()))
    throw usage_error("pa_anomaly requires identical grids");
  for (double v : base.values())
    if (v != 0.0) throw usage_error("pa_anomaly is implemented for flat bases");

  const auto& g = sigma.grid();
  PAResult r;

  const auto st = d_theta(g, sigma.values());
  const auto sx = d_x(g, sigma.values());
  std::vector<double> integrand(sigma.values().size());
  for (size_t i = 0; i < integrand.size(); ++i)
    integrand[i] = 0.5 * (st[i] * st[i] + sx[i] * sx[i]);
  r.bulk = integrate(g, integrand);

  r.boundary_k = 0.0;  // geodesic boundaries of the flat cylinder
  std::vector<double> lo(static_cast<size_t>(g.n_theta)), hi(static_cast<size_t>(g.n_theta));
  for (int i = 0; i < g.n_theta; ++i) {
    lo[size_t(i)] = -sx[size_t(i) * g.n_x];               // N = -x at x_lo
    hi[size_t(i)] = sx[size_t(i) * g.n_x + (g.n_x - 1)];  // N = +x at x_hi
  }
  r.boundary_normal = quad::trapezoid_periodic(lo) + quad::trapezoid_periodic(hi);

  r.log_ratio = -r.bulk / (6.0 * pi) - r.boundary_k / (6.0 * pi) -
                r.boundary_normal / (4.0 * pi);
  return r;
}

namespace {

struct Scheme {
  double split = 1.0;       // t* where the integral is cut
  int panels = 12;          // geometric panels on [t_min, t*]
  int gl_order = 24;
  double lambda_tail = 45.0;  // e^{-lambda_tail} treated as zero
  bool poisson_small_t = true;
};

// Heat-trace deficit D(t) = Tr e^{-t Lap} - tau/(2t) + sqrt(pi)/(2 sqrt(t)).
double deficit(double t, double tau, bool poisson) {
  if (poisson) {
    // Theta-transformed form: no cancellation at small t.
    double th = 0.0, thk = 0.0;
    for (int m = 1;; ++m) {
      const double a = std::exp(-pi * pi * m * m / t);
      const double b = std::exp(-tau * tau * m * m / t);
      th += 2.0 * a;
      thk += 2.0 * b;
      if (a < 1e-20 && b < 1e-20) break;
      if (m > 4096) break;
    }
    const double cross = th + thk + th * thk;
    return (tau / (2.0 * t)) * cross - (std::sqrt(pi) / (2.0 * std::sqrt(t))) * th;
  }
  double sn = 1.0;
  for (int n = 1; n * n * t < 45.0; ++n) sn += 2.0 * std::exp(-t * n * n);
  double sk = 0.0;
  const double q = pi * pi / (tau * tau);
  for (int k = 1; k * k * q * t < 45.0; ++k) sk += std::exp(-t * q * k * k);
  return sn * sk - tau / (2.0 * t) + std::sqrt(pi) / (2.0 * std::sqrt(t));
}

// \int_{t*}^infty t^{-1} Tr dt = sum over modes of E1(lambda t*).
double tail_sum(double tau, double split, double lambda_tail) {
  const double lmax = lambda_tail / split;
  double acc = 0.0;
  const double q = pi * pi / (tau * tau);
  for (int k = 1; q * k * k <= lmax; ++k) {
    for (int n = 0; n * n + q * k * k <= lmax; ++n) {
      const double lam = n * n + q * k * k;
      const double e1 = -std::expint(-lam * split);
      acc += (n == 0 ? 1.0 : 2.0) * e1;
    }
  }
  return acc;
}

// -zeta'(0) for the given truncation scheme.
double logdet_scheme(double tau, const Scheme& s) {
  const double cmin = std::min(pi * pi, tau * tau);
  const double tmin = std::min(0.9 * s.split, cmin / 46.0);

  double i0 = 0.0;
  std::vector<double> x, w;
  const double ratio = std::pow(s.split / tmin, 1.0 / s.panels);
  double a = tmin;
  for (int p = 0; p < s.panels; ++p) {
    const double b = (p == s.panels - 1) ? s.split : a * ratio;
    quad::gauss_legendre(s.gl_order, a, b, x, w);
    for (int i = 0; i < s.gl_order; ++i)
      i0 += w[size_t(i)] * deficit(x[size_t(i)], tau, s.poisson_small_t) / x[size_t(i)];
    a = b;
  }

  const double middle = -tau / (2.0 * s.split) + std::sqrt(pi) / std::sqrt(s.split);
  const double iinf = tail_sum(tau, s.split, s.lambda_tail);
  return -(i0 + middle + iinf);
}

}  // namespace

DetZetaResult detz_flat_cylinder(double tau) {
  if (!(tau >= 0.1 && tau <= 10.0))
    throw usage_error("detz_flat_cylinder expects tau in [0.1, 10]");
  Scheme a;  // Poisson small-t form, split 1
  Scheme b;
  b.split = 0.6;
  b.panels = 16;
  b.gl_order = 32;
  b.poisson_small_t = false;
  const double la = logdet_scheme(tau, a);
  const double lb = logdet_scheme(tau, b);
  DetZetaResult r;
  r.logdet = la;
  r.scheme_gap = std::abs(la - lb) / std::max(1.0, std::abs(la));
  if (r.scheme_gap > 1e-6)
    throw numeric_error("zeta truncation schemes disagree: gap = " +
                        std::to_string(r.scheme_gap));
  return r;
}

double zeta0_flat_cylinder(double tau, double eps) {
  const double split = 1.0;
  auto zeta_at = [&](double s) {
    const double cmin = std::min(pi * pi, tau * tau);
    const double tmin = cmin / 46.0;
    double i0 = 0.0;
    std::vector<double> x, w;
    const int panels = 14, order = 24;
    const double ratio = std::pow(split / tmin, 1.0 / panels);
    double a = tmin;
    for (int p = 0; p < panels; ++p) {
      const double b = (p == panels - 1) ? split : a * ratio;
      quad::gauss_legendre(order, a, b, x, w);
      for (int i = 0; i < order; ++i)
        i0 += w[size_t(i)] * std::pow(x[size_t(i)], s - 1.0) *
              deficit(x[size_t(i)], tau, true);
      a = b;
    }
    // Analytic middle part of the split integral.
    const double middle = tau / 2.0 * std::pow(split, s - 1.0) / (s - 1.0) -
                          std::sqrt(pi) / 2.0 * std::pow(split, s - 0.5) / (s - 0.5);
    // Large-t part, integrated out to where the trace is dead.
    double iinf = 0.0;
    const double q = pi * pi / (tau * tau);
    const double lmin = q + 0.0;  // smallest eigenvalue has n = 0, k = 1
    const double T = 50.0 / lmin;
    const int tp = 20;
    double aa = split;
    const double rr = std::pow(T / split, 1.0 / tp);
    for (int p = 0; p < tp; ++p) {
      const double bb = aa * rr;
      quad::gauss_legendre(order, aa, bb, x, w);
      for (int i = 0; i < order; ++i) {
        const double t = x[size_t(i)];
        double tr = 0.0;
        for (int k = 1; q * k * k * t < 45.0; ++k) {
          double sn = 1.0;
          for (int n = 1; n * n * t < 45.0; ++n) sn += 2.0 * std::exp(-t * n * n);
          tr += sn * std::exp(-q * k * k * t);
        }
        iinf += w[size_t(i)] * std::pow(t, s - 1.0) * tr;
      }
      aa = bb;
    }
    return (i0 + middle + iinf) / std::tgamma(s);
  };
  return 0.5 * (zeta_at(eps) + zeta_at(-eps));
}

double mu_zeta_vs_mu(double tau, const ConformalFactor& sigma,
                     double /*charge*/) {
  if (!sigma.admissible())
    throw usage_error("mu_zeta_vs_mu requires an admissible sigma");
  const auto& g = sigma.grid();
  if (std::abs(g.x_lo) > 1e-14 || std::abs(g.x_hi - tau) > 1e-12)
    throw usage_error("sigma must live on S^1 x [0, tau]");
  const auto flat = ConformalFactor::flat(g);
  const auto pa = pa_anomaly(sigma, flat);
  // f = 2 sigma for g = e^{2 sigma} dz dzbar.
  std::vector<double> f(sigma.values());
  for (auto& v : f) v *= 2.0;
  const ConformalFactor f2(g, std::move(f), sigma.margin_lo(), sigma.margin_hi());
  const double route2 = 2.0 * pairing(flat, f2);
  return std::abs(pa.log_ratio - route2);
}

}  // namespace virdet
