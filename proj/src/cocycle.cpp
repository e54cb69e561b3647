#include "virdet/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace virdet {

namespace {

double min3(double a, double b, double c) { return std::min(a, std::min(b, c)); }

double curve_sup_im(const CircleMap& m, double height) {
  // sup Im m(theta + i height) over the fit grid.
  double s = -std::numeric_limits<double>::infinity();
  const auto angles = AnalyticPeriodic::grid_angles(m.order());
  for (double th : angles) {
    const cplx z(th, height);
    s = std::max(s, (z + m.displacement().eval(z)).imag());
  }
  return s;
}

double curve_inf_im(const CircleMap& m, double height) {
  double s = std::numeric_limits<double>::infinity();
  const auto angles = AnalyticPeriodic::grid_angles(m.order());
  for (double th : angles) {
    const cplx z(th, height);
    s = std::min(s, (z + m.displacement().eval(z)).imag());
  }
  return s;
}

}  // namespace

MetricSystem::MetricSystem(const CircleMap& phi, const CircleMap& psi,
                           const CocycleOptions& opt)
    : phi_(phi),
      psi_(psi),
      phipsi_(compose(phi, psi)),
      dphi_(phi_),
      dpsi_(psi_),
      dphipsi_(phipsi_),
      phi_fwd_deriv_(phi_.displacement().derivative(1)),
      r_(opt.collar_r),
      chi1_(opt.cutoff_kind, 0.0, 1.0),
      chi2_(opt.cutoff_kind, opt.chi2_lo, opt.chi2_hi) {
  if (r_ <= 0.0) {
    const double rad = min3(dphi_.inverse_map().displacement().strip_radius(),
                            dpsi_.inverse_map().displacement().strip_radius(),
                            dphipsi_.inverse_map().displacement().strip_radius());
    r_ = 0.5 * std::min(rad, 0.3);
  }
  // Support conditions for the Fig.-style layout: chi1 must be identically 1
  // on every deformed lower curve and identically 0 on the image of the
  // collar top; chi2 must be 1 throughout the collar image. The chi1 band is
  // placed by fractions of the free interval between those constraints
  // (log Gamma is cut-off independent, so the placement only has to be
  // admissible).
  const double sup_curves =
      std::max({curve_sup_im(phi_, 0.0), curve_sup_im(psi_, 0.0),
                curve_sup_im(phipsi_, 0.0), 0.0});
  const double inf_collar_top = curve_inf_im(phi_, r_);
  if (!(inf_collar_top - sup_curves > 0.02 * r_))
    throw numeric_error(
        "cut-off support violation: no room for the chi1 band inside the "
        "collar image");
  chi1_ = CutoffProfile(
      opt.cutoff_kind,
      sup_curves + opt.chi1_lo_frac * (inf_collar_top - sup_curves),
      sup_curves + opt.chi1_hi_frac * (inf_collar_top - sup_curves));
  if (!(sup_curves < chi1_.lo))
    throw numeric_error(
        "cut-off support violation: deformed curve reaches the chi1 band");
  if (!(inf_collar_top > chi1_.hi))
    throw numeric_error(
        "cut-off support violation: chi1 band leaves the collar image");
  if (!(curve_sup_im(phi_, r_) < chi2_.lo))
    throw numeric_error(
        "cut-off support violation: collar image reaches the chi2 band");
}

double MetricSystem::rho(cplx z) const {
  const double x = z.imag();
  if (x <= 0.0) return 1.0;
  if (x >= r_) return 0.0;
  const cplx image = z + phi_.displacement().eval(z);
  return chi1_(image.imag());
}

double MetricSystem::factor_phi(cplx z) const {
  return factor_jet(Leg::Phi, z).G;
}
double MetricSystem::factor_psi(cplx z) const {
  return factor_jet(Leg::Psi, z).G;
}
double MetricSystem::factor_phipsi(cplx z) const {
  return factor_jet(Leg::PhiPsi, z).G;
}

MetricSystem::FactorJet MetricSystem::factor_jet(Leg leg, cplx z) const {
  const double x = z.imag();
  FactorJet out;
  switch (leg) {
    case Leg::Phi: {
      const auto c2 = chi2_.jet(x);
      if (c2.v == 0.0) return out;
      const auto f = dphi_.jet(z);
      out.G = f.F * c2.v + 1.0 - c2.v;
      out.Gt = f.Ft * c2.v;
      out.Gx = f.Fx * c2.v + (f.F - 1.0) * c2.d1;
      out.lap = c2.v * f.lap - 2.0 * f.Fx * c2.d1 - (f.F - 1.0) * c2.d2;
      return out;
    }
    case Leg::PhiPsi: {
      const auto c2 = chi2_.jet(x);
      if (c2.v == 0.0) return out;
      const auto c1 = chi1_.jet(x);
      const auto fp = dphi_.jet(z);
      if (c1.v == 0.0 && c1.d1 == 0.0) {
        out.G = fp.F * c2.v + 1.0 - c2.v;
        out.Gt = fp.Ft * c2.v;
        out.Gx = fp.Fx * c2.v + (fp.F - 1.0) * c2.d1;
        out.lap = c2.v * fp.lap - 2.0 * fp.Fx * c2.d1 - (fp.F - 1.0) * c2.d2;
        return out;
      }
      const auto fc = dphipsi_.jet(z);
      const double w2 = c2.v - c1.v, w2p = c2.d1 - c1.d1, w2pp = c2.d2 - c1.d2;
      out.G = fc.F * c1.v + fp.F * w2 + 1.0 - c2.v;
      out.Gt = fc.Ft * c1.v + fp.Ft * w2;
      out.Gx = fc.Fx * c1.v + fc.F * c1.d1 + fp.Fx * w2 + fp.F * w2p - c2.d1;
      out.lap = c1.v * fc.lap - 2.0 * fc.Fx * c1.d1 - fc.F * c1.d2 +
                w2 * fp.lap - 2.0 * fp.Fx * w2p - fp.F * w2pp + c2.d2;
      return out;
    }
    case Leg::Psi: {
      // rho = chi1(Im phi(z)) inside the collar, constant outside.
      const double xx = z.imag();
      double rv = 1.0, rt = 0.0, rx = 0.0, rlap = 0.0;
      if (xx >= r_) {
        rv = 0.0;
      } else if (xx > 0.0) {
        const cplx image = z + phi_.displacement().eval(z);
        const auto c1 = chi1_.jet(image.imag());
        const cplx dphi = cplx(1.0) + phi_fwd_deriv_.eval(z);
        rv = c1.v;
        rt = c1.d1 * dphi.imag();
        rx = c1.d1 * dphi.real();
        rlap = -c1.d2 * std::norm(dphi);
      }
      if (rv == 0.0 && rt == 0.0 && rx == 0.0) return out;
      const auto f = dpsi_.jet(z);
      out.G = 1.0 + (f.F - 1.0) * rv;
      out.Gt = f.Ft * rv + (f.F - 1.0) * rt;
      out.Gx = f.Fx * rv + (f.F - 1.0) * rx;
      out.lap = rv * f.lap + (f.F - 1.0) * rlap - 2.0 * (f.Ft * rt + f.Fx * rx);
      return out;
    }
  }
  return out;
}

std::vector<MetricSystem::Band> MetricSystem::bands(Leg leg) const {
  switch (leg) {
    case Leg::Phi:
      return {{chi2_.lo, chi2_.hi, false}};
    case Leg::PhiPsi:
      return {{chi1_.lo, chi1_.hi, false}, {chi2_.lo, chi2_.hi, false}};
    case Leg::Psi:
      return {{chi1_.lo, chi1_.hi, true}};
  }
  return {};
}

double MetricSystem::pullback_defect(int n_theta, int n_x) const {
  double defect = 0.0;
  for (int j = 0; j < n_x; ++j) {
    const double x = r_ * double(j) / double(n_x - 1);
    for (int i = 0; i < n_theta; ++i) {
      const double th = 2.0 * pi * double(i) / double(n_theta);
      const cplx w(th, x);
      const cplx z = w + phi_.displacement().eval(w);  // z = phi(w) in V
      const double lhs = (dpsi_(w) * rho(w) + 1.0 - rho(w)) * dphi_(z);
      const double c1 = chi1_(z.imag());
      const double rhs = dphipsi_(z) * c1 + dphi_(z) * (1.0 - c1);
      defect = std::max(defect, std::abs(lhs - rhs));
    }
  }
  return defect;
}

namespace {

ConformalFactor sample_log_factor(const CylinderGrid& g,
                                  const std::function<double(cplx)>& factor,
                                  double margin_lo, double margin_hi) {
  std::vector<double> f(g.size());
  for (int i = 0; i < g.n_theta; ++i)
    for (int j = 0; j < g.n_x; ++j)
      f[size_t(i) * g.n_x + j] = std::log(factor(cplx(g.theta(i), g.x(j))));
  return ConformalFactor(g, std::move(f), margin_lo, margin_hi);
}

}  // namespace

ConformalFactor MetricSystem::sample_flat(const CylinderGrid& g) const {
  return ConformalFactor::flat(g);
}
ConformalFactor MetricSystem::sample_phi(const CylinderGrid& g) const {
  return sample_log_factor(
      g, [this](cplx z) { return factor_phi(z); }, 0.0, g.x_hi - chi2_.hi);
}
ConformalFactor MetricSystem::sample_psi(const CylinderGrid& g) const {
  return sample_log_factor(
      g, [this](cplx z) { return factor_psi(z); }, 0.0, g.x_hi - r_);
}
ConformalFactor MetricSystem::sample_phipsi(const CylinderGrid& g) const {
  return sample_log_factor(
      g, [this](cplx z) { return factor_phipsi(z); }, 0.0, g.x_hi - chi2_.hi);
}

namespace {

// One pairing term <Fhat^2 dz dzbar | e^f dz dzbar>, f = log G, for a
// deformed cylinder, pushed forward along its uniformizer Fhat: on
// S^1 x [0, tau] the first factor is exactly flat and the integrand becomes
//   -(1/(96 pi)) ftilde(w) |z'(w)|^2 (Lap log G)(z(w)),
// with ftilde = log G - log |Fhat'|^2. Lap log G vanishes identically outside
// the cut-off bands, so each theta-column is integrated over the band
// preimages only, with Gauss-Legendre panels split at the band edges (where
// the C^2 cut-offs have derivative kinks).
double pushforward_term(const MetricSystem& ms, MetricSystem::Leg leg,
                        const CocycleOptions& opt) {
  const CircleMap& lower = leg == MetricSystem::Leg::Phi  ? ms.phi()
                           : leg == MetricSystem::Leg::Psi ? ms.psi()
                                                           : ms.phipsi();
  const auto u = uniformize(DeformedCylinder(lower, 1.0), opt.unif_modes);
  const double tau = u.tau();
  const auto bands = ms.bands(leg);

  // Straight-coordinate height of the level surface along this column:
  // solve height(z(theta + i x)) = level by safeguarded Newton.
  auto level_x = [&](double theta, const MetricSystem::Band& band,
                     double level) {
    double x = std::clamp(level, 0.0, tau);
    for (int it = 0; it < 60; ++it) {
      const cplx z = u.invert_map(cplx(theta, x));
      const double val = ms.band_height(band, z) - level;
      if (std::abs(val) < 1e-13) return std::clamp(x, 0.0, tau);
      // dL/dx = Im(i z'(w)) for plain heights, Im(i phi'(z) z'(w)) for
      // transported ones.
      const cplx zp = cplx(1.0) / u.map_deriv(z);
      const double slope = band.transported
                               ? (cplx(0.0, 1.0) * ms.phi().map_deriv(z) * zp).imag()
                               : zp.real();
      if (!(std::abs(slope) > 1e-6))
        throw numeric_error("degenerate level surface in cocycle quadrature");
      x -= val / slope;
      x = std::clamp(x, 0.0, tau);
    }
    throw numeric_error("level-surface solve failed in cocycle quadrature");
  };

  const int per_band = std::max(24, opt.n_x / 4);
  const int panel_nodes = 12;
  const int panels = (per_band + panel_nodes - 1) / panel_nodes;

  std::vector<double> gx, gw;
  double acc = 0.0;
  for (int i = 0; i < opt.n_theta; ++i) {
    const double theta = 2.0 * pi * double(i) / double(opt.n_theta);
    for (const auto& band : bands) {
      const double xa = level_x(theta, band, band.lo);
      const double xb = level_x(theta, band, band.hi);
      if (!(xb > xa)) continue;
      for (int p = 0; p < panels; ++p) {
        const double a = xa + (xb - xa) * double(p) / double(panels);
        const double b = xa + (xb - xa) * double(p + 1) / double(panels);
        quad::gauss_legendre(panel_nodes, a, b, gx, gw);
        for (int q = 0; q < panel_nodes; ++q) {
          const cplx w(theta, gx[size_t(q)]);
          const cplx z = u.invert_map(w);
          const auto jet = ms.factor_jet(leg, z);
          const double us = u.unif_factor(z);
          const double ftilde = std::log(jet.G) - std::log(us);
          acc += gw[size_t(q)] * (-ftilde) * jet.lap_log() / us;
        }
      }
    }
  }
  return acc * (2.0 * pi / double(opt.n_theta)) / (96.0 * pi);
}

}  // namespace

double log_gamma_bracket(const CircleMap& phi, const CircleMap& psi,
                         const CocycleOptions& opt) {
  const MetricSystem ms(phi, psi, opt);
  const double t_phipsi = pushforward_term(ms, MetricSystem::Leg::PhiPsi, opt);
  const double t_phi = pushforward_term(ms, MetricSystem::Leg::Phi, opt);
  const double t_psi = pushforward_term(ms, MetricSystem::Leg::Psi, opt);
  return t_phipsi - t_phi - t_psi;
}

cplx gelfand_fuks(const VectorField& v, const VectorField& w, Charge charge) {
  const int N = std::min(v.series.order(), w.series.order());
  cplx acc(0.0);
  for (int n = -N; n <= N; ++n) {
    const double n3 = double(n) * double(n) * double(n);
    acc += n3 * v.series.coeff(n) * w.series.coeff(-n);
  }
  return cplx(0.0, -charge.c / 12.0) * acc;
}

namespace {

// Antisymmetrized bracket W(t, s) = B(phi_t, psi_s) - B(psi_s, phi_t).
double w_bracket(const VectorField& v, const VectorField& w, double t, double s,
                 const CocycleOptions& opt) {
  const CircleMap phi = flow(v, t);
  const CircleMap psi = flow(w, s);
  return log_gamma_bracket(phi, psi, opt) - log_gamma_bracket(psi, phi, opt);
}

double mixed_stencil(const VectorField& v, const VectorField& w, double h,
                     const CocycleOptions& opt) {
  const double signs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  double vals[4];
  if (opt.concurrent) {
    std::future<double> fut[4];
    for (int k = 0; k < 4; ++k)
      fut[k] = std::async(std::launch::async, [&, k] {
        return w_bracket(v, w, signs[k][0] * h, signs[k][1] * h, opt);
      });
    for (int k = 0; k < 4; ++k) vals[k] = fut[k].get();
  } else {
    for (int k = 0; k < 4; ++k)
      vals[k] = w_bracket(v, w, signs[k][0] * h, signs[k][1] * h, opt);
  }
  return (vals[0] - vals[1] - vals[2] + vals[3]) / (4.0 * h * h);
}

}  // namespace

CocycleResult gamma_lie(const VectorField& v, const VectorField& w,
                        Charge charge, const CocycleOptions& opt) {
  const double h = opt.stencil_h;
  if (!(h >= 1e-3 && h <= 5e-2))
    throw usage_error("stencil size must lie in [1e-3, 5e-2]");
  double bracket;
  if (opt.richardson) {
    const double dh = mixed_stencil(v, w, h, opt);
    const double dh2 = mixed_stencil(v, w, 0.5 * h, opt);
    bracket = (4.0 * dh2 - dh) / 3.0;
  } else {
    bracket = mixed_stencil(v, w, h, opt);
  }
  CocycleResult res;
  res.gamma = charge.c * 0.5 * bracket;
  res.gf_imag = gelfand_fuks(v, w, charge).imag();
  res.stencil_h = h;
  res.richardson_order = opt.richardson ? 1 : 0;
  res.rel_err =
      std::abs(res.gamma - res.gf_imag) / std::max(std::abs(res.gf_imag), 1e-12);
  return res;
}

DerivCheckResult metric_log_derivative_check(const VectorField& v,
                                             const VectorField& w,
                                             const CocycleOptions& opt) {
  const double h = 5e-3;
  const CircleMap id = CircleMap::identity(v.series.order());
  const MetricSystem base(id, id, opt);
  const CutoffProfile& chi1 = base.chi1();

  const AnalyticPeriodic vprime = v.series.derivative(1);
  const AnalyticPeriodic wprime = w.series.derivative(1);

  // Sample points across the strip interior, including the chi1 band.
  std::vector<cplx> pts;
  for (int i = 0; i < 16; ++i)
    for (int j = 1; j < 12; ++j)
      pts.emplace_back(2.0 * pi * i / 16.0, 0.9 * double(j) / 12.0);

  DerivCheckResult out;
  {
    // d/dt at t=0 of log(F_{phi_t} chi1 + F_{phi_t}(1-chi1)) = -2 Re v'.
    const CircleMap p1 = flow(v, h), p2 = flow(v, 2 * h);
    const CircleMap m1 = flow(v, -h), m2 = flow(v, -2 * h);
    const DersqEvaluator d1(p1), d2(p2), e1(m1), e2(m2);
    for (const cplx& z : pts) {
      const double der = (-std::log(d2(z)) + 8.0 * std::log(d1(z)) -
                          8.0 * std::log(e1(z)) + std::log(e2(z))) /
                         (12.0 * h);
      out.defect_t =
          std::max(out.defect_t, std::abs(der + 2.0 * vprime.eval(z).real()));
    }
  }
  {
    // d/ds at s=0 of log(F_{psi_s} chi1 + (1-chi1)) = -2 Re w' chi1.
    const CircleMap p1 = flow(w, h), p2 = flow(w, 2 * h);
    const CircleMap m1 = flow(w, -h), m2 = flow(w, -2 * h);
    const DersqEvaluator d1(p1), d2(p2), e1(m1), e2(m2);
    for (const cplx& z : pts) {
      const double c1 = chi1(z.imag());
      auto val = [&](const DersqEvaluator& d) {
        return std::log(d(z) * c1 + (1.0 - c1));
      };
      const double der =
          (-val(d2) + 8.0 * val(d1) - 8.0 * val(e1) + val(e2)) / (12.0 * h);
      out.defect_s = std::max(
          out.defect_s, std::abs(der + 2.0 * wprime.eval(z).real() * c1));
    }
  }
  return out;
}

}  // namespace virdet
