#include "virdet/anomaly.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace virdet {

CylinderGrid::CylinderGrid(int nt, int nx, double lo, double hi)
    : n_theta(nt), n_x(nx), x_lo(lo), x_hi(hi) {
  if (n_theta < 64 || n_theta % 2 != 0)
    throw usage_error("n_theta must be even and >= 64");
  if (n_x < 65 || n_x % 2 == 0) throw usage_error("n_x must be odd and >= 65");
  if (!(x_lo < x_hi)) throw usage_error("x_lo must be below x_hi");
}

bool CylinderGrid::operator==(const CylinderGrid& o) const {
  return n_theta == o.n_theta && n_x == o.n_x && x_lo == o.x_lo && x_hi == o.x_hi;
}

CutoffProfile::CutoffProfile(Kind k, double lo_, double hi_)
    : kind(k), lo(lo_), hi(hi_) {
  if (!(lo < hi)) throw usage_error("cutoff transition needs lo < hi");
}

double CutoffProfile::operator()(double x) const { return jet(x).v; }

CutoffProfile::Jet CutoffProfile::jet(double x) const {
  Jet j;
  if (x <= lo) {
    j.v = 1.0;
    return j;
  }
  if (x >= hi) return j;
  const double W = hi - lo;
  const double u = (x - lo) / W;
  switch (kind) {
    case Kind::SmoothstepQuintic: {
      j.v = 1.0 - u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
      j.d1 = -30.0 * u * u * (1.0 - u) * (1.0 - u) / W;
      j.d2 = -60.0 * u * (1.0 - u) * (1.0 - 2.0 * u) / (W * W);
      return j;
    }
    case Kind::ExpBump: {
      // chi = B/(A+B) with A = e^{-1/u}, B = e^{-1/(1-u)}.
      const double s = 1.0 - u;
      const double A = std::exp(-1.0 / u), B = std::exp(-1.0 / s);
      const double S = A + B;
      const double Ap = A / (u * u);
      const double Bp = -B / (s * s);
      const double App = A / (u * u * u * u) - 2.0 * A / (u * u * u);
      const double Bpp = B / (s * s * s * s) - 2.0 * B / (s * s * s);
      const double N = Bp * A - B * Ap;
      const double Np = Bpp * A - B * App;
      j.v = B / S;
      const double du = N / (S * S);
      const double duu = Np / (S * S) - 2.0 * N * (Ap + Bp) / (S * S * S);
      j.d1 = du / W;
      j.d2 = duu / (W * W);
      return j;
    }
  }
  return j;
}

ConformalFactor::ConformalFactor(CylinderGrid grid, std::vector<double> f,
                                 double margin_lo, double margin_hi)
    : grid_(grid), f_(std::move(f)), margin_lo_(margin_lo), margin_hi_(margin_hi) {
  if (f_.size() != grid_.size())
    throw usage_error("field size does not match grid");
  for (double v : f_)
    if (!std::isfinite(v)) throw numeric_error("non-finite conformal factor");
  if (margin_lo_ > 0.0 || margin_hi_ > 0.0) {
    for (int i = 0; i < grid_.n_theta; ++i)
      for (int j = 0; j < grid_.n_x; ++j) {
        const double x = grid_.x(j);
        const bool margin = (x <= grid_.x_lo + margin_lo_ && margin_lo_ > 0.0) ||
                            (x >= grid_.x_hi - margin_hi_ && margin_hi_ > 0.0);
        if (margin && std::abs(at(i, j)) > 1e-12)
          throw numeric_error("factor violates admissibility margin");
      }
  }
}

ConformalFactor ConformalFactor::sample(
    const CylinderGrid& g, const std::function<double(double, double)>& fn,
    double margin_lo, double margin_hi) {
  std::vector<double> f(g.size());
  for (int i = 0; i < g.n_theta; ++i)
    for (int j = 0; j < g.n_x; ++j)
      f[size_t(i) * g.n_x + j] = fn(g.theta(i), g.x(j));
  return ConformalFactor(g, std::move(f), margin_lo, margin_hi);
}

void ConformalFactor::write_csv(std::ostream& os) const {
  nlohmann::json h;
  h["n_theta"] = grid_.n_theta;
  h["n_x"] = grid_.n_x;
  h["x_lo"] = grid_.x_lo;
  h["x_hi"] = grid_.x_hi;
  h["margin_lo"] = margin_lo_;
  h["margin_hi"] = margin_hi_;
  os << h.dump() << "\n";
  os.precision(17);
  for (int i = 0; i < grid_.n_theta; ++i) {
    for (int j = 0; j < grid_.n_x; ++j) {
      if (j) os << ',';
      os << at(i, j);
    }
    os << "\n";
  }
}

ConformalFactor ConformalFactor::read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw usage_error("empty factor stream");
  const auto h = nlohmann::json::parse(line);
  CylinderGrid g(h.at("n_theta").get<int>(), h.at("n_x").get<int>(),
                 h.at("x_lo").get<double>(), h.at("x_hi").get<double>());
  std::vector<double> f;
  f.reserve(g.size());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(std::stod(cell));
  }
  return ConformalFactor(g, std::move(f), h.value("margin_lo", 0.0),
                         h.value("margin_hi", 0.0));
}

namespace {

// Second theta-derivative, spectral: per x-column FFT, multiply by -k^2.
std::vector<double> d2_theta(const CylinderGrid& g, std::span<const double> f) {
  const int nt = g.n_theta, nx = g.n_x;
  std::vector<double> out(f.size());
  std::vector<cplx> col(static_cast<size_t>(nt));
  for (int j = 0; j < nx; ++j) {
    for (int i = 0; i < nt; ++i) col[size_t(i)] = f[size_t(i) * nx + j];
    fft::transform(col, -1);
    for (int k = 0; k < nt; ++k) {
      const double kk = double(fft::freq(k, nt));
      col[size_t(k)] *= -kk * kk / double(nt);
    }
    fft::transform(col, +1);
    for (int i = 0; i < nt; ++i) out[size_t(i) * nx + j] = col[size_t(i)].real();
  }
  return out;
}

std::vector<double> dx_apply(const CylinderGrid& g, std::span<const double> f,
                             int order) {
  const auto stencil = order == 2
                           ? fd::UniformStencil::second_derivative(g.n_x, g.dx())
                           : fd::UniformStencil::first_derivative(g.n_x, g.dx());
  std::vector<double> out(f.size());
  for (int i = 0; i < g.n_theta; ++i)
    stencil.apply(f.data() + size_t(i) * g.n_x, 1, out.data() + size_t(i) * g.n_x, 1);
  return out;
}

}  // namespace

std::vector<double> laplacian0(const CylinderGrid& g, std::span<const double> f) {
  auto tt = d2_theta(g, f);
  auto xx = dx_apply(g, f, 2);
  for (size_t i = 0; i < tt.size(); ++i) tt[i] = -(tt[i] + xx[i]);
  return tt;
}

std::vector<double> laplacian0(const ConformalFactor& f) {
  return laplacian0(f.grid(), f.values());
}

std::vector<double> d_theta(const CylinderGrid& g, std::span<const double> f) {
  const int nt = g.n_theta, nx = g.n_x;
  std::vector<double> out(f.size());
  std::vector<cplx> col(static_cast<size_t>(nt));
  for (int j = 0; j < nx; ++j) {
    for (int i = 0; i < nt; ++i) col[size_t(i)] = f[size_t(i) * nx + j];
    fft::transform(col, -1);
    for (int k = 0; k < nt; ++k) {
      int kk = fft::freq(k, nt);
      if (kk == -nt / 2) kk = 0;  // drop the unmatched Nyquist mode
      col[size_t(k)] *= cplx(0.0, double(kk)) / double(nt);
    }
    fft::transform(col, +1);
    for (int i = 0; i < nt; ++i) out[size_t(i) * nx + j] = col[size_t(i)].real();
  }
  return out;
}

std::vector<double> d_x(const CylinderGrid& g, std::span<const double> f) {
  return dx_apply(g, f, 1);
}

double integrate(const CylinderGrid& g, std::span<const double> values) {
  const auto wx = quad::simpson_weights(g.n_x, g.dx());
  const double wt = g.dtheta();
  double acc = 0.0;
  for (int i = 0; i < g.n_theta; ++i) {
    double row = 0.0;
    for (int j = 0; j < g.n_x; ++j) row += wx[size_t(j)] * values[size_t(i) * g.n_x + j];
    acc += row;
  }
  return acc * wt;
}

double pairing(const ConformalFactor& f1, const ConformalFactor& f2) {
  if (!(f1.grid() == f2.grid()))
    throw usage_error("pairing requires identical grids");
  const auto& a = f1.values();
  const auto& b = f2.values();
  std::vector<double> sum(a.size()), integrand(a.size());
  for (size_t i = 0; i < a.size(); ++i) sum[i] = a[i] + b[i];
  const auto lap = laplacian0(f1.grid(), sum);
  for (size_t i = 0; i < a.size(); ++i) integrand[i] = (a[i] - b[i]) * lap[i];
  return integrate(f1.grid(), integrand) / (96.0 * pi);
}

double liouville_action(const ConformalFactor& sigma, const ConformalFactor& base) {
  if (!(sigma.grid() == base.grid()))
    throw usage_error("liouville_action requires identical grids");
  const auto& g = sigma.grid();
  const auto st = d_theta(g, sigma.values());
  const auto sx = d_x(g, sigma.values());
  std::vector<double> integrand(sigma.values().size());
  for (size_t i = 0; i < integrand.size(); ++i)
    integrand[i] = 0.5 * (st[i] * st[i] + sx[i] * sx[i]);
  // Curvature term R_g sigma vol_g = (sigma/2) Lap0 f_base vol_0; zero for a
  // flat base.
  bool base_flat = true;
  for (double v : base.values())
    if (v != 0.0) {
      base_flat = false;
      break;
    }
  if (!base_flat) {
    const auto lapf = laplacian0(base);
    for (size_t i = 0; i < integrand.size(); ++i)
      integrand[i] += 0.5 * sigma.values()[i] * lapf[i];
  }
  return integrate(g, integrand) / (12.0 * pi);
}

}  // namespace virdet
