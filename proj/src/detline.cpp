#include "virdet/detline.hpp"

#include <cmath>

#include "json.hpp"

namespace virdet {

double bump_profile(double x, double x_lo, double x_hi, double margin_frac) {
  // sin^6 window: C^5 at the junctions, so the 4th-order grid operators keep
  // their full order (a C^2 smoothstep would cap the pairing accuracy near
  // 1e-4 at the default grid).
  const double L = x_hi - x_lo;
  const double m = margin_frac * L;
  if (x <= x_lo + m || x >= x_hi - m) return 0.0;
  const double s = std::sin(pi * (x - x_lo - m) / (L - 2.0 * m));
  const double s2 = s * s;
  return s2 * s2 * s2;
}

ConformalFactor make_admissible_factor(const CylinderGrid& g, double eps,
                                       std::mt19937_64* rng) {
  double a1 = 0.0, b1 = 0.0, a2 = 0.0;
  double shift = 0.0;
  if (rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    a1 = 0.4 * u(*rng);
    b1 = 0.4 * u(*rng);
    a2 = 0.25 * u(*rng);
    shift = 0.02 * (g.x_hi - g.x_lo) * u(*rng);
  }
  const double margin = 0.1 * (g.x_hi - g.x_lo);
  auto fn = [&](double th, double x) {
    const double s = bump_profile(x + shift, g.x_lo, g.x_hi);
    return 2.0 * eps * s *
           (1.0 + a1 * std::cos(th) + b1 * std::sin(th) + a2 * std::cos(2.0 * th));
  };
  // The shifted bump still vanishes on 8% margins; declare those.
  return ConformalFactor::sample(g, fn, 0.6 * margin, 0.6 * margin);
}

DetVector::DetVector(double lambda, ConformalFactor factor, Charge charge)
    : lambda_(lambda), factor_(std::move(factor)), charge_(charge) {}

double DetVector::ratio_against(const DetVector& other) const {
  if (charge_.c != other.charge_.c)
    throw usage_error("determinant vectors carry different central charges");
  const double p = pairing(factor_, other.factor_);
  const double rhs = std::exp(charge_.c * p) * other.lambda_;
  if (rhs == 0.0) return lambda_ == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return lambda_ / rhs;
}

bool DetVector::equals(const DetVector& other, double tol) const {
  const double p = pairing(factor_, other.factor_);
  const double rhs = std::exp(charge_.c * p) * other.lambda_;
  const double scale = std::max({std::abs(lambda_), std::abs(rhs), 1e-300});
  return std::abs(lambda_ - rhs) <= tol * scale;
}

DetVector DetVector::normalized_to(const ConformalFactor& g) const {
  const double p = pairing(g, factor_);
  return DetVector(std::exp(charge_.c * p) * lambda_, g, charge_);
}

std::string DetVector::to_json() const {
  nlohmann::json j;
  j["lambda"] = lambda_;
  j["charge"] = charge_.c;
  std::ostringstream os;
  factor_.write_csv(os);
  j["factor"] = os.str();
  return j.dump();
}

DetVector det_add(const DetVector& a, const DetVector& b) {
  if (a.charge().c != b.charge().c)
    throw usage_error("det_add requires equal central charges");
  if (!(a.factor().grid() == b.factor().grid()))
    throw usage_error("det_add requires a common cylinder grid");
  const double p = pairing(a.factor(), b.factor());
  return DetVector(a.lambda() + std::exp(a.charge().c * p) * b.lambda(),
                   a.factor(), a.charge());
}

DetVector mu_c(const DeformedCylinder& A, Charge charge, const MuOptions& opt) {
  const auto u = uniformize(A, opt.unif_modes);
  const CylinderGrid g(opt.n_theta, opt.n_x, 0.0, u.tau());
  const auto gmetric = make_admissible_factor(g, opt.eps, opt.rng);
  const double p = pairing(ConformalFactor::flat(g), gmetric);
  return DetVector(std::exp(-charge.c * p), gmetric, charge);
}

DetVector sew(const DetVector& a, const DetVector& b) {
  const auto& ga = a.factor().grid();
  const auto& gb = b.factor().grid();
  if (a.charge().c != b.charge().c)
    throw usage_error("sew requires equal central charges");
  if (ga.n_theta != gb.n_theta || ga.x_lo != 0.0 || gb.x_lo != 0.0 ||
      std::abs(ga.dx() - gb.dx()) > 1e-13)
    throw numeric_error("seam mismatch: incompatible straight-cylinder grids");
  if (!(a.factor().margin_hi() > 0.0) || !(b.factor().margin_lo() > 0.0))
    throw numeric_error("factors are not admissible at the seam");

  const int nx = ga.n_x + gb.n_x - 1;
  const CylinderGrid g(ga.n_theta, nx, 0.0, ga.x_hi + gb.x_hi);
  std::vector<double> f(g.size());
  for (int i = 0; i < g.n_theta; ++i) {
    for (int j = 0; j < ga.n_x; ++j)
      f[size_t(i) * nx + j] = a.factor().at(i, j);
    for (int j = 1; j < gb.n_x; ++j)
      f[size_t(i) * nx + (ga.n_x - 1 + j)] = b.factor().at(i, j);
  }
  return DetVector(a.lambda() * b.lambda(),
                   ConformalFactor(g, std::move(f), a.factor().margin_lo(),
                                   b.factor().margin_hi()),
                   a.charge());
}

namespace {

// Straight-seam sewing needs one uniform spacing across the union, so the
// moduli must sit on a common grid: dx0 = 1/(n_x - 1).
CylinderGrid commensurate_grid(double tau, const MuOptions& opt) {
  const double dx0 = 1.0 / double(opt.n_x - 1);
  int nx = 1 + int(std::lround(tau / dx0));
  if (nx % 2 == 0 || nx < 65 ||
      std::abs((nx - 1) * dx0 - tau) > 1e-9)
    throw numeric_error(
        "seam mismatch: modulus not commensurate with the base spacing");
  return CylinderGrid(opt.n_theta, nx, 0.0, (nx - 1) * dx0);
}

}  // namespace

double log_gamma_cyl(double tau_a, double tau_b, Charge charge,
                     const MuOptions& opt) {
  const CylinderGrid ga = commensurate_grid(tau_a, opt);
  const CylinderGrid gb = commensurate_grid(tau_b, opt);

  const auto fa = make_admissible_factor(ga, opt.eps, opt.rng);
  const auto fb = make_admissible_factor(gb, 0.8 * opt.eps, opt.rng);
  const DetVector va(1.0, fa, charge), vb(1.0, fb, charge);
  const auto vab = sew(va, vb);

  const double pa = pairing(ConformalFactor::flat(ga), fa);
  const double pb = pairing(ConformalFactor::flat(gb), fb);
  const double pab = pairing(ConformalFactor::flat(vab.factor().grid()), vab.factor());
  return charge.c * (pa + pb - pab);
}

}  // namespace virdet
