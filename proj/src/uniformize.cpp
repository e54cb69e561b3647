#include "virdet/uniformize.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "json.hpp"

namespace virdet {

DeformedCylinder::DeformedCylinder(CircleMap l, double h)
    : lower(std::move(l)), upper_height(h) {
  if (!(lower.strip_bound() < upper_height))
    throw numeric_error("deformed boundary overlaps the upper line");
}

namespace {

// Scaled basis values E+_n = e^{in(z - i lo)}, E-_n = e^{-in(z - i hi)} for
// n = 1..M, bounded by ~1 on the domain lo <= Im z <= hi.
void basis_powers(cplx z, double lo, double hi, int M, std::vector<cplx>& up,
                  std::vector<cplx>& dn) {
  up.resize(size_t(M));
  dn.resize(size_t(M));
  const cplx u = std::exp(cplx(0.0, 1.0) * (z - cplx(0.0, lo)));
  const cplx d = std::exp(cplx(0.0, -1.0) * (z - cplx(0.0, hi)));
  cplx pu = u, pd = d;
  for (int n = 0; n < M; ++n) {
    up[size_t(n)] = pu;
    dn[size_t(n)] = pd;
    pu *= u;
    pd *= d;
  }
}

}  // namespace

cplx UniformizationResult::map(cplx z) const {
  std::vector<cplx> up, dn;
  basis_powers(z, anchor_lo_, anchor_hi_, M_, up, dn);
  cplx acc = z + alpha_;
  for (int n = 0; n < M_; ++n)
    acc += a_scaled_[size_t(n)] * up[size_t(n)] + b_scaled_[size_t(n)] * dn[size_t(n)];
  return acc;
}

cplx UniformizationResult::map_deriv(cplx z) const {
  std::vector<cplx> up, dn;
  basis_powers(z, anchor_lo_, anchor_hi_, M_, up, dn);
  cplx acc(1.0);
  for (int n = 0; n < M_; ++n) {
    const cplx in(0.0, double(n + 1));
    acc += in * (a_scaled_[size_t(n)] * up[size_t(n)] -
                 b_scaled_[size_t(n)] * dn[size_t(n)]);
  }
  return acc;
}

cplx UniformizationResult::invert_map(cplx w) const {
  cplx z = w;
  for (int it = 0; it < 50; ++it) {
    const cplx f = map(z) - w;
    if (std::abs(f) < 1e-12) return z;
    const cplx d = map_deriv(z);
    if (std::abs(d) < 1e-10)
      throw numeric_error("vanishing Fhat' while inverting uniformizer");
    z -= f / d;
  }
  throw numeric_error("Newton failed to invert uniformizing map");
}

std::string UniformizationResult::to_json() const {
  nlohmann::json j;
  j["tau"] = tau_;
  j["alpha"] = {alpha_.real(), alpha_.imag()};
  std::vector<double> are, aim, bre, bim;
  for (int n = 0; n < M_; ++n) {
    are.push_back(a_[size_t(n)].real());
    aim.push_back(a_[size_t(n)].imag());
    bre.push_back(b_[size_t(n)].real());
    bim.push_back(b_[size_t(n)].imag());
  }
  j["a_re"] = are;
  j["a_im"] = aim;
  j["b_re"] = bre;
  j["b_im"] = bim;
  j["residual"] = residual_;
  return j.dump();
}

UniformizationResult uniformize(const DeformedCylinder& c, int M,
                                int n_theta_oversample) {
  if (M < 4) throw usage_error("uniformize needs M >= 4");
  if (c.lower.displacement().under_resolved())
    throw numeric_error("lower curve is under-resolved");

  const double h = c.upper_height;
  const int K = 4 * M * std::max(1, n_theta_oversample);

  // Lower collocation points phi(theta_j) and the scaling anchor.
  std::vector<cplx> zlo(static_cast<size_t>(K));
  double lo = 0.0;
  for (int j = 0; j < K; ++j) {
    const double th = 2.0 * pi * double(j) / double(K);
    zlo[size_t(j)] = cplx(th) + c.lower.displacement().eval(cplx(th));
    lo = std::min(lo, zlo[size_t(j)].imag());
  }

  const int ncols = 3 + 4 * M;  // Re alpha, Im alpha, a, b, tau
  const int nrows = 2 * K + 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nrows, ncols);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nrows);

  const int col_a0 = 2;           // a_n: Re at col_a0+2(n-1), Im next
  const int col_b0 = 2 + 2 * M;
  const int col_tau = 2 + 4 * M;

  std::vector<cplx> up, dn;
  auto fill_row = [&](int row, cplx z) {
    basis_powers(z, lo, h, M, up, dn);
    A(row, 1) = 1.0;  // Im alpha
    for (int n = 0; n < M; ++n) {
      A(row, col_a0 + 2 * n) = up[size_t(n)].imag();
      A(row, col_a0 + 2 * n + 1) = up[size_t(n)].real();
      A(row, col_b0 + 2 * n) = dn[size_t(n)].imag();
      A(row, col_b0 + 2 * n + 1) = dn[size_t(n)].real();
    }
    rhs(row) = -z.imag();
  };

  for (int j = 0; j < K; ++j) fill_row(j, zlo[size_t(j)]);
  for (int j = 0; j < K; ++j) {
    const double th = 2.0 * pi * (double(j) + 0.5) / double(K);
    const cplx z(th, h);
    fill_row(K + j, z);
    A(K + j, col_tau) = -1.0;
  }

  // Normalization Re Fhat(ih) = 0 as a heavily weighted row.
  {
    const double W = 1e6;
    const cplx z(0.0, h);
    basis_powers(z, lo, h, M, up, dn);
    A(2 * K, 0) = W;  // Re alpha
    for (int n = 0; n < M; ++n) {
      A(2 * K, col_a0 + 2 * n) = W * up[size_t(n)].real();
      A(2 * K, col_a0 + 2 * n + 1) = -W * up[size_t(n)].imag();
      A(2 * K, col_b0 + 2 * n) = W * dn[size_t(n)].real();
      A(2 * K, col_b0 + 2 * n + 1) = -W * dn[size_t(n)].imag();
    }
    rhs(2 * K) = -W * z.real();
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  const auto& R = qr.matrixR();
  double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ncols; ++i) {
    const double d = std::abs(R(i, i));
    rmax = std::max(rmax, d);
    rmin = std::min(rmin, d);
  }
  // The 1e6 normalization weight inflates the raw diagonal ratio; discount it.
  const double cond = (rmax / std::max(rmin, 1e-300)) / 1e6;
  if (cond > 1e12)
    throw numeric_error("uniformization system ill-conditioned (cond ~ " +
                        std::to_string(cond) + ")");
  const Eigen::VectorXd u = qr.solve(rhs);

  UniformizationResult res;
  res.M_ = M;
  res.anchor_lo_ = lo;
  res.anchor_hi_ = h;
  res.alpha_ = cplx(u(0), u(1));
  res.tau_ = u(col_tau);
  res.a_scaled_.resize(size_t(M));
  res.b_scaled_.resize(size_t(M));
  res.a_.resize(size_t(M));
  res.b_.resize(size_t(M));
  for (int n = 0; n < M; ++n) {
    res.a_scaled_[size_t(n)] = cplx(u(col_a0 + 2 * n), u(col_a0 + 2 * n + 1));
    res.b_scaled_[size_t(n)] = cplx(u(col_b0 + 2 * n), u(col_b0 + 2 * n + 1));
    // Raw coefficients a_n = a~_n e^{n lo}, b_n = b~_n e^{-n h}.
    res.a_[size_t(n)] = res.a_scaled_[size_t(n)] * std::exp(double(n + 1) * lo);
    res.b_[size_t(n)] = res.b_scaled_[size_t(n)] * std::exp(-double(n + 1) * h);
  }
  res.condition_ = cond;
  if (!(res.tau_ > 0.0))
    throw numeric_error("uniformization produced a non-positive modulus");

  // Boundary-condition defect on a finer sampling.
  double defect = std::abs(res.map(cplx(0.0, h)).real());
  const int Kf = 2 * K;
  double min_deriv = std::numeric_limits<double>::infinity();
  for (int j = 0; j < Kf; ++j) {
    const double th = 2.0 * pi * (double(j) + 0.25) / double(Kf);
    const cplx zl = cplx(th) + c.lower.displacement().eval(cplx(th));
    const cplx zu(th, h);
    defect = std::max(defect, std::abs(res.map(zl).imag()));
    defect = std::max(defect, std::abs(res.map(zu).imag() - res.tau_));
    min_deriv = std::min({min_deriv, std::abs(res.map_deriv(zl)),
                          std::abs(res.map_deriv(zu))});
  }
  // Interior conformality samples.
  for (int j = 0; j < 16; ++j)
    for (int l = 1; l < 8; ++l) {
      const cplx z(2.0 * pi * double(j) / 16.0, lo + (h - lo) * double(l) / 8.0);
      if (z.imag() > c.lower.strip_bound())
        min_deriv = std::min(min_deriv, std::abs(res.map_deriv(z)));
    }
  res.residual_ = defect;
  if (defect > 1e-6)
    throw numeric_error("uniformization residual too large: " +
                        std::to_string(defect));
  if (min_deriv < 1e-6)
    throw numeric_error("uniformizer fails conformality check (min |Fhat'| = " +
                        std::to_string(min_deriv) + ")");
  return res;
}

}  // namespace virdet
