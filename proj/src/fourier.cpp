#include "virdet/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace virdet {

namespace {

constexpr double kZeroFloor = 1e-300;

// Direct DFT at odd size with precomputed twiddles; sizes here are small
// (typically 257) and odd, so no radix tricks apply.
std::vector<cplx> dft_forward_odd(std::span<const cplx> s) {
  const size_t M = s.size();
  std::vector<cplx> tw(M);
  for (size_t k = 0; k < M; ++k) {
    const double ang = -2.0 * pi * double(k) / double(M);
    tw[k] = cplx(std::cos(ang), std::sin(ang));
  }
  std::vector<cplx> c(M, cplx(0.0));
  for (size_t k = 0; k < M; ++k) {
    cplx acc(0.0);
    for (size_t j = 0; j < M; ++j) acc += s[j] * tw[(j * k) % M];
    c[k] = acc / double(M);
  }
  return c;
}

}  // namespace

AnalyticPeriodic::AnalyticPeriodic(std::vector<cplx> coeffs, bool inherited_flag)
    : coeffs_(std::move(coeffs)), under_resolved_(inherited_flag) {
  if (coeffs_.empty() || coeffs_.size() % 2 == 0)
    throw usage_error("coefficient array must have odd length 2N+1");
  order_ = int(coeffs_.size() / 2);
  finalize();
}

void AnalyticPeriodic::finalize() {
  // Chop rounding-level coefficients: complex evaluation multiplies c_n by
  // e^{|n Im z|}, so noise at large |n| must read as exact zero. All series
  // here represent O(1) angular data known to ~1e-14 absolute (grid fits,
  // Newton inverses, RK4 flows), hence the absolute part of the floor.
  {
    const double m0 = max_abs_coeff();
    const double floor = std::max(1e-14 * m0, 1e-13);
    for (auto& c : coeffs_)
      if (std::abs(c) < floor) c = cplx(0.0);
  }
  const double m = max_abs_coeff();
  if (m > 0.0 && order_ > 0) {
    const double tail =
        std::max(std::abs(coeffs_.front()), std::abs(coeffs_.back()));
    tail_ratio_ = tail / m;
    if (tail_ratio_ > kTailThreshold) under_resolved_ = true;
  }

  // Strip estimate from the outer-half decay of max(|c_n|, |c_-n|).
  if (m <= kZeroFloor || order_ == 0) {
    strip_radius_ = std::numeric_limits<double>::infinity();
    return;
  }
  std::vector<std::pair<int, double>> mag;
  for (int n = 1; n <= order_; ++n) {
    const double v = std::max(std::abs(coeff(n)), std::abs(coeff(-n)));
    if (v > 1e-13 * m) mag.emplace_back(n, v);
  }
  const int nmax = mag.empty() ? 0 : mag.back().first;
  if (mag.size() < 4 || nmax <= 8) {
    // Trigonometric polynomial (entire function).
    strip_radius_ = std::numeric_limits<double>::infinity();
    return;
  }
  // Least squares of log v against n over the largest-|n| half.
  const size_t lo = mag.size() / 2;
  double sn = 0, sl = 0, snn = 0, snl = 0;
  size_t cnt = 0;
  for (size_t i = lo; i < mag.size(); ++i) {
    const double n = double(mag[i].first), l = std::log(mag[i].second);
    sn += n;
    sl += l;
    snn += n * n;
    snl += n * l;
    ++cnt;
  }
  const double denom = double(cnt) * snn - sn * sn;
  if (denom <= 0.0) {
    strip_radius_ = std::numeric_limits<double>::infinity();
    return;
  }
  const double slope = (double(cnt) * snl - sn * sl) / denom;
  strip_radius_ = slope >= -1e-12 ? std::numeric_limits<double>::infinity()
                                  : 0.8 * (-slope);
}

AnalyticPeriodic AnalyticPeriodic::fit(std::span<const cplx> samples,
                                       double tail_threshold) {
  if (samples.size() < 3 || samples.size() % 2 == 0)
    throw usage_error("fit needs an odd sample count >= 3");
  const int N = int(samples.size() / 2);
  auto c = dft_forward_odd(samples);
  // DFT bin k corresponds to mode k for k <= N and k - (2N+1) for k > N.
  std::vector<cplx> coeffs(2 * size_t(N) + 1);
  for (int k = 0; k < int(c.size()); ++k) {
    const int n = k <= N ? k : k - int(c.size());
    coeffs[size_t(n + N)] = c[size_t(k)];
  }
  AnalyticPeriodic f(std::move(coeffs));
  if (f.tail_ratio_ > tail_threshold) f.under_resolved_ = true;
  return f;
}

std::vector<double> AnalyticPeriodic::grid_angles(int order) {
  const int M = 2 * order + 1;
  std::vector<double> th(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j) th[size_t(j)] = 2.0 * pi * double(j) / double(M);
  return th;
}

std::vector<cplx> AnalyticPeriodic::grid_values() const {
  const int M = 2 * order_ + 1;
  // Inverse of the fit: unscaled inverse DFT of the re-binned coefficients.
  std::vector<cplx> bins(size_t(M), cplx(0.0));
  for (int n = -order_; n <= order_; ++n) {
    const int k = n >= 0 ? n : n + M;
    bins[size_t(k)] = coeff(n);
  }
  std::vector<cplx> vals(size_t(M), cplx(0.0));
  for (int j = 0; j < M; ++j) {
    cplx acc(0.0);
    for (int k = 0; k < M; ++k) {
      const double ang = 2.0 * pi * double(j) * double(k) / double(M);
      acc += bins[size_t(k)] * cplx(std::cos(ang), std::sin(ang));
    }
    vals[size_t(j)] = acc;
  }
  return vals;
}

cplx AnalyticPeriodic::eval(cplx z) const {
  const double r = strip_radius_;
  if (!(std::abs(z.imag()) < r))
    throw numeric_error("strip exceeded: |Im z| = " + std::to_string(std::abs(z.imag())) +
                        " >= estimated radius " + std::to_string(r));
  return eval_unchecked(z);
}

cplx AnalyticPeriodic::eval_unchecked(cplx z) const {
  const cplx up = std::exp(cplx(0.0, 1.0) * z);    // e^{iz}
  const cplx dn = std::exp(cplx(0.0, -1.0) * z);   // e^{-iz}
  cplx acc = coeff(0);
  cplx pu(1.0), pd(1.0);
  for (int n = 1; n <= order_; ++n) {
    pu *= up;
    pd *= dn;
    acc += coeff(n) * pu + coeff(-n) * pd;
  }
  return acc;
}

AnalyticPeriodic AnalyticPeriodic::derivative(int order) const {
  if (order < 1 || order > 3) throw usage_error("derivative order must be 1..3");
  std::vector<cplx> c(coeffs_.size());
  for (int n = -order_; n <= order_; ++n) {
    cplx f = coeff(n);
    for (int k = 0; k < order; ++k) f *= cplx(0.0, double(n));
    c[size_t(n + order_)] = f;
  }
  return AnalyticPeriodic(std::move(c), under_resolved_);
}

AnalyticPeriodic AnalyticPeriodic::antiderivative() const {
  if (std::abs(coeff(0)) > 1e-10 * std::max(1.0, max_abs_coeff()))
    throw usage_error("antiderivative requires zero-mean input");
  std::vector<cplx> c(coeffs_.size(), cplx(0.0));
  for (int n = -order_; n <= order_; ++n)
    if (n != 0) c[size_t(n + order_)] = coeff(n) / cplx(0.0, double(n));
  return AnalyticPeriodic(std::move(c), under_resolved_);
}

AnalyticPeriodic AnalyticPeriodic::conj() const {
  std::vector<cplx> c(coeffs_.size());
  for (int n = -order_; n <= order_; ++n)
    c[size_t(n + order_)] = std::conj(coeff(-n));
  return AnalyticPeriodic(std::move(c), under_resolved_);
}

bool AnalyticPeriodic::is_real(double tol) const {
  const double m = std::max(1.0, max_abs_coeff());
  for (int n = 0; n <= order_; ++n)
    if (std::abs(coeff(-n) - std::conj(coeff(n))) > tol * m) return false;
  return true;
}

double AnalyticPeriodic::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

AnalyticPeriodic AnalyticPeriodic::operator+(const AnalyticPeriodic& o) const {
  const int N = std::max(order_, o.order_);
  std::vector<cplx> c(2 * size_t(N) + 1, cplx(0.0));
  for (int n = -N; n <= N; ++n) {
    cplx v(0.0);
    if (std::abs(n) <= order_) v += coeff(n);
    if (std::abs(n) <= o.order_) v += o.coeff(n);
    c[size_t(n + N)] = v;
  }
  return AnalyticPeriodic(std::move(c), under_resolved_ || o.under_resolved_);
}

AnalyticPeriodic AnalyticPeriodic::operator-(const AnalyticPeriodic& o) const {
  return *this + (o * cplx(-1.0));
}

AnalyticPeriodic AnalyticPeriodic::operator*(cplx s) const {
  std::vector<cplx> c(coeffs_);
  for (auto& v : c) v *= s;
  return AnalyticPeriodic(std::move(c), under_resolved_);
}

AnalyticPeriodic AnalyticPeriodic::compose_values(
    std::span<const cplx> inner_values) const {
  std::vector<cplx> vals(inner_values.size());
  for (size_t j = 0; j < inner_values.size(); ++j) vals[j] = eval(inner_values[j]);
  auto out = fit(vals);
  out.under_resolved_ = out.under_resolved_ || under_resolved_;
  return out;
}

std::string AnalyticPeriodic::to_json() const {
  nlohmann::json j;
  j["N"] = order_;
  std::vector<double> re, im;
  re.reserve(coeffs_.size());
  im.reserve(coeffs_.size());
  for (const auto& c : coeffs_) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  j["re"] = re;
  j["im"] = im;
  return j.dump();
}

AnalyticPeriodic AnalyticPeriodic::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const int N = j.at("N").get<int>();
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != 2 * size_t(N) + 1 || im.size() != re.size())
    throw usage_error("coefficient arrays must have length 2N+1");
  std::vector<cplx> c(re.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = cplx(re[i], im[i]);
  return AnalyticPeriodic(std::move(c));
}

}  // namespace virdet
