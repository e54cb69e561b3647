#include "virdet/deformations.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "json.hpp"

namespace virdet {

VectorField::VectorField(AnalyticPeriodic s) : series(std::move(s)) {
  is_real = series.is_real();
}

namespace {

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

struct Term {
  bool imag = false;
  double coeff = 1.0;
  enum Kind { kConst, kCos, kSin } kind = kConst;
  int k = 0;
};

Term parse_term(std::string t) {
  Term out;
  if (t.rfind("i*", 0) == 0) {
    out.imag = true;
    t = t.substr(2);
  } else if (t == "i") {
    out.imag = true;
    t = "1";
  }
  auto parse_func = [&](const std::string& s) {
    const auto open = s.find('(');
    if (open == std::string::npos || s.back() != ')')
      throw usage_error("bad field term: " + s);
    const std::string name = s.substr(0, open);
    if (name == "cos")
      out.kind = Term::kCos;
    else if (name == "sin")
      out.kind = Term::kSin;
    else
      throw usage_error("unknown function in field term: " + name);
    const std::string arg = s.substr(open + 1, s.size() - open - 2);
    size_t pos = 0;
    try {
      out.k = std::stoi(arg, &pos);
    } catch (const std::exception&) {
      throw usage_error("bad harmonic in field term: " + arg);
    }
    if (pos != arg.size() || out.k < 0)
      throw usage_error("bad harmonic in field term: " + arg);
  };
  if (t.empty()) throw usage_error("empty field term");
  if (std::isdigit(static_cast<unsigned char>(t[0])) || t[0] == '.' ||
      t[0] == '-' || t[0] == '+') {
    size_t pos = 0;
    try {
      out.coeff = std::stod(t, &pos);
    } catch (const std::exception&) {
      throw usage_error("bad coefficient in field term: " + t);
    }
    if (pos == t.size()) {
      out.kind = Term::kConst;
      return out;
    }
    if (t[pos] != '*') throw usage_error("bad field term: " + t);
    parse_func(t.substr(pos + 1));
  } else {
    parse_func(t);
  }
  return out;
}

}  // namespace

VectorField VectorField::parse(const std::string& spec, int order) {
  const std::string s = strip_spaces(spec);
  if (s.empty()) throw usage_error("empty field spec");
  std::vector<cplx> c(2 * size_t(order) + 1, cplx(0.0));
  auto add = [&](int n, cplx v) {
    if (std::abs(n) > order) throw usage_error("harmonic exceeds series order");
    c[size_t(n + order)] += v;
  };
  size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const std::string piece =
        s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const Term t = parse_term(piece);
    const cplx unit = t.imag ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
    const cplx a = unit * t.coeff;
    switch (t.kind) {
      case Term::kConst:
        add(0, a);
        break;
      case Term::kCos:
        add(t.k, a * 0.5);
        add(-t.k, a * 0.5);
        break;
      case Term::kSin:
        add(t.k, a * cplx(0.0, -0.5));
        add(-t.k, a * cplx(0.0, 0.5));
        break;
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return VectorField(AnalyticPeriodic(std::move(c)));
}

CircleMap::CircleMap(AnalyticPeriodic displacement)
    : disp_(std::move(displacement)), dderiv_(disp_.derivative(1)) {
  const auto angles = AnalyticPeriodic::grid_angles(disp_.order());
  const auto pvals = disp_.grid_values();
  double bound = 0.0;
  bool real = disp_.is_real();
  double min_real_deriv = std::numeric_limits<double>::infinity();
  cplx prev_deriv(0.0);
  double winding = 0.0;
  for (size_t j = 0; j < angles.size(); ++j) {
    bound = std::max(bound, std::abs(pvals[j].imag()));
    const cplx d = cplx(1.0) + dderiv_.eval_unchecked(cplx(angles[j]));
    if (real) min_real_deriv = std::min(min_real_deriv, d.real());
    if (j > 0) winding += std::arg(d / prev_deriv);
    prev_deriv = d;
  }
  // Close the loop for the argument-principle winding of phi'.
  {
    const cplx d0 = cplx(1.0) + dderiv_.eval_unchecked(cplx(angles[0]));
    winding += std::arg(d0 / prev_deriv);
  }
  strip_bound_ = bound;
  if (!(strip_bound_ < 1.0))
    throw numeric_error("deformation leaves the strip |Im| < 1 (sup = " +
                        std::to_string(strip_bound_) + ")");
  if (real && !(min_real_deriv > 0.0))
    throw numeric_error("fold detected: phi' changes sign on the circle");
  if (!real && std::abs(winding) > 0.5)
    throw numeric_error("non-injective deformation: phi' winds around 0");
}

CircleMap CircleMap::identity(int order) {
  return CircleMap(AnalyticPeriodic::zero(order));
}

std::vector<cplx> CircleMap::boundary_values() const {
  const auto angles = AnalyticPeriodic::grid_angles(disp_.order());
  auto vals = disp_.grid_values();
  for (size_t j = 0; j < vals.size(); ++j) vals[j] += angles[j];
  return vals;
}

CircleMap CircleMap::inverse() const {
  const auto angles = AnalyticPeriodic::grid_angles(disp_.order());
  std::vector<cplx> q(angles.size());
  const double guard = std::min(1.0, disp_.strip_radius());
  for (size_t j = 0; j < angles.size(); ++j) {
    const cplx target(angles[j]);
    cplx x = target;
    bool done = false;
    for (int it = 0; it < 50; ++it) {
      if (!(std::abs(x.imag()) < guard))
        throw numeric_error("strip exceeded while inverting circle map");
      const cplx f = x + disp_.eval_unchecked(x) - target;
      if (std::abs(f) < 1e-14) {
        done = true;
        break;
      }
      const cplx d = cplx(1.0) + dderiv_.eval_unchecked(x);
      if (std::abs(d) < 1e-12)
        throw numeric_error("vanishing derivative while inverting circle map");
      x -= f / d;
    }
    if (!done) throw numeric_error("Newton failed to invert circle map");
    q[j] = x - target;
  }
  return CircleMap(AnalyticPeriodic::fit(q));
}

std::string CircleMap::to_json() const {
  nlohmann::json j;
  j["displacement"] = nlohmann::json::parse(disp_.to_json());
  j["strip_bound"] = strip_bound_;
  return j.dump();
}

CircleMap CircleMap::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  return CircleMap(AnalyticPeriodic::from_json(j.at("displacement").dump()));
}

CircleMap flow(const VectorField& v, double t, int steps) {
  if (steps <= 0) steps = std::max(64, int(std::ceil(std::abs(t) / 1e-3)));
  const int order = v.series.order();
  const auto angles = AnalyticPeriodic::grid_angles(order);
  std::vector<cplx> phi(angles.size());
  for (size_t j = 0; j < angles.size(); ++j) phi[j] = cplx(angles[j]);
  if (t != 0.0) {
    const double h = t / double(steps);
    const double guard = std::min(1.0, v.series.strip_radius());
    auto rhs = [&](cplx z) {
      if (!(std::abs(z.imag()) < guard))
        throw numeric_error("strip exceeded mid-integration of flow");
      return v.series.eval_unchecked(z);
    };
    for (int s = 0; s < steps; ++s) {
      for (auto& z : phi) {
        const cplx k1 = rhs(z);
        const cplx k2 = rhs(z + 0.5 * h * k1);
        const cplx k3 = rhs(z + 0.5 * h * k2);
        const cplx k4 = rhs(z + h * k3);
        z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
    }
  }
  std::vector<cplx> disp(phi.size());
  for (size_t j = 0; j < phi.size(); ++j) disp[j] = phi[j] - angles[j];
  // Real fields keep real trajectories; scrub rounding-level imaginary dust
  // so that is_real stays exact under the coefficient test.
  if (v.is_real)
    for (auto& d : disp) d = cplx(d.real(), 0.0);
  return CircleMap(AnalyticPeriodic::fit(disp));
}

CircleMap compose(const CircleMap& phi, const CircleMap& psi) {
  const auto angles = AnalyticPeriodic::grid_angles(
      std::max(phi.order(), psi.order()));
  const double reach = phi.displacement().strip_radius();
  std::vector<cplx> disp(angles.size());
  for (size_t j = 0; j < angles.size(); ++j) {
    const cplx w = cplx(angles[j]) + psi.displacement().eval(cplx(angles[j]));
    if (!(std::abs(w.imag()) < reach))
      throw numeric_error(
          "not composable: psi(S^1) leaves the analytic strip of phi");
    disp[j] = (w - angles[j]) + phi.displacement().eval_unchecked(w);
  }
  return CircleMap(AnalyticPeriodic::fit(disp));
}

double dersq(const CircleMap& phi, cplx z) {
  const DersqEvaluator f(phi);
  const double guard = f.inverse_map().displacement().strip_radius();
  if (!(std::abs(z.imag()) < guard))
    throw numeric_error("strip exceeded evaluating |(phi^{-1})'|^2");
  return f(z);
}

}  // namespace virdet
