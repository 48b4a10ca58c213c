#include "ell2/ck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ell2/errors.hpp"

namespace ell2 {

double MajorantFrame::at(long i) const {
  if (i >= 1 && static_cast<std::size_t>(i) <= s.size()) return s[i - 1];
  return tail ? tail->term(i) : 0.0;
}

MajorantFrame majorant_frame(const TailedPoint& v, double p) {
  if (!(p > 0.0)) throw Error(ErrorKind::ConfigError, "frame exponent must be positive");
  double G = 0.0;
  try {
    G = near_infinity_gauge(v, p);
  } catch (const Error& e) {
    throw Error(ErrorKind::NotNearInfinity, e.what());
  }
  if (!std::isfinite(G) || G <= 0.0) throw Error(ErrorKind::NotNearInfinity, "gauge is not finite");

  MajorantFrame f;
  f.p = p;
  f.rho0 = std::pow(G, -1.0 / p);
  double sum = 0.0;
  for (double c : v.head) {
    double si = f.rho0 / std::abs(c);
    f.s.push_back(si);
    sum += std::pow(si, p);
  }
  f.tail = v.tail->pow(-1.0).scaled(f.rho0);
  sum += f.tail->pow(p).sum_from(static_cast<long>(v.head.size()) + 1);
  f.power_sum = sum;
  return f;
}

namespace {

bool coefficients_constant(const MonomialSeries<double>& a) {
  for (auto& [k, c] : a.terms())
    if (k.degree() > 0) return false;
  return true;
}

double frame_max(const MajorantFrame& f, int n) {
  double m = 0.0;
  for (int i = 1; i <= n; ++i) m = std::max(m, f.at(i));
  return m;
}

}  // namespace

Certificate convergence_certificate(const LinearCauchyProblem<double>& pb, const MajorantFrame& frame, int D, int n,
                                    int window) {
  Certificate cert;
  bool constant = coefficients_constant(pb.A0);
  for (auto& [i, a] : pb.A) constant = constant && coefficients_constant(a);
  // A Phi that reaches its own cap stands for a truncated series.
  bool phi_poly = pb.Phi.truncated_mass() == 0.0 && pb.Phi.degree() < pb.Phi.cap();
  if (constant && phi_poly) {
    cert.entire = true;
    cert.radius = std::numeric_limits<double>::infinity();
    return cert;
  }

  double smax = frame_max(frame, n);
  if (!(smax > 0.0)) throw Error(ErrorKind::NotNearInfinity, "frame vanishes on the active coordinates");
  std::vector<double> sig(n + 1, 0.0);
  for (int i = 1; i <= n; ++i) sig[i] = frame.at(i) / smax;

  MonomialSeries<double> u = ck_solve(majorant_problem(pb), D, n);
  std::vector<double> d(D + 1, 0.0);
  for (auto& [k, c] : u.terms()) {
    double v = std::abs(c);
    for (auto& [i, e] : k.x.entries()) v *= std::pow(sig[i], e);
    d[k.degree()] += v;
  }

  int lo = std::max(0, D - window);
  bool tail_zero = true;
  for (int k = lo; k <= D; ++k) tail_zero = tail_zero && d[k] == 0.0;
  if (tail_zero) {
    cert.entire = true;
    cert.radius = std::numeric_limits<double>::infinity();
    return cert;
  }

  for (int k = lo; k < D; ++k) {
    if (d[k] == 0.0 || d[k + 1] == 0.0)
      throw Error(ErrorKind::RatioTestInconclusive, "diagonal sums vanish intermittently");
    cert.ratios.push_back(d[k] / d[k + 1]);
  }
  double mn = *std::min_element(cert.ratios.begin(), cert.ratios.end());
  double mx = *std::max_element(cert.ratios.begin(), cert.ratios.end());
  bool stable = mx <= 1.25 * mn;
  bool nondecreasing = std::is_sorted(cert.ratios.begin(), cert.ratios.end());
  if (!stable && !nondecreasing) {
    std::ostringstream os;
    os << "diagonal ratios range over [" << mn << ", " << mx << "]";
    throw Error(ErrorKind::RatioTestInconclusive, os.str());
  }
  cert.radius = mn;
  return cert;
}

std::string to_string(const MonomialSeries<double>& s) {
  if (s.is_zero()) return "0";
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  for (auto& [k, c] : s.terms()) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    os << std::abs(c);
    if (k.t > 0) os << "*t^" << k.t;
    for (auto& [i, e] : k.x.entries()) os << "*x" << i << "^" << e;
  }
  return os.str();
}

}  // namespace ell2
