#include "ell2/dbar.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/Dense>

namespace ell2 {

// ------------------------------------------------------------------ CMono

CMono::CMono(std::vector<std::array<int, 3>> e) {
  std::sort(e.begin(), e.end(), [](auto& a, auto& b) { return a[0] < b[0]; });
  for (auto& x : e) {
    if (x[1] < 0 || x[2] < 0 || x[0] < 1) throw Error(ErrorKind::ConfigError, "bad complex monomial entry");
    if (x[1] + x[2] == 0) continue;
    if (!e_.empty() && e_.back()[0] == x[0]) {
      e_.back()[1] += x[1];
      e_.back()[2] += x[2];
    } else {
      e_.push_back(x);
    }
  }
}

std::pair<int, int> CMono::exponents(int j) const {
  for (auto& x : e_)
    if (x[0] == j) return {x[1], x[2]};
  return {0, 0};
}

int CMono::degree() const {
  int d = 0;
  for (auto& x : e_) d += x[1] + x[2];
  return d;
}

CMono CMono::with(int j, int p, int q) const {
  std::vector<std::array<int, 3>> e;
  for (auto& x : e_)
    if (x[0] != j) e.push_back(x);
  if (p + q > 0) e.push_back({j, p, q});
  return CMono(std::move(e));
}

CMono CMono::operator*(const CMono& o) const {
  std::vector<std::array<int, 3>> e = e_;
  e.insert(e.end(), o.e_.begin(), o.e_.end());
  return CMono(std::move(e));
}

CMono CMono::conjugate() const {
  CMono r = *this;
  for (auto& x : r.e_) std::swap(x[1], x[2]);
  return r;
}

// ------------------------------------------------------------------ CPoly

void CPoly::add(const CMono& m, cplx c) {
  if (c == cplx(0.0)) return;
  auto it = t_.find(m);
  if (it == t_.end()) {
    t_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == cplx(0.0)) t_.erase(it);
  }
}

int CPoly::degree() const {
  int d = 0;
  for (auto& [m, c] : t_) d = std::max(d, m.degree());
  return d;
}

int CPoly::max_index() const {
  int d = 0;
  for (auto& [m, c] : t_) d = std::max(d, m.max_index());
  return d;
}

double CPoly::max_abs_coeff() const {
  double v = 0.0;
  for (auto& [m, c] : t_) v = std::max(v, std::abs(c));
  return v;
}

CPoly CPoly::operator+(const CPoly& o) const {
  CPoly r = *this;
  for (auto& [m, c] : o.t_) r.add(m, c);
  return r;
}

CPoly CPoly::operator-(const CPoly& o) const {
  CPoly r = *this;
  for (auto& [m, c] : o.t_) r.add(m, -c);
  return r;
}

CPoly CPoly::operator*(const CPoly& o) const {
  CPoly r;
  for (auto& [m1, c1] : t_)
    for (auto& [m2, c2] : o.t_) r.add(m1 * m2, c1 * c2);
  return r;
}

CPoly CPoly::scaled(cplx s) const {
  CPoly r;
  for (auto& [m, c] : t_) r.add(m, c * s);
  return r;
}

CPoly CPoly::d(int j) const {
  CPoly r;
  for (auto& [m, c] : t_) {
    auto [p, q] = m.exponents(j);
    if (p > 0) r.add(m.with(j, p - 1, q), c * double(p));
  }
  return r;
}

CPoly CPoly::dbar(int j) const {
  CPoly r;
  for (auto& [m, c] : t_) {
    auto [p, q] = m.exponents(j);
    if (q > 0) r.add(m.with(j, p, q - 1), c * double(q));
  }
  return r;
}

CPoly CPoly::times_z(int j) const {
  CPoly r;
  for (auto& [m, c] : t_) {
    auto [p, q] = m.exponents(j);
    r.add(m.with(j, p + 1, q), c);
  }
  return r;
}

CPoly CPoly::times_zbar(int j) const {
  CPoly r;
  for (auto& [m, c] : t_) {
    auto [p, q] = m.exponents(j);
    r.add(m.with(j, p, q + 1), c);
  }
  return r;
}

CPoly CPoly::conjugate() const {
  CPoly r;
  for (auto& [m, c] : t_) r.add(m.conjugate(), std::conj(c));
  return r;
}

CPoly CPoly::pruned(double tol) const {
  CPoly r;
  for (auto& [m, c] : t_)
    if (std::abs(c) > tol) r.t_.emplace(m, c);
  return r;
}

cplx CPoly::evaluate(const std::vector<cplx>& z) const {
  cplx s = 0.0;
  for (auto& [m, c] : t_) {
    cplx v = c;
    for (auto& x : m.entries()) {
      cplx zj = static_cast<std::size_t>(x[0]) <= z.size() ? z[x[0] - 1] : cplx(0.0);
      cplx zb = std::conj(zj);
      for (int k = 0; k < x[1]; ++k) v *= zj;
      for (int k = 0; k < x[2]; ++k) v *= zb;
    }
    s += v;
  }
  return s;
}

namespace {
double factorial(int m) {
  double f = 1.0;
  for (int k = 2; k <= m; ++k) f *= k;
  return f;
}

// E[z^p zbar^q] for one coordinate with E|z|^2 = v.
double cmoment(int p, int q, double v) { return p == q ? factorial(p) * std::pow(v, p) : 0.0; }
}  // namespace

cplx expectation(const CPoly& p, const WeightSequence& w, double r) {
  cplx s = 0.0;
  for (auto& [m, c] : p.terms()) {
    double v = 1.0;
    for (auto& x : m.entries()) {
      double a = w.a(x[0]);
      v *= cmoment(x[1], x[2], 2.0 * r * r * a * a);
      if (v == 0.0) break;
    }
    s += c * v;
  }
  return s;
}

cplx inner(const CPoly& f, const CPoly& g, const WeightSequence& w, double r) {
  cplx s = 0.0;
  for (auto& [mf, cf] : f.terms())
    for (auto& [mg, cg] : g.terms()) {
      CMono m = mf * mg.conjugate();
      double v = 1.0;
      for (auto& x : m.entries()) {
        double a = w.a(x[0]);
        v *= cmoment(x[1], x[2], 2.0 * r * r * a * a);
        if (v == 0.0) break;
      }
      s += cf * std::conj(cg) * v;
    }
  return s;
}

CPoly delta_j(const CPoly& p, int j, const WeightSequence& w, double r) {
  double a = w.a(j);
  return p.d(j) - p.times_zbar(j).scaled(1.0 / (2.0 * r * r * a * a));
}

CPoly delta_bar_j(const CPoly& p, int j, const WeightSequence& w, double r) {
  double a = w.a(j);
  return p.dbar(j) - p.times_z(j).scaled(1.0 / (2.0 * r * r * a * a));
}

// ------------------------------------------------------------------- Form

namespace {
bool strictly_increasing(const IndexList& v) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] < 1) return false;
    if (k > 0 && v[k] <= v[k - 1]) return false;
  }
  return true;
}
}  // namespace

void Form::add(const IndexList& I, const IndexList& J, const CPoly& p) {
  if (static_cast<int>(I.size()) != s || static_cast<int>(J.size()) != t || !strictly_increasing(I) ||
      !strictly_increasing(J))
    throw Error(ErrorKind::MalformedBlock, "form key does not match the bidegree or is not increasing");
  if (p.is_zero()) return;
  auto& slot = terms[{I, J}];
  slot += p;
  if (slot.is_zero()) terms.erase({I, J});
}

bool Form::is_zero() const {
  for (auto& [k, p] : terms)
    if (!p.is_zero()) return false;
  return true;
}

double Form::max_abs_coeff() const {
  double v = 0.0;
  for (auto& [k, p] : terms) v = std::max(v, p.max_abs_coeff());
  return v;
}

int Form::degree() const {
  int d = 0;
  for (auto& [k, p] : terms) d = std::max(d, p.degree());
  return d;
}

int Form::max_index() const {
  int d = 0;
  for (auto& [k, p] : terms) {
    d = std::max(d, p.max_index());
    for (int i : k.first) d = std::max(d, i);
    for (int i : k.second) d = std::max(d, i);
  }
  return d;
}

Form Form::operator-(const Form& o) const {
  Form r = *this;
  for (auto& [k, p] : o.terms) r.add(k.first, k.second, p.scaled(-1.0));
  return r;
}

Form Form::pruned(double tol) const {
  Form r(s, t);
  for (auto& [k, p] : terms) r.add(k.first, k.second, p.pruned(tol));
  return r;
}

int epsilon(const IndexList& K, int j, const IndexList& J) {
  if (K.size() != J.size() + 1) return 0;
  int below = 0;
  IndexList merged;
  merged.reserve(K.size());
  bool placed = false;
  for (int x : J) {
    if (x == j) return 0;
    if (!placed && x > j) {
      merged.push_back(j);
      placed = true;
    }
    if (x < j) ++below;
    merged.push_back(x);
  }
  if (!placed) merged.push_back(j);
  if (merged != K) return 0;
  return below % 2 ? -1 : 1;
}

double weight_IJ(const IndexList& I, const IndexList& J, const WeightSequence& w) {
  double v = 1.0;
  for (int i : I) v *= w.a(i) * w.a(i);
  for (int j : J) v *= w.a(j) * w.a(j);
  return v;
}

namespace {
IndexList inserted(const IndexList& J, int j) {
  IndexList K = J;
  K.insert(std::upper_bound(K.begin(), K.end(), j), j);
  return K;
}

std::vector<int> zbar_support(const CPoly& p) {
  std::vector<int> js;
  for (auto& [m, c] : p.terms())
    for (auto& x : m.entries())
      if (x[2] > 0) js.push_back(x[0]);
  std::sort(js.begin(), js.end());
  js.erase(std::unique(js.begin(), js.end()), js.end());
  return js;
}
}  // namespace

Form apply_S(const Form& f) {
  Form out(f.s, f.t + 1);
  double sign = f.s % 2 ? -1.0 : 1.0;
  for (auto& [key, p] : f.terms) {
    const IndexList& J = key.second;
    for (int j : zbar_support(p)) {
      if (std::binary_search(J.begin(), J.end(), j)) continue;
      IndexList K = inserted(J, j);
      out.add(key.first, K, p.dbar(j).scaled(sign * epsilon(K, j, J)));
    }
  }
  return out;
}

Form apply_Tstar(const Form& f, const WeightSequence& w, double r) {
  if (f.t < 1) throw Error(ErrorKind::ConfigError, "T* needs a form with at least one dzbar");
  Form out(f.s, f.t - 1);
  double sign = (f.s - 1) % 2 ? -1.0 : 1.0;
  for (auto& [key, p] : f.terms) {
    const IndexList& K = key.second;
    for (std::size_t q = 0; q < K.size(); ++q) {
      int j = K[q];
      IndexList J = K;
      J.erase(J.begin() + static_cast<long>(q));
      double a = w.a(j);
      out.add(key.first, J, delta_j(p, j, w, r).scaled(sign * a * a * epsilon(K, j, J)));
    }
  }
  return out;
}

cplx form_inner(const Form& f, const Form& g, const WeightSequence& w, double r) {
  cplx s = 0.0;
  for (auto& [key, p] : f.terms) {
    auto it = g.terms.find(key);
    if (it == g.terms.end()) continue;
    s += weight_IJ(key.first, key.second, w) * inner(p, it->second, w, r);
  }
  return s;
}

double form_norm2(const Form& f, const WeightSequence& w, double r) { return form_inner(f, f, w, r).real(); }

BasicEstimate basic_estimate_check(const Form& f, const WeightSequence& w, double r) {
  BasicEstimate b;
  if (f.t < 1) throw Error(ErrorKind::ConfigError, "basic estimate needs an (s, t+1)-form with t+1 >= 1");
  b.lhs = f.t / (2.0 * r * r) * form_norm2(f, w, r);
  b.rhs = form_norm2(apply_Tstar(f, w, r), w, r) + form_norm2(apply_S(f), w, r);
  return b;
}

// ------------------------------------------------------ reduce / mollify

CPoly reduce_dimension(const CPoly& p, int n, const WeightSequence& w, double r) {
  CPoly out;
  for (auto& [m, c] : p.terms()) {
    std::vector<std::array<int, 3>> keep;
    double v = 1.0;
    for (auto& x : m.entries()) {
      if (x[0] <= n) {
        keep.push_back(x);
      } else {
        double a = w.a(x[0]);
        v *= cmoment(x[1], x[2], 2.0 * r * r * a * a);
      }
    }
    if (v != 0.0) out.add(CMono(std::move(keep)), c * v);
  }
  return out;
}

RealPoly reduce_dimension(const RealPoly& p, int n, const WeightSequence& w, double r) {
  RealPoly out;
  for (auto& [m, c] : p.terms()) {
    std::vector<std::pair<int, int>> keep;
    double v = c;
    for (auto& [i, e] : m.entries()) {
      if (i <= n) {
        keep.emplace_back(i, e);
      } else {
        double sd = r * w.a(i);
        v *= RealPoly::moment_from_variance(e, sd * sd);
      }
    }
    out.add_term(MultiIndex(std::move(keep)), v);
  }
  return out;
}

Estimate mollify(const BlackBox& f, const std::vector<double>& x, int n, double delta, const SampleStream& stream,
                 long samples) {
  if (n < 1 || !(delta > 0.0)) throw Error(ErrorKind::ConfigError, "mollify needs n >= 1 and delta > 0");
  std::vector<double> base(n, 0.0);
  for (int i = 0; i < n && i < static_cast<int>(x.size()); ++i) base[i] = x[i];
  return mc_mean(stream, samples, [&](Rng& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    std::vector<double> y(n);
    // Uniform point in the delta-ball, accepted with probability psi / psi(0).
    while (true) {
      double norm = 0.0;
      for (int i = 0; i < n; ++i) {
        y[i] = nd(rng);
        norm += y[i] * y[i];
      }
      norm = std::sqrt(norm);
      double rho = std::pow(ud(rng), 1.0 / n);
      double accept = std::exp(1.0 - 1.0 / (1.0 - rho * rho));
      if (rho < 1.0 && ud(rng) < accept) {
        for (int i = 0; i < n; ++i) y[i] = base[i] - delta * rho * y[i] / norm;
        break;
      }
    }
    double v = f(y);
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteSample, "mollified function returned a non-finite value");
    return v;
  });
}

// ------------------------------------------------------------ solve_dbar

namespace {

void index_subsets(int n, int k, int start, IndexList& cur, std::vector<IndexList>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i <= n; ++i) {
    cur.push_back(i);
    index_subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

void monomials(int n, int cap, int j, std::vector<std::array<int, 3>>& cur, int used, std::vector<CMono>& out) {
  if (j > n) {
    out.emplace_back(cur);
    return;
  }
  for (int p = 0; p + used <= cap; ++p)
    for (int q = 0; p + q + used <= cap; ++q) {
      if (p + q > 0) cur.push_back({j, p, q});
      monomials(n, cap, j + 1, cur, used + p + q, out);
      if (p + q > 0) cur.pop_back();
    }
}

}  // namespace

DbarSolution solve_dbar(const Form& f, const WeightSequence& w, double r, int cap, int n) {
  if (f.t < 1) throw Error(ErrorKind::ConfigError, "solve_dbar needs an (s, t+1)-form with t+1 >= 1");
  DbarSolution sol;
  sol.bound = std::sqrt(2.0 * r * r / f.t);
  sol.u = Form(f.s, f.t - 1);
  double fn2 = form_norm2(f, w, r);
  double scale = std::max(1.0, f.max_abs_coeff());
  if (apply_S(f).pruned(1e-12 * scale).is_zero() == false) throw Error(ErrorKind::NotClosed, "S f is not zero");
  if (f.is_zero()) return sol;
  if (f.max_index() > n || f.degree() > cap - 1)
    throw Error(ErrorKind::ConditionViolated, "f must have degree <= cap - 1 and live in the first n coordinates");

  std::vector<IndexList> Is, Js;
  IndexList cur;
  index_subsets(n, f.s, 1, cur, Is);
  index_subsets(n, f.t - 1, 1, cur, Js);
  std::vector<CMono> monos;
  std::vector<std::array<int, 3>> mc;
  monomials(n, cap, 1, mc, 0, monos);

  struct Basis {
    IndexList I, J;
    CMono m;
  };
  std::vector<Basis> basis;
  for (auto& I : Is)
    for (auto& J : Js)
      for (auto& m : monos) basis.push_back({I, J, m});
  long B = static_cast<long>(basis.size());
  sol.basis_size = B;

  // Gram matrix under the weighted moment inner product. Distinct (I, J) are
  // orthogonal, so it is block diagonal.
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(B, B);
  for (long a = 0; a < B; ++a)
    for (long b = a; b < B; ++b) {
      if (basis[a].I != basis[b].I || basis[a].J != basis[b].J) continue;
      double v = weight_IJ(basis[a].I, basis[a].J, w) *
                 inner(CPoly::monomial(basis[a].m), CPoly::monomial(basis[b].m), w, r).real();
      G(a, b) = G(b, a) = v;
    }
  Eigen::VectorXd dsc = G.diagonal().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd Gs = dsc.asDiagonal() * G * dsc.asDiagonal();
  Eigen::LLT<Eigen::MatrixXd> llt(Gs);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::BasisTooSmall, "Gram matrix is not positive definite");
  Eigen::MatrixXd L = llt.matrixL();

  // Columns: coefficients of T(basis element); rows: (I, K, monomial) keys.
  std::map<std::tuple<IndexList, IndexList, CMono>, long> keys;
  auto key_of = [&](const IndexList& I, const IndexList& K, const CMono& m) {
    auto k = std::make_tuple(I, K, m);
    auto it = keys.find(k);
    if (it != keys.end()) return it->second;
    long id = static_cast<long>(keys.size());
    keys.emplace(k, id);
    return id;
  };
  std::vector<std::vector<std::pair<long, cplx>>> cols(B);
  for (long b = 0; b < B; ++b) {
    Form e(f.s, f.t - 1);
    e.add(basis[b].I, basis[b].J, CPoly::monomial(basis[b].m));
    Form te = apply_S(e);
    for (auto& [k, p] : te.terms)
      for (auto& [m, c] : p.terms()) cols[b].emplace_back(key_of(k.first, k.second, m), c * dsc(b));
  }
  std::vector<std::pair<long, cplx>> rhs;
  for (auto& [k, p] : f.terms)
    for (auto& [m, c] : p.terms()) rhs.emplace_back(key_of(k.first, k.second, m), c);
  long R = static_cast<long>(keys.size());
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(R, B);
  for (long b = 0; b < B; ++b)
    for (auto& [row, c] : cols[b]) A(row, b) += c;
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(R);
  for (auto& [row, c] : rhs) y(row) += c;

  // min ||L^T c|| subject to A c = y: with v = L^T c, the minimum-norm
  // solution of (A L^{-T}) v = y.
  Eigen::MatrixXcd Lc = L.cast<cplx>();
  Eigen::MatrixXcd M = Lc.transpose().triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(A);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(M);
  Eigen::VectorXcd v = cod.solve(y);
  Eigen::VectorXcd c = Lc.transpose().triangularView<Eigen::Upper>().solve(v);

  for (long b = 0; b < B; ++b) {
    cplx coef = c(b) * dsc(b);
    if (std::abs(coef) > 1e-14) sol.u.add(basis[b].I, basis[b].J, CPoly::monomial(basis[b].m, coef));
  }
  double un2 = form_norm2(sol.u, w, r);
  Form res = apply_S(sol.u) - f;
  sol.residual = std::sqrt(std::max(0.0, form_norm2(res, w, r)) / fn2);
  sol.norm_ratio = std::sqrt(un2 / fn2);
  if (sol.residual > 1e-8) {
    std::ostringstream os;
    os << "basis of degree " << cap << " in " << n << " coordinates leaves relative residual " << sol.residual;
    throw Error(ErrorKind::BasisTooSmall, os.str());
  }
  return sol;
}

// ------------------------------------------------------------- multiplier

MultiplierReport multiplier_identity_check(const Form& f, const std::vector<Form>& tests, const CutoffSystem& cut,
                                           int k, const WeightSequence& w, double r, int n,
                                           const SampleStream& stream, long samples) {
  if (cut.dims() != 2 * n) throw Error(ErrorKind::ConfigError, "cut-off must live on the 2n real coordinates");
  for (auto& g : tests)
    if (g.s != f.s || g.t != f.t + 1) throw Error(ErrorKind::ConfigError, "test forms must have bidegree (s, t+1)");
  Form Tf = apply_S(f);
  std::vector<Form> Tsg;
  for (auto& g : tests) Tsg.push_back(apply_Tstar(g, w, r));
  double sgn = f.s % 2 ? -1.0 : 1.0;
  std::size_t nt = tests.size();

  // Per test form: Re/Im of (lhs - rhs) and Re/Im of the TX ^ f pairing.
  auto est = mc_mean(stream, samples, static_cast<int>(4 * nt), [&](Rng& rng, double* out) {
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<double> xr(2 * n);
    std::vector<cplx> z(n);
    for (int j = 0; j < n; ++j) {
      double sd = r * w.a(j + 1);
      xr[2 * j] = sd * nd(rng);
      xr[2 * j + 1] = sd * nd(rng);
      z[j] = cplx(xr[2 * j], xr[2 * j + 1]);
    }
    double X = cut.X_lr(k, xr);
    auto gx = cut.grad_X_lr(k, xr);
    std::vector<cplx> dbX(n);
    for (int j = 0; j < n; ++j) dbX[j] = 0.5 * cplx(gx[2 * j], gx[2 * j + 1]);

    // f components and (TX ^ f) components at z.
    std::map<FormKey, cplx> fv, txf, tfv;
    for (auto& [key, p] : f.terms) fv[key] = p.evaluate(z);
    for (auto& [key, p] : Tf.terms) tfv[key] = p.evaluate(z);
    for (auto& [key, val] : fv) {
      const IndexList& J = key.second;
      for (int j = 1; j <= n; ++j) {
        if (std::binary_search(J.begin(), J.end(), j)) continue;
        IndexList K = inserted(J, j);
        txf[{key.first, K}] += sgn * double(epsilon(K, j, J)) * dbX[j - 1] * val;
      }
    }
    for (std::size_t q = 0; q < nt; ++q) {
      cplx lhs = 0.0, rhs = 0.0, tx = 0.0;
      for (auto& [key, p] : Tsg[q].terms) {
        auto it = fv.find(key);
        if (it == fv.end()) continue;
        lhs += weight_IJ(key.first, key.second, w) * X * it->second * std::conj(p.evaluate(z));
      }
      for (auto& [key, p] : tests[q].terms) {
        cplx gbar = std::conj(p.evaluate(z));
        double a = weight_IJ(key.first, key.second, w);
        auto it = tfv.find(key);
        if (it != tfv.end()) rhs += a * X * it->second * gbar;
        auto jt = txf.find(key);
        if (jt != txf.end()) {
          rhs += a * jt->second * gbar;
          tx += a * jt->second * gbar;
        }
      }
      cplx d = lhs - rhs;
      out[4 * q] = d.real();
      out[4 * q + 1] = d.imag();
      out[4 * q + 2] = tx.real();
      out[4 * q + 3] = tx.imag();
    }
  });
  MultiplierReport rep;
  for (std::size_t q = 0; q < nt; ++q) {
    cplx m(est[4 * q].mean, est[4 * q + 1].mean);
    double se = std::hypot(est[4 * q].std_error, est[4 * q + 1].std_error);
    rep.residual.push_back(std::abs(m));
    rep.std_error.push_back(se);
    double ratio = se > 0.0 ? std::abs(m) / se : (std::abs(m) == 0.0 ? 0.0 : INFINITY);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    rep.tx_term = std::max(rep.tx_term, std::abs(cplx(est[4 * q + 2].mean, est[4 * q + 3].mean)));
  }
  return rep;
}

// ---------------------------------------------------------------- printing

std::string to_string(const CPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  for (auto& [m, c] : p.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    for (auto& x : m.entries()) {
      if (x[1]) os << " z" << x[0] << (x[1] > 1 ? "^" + std::to_string(x[1]) : "");
      if (x[2]) os << " zb" << x[0] << (x[2] > 1 ? "^" + std::to_string(x[2]) : "");
    }
  }
  return os.str();
}

std::string to_string(const Form& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [key, p] : f.terms) {
    if (!first) os << " + ";
    first = false;
    os << "[" << to_string(p) << "]";
    for (int i : key.first) os << " dz" << i;
    for (int j : key.second) os << " dzb" << j;
  }
  return os.str();
}

}  // namespace ell2
