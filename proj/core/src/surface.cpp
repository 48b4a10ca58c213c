#include "ell2/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

namespace ell2 {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<long> sorted_unique(std::vector<long> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<long> merged(const std::vector<long>& a, const std::vector<long>& b) {
  std::vector<long> r = a;
  r.insert(r.end(), b.begin(), b.end());
  return sorted_unique(std::move(r));
}

long position(const std::vector<long>& v, long x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  return (it != v.end() && *it == x) ? static_cast<long>(it - v.begin()) : -1;
}

struct Node {
  double x;
  double w;
};

// Composite 32-point Gauss-Legendre nodes on [lo, hi].
std::vector<Node> gl_nodes(double lo, double hi, int panels) {
  using Rule = boost::math::quadrature::gauss<double, 32>;
  const auto& ab = Rule::abscissa();
  const auto& wt = Rule::weights();
  std::vector<Node> out;
  if (!(hi > lo)) return out;
  panels = std::max(1, panels);
  double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    double a = lo + p * h, m = a + 0.5 * h, r = 0.5 * h;
    for (std::size_t k = 0; k < ab.size(); ++k) {
      out.push_back({m - r * ab[k], r * wt[k]});
      out.push_back({m + r * ab[k], r * wt[k]});
    }
  }
  return out;
}

// Sum of f over the tensor grid of per-dimension node lists.
template <class F>
double tensor_sum(const std::vector<std::vector<Node>>& grid, F&& f) {
  std::size_t m = grid.size();
  for (auto& g : grid)
    if (g.empty()) return 0.0;
  std::vector<std::size_t> idx(m, 0);
  std::vector<double> x(m);
  std::vector<double> partial;
  partial.reserve(1 << 12);
  double total = 0.0;
  std::vector<double> chunk;
  while (true) {
    double w = 1.0;
    for (std::size_t d = 0; d < m; ++d) {
      x[d] = grid[d][idx[d]].x;
      w *= grid[d][idx[d]].w;
    }
    chunk.push_back(w * f(x));
    if (chunk.size() == 4096) {
      partial.push_back(pairwise_sum(chunk.data(), chunk.size()));
      chunk.clear();
    }
    std::size_t d = 0;
    while (d < m && ++idx[d] == grid[d].size()) idx[d++] = 0;
    if (d == m) break;
  }
  if (!chunk.empty()) partial.push_back(pairwise_sum(chunk.data(), chunk.size()));
  total = pairwise_sum(partial.data(), partial.size());
  return total;
}

double log_density(double x, double a) { return -0.5 * x * x / (a * a) - std::log(std::sqrt(2.0 * kPi) * a); }

bool same_set(const IndexSet& a, const IndexSet& b) {
  return a.difference_size(b) == std::optional<long>(0) && b.difference_size(a) == std::optional<long>(0);
}

}  // namespace

// ---------------------------------------------------------------- IndexSet

IndexSet IndexSet::finite(std::vector<long> members) { return periodic({false}, std::move(members)); }

IndexSet IndexSet::cofinite(std::vector<long> excluded) { return periodic({true}, std::move(excluded)); }

IndexSet IndexSet::periodic(std::vector<bool> mask, std::vector<long> toggled) {
  if (mask.empty()) throw Error(ErrorKind::ConfigError, "index set mask must be non-empty");
  for (long i : toggled)
    if (i < 1) throw Error(ErrorKind::ConfigError, "index sets hold positive integers");
  IndexSet s;
  s.mask_ = std::move(mask);
  s.toggled_ = sorted_unique(std::move(toggled));
  return s;
}

bool IndexSet::contains(long i) const {
  if (i < 1) return false;
  bool m = mask_[static_cast<std::size_t>((i - 1) % period())];
  return m != std::binary_search(toggled_.begin(), toggled_.end(), i);
}

bool IndexSet::is_finite() const { return std::none_of(mask_.begin(), mask_.end(), [](bool b) { return b; }); }

std::vector<long> IndexSet::elements_upto(long n) const {
  std::vector<long> r;
  for (long i = 1; i <= n; ++i)
    if (contains(i)) r.push_back(i);
  return r;
}

std::optional<long> IndexSet::difference_size(const IndexSet& o) const {
  long L = std::lcm(period(), o.period());
  long H = std::max(horizon(), o.horizon());
  for (long i = H + 1; i <= H + L; ++i)
    if (contains(i) && !o.contains(i)) return std::nullopt;
  long n = 0;
  for (long i = 1; i <= H; ++i)
    if (contains(i) && !o.contains(i)) ++n;
  return n;
}

std::vector<long> IndexSet::difference(const IndexSet& o) const {
  if (!difference_size(o)) throw Error(ErrorKind::ConditionViolated, "set difference is infinite");
  std::vector<long> r;
  long H = std::max(horizon(), o.horizon());
  for (long i = 1; i <= H; ++i)
    if (contains(i) && !o.contains(i)) r.push_back(i);
  return r;
}

IndexSet IndexSet::with_toggled(long i) const {
  IndexSet s = *this;
  auto it = std::lower_bound(s.toggled_.begin(), s.toggled_.end(), i);
  if (it != s.toggled_.end() && *it == i)
    s.toggled_.erase(it);
  else
    s.toggled_.insert(it, i);
  return s;
}

bool index_equivalent(const IndexSet& a, const IndexSet& b) {
  auto ab = a.difference_size(b);
  auto ba = b.difference_size(a);
  return ab && ba && *ab == *ba;
}

// ---------------------------------------------------- FinitePerturbationMap

FinitePerturbationMap::FinitePerturbationMap(IndexSet domain, IndexSet codomain, std::vector<long> exceptional,
                                             std::vector<double> block)
    : dom_(std::move(domain)), cod_(std::move(codomain)), i0_(sorted_unique(std::move(exceptional))),
      block_(std::move(block)) {
  auto s12 = dom_.difference_size(cod_);
  auto s21 = cod_.difference_size(dom_);
  if (!s12 || !s21 || *s12 != *s21)
    throw Error(ErrorKind::MalformedBlock, "domain and codomain differ by unequal or infinite sets");
  for (long i : i0_)
    if (!dom_.contains(i) || !cod_.contains(i))
      throw Error(ErrorKind::MalformedBlock, "exceptional index outside the common part");
  cols_ = merged(i0_, dom_.difference(cod_));
  rows_ = merged(i0_, cod_.difference(dom_));
  if (block_.size() != rows_.size() * cols_.size())
    throw Error(ErrorKind::MalformedBlock, "block shape does not match the index data");
  for (double v : block_)
    if (!std::isfinite(v)) throw Error(ErrorKind::MalformedBlock, "non-finite block entry");
}

double FinitePerturbationMap::entry(long row, long col) const {
  long c = position(cols_, col);
  if (c < 0) {
    if (!dom_.contains(col)) throw Error(ErrorKind::MalformedBlock, "column outside the domain");
    return row == col ? 1.0 : 0.0;
  }
  long r = position(rows_, row);
  return r < 0 ? 0.0 : block_[r * cols_.size() + c];
}

std::map<long, double> FinitePerturbationMap::apply(const std::map<long, double>& x) const {
  std::map<long, double> out;
  for (auto& [i, v] : x) {
    long c = position(cols_, i);
    if (c < 0) {
      if (!dom_.contains(i)) throw Error(ErrorKind::MalformedBlock, "vector has a component outside the domain");
      out[i] += v;
      continue;
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      double b = block_[r * cols_.size() + c];
      if (b != 0.0) out[rows_[r]] += b * v;
    }
  }
  return out;
}

namespace {
double block_det(const FinitePerturbationMap& t, const std::vector<long>& rows, const std::vector<long>& cols) {
  if (cols.empty()) return 1.0;
  Eigen::MatrixXd m(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) m(r, c) = t.entry(rows[r], cols[c]);
  return m.fullPivLu().determinant();
}
}  // namespace

double det_F_declared(const FinitePerturbationMap& t) { return block_det(t, t.rows(), t.cols()); }

double det_F(const FinitePerturbationMap& t) {
  long top = 0;
  for (long i : t.rows()) top = std::max(top, i);
  for (long i : t.cols()) top = std::max(top, i);
  if (top == 0) return 1.0;
  std::vector<long> i0 = t.exceptional();
  for (long i = 1; i <= top; ++i)
    if (t.domain().contains(i) && t.codomain().contains(i)) i0.push_back(i);
  i0 = sorted_unique(std::move(i0));
  std::vector<long> cols = merged(i0, t.domain().difference(t.codomain()));
  std::vector<long> rows = merged(i0, t.codomain().difference(t.domain()));
  return block_det(t, rows, cols);
}

FinitePerturbationMap inverse(const FinitePerturbationMap& t) {
  const auto& rows = t.rows();
  const auto& cols = t.cols();
  if (rows.size() != cols.size()) throw Error(ErrorKind::MalformedBlock, "block is not square");
  const std::size_t n = rows.size();
  Eigen::MatrixXd m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = t.block()[r * n + c];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (n > 0 && !lu.isInvertible()) throw Error(ErrorKind::MalformedBlock, "block is singular");
  Eigen::MatrixXd inv = n > 0 ? Eigen::MatrixXd(lu.inverse()) : Eigen::MatrixXd();
  // Rows of the inverse are the old columns and vice versa; I0 is shared.
  std::vector<double> block(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) block[r * n + c] = inv(r, c);
  return {t.codomain(), t.domain(), t.exceptional(), std::move(block)};
}

FinitePerturbationMap compose(const FinitePerturbationMap& t2, const FinitePerturbationMap& t1) {
  if (!same_set(t1.codomain(), t2.domain()))
    throw Error(ErrorKind::MalformedBlock, "maps are not composable");
  const IndexSet& I1 = t1.domain();
  const IndexSet& I3 = t2.codomain();
  std::vector<long> cand = t1.cols();
  for (long c : t2.cols())
    if (I1.contains(c)) cand.push_back(c);
  std::vector<long> d13 = I1.difference(I3);
  cand = merged(cand, d13);
  std::vector<long> i0;
  for (long c : cand)
    if (I3.contains(c)) i0.push_back(c);
  std::vector<long> cols = merged(i0, d13);
  std::vector<long> rows = merged(i0, I3.difference(I1));
  std::vector<double> block(rows.size() * cols.size(), 0.0);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    auto v = t2.apply(t1.apply({{cols[c], 1.0}}));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      auto it = v.find(rows[r]);
      if (it != v.end()) block[r * cols.size() + c] = it->second;
    }
  }
  return FinitePerturbationMap(I1, I3, i0, std::move(block));
}

// ------------------------------------------------------------ GraphSurface

std::vector<double> GraphSurface::graph(const std::vector<double>& xI) const {
  std::vector<double> y = offset;
  for (std::size_t j = 0; j < comp.size(); ++j)
    for (std::size_t i = 0; i < base.size(); ++i) y[j] += slope[j * base.size() + i] * xI[i];
  return y;
}

std::vector<double> GraphSurface::embed(const std::vector<double>& xI) const {
  long top = 0;
  for (long i : base) top = std::max(top, i);
  for (long j : comp) top = std::max(top, j);
  std::vector<double> x(top, 0.0);
  for (std::size_t i = 0; i < base.size(); ++i) x[base[i] - 1] = xI[i];
  auto y = graph(xI);
  for (std::size_t j = 0; j < comp.size(); ++j) x[comp[j] - 1] = y[j];
  return x;
}

double n_I(const GraphSurface& s) {
  std::size_t m = s.comp.size(), k = s.base.size();
  if (m == 0 || k == 0) return 1.0;
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(s.slope.data(), m, k);
  Eigen::MatrixXd G = Eigen::MatrixXd::Identity(k, k) + A.transpose() * A;
  return std::sqrt(G.determinant());
}

namespace {
void subsets(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}
}  // namespace

double n_I_minors(const GraphSurface& s) {
  int m = static_cast<int>(s.comp.size()), k = static_cast<int>(s.base.size());
  double acc = 1.0;
  for (int q = 1; q <= std::min(m, k); ++q) {
    std::vector<std::vector<int>> rs, cs;
    std::vector<int> cur;
    subsets(m, q, 0, cur, rs);
    subsets(k, q, 0, cur, cs);
    for (auto& r : rs)
      for (auto& c : cs) {
        Eigen::MatrixXd M(q, q);
        for (int a = 0; a < q; ++a)
          for (int b = 0; b < q; ++b) M(a, b) = s.slope[r[a] * k + c[b]];
        double d = M.determinant();
        acc += d * d;
      }
  }
  return std::sqrt(acc);
}

double F_weight(const WeightSequence& w, const IndexSet& I, const TruncatedPoint& x, long truncation) {
  if (!I.is_finite()) {
    // Infinitely many members past the truncation contribute
    // ln(1/(sqrt(2 pi) a_i)) each, and a_i -> 0 for any summable weights.
    throw Error(ErrorKind::TailDivergent, "log-tail of F diverges for an infinite index set at the zero point");
  }
  long top = std::max(truncation, I.horizon());
  double l = 0.0;
  for (long i : I.elements_upto(top)) l += log_density(x.at(i), w.a(i));
  return std::exp(l);
}

double surface_measure(const GraphSurface& s, const WeightSequence& w, const ChartRegion& region,
                       const SampleStream& stream, long mc_samples) {
  std::size_t k = s.base.size(), m = s.comp.size();
  std::vector<double> lo(k, -INFINITY), hi(k, INFINITY);
  for (auto& iv : region) {
    auto it = std::find(s.base.begin(), s.base.end(), static_cast<long>(iv.index));
    if (it == s.base.end()) throw Error(ErrorKind::ChartMismatch, "region constrains a non-chart coordinate");
    long p = it - s.base.begin();
    lo[p] = std::max(lo[p], iv.lo);
    hi[p] = std::min(hi[p], iv.hi);
    if (!(hi[p] > lo[p])) return 0.0;
  }
  std::vector<int> active;
  for (std::size_t i = 0; i < k; ++i) {
    bool used = std::isfinite(lo[i]) || std::isfinite(hi[i]);
    for (std::size_t j = 0; j < m && !used; ++j) used = s.slope[j * k + i] != 0.0;
    if (used) active.push_back(static_cast<int>(i));
  }
  double nI = n_I(s);
  std::vector<double> ab(k), aj(m);
  for (std::size_t i = 0; i < k; ++i) ab[i] = w.a(s.base[i]);
  for (std::size_t j = 0; j < m; ++j) aj[j] = w.a(s.comp[j]);

  // log of F_J(b + A x) prod phi(x_i) over the active coordinates.
  auto log_integrand = [&](const std::vector<double>& xa) {
    double l = 0.0;
    for (std::size_t q = 0; q < active.size(); ++q) l += log_density(xa[q], ab[active[q]]);
    for (std::size_t j = 0; j < m; ++j) {
      double y = s.offset[j];
      for (std::size_t q = 0; q < active.size(); ++q) y += s.slope[j * k + active[q]] * xa[q];
      l += log_density(y, aj[j]);
    }
    return l;
  };

  if (active.empty()) {
    double v = nI * std::exp(log_integrand({}));
    if (!std::isfinite(v)) throw Error(ErrorKind::LocalFinitenessViolated, "surface density is not finite");
    return v;
  }

  std::size_t na = active.size();
  if (na <= 3) {
    // The integrand is Gaussian in the active coordinates; centre each
    // quadrature box on its mean with +-12 marginal std devs.
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(na, na);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(na);
    for (std::size_t q = 0; q < na; ++q) Q(q, q) = 1.0 / (ab[active[q]] * ab[active[q]]);
    for (std::size_t j = 0; j < m; ++j) {
      double inv = 1.0 / (aj[j] * aj[j]);
      for (std::size_t p = 0; p < na; ++p) {
        double sp = s.slope[j * k + active[p]];
        h(p) += sp * s.offset[j] * inv;
        for (std::size_t q = 0; q < na; ++q) Q(p, q) += sp * s.slope[j * k + active[q]] * inv;
      }
    }
    Eigen::MatrixXd C = Q.inverse();
    Eigen::VectorXd mu = -C * h;
    int panels = na == 1 ? 8 : na == 2 ? 4 : 2;
    std::vector<std::vector<Node>> grid(na);
    for (std::size_t q = 0; q < na; ++q) {
      double sd = std::sqrt(C(q, q));
      double a = std::max(lo[active[q]], mu(q) - 12.0 * sd);
      double b = std::min(hi[active[q]], mu(q) + 12.0 * sd);
      grid[q] = gl_nodes(a, b, panels);
    }
    double v = nI * tensor_sum(grid, [&](const std::vector<double>& xa) { return std::exp(log_integrand(xa)); });
    if (!std::isfinite(v)) throw Error(ErrorKind::LocalFinitenessViolated, "surface density is not finite");
    return v;
  }

  // Monte Carlo over mu_I on the active coordinates.
  Estimate e = mc_mean(stream, mc_samples, [&](Rng& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<double> xa(na);
    bool in = true;
    for (std::size_t q = 0; q < na; ++q) {
      xa[q] = ab[active[q]] * nd(rng);
      in = in && xa[q] > lo[active[q]] && xa[q] < hi[active[q]];
    }
    if (!in) return 0.0;
    double l = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double y = s.offset[j];
      for (std::size_t q = 0; q < na; ++q) y += s.slope[j * k + active[q]] * xa[q];
      l += log_density(y, aj[j]);
    }
    return std::exp(l);
  });
  double v = nI * e.mean;
  if (!std::isfinite(v)) throw Error(ErrorKind::LocalFinitenessViolated, "surface density is not finite");
  return v;
}

// -------------------------------------------------------------- LineBundle

std::vector<long> LineBundle::evens() const {
  std::vector<long> r;
  for (long j = 2; j <= dims; j += 2) r.push_back(j);
  return r;
}

GraphSurface LineBundle::chart_I() const {
  GraphSurface s;
  for (long i = 1; i <= dims; i += 2) s.base.push_back(i);
  s.comp = evens();
  s.offset = x0;
  s.slope.assign(s.comp.size() * s.base.size(), 0.0);
  for (std::size_t j = 0; j < s.comp.size(); ++j) s.slope[j * s.base.size()] = dx[j];
  return s;
}

GraphSurface LineBundle::chart_j(long j) const {
  auto J = evens();
  long pj = position(J, j);
  if (pj < 0) throw Error(ErrorKind::ChartMismatch, "chart index must be an even coordinate");
  double d = dx[pj];
  if (d == 0.0) throw Error(ErrorKind::ChartMismatch, "dx_j = 0 gives no chart");
  GraphSurface s;
  for (long i = 3; i <= dims; i += 2) s.base.push_back(i);
  s.base.push_back(j);
  std::sort(s.base.begin(), s.base.end());
  s.comp.push_back(1);
  for (long q : J)
    if (q != j) s.comp.push_back(q);
  std::size_t k = s.base.size();
  long cj = position(s.base, j);
  s.slope.assign(s.comp.size() * k, 0.0);
  // x_1 = (x_j - x0_j) / dx_j ; x_q = x0_q + dx_q x_1
  s.offset.push_back(-x0[pj] / d);
  s.slope[cj] = 1.0 / d;
  for (std::size_t r = 1; r < s.comp.size(); ++r) {
    long pq = position(J, s.comp[r]);
    s.offset.push_back(x0[pq] - dx[pq] * x0[pj] / d);
    s.slope[r * k + cj] = dx[pq] / d;
  }
  return s;
}

FinitePerturbationMap LineBundle::chart_change(long j) const {
  auto J = evens();
  long pj = position(J, j);
  if (pj < 0) throw Error(ErrorKind::ChartMismatch, "chart index must be an even coordinate");
  IndexSet I = IndexSet::odds();
  return FinitePerturbationMap(I, I.with_toggled(1).with_toggled(j), {}, {dx[pj]});
}

FinitePerturbationMap LineBundle::chart_change_inverse(long j) const {
  auto J = evens();
  long pj = position(J, j);
  if (pj < 0) throw Error(ErrorKind::ChartMismatch, "chart index must be an even coordinate");
  IndexSet I = IndexSet::odds();
  return FinitePerturbationMap(I.with_toggled(1).with_toggled(j), I, {}, {1.0 / dx[pj]});
}

double LineBundle::n_closed() const {
  double s = 1.0;
  for (double d : dx) s += d * d;
  return std::sqrt(s);
}

std::pair<double, double> chart_consistency(const LineBundle& b, const WeightSequence& w, long j, double lo,
                                            double hi) {
  if (!(hi > lo)) return {0.0, 0.0};
  SampleStream unused;
  double mA = surface_measure(b.chart_I(), w, {{1, lo, hi}}, unused);
  auto J = b.evens();
  long pj = position(J, j);
  if (pj < 0) throw Error(ErrorKind::ChartMismatch, "chart index must be an even coordinate");
  double y1 = b.x0[pj] + lo * b.dx[pj], y2 = b.x0[pj] + hi * b.dx[pj];
  double mB = surface_measure(b.chart_j(j), w, {{static_cast<int>(j), std::min(y1, y2), std::max(y1, y2)}}, unused);
  return {mA, mB};
}

// ------------------------------------------------------------ Gauss-Green

namespace {

// E[X^m ; X > 0] for X ~ N(0, s^2).
double half_moment(int m, double s) {
  return std::pow(s, m) * std::pow(2.0, 0.5 * m - 1.0) * std::tgamma(0.5 * (m + 1)) / std::sqrt(kPi);
}

// E[p ; x_k > 0] under independent N(0, a_i^2).
double halfspace_expect(const RealPoly& p, const WeightSequence& w, int k) {
  double s = 0.0;
  for (auto& [mi, c] : p.terms()) {
    double v = c;
    int ek = mi.exponent(k);
    for (auto& [i, e] : mi.entries()) {
      if (i == k) continue;
      v *= RealPoly::moment_from_variance(e, w.a(i) * w.a(i));
      if (v == 0.0) break;
    }
    if (v != 0.0) v *= half_moment(ek, w.a(k));
    s += v;
  }
  return s;
}

// E[p(x) with x_k = 0] under independent N(0, a_i^2).
double restricted_expect(const RealPoly& p, const WeightSequence& w, int k) {
  double s = 0.0;
  for (auto& [mi, c] : p.terms()) {
    if (mi.exponent(k) > 0) continue;
    double v = c;
    for (auto& [i, e] : mi.entries()) v *= RealPoly::moment_from_variance(e, w.a(i) * w.a(i));
    s += v;
  }
  return s;
}

// log int_0^inf t^m exp(-(alpha t^2 + 2 beta t)/2) dt by quadrature around the mode.
double log_ray_integral(int m, double alpha, double beta) {
  double tstar = m > 0 ? (-beta + std::sqrt(beta * beta + 4.0 * alpha * m)) / (2.0 * alpha)
                       : std::max(0.0, -beta / alpha);
  double width = tstar > 0.0 ? 1.0 / std::sqrt(alpha + m / (tstar * tstar)) : 1.0 / (std::sqrt(alpha) + std::abs(beta));
  auto g = [&](double t) { return (m > 0 ? m * std::log(t) : 0.0) - 0.5 * (alpha * t * t + 2.0 * beta * t); };
  double g0 = tstar > 0.0 ? g(tstar) : 0.0;
  double lo = std::max(0.0, tstar - 20.0 * width), hi = tstar + 30.0 * width;
  double v = gauss_legendre_composite([&](double t) { return t > 0.0 || m == 0 ? std::exp(g(t) - g0) : 0.0; }, lo,
                                      hi, 6);
  return g0 + std::log(v);
}

}  // namespace

GaussGreenResult gauss_green_exact(const WeightSequence& w, const GaussGreenDomain& v, const RealPoly& f, int i) {
  if (v.kind != DomainKind::HalfSpace)
    throw Error(ErrorKind::ConfigError, "exact Gauss-Green is available for half-spaces only");
  GaussGreenResult r;
  double ai2 = w.a(i) * w.a(i);
  r.lhs = halfspace_expect(f.derivative(i), w, v.k);
  r.volume = halfspace_expect(f.times_var(i), w, v.k) / ai2;
  if (i == v.k) r.boundary = -std::exp(log_density(0.0, w.a(v.k))) * restricted_expect(f, w, v.k);
  r.residual = r.lhs - r.volume - r.boundary;
  return r;
}

namespace {

GaussGreenResult gg_mc(const WeightSequence& w, const GaussGreenDomain& v, const BlackBox& f, const BlackBox& dif,
                       int i, const SampleStream& stream, long n, const double* exact_boundary) {
  int d = v.dims;
  if (i < 1 || i > d || d < 1) throw Error(ErrorKind::ConfigError, "Gauss-Green index outside the truncation");
  std::vector<double> a(d);
  for (int q = 0; q < d; ++q) a[q] = w.a(q + 1);
  std::vector<double> c(d, 0.0);
  for (int q = 0; q < d && q < static_cast<int>(v.center.size()); ++q) c[q] = v.center[q];
  double ai2 = a[i - 1] * a[i - 1];
  double R = v.radius;
  double phik = v.kind == DomainKind::HalfSpace ? std::exp(log_density(0.0, a[v.k - 1])) : 0.0;

  auto est = mc_mean(stream, n, 4, [&](Rng& rng, double* out) {
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<double> x(d);
    for (int q = 0; q < d; ++q) x[q] = a[q] * nd(rng);
    bool in;
    double bnd = 0.0;
    if (v.kind == DomainKind::HalfSpace) {
      in = x[v.k - 1] > 0.0;
      if (!exact_boundary && i == v.k) {
        std::vector<double> y = x;
        y[v.k - 1] = 0.0;
        bnd = -phik * f(y);
      }
    } else {
      double r2 = 0.0;
      for (int q = 0; q < d; ++q) r2 += (x[q] - c[q]) * (x[q] - c[q]);
      double rr = std::sqrt(r2);
      in = rr < R;
      // Direction of x - c has density p(u) = int_0^inf rho(c + t u) t^{d-1} dt
      // on the unit sphere; reweight to rho(c + R u) R^{d-1}.
      std::vector<double> u(d), y(d);
      double alpha = 0.0, beta = 0.0;
      for (int q = 0; q < d; ++q) {
        u[q] = (x[q] - c[q]) / rr;
        alpha += u[q] * u[q] / (a[q] * a[q]);
        beta += c[q] * u[q] / (a[q] * a[q]);
        y[q] = c[q] + R * u[q];
      }
      double lw = (d - 1) * std::log(R) - 0.5 * (alpha * R * R + 2.0 * beta * R) - log_ray_integral(d - 1, alpha, beta);
      bnd = f(y) * u[i - 1] * std::exp(lw);
    }
    double s1 = in ? dif(x) : 0.0;
    double s2 = in ? x[i - 1] * f(x) / ai2 : 0.0;
    out[0] = s1;
    out[1] = s2;
    out[2] = bnd;
    out[3] = s1 - s2 - bnd;
    for (int q = 0; q < 4; ++q)
      if (!std::isfinite(out[q])) throw Error(ErrorKind::NonFiniteSample, "non-finite Gauss-Green sample");
  });
  GaussGreenResult r;
  r.lhs = est[0].mean;
  r.volume = est[1].mean;
  r.boundary = exact_boundary ? *exact_boundary : est[2].mean;
  r.residual = est[3].mean - (exact_boundary ? *exact_boundary : 0.0);
  r.std_error = est[3].std_error;
  return r;
}

}  // namespace

GaussGreenResult gauss_green_check(const WeightSequence& w, const GaussGreenDomain& v, const BlackBox& f,
                                   const BlackBox& dif, int i, const SampleStream& stream, long n) {
  return gg_mc(w, v, f, dif, i, stream, n, nullptr);
}

GaussGreenResult gauss_green_check(const WeightSequence& w, const GaussGreenDomain& v, const RealPoly& f, int i,
                                   const SampleStream& stream, long n) {
  RealPoly df = f.derivative(i);
  BlackBox fb = [&](const std::vector<double>& x) { return f.evaluate(x); };
  BlackBox db = [&](const std::vector<double>& x) { return df.evaluate(x); };
  if (v.kind == DomainKind::HalfSpace) {
    double b = 0.0;
    if (i == v.k) b = -std::exp(log_density(0.0, w.a(v.k))) * restricted_expect(f, w, v.k);
    return gg_mc(w, v, fb, db, i, stream, n, &b);
  }
  return gg_mc(w, v, fb, db, i, stream, n, nullptr);
}

// ------------------------------------------------------------------ Stokes

namespace {

// Point on the unit sphere in R^m from hyperspherical angles, and the
// surface element.
void sphere_point(const std::vector<double>& th, int m, std::vector<double>& u, double& jac) {
  u.assign(m, 0.0);
  jac = 1.0;
  if (m == 1) {
    u[0] = th[0];  // +-1 passed directly
    return;
  }
  double s = 1.0;
  for (int k = 0; k < m - 1; ++k) {
    u[k] = s * std::cos(th[k]);
    if (k < m - 2) jac *= std::pow(std::sin(th[k]), m - 2 - k);
    s *= std::sin(th[k]);
  }
  u[m - 1] = s;
}

std::vector<std::vector<Node>> angle_grid(int m, int panels) {
  std::vector<std::vector<Node>> g;
  if (m == 1) {
    g.push_back({{-1.0, 1.0}, {1.0, 1.0}});
    return g;
  }
  for (int k = 0; k < m - 2; ++k) g.push_back(gl_nodes(0.0, kPi, panels));
  g.push_back(gl_nodes(0.0, 2.0 * kPi, 2 * panels));
  return g;
}

}  // namespace

StokesResult stokes_check(const WeightSequence& w, const StokesScene& s, const RealPoly& f, int i) {
  if (s.comp.size() > 2) throw Error(ErrorKind::UnsupportedCodimension, "co-dimension above 2");
  if (s.dims > 4 || s.dims < 1) throw Error(ErrorKind::UnsupportedCodimension, "truncation above 4 dimensions");
  std::vector<long> J = sorted_unique(s.comp);
  std::vector<long> K;
  for (long q = 1; q <= s.dims; ++q)
    if (position(J, q) < 0) K.push_back(q);
  int m = static_cast<int>(K.size());
  if (m < 1) throw Error(ErrorKind::UnsupportedCodimension, "no base coordinates left");
  if (i < 1 || i > m) throw Error(ErrorKind::ConfigError, "Stokes direction outside the base coordinates");
  if (s.offset.size() != J.size()) throw Error(ErrorKind::ConfigError, "offset size must match the co-dimension");

  std::vector<double> aK(m);
  for (int q = 0; q < m; ++q) aK[q] = w.a(K[q]);
  double logFJ = 0.0;
  for (std::size_t q = 0; q < J.size(); ++q) logFJ += log_density(s.offset[q], w.a(J[q]));
  double FJ = std::exp(logFJ);
  long ia = K[i - 1];
  double ai2 = w.a(ia) * w.a(ia);
  RealPoly df = f.derivative(static_cast<int>(ia));

  auto ambient = [&](const std::vector<double>& xK) {
    std::vector<double> x(s.dims, 0.0);
    for (int q = 0; q < m; ++q) x[K[q] - 1] = xK[q];
    for (std::size_t q = 0; q < J.size(); ++q) x[J[q] - 1] = s.offset[q];
    return x;
  };
  auto rhoK = [&](const std::vector<double>& xK) {
    double l = 0.0;
    for (int q = 0; q < m; ++q) l += log_density(xK[q], aK[q]);
    return std::exp(l);
  };
  auto delta_f = [&](const std::vector<double>& xK) {
    auto x = ambient(xK);
    return df.evaluate(x) - x[ia - 1] * f.evaluate(x) / ai2;
  };

  int panels = m <= 2 ? 4 : m == 3 ? 2 : 1;
  StokesResult r;
  const GaussGreenDomain& V = s.region;
  if (V.kind == DomainKind::HalfSpace) {
    int k = V.k;
    if (k < 1 || k > m) throw Error(ErrorKind::ConfigError, "half-space normal outside the base coordinates");
    std::vector<std::vector<Node>> grid(m);
    for (int q = 0; q < m; ++q)
      grid[q] = q == k - 1 ? gl_nodes(0.0, 12.0 * aK[q], panels) : gl_nodes(-12.0 * aK[q], 12.0 * aK[q], panels);
    r.surface = FJ * tensor_sum(grid, [&](const std::vector<double>& xK) { return delta_f(xK) * rhoK(xK); });
    if (i == k) {
      std::vector<std::vector<Node>> bgrid;
      for (int q = 0; q < m; ++q)
        if (q != k - 1) bgrid.push_back(grid[q]);
      auto bval = [&](const std::vector<double>& xr) {
        std::vector<double> xK(m);
        int p = 0;
        for (int q = 0; q < m; ++q) xK[q] = q == k - 1 ? 0.0 : xr[p++];
        return -f.evaluate(ambient(xK)) * rhoK(xK);
      };
      r.boundary = FJ * (bgrid.empty() ? bval({}) : tensor_sum(bgrid, bval));
    }
  } else {
    std::vector<double> c(m, 0.0);
    for (int q = 0; q < m && q < static_cast<int>(V.center.size()); ++q) c[q] = V.center[q];
    double R = V.radius;
    auto ag = angle_grid(m, panels);
    std::vector<std::vector<Node>> vgrid = ag;
    vgrid.push_back(gl_nodes(0.0, R, panels));
    std::vector<double> u, xK(m);
    double jac;
    r.surface = FJ * tensor_sum(vgrid, [&](const std::vector<double>& t) {
      double rad = t.back();
      sphere_point(t, m, u, jac);
      for (int q = 0; q < m; ++q) xK[q] = c[q] + rad * u[q];
      return delta_f(xK) * rhoK(xK) * jac * std::pow(rad, m - 1);
    });
    r.boundary = FJ * tensor_sum(ag, [&](const std::vector<double>& t) {
      sphere_point(t, m, u, jac);
      for (int q = 0; q < m; ++q) xK[q] = c[q] + R * u[q];
      return f.evaluate(ambient(xK)) * u[i - 1] * rhoK(xK) * jac * std::pow(R, m - 1);
    });
  }
  r.residual = r.surface - r.boundary;
  return r;
}

}  // namespace ell2
