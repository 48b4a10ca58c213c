#pragma once

#include <vector>

#include "ell2/measure.hpp"
#include "ell2/numerics.hpp"
#include "ell2/sampling.hpp"

namespace ell2 {

// h(t) = exp(1/((t - 1/16)(t - 9/16))) on (1/16, 9/16), zero elsewhere.
double bump_profile(double t);

// H(x) = int_{-inf}^{x^2} h / int h: 0 for |x| < 1/4, 1 for |x| > 3/4.
class Smoothstep {
 public:
  static const Smoothstep& instance();

  double H(double x) const;
  double dH(double x) const;
  double mass() const { return mass_; }
  // C = sup |H'|.
  double sup_dH() const { return sup_dh_; }

 private:
  Smoothstep();
  double cumulative(double t) const;

  static constexpr int kPanels = 2048;
  std::vector<double> cum_;
  double mass_ = 0.0;
  double sup_dh_ = 0.0;
};

// 1 on B(center, r1), 0 outside B(center, r2), C^inf in between.
double separating_bump(const TruncatedPoint& center, double r1, double r2, const TruncatedPoint& x);

struct CutoffConfig {
  WeightSequence weights = WeightSequence::geometric(8);
  int dims = 8;
  long samples = 100000;
  SampleStream stream{};
};

// K_n = { sum x_i^2 / c_i <= n^2 } with c_i = sqrt(a_i), and the smoothed
// cut-offs X_k = H(g_{k+N1}), g_n(x) = P_1(x - K_n). One fixed sample set
// from P_1 serves the N1 calibration and every g_n evaluation.
class CutoffSystem {
 public:
  explicit CutoffSystem(const CutoffConfig& cfg);

  int dims() const { return d_; }
  int N1() const { return n1_; }
  double calibration_fraction() const { return calib_frac_; }
  const std::vector<double>& c() const { return c_; }
  const std::vector<double>& a() const { return a_; }
  double C() const { return Smoothstep::instance().sup_dH(); }

  double norm_c2(const std::vector<double>& x) const;
  bool in_K(double n, const std::vector<double>& x) const;
  // Empirical P_1(K_n) over the sample set.
  double fraction_in_K(double n) const;

  Estimate g(int n, const std::vector<double>& x) const;
  double X(int k, const std::vector<double>& x) const;

  // Score estimator: d_i g = -E[chi(x - Y) Y_i / a_i^2].
  std::vector<Estimate> grad_g(int n, const std::vector<double>& x) const;

  struct GradientBound {
    double value = 0.0;
    double std_error = 0.0;
  };
  // sum_i a_i^2 (d_i X_k)^2 at x.
  GradientBound gradient_bound(int k, const std::vector<double>& x) const;

  // Conditional (Rao-Blackwellised) estimator along coordinate i; smooth in x_i.
  double g_smooth(int n, const std::vector<double>& x, int i) const;
  double dg_smooth(int n, const std::vector<double>& x, int i) const;

  // Self-normalised likelihood-ratio estimator; a smooth deterministic function of x.
  double g_lr(int n, const std::vector<double>& x) const;
  std::vector<double> grad_g_lr(int n, const std::vector<double>& x) const;
  double X_lr(int k, const std::vector<double>& x) const;
  std::vector<double> grad_X_lr(int k, const std::vector<double>& x) const;

 private:
  int d_ = 0;
  long n_ = 0;
  int n1_ = 1;
  double calib_frac_ = 0.0;
  std::vector<double> a_, c_;
  std::vector<double> y_;      // n_ x d_
  std::vector<double> ynorm_;  // sum y_i^2 / c_i

  double lr_weight(long s, const std::vector<double>& x) const;
};

// P_t f(x) = int f(x - y) dP_t(y) by Monte Carlo over stream.dims coordinates.
Estimate heat_smooth(const WeightSequence& w, const BlackBox& f, double t, const std::vector<double>& x,
                     const SampleStream& stream, long n);

// d/dx_i P_t f(x) = -int f(x - y) y_i / (t^2 a_i^2) dP_t(y).
Estimate heat_partial(const WeightSequence& w, const BlackBox& f, double t, const std::vector<double>& x,
                      int i, const SampleStream& stream, long n);

struct DiscontinuityResult {
  double fxn_limit = 0.0;      // closed form for the infinite sequence
  double fxn_truncated = 0.0;  // exact product at truncation
  Estimate fxn_mc;
  double fx0 = 0.0;            // prod Phi(1/sqrt(a_i)), tail included
  Estimate fx0_mc;
};

// f = P_1 chi_A, A the positive orthant; x_n agrees with x_0 = (sqrt a_i)
// up to n and alternates sign beyond.
DiscontinuityResult discontinuity_demo(const WeightSequence& w, int n, const SampleStream& stream,
                                       long samples);

}  // namespace ell2
