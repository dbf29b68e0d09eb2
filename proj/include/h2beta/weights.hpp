#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace h2beta {

struct WeightError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Catalog of weight-sequence families. Parameters and valid ranges:
//   power:nu=V     beta_n = 1/(n+1)^nu,                    nu >= 0
//   prop24:delta=V beta_n = 1/(k!)^delta, k! < n <= (k+1)!, delta > 0 (beta_0=beta_1=1)
//   thm32          beta_n = 1/k! on (k!, (k+1)!-2] and at (k+1)!,
//                  beta_n = 1/(k+1)! at n = (k+1)!-1, k >= 3 (1 for n <= 3!)
//   reich:r=V      beta_n = pi*n*r^(2n), r in (0,1)        (beta_0 := beta_1, positivity)
//   logsq:c=V      beta_n = exp(-c*log^2(n+1)), c > 0
//   expsqrt        beta_n = exp(-sqrt(n))
//   osc61          a_k = 4^(k^2), b_k = sqrt(a_k a_{k+1}); beta_n = a_k/n on [a_k, b_k),
//                  beta_n = n/a_{k+1} on [b_k, a_{k+1})   (1 below a_1)
//   odd31          beta_{2k} = 1, beta_{2k+1} = 1/(k+1)
enum class WeightFamily {
  Power,
  Prop24,
  Thm32,
  Reich,
  LogSquare,
  ExpSqrt,
  Osc61,
  Odd31,
  Literal,   // explicit values supplied by the caller
  Derived,   // output of tilde/gamma transforms
};

class WeightSequence {
 public:
  /// Parse a family spec like "power:nu=1", "thm32", "reich:r=0.5".
  static WeightSequence make(const std::string& spec, long horizon);
  static WeightSequence make(WeightFamily family, double param, long horizon);
  /// Explicit sequence; transforms require `tail_sup` = sup of the values
  /// beyond the supplied prefix (omit it and tilde/gamma will refuse).
  static WeightSequence from_values(const std::vector<double>& values,
                                    std::optional<double> tail_sup = std::nullopt);

  double beta(long n) const;
  double log_beta(long n) const;
  long horizon() const { return long(logb_.size()) - 1; }
  const std::string& rule() const { return rule_; }
  WeightFamily family() const { return family_; }
  double param() const { return param_; }

  /// Index from which the sequence is provably non-increasing, when known.
  std::optional<long> tail_decreasing_index() const { return tail_dec_idx_; }
  bool tail_monotone() const { return tail_dec_idx_.has_value(); }

  /// sup_{m >= n} beta_m over the *infinite* tail. Uses the family's closed
  /// form; throws WeightError when no tail information is available.
  double tail_sup_from(long n) const;

  /// beta~_n = sup_{m >= n} beta_m  (non-increasing majorant).
  WeightSequence tilde_transform() const;
  /// gamma_n = max{beta_n, sup_{m > (1+delta) n} beta_m}.
  WeightSequence gamma_transform(double delta) const;

 private:
  WeightSequence() = default;
  void memoize(long horizon, const std::function<double(long)>& log_rule);

  WeightFamily family_ = WeightFamily::Literal;
  double param_ = 0.0;
  std::string rule_;
  std::vector<double> logb_;
  std::vector<double> b_;
  std::optional<long> tail_dec_idx_;
  // for Literal/Derived: certified sup of beta over indices > horizon
  std::optional<double> beyond_horizon_sup_;
};

struct RatioWitness {
  long m = 0, n = 0;
  double ratio = 0.0;      // beta_m / beta_n, exp of log_ratio (may under/overflow)
  double log_ratio = 0.0;  // log beta_m - log beta_n, canonical
};

// Profiles of the regularity predicates over a finite horizon, with witness
// index pairs. Linear fields are exp() of the log fields and can underflow
// for fast-decaying weights; the log fields are authoritative.
struct PredicateReport {
  long horizon = 0;
  double essdec_constant = 0.0;  // sup_{n<=m<=N} beta_m/beta_n
  RatioWitness essdec_witness;
  double delta2_inf = 0.0;  // min_{1<=n<=N/2} beta_{2n}/beta_n
  RatioWitness delta2_witness;
  double polymin_exponent = 0.0;  // max_{2<=n<=N} -log beta_n / log n
  long polymin_witness_n = 0;
  double slowosc_min = 0.0, slowosc_max = 0.0;  // beta_m/beta_n over n/2<=m<=2n
  RatioWitness slowosc_min_witness, slowosc_max_witness;
  double meandelta2_inf = 0.0;  // min over dyadic n<=N/2 of beta_{2n}*n/sum beta*_j
  long meandelta2_witness_n = 0;
  double meandelta2_log = 0.0;

  std::string to_json() const;
};

PredicateReport predicate_report(const WeightSequence& w, long N);

/// Moment weight beta_n = int_0^1 t^n G(1-t) dt by adaptive quadrature with
/// estimated absolute error <= quad_tol.
double moment_weight(const std::function<double(double)>& G, long n, double quad_tol);

}  // namespace h2beta
