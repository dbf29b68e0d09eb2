#include "h2beta/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "h2beta/quadrature.hpp"

namespace h2beta {
namespace {

using json = nlohmann::json;

double lfact(long k) { return std::lgamma(double(k) + 1.0); }

// Largest k with k! representable and k! < n; factorials as exact uint64.
// Horizons past 20! are rejected up front (largest representable index).
constexpr long kMaxFactArg = 20;

std::uint64_t fact_u64(long k) {
  std::uint64_t f = 1;
  for (long j = 2; j <= k; ++j) f *= std::uint64_t(j);
  return f;
}

// k such that k! < n <= (k+1)!, for n >= 2.
long factorial_zone(long n) {
  long k = 1;
  while (k + 1 <= kMaxFactArg && fact_u64(k + 1) < std::uint64_t(n)) ++k;
  if (k + 1 > kMaxFactArg) throw WeightError("factorial family: index beyond 20! is not representable");
  return k;
}

struct Osc61Zone {
  // a_k = 4^(k^2) = 2^(2k^2), b_k = 2^(2k^2 + 2k + 1)
  long k;
  std::uint64_t a_k, b_k, a_k1;
};

Osc61Zone osc61_zone(long n) {
  for (long k = 1;; ++k) {
    const long ea = 2 * k * k, eb = 2 * k * k + 2 * k + 1, ea1 = 2 * (k + 1) * (k + 1);
    if (ea1 >= 63) throw WeightError("osc61: horizon overflow (largest representable index is 2^62)");
    const std::uint64_t a_k = 1ULL << ea, b_k = 1ULL << eb, a_k1 = 1ULL << ea1;
    if (std::uint64_t(n) < a_k1) return {k, a_k, b_k, a_k1};
  }
}

constexpr double kLn2 = 0.6931471805599453094;

}  // namespace

void WeightSequence::memoize(long horizon, const std::function<double(long)>& log_rule) {
  logb_.resize(horizon + 1);
  b_.resize(horizon + 1);
  for (long n = 0; n <= horizon; ++n) {
    logb_[n] = log_rule(n);
    b_[n] = std::exp(logb_[n]);
    if (!(b_[n] >= 0.0) || !std::isfinite(logb_[n]))
      throw WeightError("weight memoization produced a non-finite value at n=" + std::to_string(n));
  }
}

WeightSequence WeightSequence::make(WeightFamily family, double param, long horizon) {
  if (horizon < 2) throw WeightError("make_weight: horizon must be >= 2");
  WeightSequence w;
  w.family_ = family;
  w.param_ = param;
  switch (family) {
    case WeightFamily::Power: {
      if (param < 0.0) throw WeightError("power: nu must be >= 0");
      w.rule_ = "power:nu=" + std::to_string(param);
      w.tail_dec_idx_ = 0;
      w.memoize(horizon, [param](long n) { return -param * std::log(double(n) + 1.0); });
      break;
    }
    case WeightFamily::Prop24: {
      if (param <= 0.0) throw WeightError("prop24: delta must be > 0");
      w.rule_ = "prop24:delta=" + std::to_string(param);
      w.tail_dec_idx_ = 0;
      w.memoize(horizon, [param](long n) {
        if (n <= 1) return 0.0;
        return -param * lfact(factorial_zone(n));
      });
      break;
    }
    case WeightFamily::Thm32: {
      w.rule_ = "thm32";
      w.tail_dec_idx_ = std::nullopt;  // never eventually monotone
      w.memoize(horizon, [](long n) {
        if (n <= 6) return 0.0;
        const long k = factorial_zone(n);
        if (std::uint64_t(n) == fact_u64(k + 1) - 1) return -lfact(k + 1);
        return -lfact(k);
      });
      break;
    }
    case WeightFamily::Reich: {
      if (param <= 0.0 || param >= 1.0) throw WeightError("reich: r must be in (0,1)");
      w.rule_ = "reich:r=" + std::to_string(param);
      const double logr = std::log(param);
      // pi*n*r^(2n) vanishes at n = 0; the catalog pins beta_0 := beta_1 > 0.
      w.memoize(horizon, [logr](long n) {
        const long m = std::max(n, 1L);
        return std::log(std::numbers::pi) + std::log(double(m)) + 2.0 * double(m) * logr;
      });
      // decreasing once (n+1) r^2 < n
      w.tail_dec_idx_ = std::max(1L, long(std::ceil(param * param / (1.0 - param * param))));
      break;
    }
    case WeightFamily::LogSquare: {
      if (param <= 0.0) throw WeightError("logsq: c must be > 0");
      w.rule_ = "logsq:c=" + std::to_string(param);
      w.tail_dec_idx_ = 0;
      w.memoize(horizon, [param](long n) {
        const double l = std::log(double(n) + 1.0);
        return -param * l * l;
      });
      break;
    }
    case WeightFamily::ExpSqrt: {
      w.rule_ = "expsqrt";
      w.tail_dec_idx_ = 0;
      w.memoize(horizon, [](long n) { return -std::sqrt(double(n)); });
      break;
    }
    case WeightFamily::Osc61: {
      w.rule_ = "osc61";
      w.tail_dec_idx_ = std::nullopt;
      w.memoize(horizon, [](long n) {
        if (n < 4) return 0.0;
        const auto z = osc61_zone(n);
        if (std::uint64_t(n) < z.b_k) return 2.0 * double(z.k) * double(z.k) * kLn2 - std::log(double(n));
        return std::log(double(n)) - 2.0 * double(z.k + 1) * double(z.k + 1) * kLn2;
      });
      break;
    }
    case WeightFamily::Odd31: {
      w.rule_ = "odd31";
      w.tail_dec_idx_ = std::nullopt;
      w.memoize(horizon, [](long n) {
        if (n % 2 == 0) return 0.0;
        return -std::log(double((n - 1) / 2 + 1));
      });
      break;
    }
    default:
      throw WeightError("make_weight: family requires explicit values");
  }
  return w;
}

WeightSequence WeightSequence::make(const std::string& spec, long horizon) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  double param = 0.0;
  bool have_param = false;
  if (colon != std::string::npos) {
    const std::string kv = spec.substr(colon + 1);
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw WeightError("weight spec: expected key=value after ':'");
    param = std::stod(kv.substr(eq + 1));
    have_param = true;
  }
  auto need = [&](const char* key) {
    if (!have_param) throw WeightError(std::string("weight spec: missing parameter ") + key);
    return param;
  };
  if (name == "power") return make(WeightFamily::Power, need("nu"), horizon);
  if (name == "prop24") return make(WeightFamily::Prop24, need("delta"), horizon);
  if (name == "thm32") return make(WeightFamily::Thm32, 0.0, horizon);
  if (name == "reich") return make(WeightFamily::Reich, need("r"), horizon);
  if (name == "logsq") return make(WeightFamily::LogSquare, need("c"), horizon);
  if (name == "expsqrt") return make(WeightFamily::ExpSqrt, 0.0, horizon);
  if (name == "osc61") return make(WeightFamily::Osc61, 0.0, horizon);
  if (name == "odd31") return make(WeightFamily::Odd31, 0.0, horizon);
  throw WeightError("unknown weight family: " + name);
}

WeightSequence WeightSequence::from_values(const std::vector<double>& values,
                                           std::optional<double> tail_sup) {
  if (values.size() < 3) throw WeightError("from_values: need at least 3 values");
  WeightSequence w;
  w.family_ = WeightFamily::Literal;
  w.rule_ = "literal";
  w.logb_.resize(values.size());
  w.b_ = values;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) throw WeightError("from_values: weights must be positive");
    w.logb_[i] = std::log(values[i]);
  }
  w.beyond_horizon_sup_ = tail_sup;
  return w;
}

double WeightSequence::beta(long n) const {
  if (n < 0 || n > horizon()) throw WeightError("beta: index outside memoized horizon");
  return b_[n];
}

double WeightSequence::log_beta(long n) const {
  if (n < 0 || n > horizon()) throw WeightError("log_beta: index outside memoized horizon");
  return logb_[n];
}

double WeightSequence::tail_sup_from(long n) const {
  const long N = horizon();
  auto prefix_max = [&](long from, long to) {
    double m = -std::numeric_limits<double>::infinity();
    for (long j = from; j <= to; ++j) m = std::max(m, b_[j]);
    return m;
  };
  switch (family_) {
    case WeightFamily::Power:
    case WeightFamily::Prop24:
    case WeightFamily::LogSquare:
    case WeightFamily::ExpSqrt:
      return beta(std::min(n, N));  // non-increasing
    case WeightFamily::Reich: {
      const long peak = *tail_dec_idx_;
      if (n >= peak) {
        if (n <= N) return b_[n];
        const double logr = std::log(param_);
        return std::exp(std::log(std::numbers::pi) + std::log(double(n)) + 2.0 * double(n) * logr);
      }
      return prefix_max(std::max(n, 0L), std::min(peak, N));
    }
    case WeightFamily::Thm32: {
      // remaining values in zone k and all later zones are <= 1/k!
      if (n <= 6) return 1.0;
      return std::exp(-lfact(factorial_zone(n)));
    }
    case WeightFamily::Osc61:
      // peaks beta_{a_{k+1}-1} = 1 - 1/a_{k+1} approach 1: the tail sup is 1.
      return 1.0;
    case WeightFamily::Odd31:
      return 1.0;  // even indices are 1 arbitrarily far out
    case WeightFamily::Literal:
    case WeightFamily::Derived: {
      if (!beyond_horizon_sup_)
        throw WeightError("tail_sup_from: no tail information for this sequence");
      if (n > N) return *beyond_horizon_sup_;
      return std::max(prefix_max(n, N), *beyond_horizon_sup_);
    }
  }
  throw WeightError("tail_sup_from: unreachable");
}

WeightSequence WeightSequence::tilde_transform() const {
  const long N = horizon();
  const double beyond = tail_sup_from(N + 1);
  WeightSequence t;
  t.family_ = WeightFamily::Derived;
  t.rule_ = "tilde(" + rule_ + ")";
  t.b_.resize(N + 1);
  t.logb_.resize(N + 1);
  double run = beyond;
  for (long n = N; n >= 0; --n) {
    run = std::max(run, b_[n]);
    t.b_[n] = run;
    t.logb_[n] = std::log(run);
  }
  t.tail_dec_idx_ = 0;
  t.beyond_horizon_sup_ = beyond;
  return t;
}

WeightSequence WeightSequence::gamma_transform(double delta) const {
  if (!(delta > 0.0)) throw WeightError("gamma_transform: delta must be > 0");
  const long N = horizon();
  // suffix maxima of the memo, suffix_[n] = max over [n, N]
  std::vector<double> suffix(N + 2);
  suffix[N + 1] = -std::numeric_limits<double>::infinity();
  for (long n = N; n >= 0; --n) suffix[n] = std::max(suffix[n + 1], b_[n]);
  const double beyond = tail_sup_from(N + 1);

  WeightSequence g;
  g.family_ = WeightFamily::Derived;
  g.rule_ = "gamma(" + rule_ + ",delta=" + std::to_string(delta) + ")";
  g.b_.resize(N + 1);
  g.logb_.resize(N + 1);
  for (long n = 0; n <= N; ++n) {
    double u = (1.0 + delta) * double(n);
    if (std::abs(u - std::round(u)) < 1e-9 * std::max(1.0, std::abs(u))) u = std::round(u);
    const long first = long(std::floor(u)) + 1;  // least integer m with m > (1+delta) n
    double tail;
    if (first > N)
      tail = tail_sup_from(first);
    else
      tail = std::max(suffix[first], beyond);
    g.b_[n] = std::max(b_[n], tail);
    g.logb_[n] = std::log(g.b_[n]);
  }
  // gamma_m <= gamma_n whenever m >= (1+delta) n, and gamma is bounded by the
  // global sup; beyond the horizon it cannot exceed the parent's tail sup
  // joined with the memo suffix past N/(1+delta).
  const long back = std::max(0L, long(std::floor(double(N) / (1.0 + delta))));
  g.beyond_horizon_sup_ = std::max(beyond, suffix[std::min(back, N)]);
  return g;
}

// ---------------------------------------------------------------------------

PredicateReport predicate_report(const WeightSequence& w, long N) {
  if (N > w.horizon()) throw WeightError("predicate_report: N exceeds memoized horizon");
  if (N < 4) throw WeightError("predicate_report: N must be >= 4");
  PredicateReport r;
  r.horizon = N;

  // essential decrease: track running argmin of log beta over [0, m]
  {
    long argmin = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (long m = 0; m <= N; ++m) {
      if (w.log_beta(m) < w.log_beta(argmin)) argmin = m;
      const double lr = w.log_beta(m) - w.log_beta(argmin);
      // the witness wants n <= m; argmin tracks the min over [0, m], so the
      // pair (m, argmin) is admissible only with n = argmin <= m -- always true
      if (lr > best) {
        best = lr;
        r.essdec_witness = {m, argmin, 0.0, lr};
      }
    }
    // the sup ratio needs the *minimum over n <= m*, i.e. beta_m / min_{n<=m}.
    // max over m of (log beta_m - min log beta over [0..m]) is exactly `best`.
    r.essdec_witness.ratio = std::exp(best);
    r.essdec_constant = r.essdec_witness.ratio;
  }

  // Delta_2 profile
  {
    double best = std::numeric_limits<double>::infinity();
    for (long n = 1; 2 * n <= N; ++n) {
      const double lr = w.log_beta(2 * n) - w.log_beta(n);
      if (lr < best) {
        best = lr;
        r.delta2_witness = {2 * n, n, 0.0, lr};
      }
    }
    r.delta2_witness.ratio = std::exp(best);
    r.delta2_inf = r.delta2_witness.ratio;
  }

  // polynomial minoration exponent
  {
    double best = -std::numeric_limits<double>::infinity();
    for (long n = 2; n <= N; ++n) {
      const double e = -w.log_beta(n) / std::log(double(n));
      if (e > best) {
        best = e;
        r.polymin_witness_n = n;
      }
    }
    r.polymin_exponent = best;
  }

  // slow oscillation: window [ceil(n/2), min(2n, N)], monotone deques
  {
    std::deque<long> qmin, qmax;
    long lo = 0, hi = -1;  // current window [lo, hi]
    double best_min = std::numeric_limits<double>::infinity();
    double best_max = -std::numeric_limits<double>::infinity();
    for (long n = 1; n <= N; ++n) {
      const long want_lo = (n + 1) / 2, want_hi = std::min(2 * n, N);
      while (hi < want_hi) {
        ++hi;
        while (!qmin.empty() && w.log_beta(qmin.back()) >= w.log_beta(hi)) qmin.pop_back();
        qmin.push_back(hi);
        while (!qmax.empty() && w.log_beta(qmax.back()) <= w.log_beta(hi)) qmax.pop_back();
        qmax.push_back(hi);
      }
      while (lo < want_lo) {
        if (!qmin.empty() && qmin.front() == lo) qmin.pop_front();
        if (!qmax.empty() && qmax.front() == lo) qmax.pop_front();
        ++lo;
      }
      const double lmin = w.log_beta(qmin.front()) - w.log_beta(n);
      const double lmax = w.log_beta(qmax.front()) - w.log_beta(n);
      if (lmin < best_min) {
        best_min = lmin;
        r.slowosc_min_witness = {qmin.front(), n, 0.0, lmin};
      }
      if (lmax > best_max) {
        best_max = lmax;
        r.slowosc_max_witness = {qmax.front(), n, 0.0, lmax};
      }
    }
    r.slowosc_min_witness.ratio = std::exp(best_min);
    r.slowosc_max_witness.ratio = std::exp(best_max);
    r.slowosc_min = r.slowosc_min_witness.ratio;
    r.slowosc_max = r.slowosc_max_witness.ratio;
  }

  // mean-Delta_2 at dyadic n (sorted prefix recomputed per n, scaled sums)
  {
    double best = std::numeric_limits<double>::infinity();
    for (long n = 1; 2 * n <= N; n *= 2) {
      double lmax = -std::numeric_limits<double>::infinity();
      for (long j = 1; j <= n; ++j) lmax = std::max(lmax, w.log_beta(j));
      double s = 0.0;
      for (long j = 1; j <= n; ++j) s += std::exp(w.log_beta(j) - lmax);
      // log of (1/n) sum_{j<=n} beta*_j ; the rearrangement does not change the sum
      const double log_mean = lmax + std::log(s) - std::log(double(n));
      const double lr = w.log_beta(2 * n) - log_mean;
      if (lr < best) {
        best = lr;
        r.meandelta2_witness_n = n;
      }
    }
    r.meandelta2_log = best;
    r.meandelta2_inf = std::exp(best);
  }
  return r;
}

std::string PredicateReport::to_json() const {
  json j;
  j["horizon"] = horizon;
  j["essdec_constant"] = essdec_constant;
  j["essdec_witness"] = {{"m", essdec_witness.m}, {"n", essdec_witness.n},
                         {"ratio", essdec_witness.ratio}, {"log_ratio", essdec_witness.log_ratio}};
  j["delta2_inf"] = delta2_inf;
  j["delta2_witness"] = {{"m", delta2_witness.m}, {"n", delta2_witness.n},
                         {"ratio", delta2_witness.ratio}, {"log_ratio", delta2_witness.log_ratio}};
  j["polymin_exponent"] = polymin_exponent;
  j["polymin_witness_n"] = polymin_witness_n;
  j["slowosc_bounds"] = {slowosc_min, slowosc_max};
  j["slowosc_min_witness"] = {{"m", slowosc_min_witness.m}, {"n", slowosc_min_witness.n},
                              {"ratio", slowosc_min_witness.ratio},
                              {"log_ratio", slowosc_min_witness.log_ratio}};
  j["slowosc_max_witness"] = {{"m", slowosc_max_witness.m}, {"n", slowosc_max_witness.n},
                              {"ratio", slowosc_max_witness.ratio},
                              {"log_ratio", slowosc_max_witness.log_ratio}};
  j["meandelta2_inf"] = meandelta2_inf;
  j["meandelta2_witness_n"] = meandelta2_witness_n;
  return j.dump(2);
}

double moment_weight(const std::function<double(double)>& G, long n, double quad_tol) {
  if (!(quad_tol > 0.0)) throw WeightError("moment_weight: quad_tol must be > 0");
  auto f = [&](double t) { return std::pow(t, double(n)) * G(1.0 - t); };
  const auto res = adaptive_gk15(f, 0.0, 1.0, quad_tol, 20000);
  if (!res.converged)
    throw WeightError("moment_weight: quadrature failed to reach the requested tolerance");
  return res.value;
}

}  // namespace h2beta
