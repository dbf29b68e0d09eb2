#include "h2beta/criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "h2beta/asymptotics.hpp"
#include "h2beta/coeff_engine.hpp"
#include "h2beta/operator_lab.hpp"
#include "h2beta/quadrature.hpp"
#include "h2beta/symbols.hpp"
#include "h2beta/weights.hpp"

namespace h2beta {
namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "FAILED: " << what << "; ";
    }
  }
  void note(const std::string& s) { detail << s << "; "; }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// ---- criterion 1: series vs circle-FFT agreement --------------------------

Check criterion_oracle_agreement() {
  Check c;
  double worst = 0.0;
  for (const double a : {0.3, 0.5, 0.7}) {
    const auto phi = SymbolSpec::mobius(a);
    for (const long n : {1L, 16L, 64L, 256L}) {
      const long M = 1024;
      const auto s = column_series_power(phi, n, M);
      const auto f = column_circle_fft(phi, n, M, 1.0, 4096);
      double amax = 0.0, diff = 0.0;
      for (long m = 0; m <= M; ++m) {
        amax = std::max(amax, std::abs(s.a[m]));
        diff = std::max(diff, std::abs(s.a[m] - f.a[m]));
      }
      worst = std::max(worst, diff / amax);
    }
  }
  c.require(worst <= 1e-9, "entrywise agreement above 1e-9 of column max");
  c.note("worst relative disagreement " + fmt(worst));
  return c;
}

// ---- criterion 2: Parseval for inner-symbol columns ------------------------

Check criterion_parseval() {
  Check c;
  auto defect = [](const CoeffColumn& col) {
    double s = 0.0;
    for (const auto& v : col.a) s += std::norm(v);
    return std::abs(s - 1.0);
  };
  for (const double a : {0.3, 0.5, 0.7}) {
    const auto phi = SymbolSpec::mobius(a);
    for (const long n : {1L, 16L, 64L, 256L}) {
      const long M = default_truncation(phi, n);
      const auto col = column_series_power(phi, n, M);
      const double d = defect(col);
      c.require(d <= col.trunc_error + 1e-9,
                "mobius a=" + fmt(a) + " n=" + std::to_string(n) + " defect " + fmt(d));
    }
  }
  for (const long n : {1L, 5L, 20L}) {
    const auto col = column_singular_inner(n, 4096);
    const double d = defect(col);
    c.require(d <= col.trunc_error + 1e-9,
              "inner n=" + std::to_string(n) + " defect " + fmt(d) + " vs trunc " +
                  fmt(col.trunc_error));
    c.require(col.flagged.empty(),
              "inner n=" + std::to_string(n) + " cross-validation flagged " +
                  std::to_string(col.flagged.size()) + " entries");
    if (n == 20) c.note("inner n=20 defect " + fmt(d) + " (trunc bound " + fmt(col.trunc_error) + ")");
  }
  return c;
}

// ---- criterion 3: Cauchy coefficient bound ---------------------------------

Check criterion_cauchy_bound() {
  Check c;
  long violations = 0;
  double worst = -1e300;
  for (const double a : {0.3, 0.5, 0.7}) {
    const auto cols = columns_series_prefix(SymbolSpec::mobius(a), 256, 1024);
    for (const auto& col : cols) {
      const auto rep = cauchy_bound_check(a, 1.0, col);
      violations += long(rep.violating_m.size());
      worst = std::max(worst, rep.worst_margin);
    }
  }
  c.require(violations == 0, std::to_string(violations) + " bound violations");
  c.note("worst margin " + fmt(worst));
  return c;
}

// ---- criterion 4: E-set density at the calibrated level --------------------

Check criterion_eset(const CalibrationConstants& cal) {
  Check c;
  const double ds = cal.delta_star;
  c.require(ds > 0.0, "delta_star must be positive");
  double dmin = 1e300, dmax = 0.0;
  for (const long n : {512L, 1024L, 2048L, 4096L}) {
    const auto rep = eset_scan(cal.a, n, ds);
    dmin = std::min(dmin, rep.density);
    dmax = std::max(dmax, rep.density);
    if (n >= 1024)
      c.require(rep.density >= ds,
                "density " + fmt(rep.density) + " < delta_star at n=" + std::to_string(n));
    // membership really does mean the coefficient bound
    const auto col = column_series_power(SymbolSpec::mobius(cal.a), n, rep.j_hi);
    for (const long m : rep.E)
      if (std::abs(col.a[m]) < ds / std::sqrt(double(n))) {
        c.require(false, "E-set member below threshold at (m,n)=(" + std::to_string(m) + "," +
                             std::to_string(n) + ")");
        break;
      }
  }
  c.require((dmax - dmin) / dmin < 0.20, "density varies by " + fmt((dmax - dmin) / dmin));
  c.note("delta_star " + fmt(ds) + ", density range [" + fmt(dmin) + ", " + fmt(dmax) + "]");
  return c;
}

// ---- criterion 5: Gallardo-Partington norm targets -------------------------

Check criterion_gp() {
  Check c;
  const double a = 0.5;
  for (const double nu : {0.0, 1.0}) {
    const double target = std::pow((1.0 + a) / (1.0 - a), (nu + 1.0) / 2.0);
    const auto beta = WeightSequence::make(WeightFamily::Power, nu, 4096);
    std::vector<double> values;
    Eigen::VectorXd carry;
    bool have_carry = false;
    double trunc = 0.0;
    for (const long N : {128L, 256L, 512L, 1024L, 2048L, 4096L}) {
      const auto T = assemble(SymbolSpec::mobius(a), beta, N);
      trunc = T.trunc_error;
      Eigen::VectorXd warm;
      if (have_carry) {
        warm = Eigen::VectorXd::Zero(N);
        warm.head(carry.size()) = carry;
      }
      Eigen::VectorXd vec;
      const auto est = op_norm(T.real(), 1e-10, 2200, have_carry ? &warm : nullptr, &vec);
      carry = vec;
      have_carry = true;
      values.push_back(est.value);
      // lower bounds must not overshoot the closed-form operator norm
      c.require(est.value <= target + trunc + 1e-9,
                "estimate exceeds the closed-form norm at N=" + std::to_string(N));
    }
    // monotone within the estimator's convergence slack
    for (std::size_t i = 1; i < values.size(); ++i)
      c.require(values[i] >= values[i - 1] - 5e-5 * target,
                "nu=" + fmt(nu) + " non-monotone at step " + std::to_string(i));
    const double frac = values.back() / target;
    c.require(frac >= 0.95, "nu=" + fmt(nu) + " reached only " + fmt(100.0 * frac) + "%");
    c.note("nu=" + fmt(nu) + ": N=4096 lower bound " + fmt(values.back()) + " = " +
           fmt(100.0 * frac) + "% of " + fmt(target));
  }
  return c;
}

// ---- criterion 6: column-ratio divergence witness --------------------------

Check criterion_ratio_growth(const CalibrationConstants& cal) {
  Check c;
  const auto beta = WeightSequence::make(WeightFamily::Thm32, 0.0, 1 << 14);
  const auto phi = SymbolSpec::mobius(0.5);
  const double r121 = column_norm_ratio(phi, beta, 121);
  const double r721 = column_norm_ratio(phi, beta, 721);
  const double growth = r721 / r121;
  c.require(growth > 1.0, "ratio must grow from n=121 to n=721");
  c.require(growth >= cal.ratio_growth_min,
            "growth " + fmt(growth) + " below calibrated floor " + fmt(cal.ratio_growth_min));
  c.note("ratio(121)=" + fmt(r121) + ", ratio(721)=" + fmt(r721) + ", growth " + fmt(growth));
  return c;
}

// ---- criterion 7: Kacnel'son inequality ------------------------------------

Check criterion_kacnelson() {
  Check c;
  std::mt19937_64 rng(20240901ULL);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::uniform_real_distribution<double> gval(0.1, 10.0);
  const long N = 64;
  long violations = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
    for (long i = 0; i < N; ++i)
      for (long j = 0; j <= i; ++j) M(i, j) = entry(rng);
    std::vector<double> gamma(N);
    for (auto& g : gamma) g = gval(rng);
    std::sort(gamma.begin(), gamma.end());
    const auto [lhs, rhs] = kacnelson_check(M, gamma, 1e-13);
    worst = std::max(worst, lhs / rhs);
    if (lhs > rhs * (1.0 + 1e-10)) ++violations;
  }
  c.require(violations == 0, std::to_string(violations) + " violations in 1000 trials");
  c.note("worst lhs/rhs " + fmt(worst));
  return c;
}

// ---- criterion 8: stationary phase and Fresnel ------------------------------

Check criterion_stationary_phase(const CalibrationConstants& cal) {
  Check c;
  const cplx fresnel_const = std::sqrt(kPi) * std::polar(1.0, kPi / 4.0);
  const cplx fr = fresnel_refined(1000.0, 1e-9);
  c.require(std::abs(fr - fresnel_const) <= 1e-6,
            "Fresnel constant missed by " + fmt(std::abs(fr - fresnel_const)));

  for (const double a : {0.3, 0.5, 0.7}) {
    std::vector<double> scaled;
    for (const long n : {256L, 512L, 1024L, 2048L}) {
      const auto geo = main_lemma_geometry(a, n);
      const long m = std::lround(0.5 * double(geo.j_lo + geo.j_hi));
      const auto bundle = make_paper_phase(a, n, m);
      const auto sp = stationary_phase(bundle, cal.K0);
      const auto q = oscillatory_quadrature(bundle.F, bundle.A, bundle.B, 1e-9);
      const double res = std::abs(q.value - sp.approx);
      c.require(q.converged, "oscillatory quadrature did not converge");
      c.require(res <= sp.error_budget,
                "a=" + fmt(a) + " n=" + std::to_string(n) + " residual " + fmt(res) +
                    " above budget " + fmt(sp.error_budget));
      scaled.push_back(res * std::pow(double(n), 0.6));
    }
    for (const double s : scaled)
      c.require(s <= 2.0 * scaled.front(),
                "a=" + fmt(a) + " scaled residual " + fmt(s) + " above 2x the n=256 value " +
                    fmt(scaled.front()));
    if (a == 0.5)
      c.note("scaled residuals a=0.5: " + fmt(scaled[0]) + " " + fmt(scaled[1]) + " " +
             fmt(scaled[2]) + " " + fmt(scaled[3]));
  }
  return c;
}

// ---- criterion 9: Laguerre asymptotics --------------------------------------

Check criterion_laguerre(const CalibrationConstants& cal) {
  Check c;
  const double K = cal.K_laguerre;
  c.require(K > 0.0, "K_laguerre must be positive");
  long violations = 0;
  double worst = 0.0;
  for (const long n : {100L, 200L}) {
    const auto col = column_singular_inner(n, 4 * n);
    for (long m = n / 4; m <= 4 * n; ++m) {
      const double dev = std::abs(col.a[m].real() - laguerre_main_term(n, m));
      const double bound = K * std::sqrt(double(n)) * std::pow(double(m), -1.25);
      worst = std::max(worst, dev / bound);
      if (dev > bound) ++violations;
    }
  }
  c.require(violations == 0, std::to_string(violations) + " remainder-bound violations");
  c.note("K=" + fmt(K) + ", worst dev/bound " + fmt(worst));
  return c;
}

// ---- criterion 10: predicate classification table ---------------------------

Check criterion_predicate_table() {
  Check c;
  // exp(-sqrt(n)) fails Delta_2: the profile collapses along the horizon
  {
    double prev = 0.0;
    bool first = true;
    for (const long N : {512L, 1024L, 2048L, 4096L}) {
      const auto w = WeightSequence::make(WeightFamily::ExpSqrt, 0.0, N);
      const auto rep = predicate_report(w, N);
      if (!first) c.require(rep.delta2_witness.log_ratio < prev, "expsqrt delta2 not collapsing");
      prev = rep.delta2_witness.log_ratio;
      first = false;
      if (N == 4096)
        c.require(rep.delta2_witness.log_ratio < std::log(1e-6), "expsqrt delta2 not near zero");
    }
  }
  // reich: Delta_2 ratio is exactly 2 r^{2n}
  {
    const double r = 0.5;
    const auto w = WeightSequence::make(WeightFamily::Reich, r, 4096);
    double worst = 0.0;
    for (long n = 1; n <= 2048; ++n) {
      const double lhs = w.log_beta(2 * n) - w.log_beta(n);
      const double rhs = std::log(2.0) + 2.0 * double(n) * std::log(r);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    c.require(worst <= 1e-12, "reich Delta_2 ratio differs from 2 r^{2n} by " + fmt(worst));
  }
  // prop24 (delta = 1): polynomial minoration beta_n >= 1/n, Delta_2 fails
  {
    const auto w = WeightSequence::make(WeightFamily::Prop24, 1.0, 4096);
    bool polymin = true;
    for (long n = 2; n <= 4096; ++n)
      if (w.log_beta(n) < -std::log(double(n)) - 1e-12) polymin = false;
    c.require(polymin, "prop24 polynomial minoration fails");
    const auto rep = predicate_report(w, 4096);
    c.require(rep.delta2_inf <= 1.0 / 6.0 + 1e-12,
              "prop24 delta2_inf " + fmt(rep.delta2_inf) + " not <= 1/6");
    const double at_720 = std::exp(w.log_beta(1440) - w.log_beta(720));
    c.require(std::abs(at_720 - 1.0 / 6.0) <= 1e-12, "prop24 ratio at n=6! is not 1/6");
  }
  // osc61: slowly oscillating within [1/4, 2], essential decrease fails (the
  // constant keeps growing as the horizon passes the next 4^(k^2) block)
  {
    const auto w4k = WeightSequence::make(WeightFamily::Osc61, 0.0, 4096);
    const auto rep4k = predicate_report(w4k, 4096);
    c.require(rep4k.slowosc_min >= 0.25 - 1e-9 && rep4k.slowosc_max <= 2.0 + 1e-9,
              "osc61 slowosc bounds [" + fmt(rep4k.slowosc_min) + ", " + fmt(rep4k.slowosc_max) +
                  "] leave [1/4, 2]");
    const auto wbig = WeightSequence::make(WeightFamily::Osc61, 0.0, 1L << 19);
    const auto repbig = predicate_report(wbig, 1L << 19);
    c.require(repbig.essdec_constant >= 2.0 * rep4k.essdec_constant,
              "osc61 essential-decrease constant stopped growing");
    c.note("osc61 essdec " + fmt(rep4k.essdec_constant) + " -> " + fmt(repbig.essdec_constant));
  }
  // thm32: essential decrease fails with witness ratio k+1 at n = (k+1)!
  {
    const auto w = WeightSequence::make(WeightFamily::Thm32, 0.0, 8192);
    const auto rep = predicate_report(w, 4096);
    c.require(rep.essdec_constant >= 6.0 - 1e-9, "thm32 essdec below 6 at N=4096");
    const double witness = std::exp(w.log_beta(720) - w.log_beta(719));
    c.require(std::abs(witness - 6.0) <= 1e-9, "thm32 witness ratio at 6! is not k+1");
    const auto rep8k = predicate_report(w, 8192);
    c.require(rep8k.essdec_constant >= 7.0 - 1e-9, "thm32 essdec below 7 at N=8192");
  }
  return c;
}

// ---- criterion 11: block decomposition --------------------------------------

Check criterion_blocks() {
  Check c;
  const double a = 0.5, alpha = 1.0;
  const double rho = rho_exponent(a, std::exp(-alpha));
  const long N_base = long(std::ceil(2.0 / rho));
  const long N = 1024;

  double analytic = 0.0;  // sum over n < N of (rho n / 2) exp(-alpha rho n)
  for (long n = 0; n < N; ++n) analytic += 0.5 * rho * double(n) * std::exp(-alpha * rho * double(n));

  const auto run = [&](const WeightSequence& beta, const std::string& tag, bool weighted) {
    const auto T = assemble(SymbolSpec::mobius(a), beta, N);
    const auto rep = block_decompose(T, N_base, 1e-9);
    c.require(rep.norm_D <= rep.norm_A + 1e-8, tag + ": ||D|| above ||A||");
    c.require(rep.norm_R <= rep.norm_A + 1e-8, tag + ": ||R|| above ||A||");
    // exact partition, bit level
    const Eigen::MatrixXd back = rep.D + rep.R + rep.S + rep.U;
    c.require((back.array() == T.real().array()).all(), tag + ": partition not bit-exact");
    double bound = analytic;
    if (weighted) {
      bound = 0.0;
      for (long n = 0; n < N; ++n) {
        double ratio_max = 1.0;
        for (long m = 0; double(m) < 0.5 * rho * double(n); ++m)
          ratio_max = std::max(ratio_max, std::exp(beta.log_beta(m) - beta.log_beta(n)));
        bound += ratio_max * 0.5 * rho * double(n) * std::exp(-alpha * rho * double(n));
      }
    }
    c.require(rep.hs_U * rep.hs_U <= bound,
              tag + ": ||U||_HS^2 " + fmt(rep.hs_U * rep.hs_U) + " above the analytic bound " +
                  fmt(bound));
    c.note(tag + ": ||A||=" + fmt(rep.norm_A) + " ||D||=" + fmt(rep.norm_D) + " ||R||=" +
           fmt(rep.norm_R) + " ||S||=" + fmt(rep.norm_S) + " ||U||_HS=" + fmt(rep.hs_U));
  };

  run(WeightSequence::make(WeightFamily::Power, 0.0, N), "flat", false);
  const auto thm32 = WeightSequence::make(WeightFamily::Thm32, 0.0, N).tilde_transform();
  run(thm32, "tilde(thm32)", true);
  return c;
}

}  // namespace

std::vector<CriterionResult> run_all_criteria(const CalibrationConstants& cal, std::ostream& out) {
  using clock = std::chrono::steady_clock;
  std::vector<CriterionResult> results;
  const struct {
    int id;
    const char* name;
    std::function<Check()> fn;
  } table[] = {
      {1, "coefficient oracle agreement", [] { return criterion_oracle_agreement(); }},
      {2, "Parseval for inner columns", [] { return criterion_parseval(); }},
      {3, "Cauchy coefficient bound", [] { return criterion_cauchy_bound(); }},
      {4, "E-set density (main lemma)", [&] { return criterion_eset(cal); }},
      {5, "Gallardo-Partington norms", [] { return criterion_gp(); }},
      {6, "column-ratio divergence", [&] { return criterion_ratio_growth(cal); }},
      {7, "Kacnel'son inequality", [] { return criterion_kacnelson(); }},
      {8, "stationary phase / Fresnel", [&] { return criterion_stationary_phase(cal); }},
      {9, "Laguerre asymptotics", [&] { return criterion_laguerre(cal); }},
      {10, "predicate classification", [] { return criterion_predicate_table(); }},
      {11, "block decomposition", [] { return criterion_blocks(); }},
  };
  for (const auto& row : table) {
    const auto t0 = clock::now();
    CriterionResult r;
    r.id = row.id;
    r.name = row.name;
    try {
      Check ck = row.fn();
      r.pass = ck.pass;
      r.detail = ck.detail.str();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    out << (r.pass ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << ": " << r.name << " ("
        << fmt(r.seconds) << " s) " << r.detail << "\n";
    out.flush();
    results.push_back(std::move(r));
  }
  return results;
}

CalibrationConstants calibrate(std::ostream& out) {
  CalibrationConstants cal;
  cal.a = 0.5;

  // delta_star: largest level with density >= level at n = 512, then a 0.95
  // safety factor so the density scatter across n stays above it.
  {
    const long n = 512;
    auto density_at = [&](double d) { return eset_scan(cal.a, n, d).density; };
    double lo = 0.0, hi = 0.5;
    for (int it = 0; it < 44; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (density_at(mid) >= mid) lo = mid;
      else hi = mid;
    }
    cal.delta_star = 0.95 * lo;
    out << "calibrate: fixed point at n=512 is " << lo << ", delta_star = " << cal.delta_star
        << "\n";
  }

  // K0: max residual / raw-budget ratio over the n = 256 grid, x2 margin.
  {
    double worst = 0.0;
    for (const double a : {0.3, 0.5, 0.7}) {
      const auto geo = main_lemma_geometry(a, 256);
      for (int i = 1; i <= 9; ++i) {
        const long m = geo.j_lo + (geo.j_hi - geo.j_lo) * i / 10;
        const auto bundle = make_paper_phase(a, 256, m);
        const auto sp = stationary_phase(bundle, 1.0);
        const auto q = oscillatory_quadrature(bundle.F, bundle.A, bundle.B, 1e-10);
        worst = std::max(worst, std::abs(q.value - sp.approx) / sp.raw_budget);
      }
    }
    cal.K0 = 2.0 * worst;
    out << "calibrate: worst residual/raw-budget ratio " << worst << ", K0 = " << cal.K0 << "\n";
  }

  // K_laguerre: remainder ratio at n = 50 over m in [n/4, 4n], x2 margin.
  {
    const long n = 50;
    const auto col = column_singular_inner(n, 4 * n);
    double worst = 0.0;
    for (long m = n / 4; m <= 4 * n; ++m) {
      const double dev = std::abs(col.a[m].real() - laguerre_main_term(n, m));
      worst = std::max(worst, dev / (std::sqrt(double(n)) * std::pow(double(m), -1.25)));
    }
    cal.K_laguerre = 2.0 * worst;
    out << "calibrate: worst Laguerre remainder ratio " << worst
        << ", K_laguerre = " << cal.K_laguerre << "\n";
  }

  // column-ratio growth floor for the divergence witness (97% of measured).
  {
    const auto beta = WeightSequence::make(WeightFamily::Thm32, 0.0, 1 << 14);
    const auto phi = SymbolSpec::mobius(0.5);
    const double growth = column_norm_ratio(phi, beta, 721) / column_norm_ratio(phi, beta, 121);
    cal.ratio_growth_min = 0.97 * growth;
    out << "calibrate: measured column-ratio growth " << growth
        << ", floor = " << cal.ratio_growth_min << "\n";
  }

  cal.provenance =
      "delta_star: 0.95 x the largest d with E-set density(d) >= d at (a=0.5, n=512); "
      "K0: 2 x the max residual/(1/(eta l2)+eta^4 l3) over a in {0.3,0.5,0.7}, deciles of J_n, "
      "n=256; K_laguerre: 2 x the max |c_m(n)-M_m(n)|/(sqrt(n) m^-5/4) at n=50, m in [13,200]; "
      "ratio_growth_min: 0.97 x the measured ratio(721)/ratio(121) for thm32 + mobius(0.5). "
      "Reproduce with `h2beta calibrate`.";
  return cal;
}

}  // namespace h2beta
