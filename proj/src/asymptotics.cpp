#include "h2beta/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "h2beta/coeff_engine.hpp"

namespace h2beta {
namespace {

constexpr double kPi = std::numbers::pi;

double golden_min(const std::function<double(double)>& f, double a, double b, int iters = 120) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 > f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    }
  }
  return std::min(f1, f2);
}

// min of f over [a, b]: coarse grid, then golden-section around the best cell
double grid_min(const std::function<double(double)>& f, double a, double b, int grid = 257) {
  double best = f(a);
  int besti = 0;
  for (int i = 1; i < grid; ++i) {
    const double x = a + (b - a) * double(i) / double(grid - 1);
    const double v = f(x);
    if (v < best) {
      best = v;
      besti = i;
    }
  }
  const double h = (b - a) / double(grid - 1);
  const double lo = std::max(a, a + h * (besti - 1)), hi = std::min(b, a + h * (besti + 1));
  return std::min(best, golden_min(f, lo, hi));
}

double grid_max(const std::function<double(double)>& f, double a, double b, int grid = 257) {
  return -grid_min([&](double x) { return -f(x); }, a, b, grid);
}

}  // namespace

void PhaseBundle::validate() const {
  if (!(lambda2 > 0.0)) throw std::invalid_argument("phase bundle: lambda2 must be positive");
  if (!(eta > 0.0)) throw std::invalid_argument("phase bundle: eta must be positive");
  if (c - eta < A - 1e-12 || c + eta > B + 1e-12)
    throw std::invalid_argument("phase bundle: [c-eta, c+eta] not inside [A, B]");
  if (std::abs(dF(c)) > 1e-12 * std::max(1.0, std::abs(d2F(c)) * (B - A)))
    throw std::invalid_argument("phase bundle: F'(c) != 0");
  for (int i = 0; i <= 16; ++i) {
    const double x = (c - eta) + 2.0 * eta * double(i) / 16.0;
    if (d2F(x) < lambda2 * (1.0 - 1e-9))
      throw std::invalid_argument("phase bundle: F'' dips below lambda2 on the eta-window");
  }
  for (int i = 0; i <= 32; ++i) {
    const double x = A + (B - A) * double(i) / 32.0;
    if (std::abs(d3F(x)) > lambda3 * (1.0 + 1e-9))
      throw std::invalid_argument("phase bundle: |F'''| exceeds lambda3");
  }
  // finite-difference consistency: central differences of F are O(step^2)
  // accurate, so against the supplied evaluators the defect must drop by
  // ~4x when the step halves (until the roundoff floor). The step is kept
  // large enough that truncation dominates roundoff even for the h^3 stencil.
  const double h = 1e-2 * (B - A);
  const double x0 = std::clamp(c + 0.3 * eta, A + 4 * h, B - 4 * h);
  double fmag = 1.0;
  for (int k = -2; k <= 2; ++k) fmag = std::max(fmag, std::abs(F(x0 + k * h)));
  auto fd1 = [&](double s) { return (F(x0 + s) - F(x0 - s)) / (2.0 * s); };
  auto fd2 = [&](double s) { return (F(x0 + s) - 2.0 * F(x0) + F(x0 - s)) / (s * s); };
  auto fd3 = [&](double s) {
    return (F(x0 + 2 * s) - 2.0 * F(x0 + s) + 2.0 * F(x0 - s) - F(x0 - 2 * s)) / (2.0 * s * s * s);
  };
  const double eps = 2.3e-16;
  auto order_ok = [&](double eh, double eh_half, double floor_half) {
    return eh_half <= 0.35 * eh + 16.0 * floor_half;
  };
  const double hh = 0.5 * h;
  const bool ok1 = order_ok(std::abs(fd1(h) - dF(x0)), std::abs(fd1(hh) - dF(x0)),
                            eps * fmag / hh),
             ok2 = order_ok(std::abs(fd2(h) - d2F(x0)), std::abs(fd2(hh) - d2F(x0)),
                            eps * fmag / (hh * hh)),
             ok3 = order_ok(std::abs(fd3(h) - d3F(x0)), std::abs(fd3(hh) - d3F(x0)),
                            eps * fmag / (hh * hh * hh));
  if (!ok1 || !ok2 || !ok3)
    throw std::invalid_argument("phase bundle: derivative evaluators disagree with differences");
}

PhaseBundle make_phase_bundle(std::function<double(double)> F, std::function<double(double)> dF,
                              std::function<double(double)> d2F, std::function<double(double)> d3F,
                              double A, double B, double c) {
  PhaseBundle b;
  b.F = std::move(F);
  b.dF = std::move(dF);
  b.d2F = std::move(d2F);
  b.d3F = std::move(d3F);
  b.A = A;
  b.B = B;
  b.c = c;
  b.lambda3 = grid_max([&](double x) { return std::abs(b.d3F(x)); }, A, B, 513);
  const double eta_cap = std::min(c - A, B - c);
  if (!(b.d2F(c) > 0.0)) throw std::invalid_argument("make_phase_bundle: F''(c) <= 0");
  auto eta_from = [&](double l2) {
    const double e = (b.lambda3 > 0.0) ? std::pow(l2 * b.lambda3, -0.2)
                                       : std::numeric_limits<double>::infinity();
    return std::min(e, eta_cap);
  };
  // pass 1: provisional eta from F'' at the critical point; then refine the
  // pair (eta, lambda2) until eta stops growing. The loop only ever commits a
  // lambda2 that was measured on a window containing the final one, so the
  // stored bound stays valid.
  double eta = eta_from(b.d2F(c));
  double lam2 = 0.0;
  for (int pass = 0; pass < 50; ++pass) {
    lam2 = grid_min(b.d2F, c - eta, c + eta, 257);
    if (!(lam2 > 0.0))
      throw std::invalid_argument("make_phase_bundle: F'' not positive on the eta-window");
    const double eta_next = eta_from(lam2);
    if (eta_next <= eta * (1.0 + 1e-12)) {
      eta = eta_next;  // shrink: lam2 from the larger window still bounds F''
      break;
    }
    eta = eta_next;
  }
  b.lambda2 = lam2;
  b.eta = eta;
  b.validate();
  return b;
}

PhaseBundle make_paper_phase(double a, long n, long m) {
  const double c = critical_point(a, m, n);
  const double dn = double(n), dm = double(m);
  return make_phase_bundle(
      [a, dn, dm](double x) { return dn * phase_eval(a, x) - dm * x; },
      [a, dn, dm](double x) { return dn * poisson_eval(a, x) - dm; },
      [a, dn](double x) { return dn * poisson_deriv(a, x); },
      [a, dn](double x) { return dn * poisson_deriv2(a, x); }, 0.0, kPi, c);
}

StationaryPhaseResult stationary_phase(const PhaseBundle& b, double K0) {
  b.validate();
  StationaryPhaseResult r;
  const double f2c = b.d2F(b.c);
  r.approx = std::sqrt(2.0 * kPi / f2c) * std::polar(1.0, b.F(b.c) + kPi / 4.0);
  r.raw_budget = 1.0 / (b.eta * b.lambda2) + std::pow(b.eta, 4.0) * b.lambda3;
  r.error_budget = K0 * r.raw_budget;
  return r;
}

double vdc_endpoint_bound(double dF_at_endpoint) {
  if (dF_at_endpoint == 0.0)
    throw std::invalid_argument("vdc_endpoint_bound: F' vanishes at the endpoint");
  return 2.0 / std::abs(dF_at_endpoint);
}

ESetReport eset_scan(double a, long n, double delta_threshold) {
  if (delta_threshold < 0.0) throw std::invalid_argument("eset_scan: threshold must be >= 0");
  const auto geo = main_lemma_geometry(a, n);
  ESetReport rep;
  rep.a = a;
  rep.n = n;
  rep.j_lo = geo.j_lo;
  rep.j_hi = geo.j_hi;
  rep.mu = geo.mu;
  rep.delta_threshold = delta_threshold;

  const auto col = column_series_power(SymbolSpec::mobius(a), n, geo.j_hi);
  // series entries are exact below M up to roundoff; demand plenty of margin
  rep.column_accuracy = 1e-11;
  const double scale = delta_threshold / std::sqrt(double(n));
  if (delta_threshold > 0.0 && rep.column_accuracy > 0.01 * scale)
    throw std::runtime_error("eset_scan: column accuracy insufficient for the threshold");

  for (long m = geo.j_lo; m <= geo.j_hi; ++m)
    if (std::abs(col.a[m]) >= scale) rep.E.push_back(m);
  rep.density = double(rep.E.size()) / double(n);

  for (long m = geo.j_lo; m < geo.j_hi; ++m) {
    const double xm = critical_point(a, m, n);
    const double xm1 = critical_point(a, m + 1, n);
    const double inc =
        double(n) * (phase_eval(a, xm1) - phase_eval(a, xm)) - double(m) * (xm1 - xm);
    rep.increments.push_back(inc);
  }
  return rep;
}

double laguerre_main_term(long n, long m) {
  if (n < 1 || m < 1) throw std::invalid_argument("laguerre_main_term: n, m >= 1");
  const double c = std::pow(2.0, 0.25) / std::sqrt(kPi);
  return c * std::pow(double(n), 0.25) * std::pow(double(m), -0.75) *
         std::cos(2.0 * std::sqrt(2.0 * double(n) * double(m)) + kPi / 4.0);
}

}  // namespace h2beta
