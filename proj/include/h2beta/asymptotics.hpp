#pragma once

#include <functional>
#include <vector>

#include "h2beta/quadrature.hpp"
#include "h2beta/symbols.hpp"

namespace h2beta {

// Real phase on [A, B] with one interior critical point and convexity there.
// lambda2 bounds F'' from below on [c-eta, c+eta], lambda3 bounds |F'''| on
// all of [A, B]; eta = (lambda2 lambda3)^(-1/5), clamped into the interval.
struct PhaseBundle {
  std::function<double(double)> F, dF, d2F, d3F;
  double A = 0.0, B = 0.0;
  double c = 0.0;
  double eta = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;

  /// Checks the structural hypotheses: [c-eta, c+eta] inside [A, B],
  /// F'(c) ~ 0, F'' >= lambda2 on the eta-window, |F'''| <= lambda3, and
  /// finite-difference consistency of the supplied derivatives.
  void validate() const;
};

/// Builds a bundle from evaluators: two-pass eta (provisional lambda2 at c,
/// then the true minimum of F'' over the eta-window by grid + golden-section).
PhaseBundle make_phase_bundle(std::function<double(double)> F, std::function<double(double)> dF,
                              std::function<double(double)> d2F, std::function<double(double)> d3F,
                              double A, double B, double c);

/// The paper phase F(x) = n h_a(x) - m x on [0, pi]; requires m/n inside
/// (1/tau, tau) so the critical point exists.
PhaseBundle make_paper_phase(double a, long n, long m);

struct StationaryPhaseResult {
  cplx approx{0.0, 0.0};       // sqrt(2 pi / F''(c)) exp(i (F(c) + pi/4))
  double error_budget = 0.0;   // K0 (1/(eta lambda2) + eta^4 lambda3)
  double raw_budget = 0.0;     // without K0
};

StationaryPhaseResult stationary_phase(const PhaseBundle& b, double K0);

/// Endpoint bound 2/|F'| for a monotone-phase interval (van der Corput).
double vdc_endpoint_bound(double dF_at_endpoint);

struct ESetReport {
  double a = 0.0;
  long n = 0;
  long j_lo = 0, j_hi = 0;
  double mu = 0.0;
  double delta_threshold = 0.0;
  std::vector<long> E;
  double density = 0.0;                // |E| / n
  std::vector<double> increments;      // F_m(x_{m+1}) - F_m(x_m), m in [j_lo, j_hi)
  double column_accuracy = 0.0;        // per-entry defect of the scanned column
};

/// Scans J_n for entries with |a_{m,n}| >= delta_threshold n^{-1/2}, using a
/// series-power column; errors out when the column accuracy is not well below
/// the threshold scale.
ESetReport eset_scan(double a, long n, double delta_threshold);

/// Laguerre main term M_m(n) = c n^{1/4} m^{-3/4} cos(2 sqrt(2 n m) + pi/4),
/// c = pi^{-1/2} 2^{1/4}.
double laguerre_main_term(long n, long m);

}  // namespace h2beta
