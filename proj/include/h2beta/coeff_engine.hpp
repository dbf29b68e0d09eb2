#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "h2beta/symbols.hpp"

namespace h2beta {

enum class CoeffMethod { SeriesPower, CircleFft, Explicit };

const char* to_string(CoeffMethod m);

// One column of Taylor coefficients a_{0..M, n} of phi^n.
struct CoeffColumn {
  long n = 0;
  std::vector<cplx> a;
  CoeffMethod method = CoeffMethod::SeriesPower;
  double trunc_error = 0.0;  // bound on sum_{m > M} |a_{m,n}|^2 (plus squared entry defects)
  double radius = 1.0;       // sampling radius when method == CircleFft
  std::vector<std::uint32_t> flagged;  // entries failing cross-validation (singular inner)

  long M() const { return long(a.size()) - 1; }
  std::vector<double> real_entries() const;
};

/// phi^n by binary powering of phi's own certified series, truncation M per
/// multiply. Entries below index M are exact up to roundoff; trunc_error
/// certifies the l2 mass above M.
CoeffColumn column_series_power(const SymbolSpec& phi, long n, long M);

/// Columns 0..n_max by repeated truncated multiplication (one multiply per
/// power); the cheap path for assembling whole matrices and bound scans.
std::vector<CoeffColumn> columns_series_prefix(const SymbolSpec& phi, long n_max, long M);

/// phi^n from samples on |z| = r: a_{m,n} = DFT_m(phi^n on the circle)/r^m.
/// grid must be a power of two >= 4M. Requires phi^n analytic on |z| <= r.
CoeffColumn column_circle_fft(const SymbolSpec& phi, long n, long M, double r, std::size_t grid);

/// Coefficients of I_1^n = I_n via c_m(n) = e^{-n} L_m^{(-1)}(2n), three-term
/// recurrence with overflow rescaling. Cross-validates against the series
/// route and flags entries whose relative disagreement exceeds 1e-6.
CoeffColumn column_singular_inner(long n, long M, bool cross_validate = true);

/// Oscillatory-integral route for the same coefficients:
/// c_m(n) = (1/pi) int_{-pi/2}^{pi/2} exp[i(n cot x + 2 m x)] dx,
/// evaluated after the substitution u = cot x. Slow; used as a spot oracle.
double singular_inner_coeff_osc(long n, long m, double tol);

/// Smallest power-of-two truncation whose certified l2 tail is < 1e-12
/// (geometric-tail symbols). Inner symbols have no geometric tail; callers
/// pass M explicitly for them.
long default_truncation(const SymbolSpec& phi, long n);

/// Certified bound on sum_{m > M} |a_{m,n}|^2 for the symbol's n-th power.
double column_tail_l2(const SymbolSpec& phi, long n, long M);
/// Certified bound on sum_{m > M} |a_{m,n}| (infinite for inner symbols).
double column_tail_l1(const SymbolSpec& phi, long n, long M);

struct BoundReport {
  bool pass = true;
  long checked = 0;
  std::vector<long> violating_m;
  double worst_margin = 0.0;  // max over entries of |a| - bound (negative when all pass)
};

/// Cauchy-type bound |a_{m,n}| <= exp(-alpha (rho n - m)) for mobius(a),
/// rho = rho_exponent(a, e^{-alpha}); 1e-12 slack.
BoundReport cauchy_bound_check(double a, double alpha, const CoeffColumn& col);

/// Lemma bound for phi(0) = 0, |phi'(0)| < 1:
/// |hat(phi^n)(m)| <= exp(-[(1+rho) n - m]/2) with rho from
/// sup |phi(z)/z| = r^rho at r = e^{-1/2}; also asserts exact zeros below n.
BoundReport lower_triangular_bound_check(const SymbolSpec& phi, const CoeffColumn& col);

/// Binary cache: header (symbol string, n, M, method, complex flag) followed
/// by little-endian 8-byte floats (interleaved re/im when complex).
void write_column_cache(const std::string& path, const std::string& symbol, const CoeffColumn& col);
CoeffColumn read_column_cache(const std::string& path, std::string* symbol_out = nullptr);

}  // namespace h2beta
