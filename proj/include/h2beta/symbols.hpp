#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "h2beta/fft.hpp"

namespace h2beta {

struct SymbolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SymbolKind { Mobius, Rotation, SingularInner, Monomial, TestSymbol, Custom };

// Analytic self-maps of the disk from the catalog:
//   mobius(a)         T_a(z) = (a + z)/(1 + conj(a) z),   |a| < 1
//   rotation(theta)   z -> exp(i theta) z
//   inner(a)          I_a(z) = exp(-a (1+z)/(1-z)),       a > 0
//   monomial(k)       z -> z^k,                           k >= 1
//   test(m,n)         z -> z ((1 + z^{m-n})/2)^{1/n},     m > n >= 1
//   custom(c_1..c_d)  z -> sum c_k z^k with sum |c_k| <= 1 enforced
class SymbolSpec {
 public:
  static SymbolSpec mobius(cplx a);
  static SymbolSpec rotation(double theta);
  static SymbolSpec singular_inner(double a);
  static SymbolSpec monomial(long k);
  static SymbolSpec test_symbol(long m, long n);
  static SymbolSpec custom(std::vector<cplx> coeffs);
  /// Parse "mobius:a=0.5", "rotation:theta=1.2", "inner:a=1", "monomial:k=2",
  /// "test:m=7,n=3", "custom:0.5,0,0.25".
  static SymbolSpec parse(const std::string& s);

  SymbolKind kind() const { return kind_; }
  std::string str() const;

  cplx eval(cplx z) const;
  bool fixes_origin() const;
  bool inner() const;
  bool real_coefficients() const;

  /// sup_{|z|=r} |phi(z)| by grid search plus golden-section refinement;
  /// closed forms exist for mobius (real a) / rotation / monomial and the
  /// grid path is cross-checked against them in the tests.
  double sup_modulus(double r, int grid = 256) const;

  /// Taylor coefficients of phi itself up to degree M, with certified l1/l2
  /// tail bounds for the dropped indices. The singular inner variant samples
  /// the function on the circle of radius 1 - 1/(2(M+1)) and carries the
  /// sup-norm aliasing certificate (it has no geometric tail).
  struct Series {
    std::vector<cplx> c;
    double l1_tail = 0.0;
    double l2_tail = 0.0;
    double entry_err = 0.0;  // uniform per-entry defect (circle sampling only)
  };
  Series taylor(std::size_t M) const;

  cplx mobius_a() const { return a_; }
  double inner_a() const { return p_; }
  double theta() const { return p_; }
  long monomial_k() const { return k_; }
  long test_m() const { return m_; }
  long test_n() const { return k_; }
  const std::vector<cplx>& custom_coeffs() const { return custom_; }

 private:
  SymbolKind kind_ = SymbolKind::Rotation;
  cplx a_{0.0, 0.0};
  double p_ = 0.0;
  long k_ = 0, m_ = 0;
  std::vector<cplx> custom_;
};

// --- Mobius phase / Poisson machinery (real parameter a in (0,1)) ---

/// a * b = (a+b)/(1+ab), the parameter of T_a o T_b.
double mobius_param_compose(double a, double b);

/// Poisson kernel at -a: P_{-a}(x) = (1-a^2)/(1+2a cos x+a^2), and derivatives.
double poisson_eval(double a, double x);
double poisson_deriv(double a, double x);
double poisson_deriv2(double a, double x);

/// Boundary phase h_a(x) with T_a(e^{ix}) = e^{i h_a(x)}, h_a' = P_{-a},
/// h_a(0) = 0. Closed form (cross-validated against quadrature in the tests);
/// the tol parameter is the contract bound on the evaluation error.
double phase_eval(double a, double x, double tol = 1e-12);

/// rho with sup_{|z|=r}|T_a(z)| = r^rho, r in (0,1).
double rho_exponent(double a, double r);

struct MobiusGeometry {
  double a = 0.0;
  double tau = 0.0;  // (1+a)/(1-a)
  double mu = 0.0;   // (1 - 1/tau)/3
  long j_lo = 0;     // ceil((1-2mu) n)
  long j_hi = 0;     // floor((1-mu) n)
};
MobiusGeometry main_lemma_geometry(double a, long n);

/// Unique x in (0, pi) with n P_{-a}(x) = m, by bisection to 1e-13.
/// Requires m/n in (1/tau, tau); throws otherwise.
double critical_point(double a, long m, long n);

}  // namespace h2beta
