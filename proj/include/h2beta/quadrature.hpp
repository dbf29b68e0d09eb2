#pragma once

#include <complex>
#include <functional>

#include "h2beta/fft.hpp"

namespace h2beta {

struct QuadResult {
  double value = 0.0;
  double error_est = 0.0;
  bool converged = false;
  long panels = 0;
};

struct OscQuadResult {
  cplx value{0.0, 0.0};
  double error_est = 0.0;
  bool converged = false;
  long panels = 0;
};

/// Adaptive Gauss(7)/Kronrod(15) integration of f over [a, b] to absolute
/// tolerance tol. Bisects panels whose Kronrod-Gauss discrepancy exceeds the
/// per-length share of tol; gives up (converged = false) at max_panels.
QuadResult adaptive_gk15(const std::function<double(double)>& f, double a, double b, double tol,
                         long max_panels = 4000);

/// Integral of exp(i F(x)) over [a, b]. Panels are first subdivided until the
/// local phase increment is at most pi/4, then refined by the GK15 error
/// estimate until the absolute tolerance is met.
OscQuadResult oscillatory_quadrature(const std::function<double(double)>& F, double a, double b,
                                     double tol, long max_panels = 200000);

/// Fresnel integral int_0^T exp(it)/sqrt(t) dt (substituted to remove the
/// endpoint singularity), its 2/sqrt(T) tail bound, and the tail-refined
/// value with a two-term integration-by-parts correction whose remainder
/// is below (3/4) T^(-5/2).
cplx fresnel_partial(double T, double tol);
double fresnel_tail_bound(double T);
cplx fresnel_refined(double T, double tol);

}  // namespace h2beta
