#include "h2beta/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace h2beta {
namespace {

// QUADPACK dqk15 nodes/weights (positive half; node 7 is the midpoint).
constexpr double xgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                           0.741531185599394, 0.586087235467691, 0.405845151377397,
                           0.207784955007898, 0.000000000000000};
constexpr double wgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                           0.140653259715525, 0.169004726639267, 0.190350578064785,
                           0.204432940075298, 0.209482141084728};
constexpr double wg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                          0.417959183673469};

template <class T, class F>
void gk15_panel(const F& f, double a, double b, T& kronrod, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T resk = wgk[7] * f(c);
  T resg = wg[3] * f(c);
  for (int i = 0; i < 7; ++i) {
    const T f1 = f(c - h * xgk[i]);
    const T f2 = f(c + h * xgk[i]);
    resk += wgk[i] * (f1 + f2);
    if (i % 2 == 1) resg += wg[i / 2] * (f1 + f2);
  }
  kronrod = resk * h;
  err = std::abs((resk - resg) * h);
}

struct Panel {
  double a, b;
};

}  // namespace

QuadResult adaptive_gk15(const std::function<double(double)>& f, double a, double b, double tol,
                         long max_panels) {
  QuadResult res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  const double total = std::abs(b - a);
  std::vector<Panel> stack{{a, b}};
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    double v, e;
    gk15_panel<double>(f, p.a, p.b, v, e);
    const double share = tol * std::abs(p.b - p.a) / total;
    const double w = std::abs(p.b - p.a);
    if (e <= share || w < 1e-14 * total || res.panels >= max_panels) {
      res.value += v;
      res.error_est += e;
      ++res.panels;
    } else {
      const double m = 0.5 * (p.a + p.b);
      stack.push_back({p.a, m});
      stack.push_back({m, p.b});
    }
  }
  res.converged = res.error_est <= tol;
  return res;
}

OscQuadResult oscillatory_quadrature(const std::function<double(double)>& F, double a, double b,
                                     double tol, long max_panels) {
  OscQuadResult res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  const double total = std::abs(b - a);
  auto integrand = [&](double x) { return std::polar(1.0, F(x)); };
  std::vector<Panel> stack{{a, b}};
  long processed = 0;
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    const double dphi = std::abs(F(m) - F(p.a)) + std::abs(F(p.b) - F(m));
    const double w = std::abs(p.b - p.a);
    const bool tiny = w < 1e-14 * total;
    if (processed + long(stack.size()) >= max_panels) {
      // budget exhausted: integrate what is left without further splits
      cplx v;
      double e;
      gk15_panel<cplx>(integrand, p.a, p.b, v, e);
      res.value += v;
      res.error_est += e;
      ++processed;
      continue;
    }
    if (dphi > std::numbers::pi / 4.0 && !tiny) {
      stack.push_back({p.a, m});
      stack.push_back({m, p.b});
      continue;
    }
    cplx v;
    double e;
    gk15_panel<cplx>(integrand, p.a, p.b, v, e);
    if (e <= tol * w / total || tiny) {
      res.value += v;
      res.error_est += e;
      ++processed;
    } else {
      stack.push_back({p.a, m});
      stack.push_back({m, p.b});
    }
  }
  res.panels = processed;
  res.converged = res.error_est <= tol;
  return res;
}

cplx fresnel_partial(double T, double tol) {
  if (T <= 0.0) return {0.0, 0.0};
  // t = u^2 removes the 1/sqrt(t) singularity: integral = 2 int_0^sqrt(T) e^{iu^2} du
  const auto r = oscillatory_quadrature([](double u) { return u * u; }, 0.0, std::sqrt(T), tol);
  return 2.0 * r.value;
}

double fresnel_tail_bound(double T) { return 2.0 / std::sqrt(T); }

cplx fresnel_refined(double T, double tol) {
  // int_T^inf e^{it} t^{-1/2} dt = i e^{iT} T^{-1/2} + (1/2) e^{iT} T^{-3/2} - (3/4) J3,
  // |J3| <= 2 T^{-5/2}: the two explicit terms leave a remainder below (3/2) T^{-5/2}.
  const cplx eiT = std::polar(1.0, T);
  const cplx tail = cplx(0.0, 1.0) * eiT / std::sqrt(T) + 0.5 * eiT * std::pow(T, -1.5);
  return fresnel_partial(T, tol) + tail;
}

}  // namespace h2beta
