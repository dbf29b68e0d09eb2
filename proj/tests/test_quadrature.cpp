#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "h2beta/asymptotics.hpp"
#include "h2beta/quadrature.hpp"
#include "h2beta/symbols.hpp"

using namespace h2beta;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("adaptive GK15 basics") {
  CHECK(adaptive_gk15([](double t) { return t * t * t * t; }, 0, 1, 1e-12).value ==
        Approx(0.2).epsilon(1e-12));
  CHECK(adaptive_gk15([](double t) { return std::sin(t); }, kPi, 2 * kPi, 1e-12).value ==
        Approx(-2.0).epsilon(1e-12));
  // a spiky integrand: int_0^1 1/sqrt(t + 1e-6) dt
  const double expect = 2.0 * (std::sqrt(1.0 + 1e-6) - std::sqrt(1e-6));
  const auto r = adaptive_gk15([](double t) { return 1.0 / std::sqrt(t + 1e-6); }, 0, 1, 1e-10);
  CHECK(r.converged);
  CHECK(r.value == Approx(expect).epsilon(1e-9));
}

TEST_CASE("oscillatory quadrature: constant and full-turn phases") {
  const auto r0 = oscillatory_quadrature([](double) { return 0.0; }, 0.0, 1.0, 1e-12);
  CHECK(std::abs(r0.value - cplx(1.0, 0.0)) < 1e-12);
  const auto r1 = oscillatory_quadrature([](double x) { return x; }, 0.0, 2.0 * kPi, 1e-12);
  CHECK(std::abs(r1.value) < 1e-12);
}

TEST_CASE("oscillatory quadrature: linear phase closed form") {
  for (const double lam : {3.0, 17.0, 145.5}) {
    const auto r = oscillatory_quadrature([lam](double x) { return lam * x; }, 0.2, 1.7, 1e-12);
    const cplx expect = (std::polar(1.0, lam * 1.7) - std::polar(1.0, lam * 0.2)) / cplx(0, lam);
    CHECK(std::abs(r.value - expect) < 1e-11);
    // the linear-phase modulus bound 2/lambda
    CHECK(std::abs(r.value) <= 2.0 / lam + 1e-12);
  }
}

TEST_CASE("Fresnel bracket holds for every T >= 10 on the grid") {
  const cplx target = std::sqrt(kPi) * std::polar(1.0, kPi / 4.0);
  for (const double T : {10.0, 40.0, 160.0, 640.0, 2560.0}) {
    const cplx p = fresnel_partial(T, 1e-10);
    CHECK(std::abs(p - target) <= fresnel_tail_bound(T));
  }
}

TEST_CASE("Fresnel constant to 1e-6 with the refined tail") {
  const cplx target = std::sqrt(kPi) * std::polar(1.0, kPi / 4.0);
  const cplx v = fresnel_refined(1000.0, 1e-9);
  CHECK(std::abs(v - target) <= 1e-6);
}

TEST_CASE("van der Corput endpoint bound") {
  CHECK(vdc_endpoint_bound(4.0) == Approx(0.5));
  CHECK(vdc_endpoint_bound(-10.0) == Approx(0.2));
  CHECK_THROWS(vdc_endpoint_bound(0.0));
  // lambda -> infinity kills the bound
  CHECK(vdc_endpoint_bound(1e9) < 1e-8);

  // paper phase on [0, x_m - eta]: the bound dominates the quadrature value
  const double a = 0.5;
  const long n = 256;
  const auto geo = main_lemma_geometry(a, n);
  const long m = (geo.j_lo + geo.j_hi) / 2;
  const auto bundle = make_paper_phase(a, n, m);
  const double edge = bundle.c - bundle.eta;
  const auto q = oscillatory_quadrature(bundle.F, 0.0, edge, 1e-10);
  const double bound = vdc_endpoint_bound(bundle.dF(edge));
  CHECK(std::abs(q.value) <= bound + 1e-9);
}
