#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "h2beta/quadrature.hpp"
#include "h2beta/symbols.hpp"

using namespace h2beta;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("mobius fixed points and evaluation") {
  const auto T = SymbolSpec::mobius(0.5);
  CHECK(std::abs(T.eval(cplx(0.0, 0.0)) - cplx(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(T.eval(cplx(-0.5, 0.0))) < 1e-15);
  CHECK_THROWS_AS(SymbolSpec::mobius(cplx(1.0, 0.2)), SymbolError);
}

TEST_CASE("singular inner at the origin and the singularity") {
  const auto I = SymbolSpec::singular_inner(1.0);
  CHECK(std::abs(I.eval(cplx(0.0, 0.0)) - std::exp(-1.0)) < 1e-15);
  CHECK_THROWS_AS(I.eval(cplx(1.0, 0.0)), SymbolError);
}

TEST_CASE("unimodularity of the singular inner boundary values") {
  const auto I = SymbolSpec::singular_inner(1.0);
  for (int j = 1; j <= 512; ++j) {
    const double x = 1e-3 + (kPi - 1e-3) * double(j) / 512.0;
    for (const double s : {1.0, -1.0})
      CHECK(std::abs(std::abs(I.eval(std::polar(1.0, s * x))) - 1.0) <= 1e-12);
  }
}

TEST_CASE("parameter composition") {
  CHECK(mobius_param_compose(0.0, 0.37) == Approx(0.37));
  CHECK(mobius_param_compose(0.5, 0.5) == Approx(0.8));
  CHECK(mobius_param_compose(0.3, -0.3) == Approx(0.0));
}

TEST_CASE("group law: T_a o T_b = T_{a*b} pointwise") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> par(-0.95, 0.95);
  std::uniform_real_distribution<double> rad(0.0, 0.99);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const double a = par(rng), b = par(rng);
    const auto Ta = SymbolSpec::mobius(a), Tb = SymbolSpec::mobius(b);
    const auto Tc = SymbolSpec::mobius(mobius_param_compose(a, b));
    for (int k = 0; k < 100; ++k) {
      const cplx z = std::polar(rad(rng), ang(rng));
      worst = std::max(worst, std::abs(Ta.eval(Tb.eval(z)) - Tc.eval(z)));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("poisson kernel values and normalization") {
  CHECK(poisson_eval(0.5, 0.0) == Approx(1.0 / 3.0));
  CHECK(poisson_eval(0.5, kPi) == Approx(3.0));
  CHECK(poisson_eval(0.5, 0.7) == Approx(poisson_eval(0.5, -0.7)));  // even
  for (const double a : {0.3, 0.5, 0.7}) {
    const auto q = adaptive_gk15([a](double x) { return poisson_eval(a, x); }, -kPi, kPi, 1e-12);
    CHECK(q.value / (2.0 * kPi) == Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("poisson kernel is increasing on (0, pi): critical points unique") {
  for (const double a : {0.3, 0.5, 0.7}) {
    double prev = poisson_eval(a, 0.0);
    for (int j = 1; j <= 512; ++j) {
      const double x = kPi * double(j) / 512.0;
      const double v = poisson_eval(a, x);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("poisson derivatives match differences") {
  const double a = 0.6, h = 1e-6;
  for (const double x : {0.3, 1.0, 2.2, 3.0}) {
    const double d1 = (poisson_eval(a, x + h) - poisson_eval(a, x - h)) / (2 * h);
    const double d2 = (poisson_deriv(a, x + h) - poisson_deriv(a, x - h)) / (2 * h);
    CHECK(poisson_deriv(a, x) == Approx(d1).epsilon(1e-7));
    CHECK(poisson_deriv2(a, x) == Approx(d2).epsilon(1e-6));
  }
}

TEST_CASE("phase closed form against the quadrature oracle") {
  // the one-time cross-validation behind using the closed form in hot paths
  for (const double a : {0.3, 0.5, 0.7}) {
    for (int j = 0; j <= 16; ++j) {
      const double x = -kPi + 2.0 * kPi * double(j) / 16.0;
      const auto q = adaptive_gk15([a](double t) { return poisson_eval(a, t); }, 0.0, x, 1e-12);
      CHECK(phase_eval(a, x) == Approx(q.value).epsilon(1e-10));
    }
  }
  CHECK(phase_eval(0.5, 0.0) == Approx(0.0));
  CHECK(phase_eval(0.5, kPi) == Approx(kPi));
  CHECK(phase_eval(0.5, -1.1) == Approx(-phase_eval(0.5, 1.1)));
  // frozen value, verified against the quadrature above: 2 atan(1/3)
  CHECK(phase_eval(0.5, kPi / 2.0) == Approx(0.6435011087932844).epsilon(1e-13));
}

TEST_CASE("boundary phase consistency |T_a(e^{ix}) - e^{i h_a(x)}|") {
  for (const double a : {0.3, 0.5, 0.7}) {
    const auto T = SymbolSpec::mobius(a);
    double worst = 0.0;
    for (int j = 0; j < 1024; ++j) {
      const double x = -kPi + 2.0 * kPi * double(j) / 1024.0;
      worst = std::max(worst, std::abs(T.eval(std::polar(1.0, x)) -
                                       std::polar(1.0, phase_eval(a, x))));
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("sup modulus closed forms") {
  CHECK(SymbolSpec::mobius(0.5).sup_modulus(0.5) == Approx(0.8).epsilon(1e-12));
  CHECK(SymbolSpec::rotation(1.1).sup_modulus(0.37) == Approx(0.37).epsilon(1e-12));
  CHECK(SymbolSpec::monomial(2).sup_modulus(0.5) == Approx(0.25).epsilon(1e-12));
  // grid against closed form for mobius over a parameter sweep
  for (const double a : {0.2, 0.5, 0.8})
    for (const double r : {0.2, 0.5, 0.9})
      CHECK(SymbolSpec::mobius(a).sup_modulus(r) == Approx((a + r) / (1 + a * r)).epsilon(1e-12));
}

TEST_CASE("rho exponent") {
  const double r = std::exp(-1.0);
  // frozen: M(e^-1) = (0.5 + e^-1)/(1 + 0.5 e^-1), rho = -log M
  const double M = (0.5 + r) / (1.0 + 0.5 * r);
  CHECK(M == Approx(0.7330436052454454).epsilon(1e-15));
  CHECK(rho_exponent(0.5, r) == Approx(0.31055009012619994).epsilon(1e-13));
  // two routes agree: closed form vs grid sup
  for (const double a : {0.3, 0.5, 0.7}) {
    const double by_grid = std::log(SymbolSpec::mobius(a).sup_modulus(r)) / std::log(r);
    CHECK(rho_exponent(a, r) == Approx(by_grid).epsilon(1e-12));
  }
  CHECK(rho_exponent(1e-9, 0.5) == Approx(1.0).epsilon(1e-6));  // identity limit
}

TEST_CASE("main lemma geometry") {
  const auto g = main_lemma_geometry(0.5, 900);
  CHECK(g.tau == Approx(3.0));
  CHECK(g.mu == Approx(2.0 / 9.0));
  CHECK(g.j_lo == 500);
  CHECK(g.j_hi == 700);
  const auto g2 = main_lemma_geometry(1e-8, 1000);
  CHECK(g2.mu < 1e-7);
  CHECK(g2.j_hi >= 998);  // J collapses toward n as a -> 0
  CHECK(g2.j_lo >= 998);
}

TEST_CASE("critical point") {
  CHECK(critical_point(0.5, 300, 300) == Approx(2.0 * kPi / 3.0).epsilon(1e-12));
  // m/n = 2/3: arccos(-1/8), frozen after bisection agreed with the arccos form
  CHECK(critical_point(0.5, 200, 300) == Approx(1.696124157962962).epsilon(1e-12));
  const double ar = std::acos(1.5 * 0.75 - 1.25);
  CHECK(critical_point(0.5, 200, 300) == Approx(ar).epsilon(1e-12));
  // boundary behavior: m/n near tau pushes the root to pi, near 1/tau to 0
  CHECK(critical_point(0.5, 290, 100) > 3.0);
  CHECK(critical_point(0.5, 3340, 10000) < 0.2);
  CHECK_THROWS_AS(critical_point(0.5, 301, 100), SymbolError);
}

TEST_CASE("symbol parsing") {
  CHECK(SymbolSpec::parse("mobius:a=0.5").kind() == SymbolKind::Mobius);
  CHECK(SymbolSpec::parse("inner:a=1").inner());
  CHECK(SymbolSpec::parse("test:m=7,n=3").test_m() == 7);
  CHECK(SymbolSpec::parse("monomial:k=2").monomial_k() == 2);
  CHECK_THROWS_AS(SymbolSpec::parse("blaschke:a=1"), SymbolError);
}

TEST_CASE("custom symbols enforce the l1 certificate") {
  CHECK_NOTHROW(SymbolSpec::custom({cplx(0, 0), cplx(0.5, 0), cplx(0.5, 0)}));
  CHECK_THROWS_AS(SymbolSpec::custom({cplx(0, 0), cplx(0.8, 0), cplx(0.4, 0)}), SymbolError);
}

TEST_CASE("test symbol maps the disk into itself") {
  const auto phi = SymbolSpec::test_symbol(7, 3);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> rad(0.0, 0.999), ang(0.0, 2 * kPi);
  for (int t = 0; t < 2000; ++t) {
    const cplx z = std::polar(rad(rng), ang(rng));
    CHECK(std::abs(phi.eval(z)) < 1.0);
  }
}

TEST_CASE("taylor series tails are certified") {
  const auto s = SymbolSpec::mobius(0.5).taylor(64);
  CHECK(s.c[0] == cplx(0.5, 0.0));
  CHECK(s.c[1].real() == Approx(0.75));
  CHECK(s.c[2].real() == Approx(-0.375));
  // the certificate really does bound the dropped l1 mass (geometric sum)
  double dropped = 0.0;
  const auto big = SymbolSpec::mobius(0.5).taylor(256);
  for (std::size_t k = 65; k <= 256; ++k) dropped += std::abs(big.c[k]);
  CHECK(dropped <= s.l1_tail);
}
