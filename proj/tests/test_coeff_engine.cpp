#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>

#include "h2beta/coeff_engine.hpp"
#include "h2beta/series.hpp"

using namespace h2beta;
using doctest::Approx;

TEST_CASE("mobius column n = 1 matches the geometric expansion") {
  const auto col = column_series_power(SymbolSpec::mobius(0.5), 1, 16);
  CHECK(col.a[0].real() == Approx(0.5).epsilon(1e-15));
  CHECK(col.a[1].real() == Approx(0.75).epsilon(1e-15));
  CHECK(col.a[2].real() == Approx(-0.375).epsilon(1e-15));
}

TEST_CASE("rotation and monomial columns are single unimodular entries") {
  const auto rot = column_series_power(SymbolSpec::rotation(0.9), 5, 16);
  for (long m = 0; m <= 16; ++m) {
    if (m == 5) CHECK(std::abs(rot.a[m] - std::polar(1.0, 4.5)) < 1e-14);
    else CHECK(std::abs(rot.a[m]) == 0.0);
  }
  const auto mono = column_series_power(SymbolSpec::monomial(2), 3, 16);
  for (long m = 0; m <= 16; ++m) {
    if (m == 6) CHECK(mono.a[m].real() == Approx(1.0));
    else CHECK(std::abs(mono.a[m]) == 0.0);
  }
  // the fft route recovers the unimodular entry to 1e-14
  const auto rot_fft = column_circle_fft(SymbolSpec::rotation(0.9), 5, 16, 1.0, 256);
  CHECK(std::abs(rot_fft.a[5] - std::polar(1.0, 4.5)) < 1e-14);
}

TEST_CASE("series and fft columns agree (oracle vs oracle)") {
  const auto phi = SymbolSpec::mobius(0.5);
  const auto s = column_series_power(phi, 64, 512);
  const auto f = column_circle_fft(phi, 64, 512, 1.0, 2048);
  double diff = 0.0;
  for (long m = 0; m <= 512; ++m) diff = std::max(diff, std::abs(s.a[m] - f.a[m]));
  CHECK(diff <= 1e-10);
}

TEST_CASE("fft columns of real symbols have negligible imaginary parts") {
  const auto f = column_circle_fft(SymbolSpec::mobius(0.7), 32, 256, 1.0, 1024);
  double worst = 0.0;
  for (const auto& v : f.a) worst = std::max(worst, std::abs(v.imag()));
  CHECK(worst <= 1e-12);
}

TEST_CASE("fft grid and radius preconditions") {
  const auto phi = SymbolSpec::mobius(0.5);
  CHECK_THROWS_AS(column_circle_fft(phi, 4, 64, 1.0, 100), SymbolError);   // not a power of two
  CHECK_THROWS_AS(column_circle_fft(phi, 4, 64, 1.0, 128), SymbolError);   // below 4M
  CHECK_THROWS_AS(column_circle_fft(SymbolSpec::singular_inner(1.0), 2, 64, 1.0, 512),
                  SymbolError);  // inner needs r < 1
  CHECK_THROWS_AS(column_circle_fft(phi, 4, 100000, 0.001, 1 << 19), SymbolError);  // range
}

TEST_CASE("parseval within the certified truncation for mobius powers") {
  for (const double a : {0.3, 0.7}) {
    const auto phi = SymbolSpec::mobius(a);
    for (const long n : {1L, 32L}) {
      const long M = default_truncation(phi, n);
      const auto col = column_series_power(phi, n, M);
      double s = 0.0;
      for (const auto& v : col.a) s += std::norm(v);
      CHECK(std::abs(s - 1.0) <= col.trunc_error + 1e-9);
    }
  }
}

TEST_CASE("strict lower triangularity is exact for origin-fixing symbols") {
  const auto cols = columns_series_prefix(SymbolSpec::test_symbol(5, 2), 9, 64);
  for (const auto& col : cols)
    for (long m = 0; m < col.n; ++m) CHECK(std::abs(col.a[m]) == 0.0);
  const auto mono = column_series_power(SymbolSpec::monomial(3), 7, 64);
  for (long m = 0; m < 21; ++m) CHECK(std::abs(mono.a[m]) == 0.0);
}

TEST_CASE("test symbol power n0 is exactly (e_n + e_m)/2") {
  const long m0 = 7, n0 = 3;
  const auto col = column_series_power(SymbolSpec::test_symbol(m0, n0), n0, 32);
  for (long m = 0; m <= 32; ++m) {
    if (m == n0 || m == m0) CHECK(col.a[m].real() == Approx(0.5).epsilon(1e-12));
    else CHECK(std::abs(col.a[m]) < 1e-15);
  }
}

TEST_CASE("group-law consistency of the coefficient maps") {
  // column of T_{a*b} at n=1 vs the composition sum_k c_k(T_a) column_k(T_b)
  const double a = 0.4, b = 0.35;
  const long M = 256;
  const auto comp = column_series_power(SymbolSpec::mobius(mobius_param_compose(a, b)), 1, M);
  const auto ta = SymbolSpec::mobius(a).taylor(M);
  const auto tb_cols = columns_series_prefix(SymbolSpec::mobius(b), 180, M);
  std::vector<cplx> acc(M + 1, cplx(0, 0));
  for (long k = 0; k <= 180; ++k)
    for (long m = 0; m <= M; ++m) acc[m] += ta.c[k] * tb_cols[k].a[m];
  double diff = 0.0;
  for (long m = 0; m <= M; ++m) diff = std::max(diff, std::abs(acc[m] - comp.a[m]));
  CHECK(diff <= 1e-10);
}

TEST_CASE("singular inner column: explicit values and cross-validation") {
  const auto col = column_singular_inner(5, 2048);
  CHECK(col.a[0].real() == Approx(std::exp(-5.0)).epsilon(1e-13));
  CHECK(col.a[1].real() == Approx(-10.0 * std::exp(-5.0)).epsilon(1e-13));
  CHECK(col.flagged.empty());
  // parseval approaches 1 from below at the envelope rate
  double s = 0.0;
  for (const auto& v : col.a) s += std::norm(v);
  CHECK(std::abs(s - 1.0) <= col.trunc_error + 1e-9);
  CHECK(s < 1.0);
}

TEST_CASE("oscillatory route agrees with the Laguerre recurrence") {
  const auto col1 = column_singular_inner(1, 64, false);
  CHECK(singular_inner_coeff_osc(1, 0, 1e-8) == Approx(col1.a[0].real()).epsilon(1e-5));
  CHECK(singular_inner_coeff_osc(1, 5, 1e-8) == Approx(col1.a[5].real()).epsilon(1e-5));
  const auto col5 = column_singular_inner(5, 64, false);
  CHECK(singular_inner_coeff_osc(5, 17, 1e-8) == Approx(col5.a[17].real()).epsilon(1e-4));
}

TEST_CASE("cauchy bound check") {
  const double a = 0.5;
  const auto col = column_series_power(SymbolSpec::mobius(a), 64, 512);
  const auto rep = cauchy_bound_check(a, 1.0, col);
  CHECK(rep.pass);
  CHECK(rep.violating_m.empty());
  // n = 0: the single entry 1 meets the bound exactly
  const auto col0 = column_series_power(SymbolSpec::mobius(a), 0, 8);
  CHECK(cauchy_bound_check(a, 1.0, col0).pass);
}

TEST_CASE("lower-triangular bound check") {
  const auto mono = column_series_power(SymbolSpec::monomial(2), 6, 64);
  CHECK(lower_triangular_bound_check(SymbolSpec::monomial(2), mono).pass);

  const auto ts = SymbolSpec::test_symbol(7, 3);
  const auto tcol = column_series_power(ts, 3, 64);
  CHECK(lower_triangular_bound_check(ts, tcol).pass);

  // custom z/2: hat(phi^n)(m) = 2^{-n} delta_{m,n}
  const auto half = SymbolSpec::custom({cplx(0, 0), cplx(0.5, 0)});
  const auto hcol = column_series_power(half, 6, 32);
  CHECK(hcol.a[6].real() == Approx(std::pow(0.5, 6.0)));
  CHECK(lower_triangular_bound_check(half, hcol).pass);

  // rotations have |phi'(0)| = 1: inapplicable
  const auto rot = column_series_power(SymbolSpec::rotation(0.3), 2, 16);
  CHECK_THROWS_AS(lower_triangular_bound_check(SymbolSpec::rotation(0.3), rot), SymbolError);
}

TEST_CASE("default truncation hits the 1e-12 tail target") {
  const auto phi = SymbolSpec::mobius(0.7);
  const long M = default_truncation(phi, 64);
  CHECK(column_tail_l2(phi, 64, M) < 1e-12);
  CHECK(column_tail_l2(phi, 64, M / 2) >= 1e-12);
  CHECK_THROWS_AS(default_truncation(SymbolSpec::singular_inner(1.0), 4), SymbolError);
}

TEST_CASE("binary cache round-trips") {
  const auto col = column_series_power(SymbolSpec::mobius(0.5), 9, 33);
  const std::string path = "h2beta_cache_test.bin";
  write_column_cache(path, "mobius:a=0.5", col);
  std::string sym;
  const auto back = read_column_cache(path, &sym);
  CHECK(sym == "mobius:a=0.5");
  CHECK(back.n == col.n);
  CHECK(back.M() == col.M());
  CHECK(back.method == col.method);
  for (long m = 0; m <= col.M(); ++m) CHECK(back.a[m] == col.a[m]);
  std::remove(path.c_str());
}
