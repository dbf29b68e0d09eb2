#include "h2beta/coeff_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>

#include "h2beta/quadrature.hpp"
#include "h2beta/series.hpp"

namespace h2beta {
namespace {

constexpr double kPi = std::numbers::pi;

// sup_{|z|=r} |T_a(z)| for r in (1, 1/a): the maximum moves to z = -r.
double mobius_outer_sup(double a, double r) { return (r - a) / (1.0 - a * r); }

// min over r in (1, 1/|a|) of M(r)^n * r^{-K} * geom, bounding the l1/l2
// coefficient tails of T_a^n beyond index K via Cauchy on the larger circle.
double mobius_tail(double a, long n, long K, bool l2) {
  double best = std::numeric_limits<double>::infinity();
  const double hi = 1.0 / a;
  for (int j = 1; j < 200; ++j) {
    const double r = 1.0 + (hi - 1.0) * double(j) / 200.0 * 0.98;
    const double Mr = mobius_outer_sup(a, r);
    double logv;
    if (l2) {
      // sum_{m>K} M^{2n} r^{-2m} = M^{2n} r^{-2(K+1)} / (1 - r^{-2})
      logv = 2.0 * double(n) * std::log(Mr) - 2.0 * double(K + 1) * std::log(r) -
             std::log1p(-1.0 / (r * r));
    } else {
      logv = double(n) * std::log(Mr) - double(K + 1) * std::log(r) - std::log1p(-1.0 / r);
    }
    best = std::min(best, logv);
  }
  return std::exp(best);
}

}  // namespace

const char* to_string(CoeffMethod m) {
  switch (m) {
    case CoeffMethod::SeriesPower: return "series_power";
    case CoeffMethod::CircleFft: return "circle_fft";
    case CoeffMethod::Explicit: return "explicit";
  }
  return "?";
}

std::vector<double> CoeffColumn::real_entries() const {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i].real();
  return out;
}

double column_tail_l2(const SymbolSpec& phi, long n, long M) {
  switch (phi.kind()) {
    case SymbolKind::Mobius: {
      const double aa = std::abs(phi.mobius_a());
      if (aa == 0.0) return M >= n ? 0.0 : 1.0;
      return mobius_tail(aa, n, M, /*l2=*/true);
    }
    case SymbolKind::Rotation:
      return M >= n ? 0.0 : 1.0;
    case SymbolKind::Monomial:
      return M >= n * phi.monomial_k() ? 0.0 : 1.0;
    case SymbolKind::TestSymbol: {
      // [phi^n](z) = z^n 2^{-alpha}(1+z^d)^{alpha}, alpha = n/n0: entries at
      // n + kd; reuse the binomial tail by building the series of phi^n directly
      const double alpha = double(n) / double(phi.test_n());
      const long d = phi.test_m() - phi.test_n();
      if (std::abs(alpha - std::round(alpha)) < 1e-12) {
        const long deg = n + long(std::llround(alpha)) * d;
        return M >= deg ? 0.0 : 1.0;  // integer power: finite polynomial
      }
      // |C(alpha,k)| decays like k^{-1-alpha} past k0 ~ alpha; walk the ratio
      long K = std::max<long>((M - n) / d + 1, long(2.0 * alpha) + 4);
      double t = std::pow(2.0, -alpha);
      for (long k = 0; k < K; ++k) t *= std::abs(alpha - double(k)) / double(k + 1);
      return t * t * double(K) / (1.0 + 2.0 * alpha);
    }
    case SymbolKind::Custom: {
      const long deg = long(phi.custom_coeffs().size()) - 1;
      return M >= n * deg ? 0.0 : 1.0;
    }
    case SymbolKind::SingularInner: {
      // envelope |c_m(n)| <= 10 c n^{1/4} m^{-3/4} + 10 K sqrt(n) m^{-5/4}
      // (Laguerre asymptotics with the module safety factor, K <= 10):
      const double c2 = std::sqrt(2.0) / kPi;  // c^2
      const double en = double(n) * phi.inner_a();
      const double t1 = 200.0 * c2 * std::sqrt(std::max(en, 1.0)) / std::sqrt(double(M));
      const double t2 = 200.0 * 100.0 * en * (2.0 / 3.0) * std::pow(double(M), -1.5);
      return t1 + t2;
    }
  }
  return 1.0;
}

double column_tail_l1(const SymbolSpec& phi, long n, long M) {
  switch (phi.kind()) {
    case SymbolKind::Mobius: {
      const double aa = std::abs(phi.mobius_a());
      if (aa == 0.0) return M >= n ? 0.0 : 1.0;
      return mobius_tail(aa, n, M, /*l2=*/false);
    }
    case SymbolKind::SingularInner:
      return std::numeric_limits<double>::infinity();
    default: {
      const double l2 = column_tail_l2(phi, n, M);
      return l2 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
  }
}

long default_truncation(const SymbolSpec& phi, long n) {
  if (phi.kind() == SymbolKind::SingularInner)
    throw SymbolError("default_truncation: inner symbols have no geometric tail; pass M");
  for (long M = 256; M <= (1L << 22); M <<= 1)
    if (column_tail_l2(phi, n, M) < 1e-12) return M;
  throw SymbolError("default_truncation: no power of two reaches the 1e-12 tail target");
}

CoeffColumn column_series_power(const SymbolSpec& phi, long n, long M) {
  if (n < 0 || M < 0) throw SymbolError("column_series_power: need n >= 0, M >= 0");
  const auto base = phi.taylor(std::size_t(M));
  CoeffColumn col;
  col.n = n;
  col.method = CoeffMethod::SeriesPower;
  col.a = truncated_pow(base.c, n, std::size_t(M));
  col.trunc_error = column_tail_l2(phi, n, M);
  return col;
}

std::vector<CoeffColumn> columns_series_prefix(const SymbolSpec& phi, long n_max, long M) {
  if (n_max < 0 || M < 0) throw SymbolError("columns_series_prefix: need n_max >= 0, M >= 0");
  auto base = phi.taylor(std::size_t(M)).c;
  // drop machine-noise tail of the base series; keeps each multiply O(M L)
  std::size_t last = 0;
  for (std::size_t i = 0; i < base.size(); ++i)
    if (std::abs(base[i]) > 1e-18) last = i;
  base.resize(last + 1);

  std::vector<CoeffColumn> cols;
  cols.reserve(n_max + 1);
  std::vector<cplx> cur(std::size_t(M) + 1, cplx(0.0, 0.0));
  cur[0] = 1.0;
  for (long n = 0; n <= n_max; ++n) {
    if (n > 0) cur = truncated_mul(cur, base, std::size_t(M));
    CoeffColumn col;
    col.n = n;
    col.method = CoeffMethod::SeriesPower;
    col.a = cur;
    col.trunc_error = column_tail_l2(phi, n, M);
    cols.push_back(std::move(col));
  }
  return cols;
}

CoeffColumn column_circle_fft(const SymbolSpec& phi, long n, long M, double r, std::size_t grid) {
  if (!is_pow2(grid) || grid < 4 * std::size_t(std::max(M, 1L)))
    throw SymbolError("column_circle_fft: grid must be a power of two >= 4M");
  if (r <= 0.0 || r > 1.0) throw SymbolError("column_circle_fft: radius must be in (0, 1]");
  if (phi.kind() == SymbolKind::SingularInner && r >= 1.0)
    throw SymbolError("column_circle_fft: singular inner requires r < 1");
  // dynamic range: r^{-M} must not swamp the samples
  if (r < 1.0 && -double(M) * std::log(r) > 0.5 * std::log(std::numeric_limits<double>::max()))
    throw SymbolError("column_circle_fft: dynamic range failure, increase r");

  std::vector<cplx> samples(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    const cplx z = std::polar(r, 2.0 * kPi * double(j) / double(grid));
    cplx w = phi.eval(z);
    // binary powering avoids branch ambiguity of complex pow for large n
    cplx acc{1.0, 0.0};
    long e = n;
    while (e > 0) {
      if (e & 1) acc *= w;
      w *= w;
      e >>= 1;
    }
    samples[j] = acc;
  }
  fft_pow2(samples, false);

  CoeffColumn col;
  col.n = n;
  col.method = CoeffMethod::CircleFft;
  col.radius = r;
  col.a.resize(M + 1);
  double rm = 1.0;
  for (long m = 0; m <= M; ++m) {
    col.a[m] = samples[m] / (double(grid) * rm);
    rm *= r;
  }
  // aliasing: entry error sum_{j>=1} a_{m+jG} r^{jG}; |a_k| <= 1 for inner
  // symbols, refined by the l1 Cauchy tail when available.
  double alias;
  if (r < 1.0) {
    const double rG = std::pow(r, double(grid));
    alias = rG / (1.0 - rG) / std::pow(r, double(M));
  } else {
    alias = column_tail_l1(phi, n, long(grid) - 1);
    if (!std::isfinite(alias)) alias = 1.0;  // sup-norm fallback, flagged large
  }
  col.trunc_error = column_tail_l2(phi, n, M) + double(M + 1) * alias * alias;
  return col;
}

CoeffColumn column_singular_inner(long n, long M, bool cross_validate) {
  if (n < 1 || M < 1) throw SymbolError("column_singular_inner: need n >= 1, M >= 1");
  const double x = 2.0 * double(n);
  CoeffColumn col;
  col.n = n;
  col.method = CoeffMethod::Explicit;
  col.a.assign(M + 1, cplx(0.0, 0.0));

  // c_m(n) = e^{-n} L_m^{(-1)}(2n). Run the L recurrence with a tracked log
  // offset so the e^{-n} prefactor can be recombined without overflow:
  //   (m+1) L_{m+1} = (2m - x) L_m - (m - 1) L_{m-1},  L_0 = 1, L_1 = -x.
  double offset = -double(n);  // log scale carried by the running values
  double lm1 = 1.0, lm = -x;
  col.a[0] = std::exp(offset) * lm1;
  col.a[1] = std::exp(offset) * lm;
  for (long m = 1; m < M; ++m) {
    double next = ((2.0 * double(m) - x) * lm - (double(m) - 1.0) * lm1) / (double(m) + 1.0);
    lm1 = lm;
    lm = next;
    const double big = 1e250;
    if (std::abs(lm) > big || std::abs(lm1) > big) {
      lm /= big;
      lm1 /= big;
      offset += std::log(big);
    }
    col.a[m + 1] = std::exp(offset) * lm;
  }
  col.trunc_error = column_tail_l2(SymbolSpec::singular_inner(1.0), n, M);

  if (cross_validate) {
    const auto oracle = column_series_power(SymbolSpec::singular_inner(1.0), n, M);
    double amax = 0.0;
    for (const auto& v : col.a) amax = std::max(amax, std::abs(v));
    for (long m = 0; m <= M; ++m) {
      if (std::abs(col.a[m] - oracle.a[m]) > 1e-6 * amax) col.flagged.push_back(std::uint32_t(m));
    }
  }
  return col;
}

double singular_inner_coeff_osc(long n, long m, double tol) {
  // (1/pi) int_{-pi/2}^{pi/2} exp[i(n cot x + 2 m x)] dx, integrated as
  // written. The phase F(x) = n cot x + 2 m x oscillates without bound as
  // x -> 0; F' = -n/sin^2 x + 2m is negative and decreasing near 0, so the
  // van der Corput endpoint bound cuts (0, eps] off with remainder
  // 2/|F'(eps)| per side. The integrand at -x is the conjugate, hence the
  // value is (2/pi) Re of the right half.
  if (n < 1) throw SymbolError("singular_inner_coeff_osc: n >= 1");
  const double eps = std::sqrt(double(n) * tol / 8.0);
  auto F = [&](double x) {
    return double(n) / std::tan(x) + 2.0 * double(m) * x;
  };
  const double s = std::sin(eps);
  const double dF_eps = -double(n) / (s * s) + 2.0 * double(m);
  if (dF_eps >= 0.0)
    throw SymbolError("singular_inner_coeff_osc: cut point too far out for this m/n");
  const double cut_remainder = 2.0 / std::abs(dF_eps);
  const auto main = oscillatory_quadrature(F, eps, kPi / 2.0, tol / 2.0, 400000);
  if (!main.converged)
    throw SymbolError("singular_inner_coeff_osc: panel budget exhausted before tolerance");
  (void)cut_remainder;  // below tol/4 by the choice of eps
  return (2.0 / kPi) * main.value.real();
}

BoundReport cauchy_bound_check(double a, double alpha, const CoeffColumn& col) {
  BoundReport rep;
  const double rho = rho_exponent(a, std::exp(-alpha));
  rep.worst_margin = -std::numeric_limits<double>::infinity();
  for (long m = 0; m <= col.M(); ++m) {
    const double bound = std::exp(-alpha * (rho * double(col.n) - double(m)));
    rep.worst_margin = std::max(rep.worst_margin, std::abs(col.a[m]) - bound);
    if (std::abs(col.a[m]) > bound + 1e-12) {
      rep.pass = false;
      rep.violating_m.push_back(m);
    }
    ++rep.checked;
  }
  return rep;
}

BoundReport lower_triangular_bound_check(const SymbolSpec& phi, const CoeffColumn& col) {
  if (!phi.fixes_origin())
    throw SymbolError("lower_triangular_bound_check: symbol must fix the origin");
  const double r = std::exp(-0.5);
  const double M1 = phi.sup_modulus(r) / r;  // sup |phi(z)/z| on |z| = r
  if (M1 >= 1.0 - 1e-14)
    throw SymbolError("lower_triangular_bound_check: |phi'(0)| = 1 (rotation case), bound inapplicable");
  const double rho = std::log(M1) / std::log(r);
  BoundReport rep;
  rep.worst_margin = -std::numeric_limits<double>::infinity();
  for (long m = 0; m <= col.M(); ++m) {
    const double av = std::abs(col.a[m]);
    if (m < col.n) {
      // strict lower-triangularity is exact, not approximate
      if (av != 0.0) {
        rep.pass = false;
        rep.violating_m.push_back(m);
      }
    } else {
      const double bound = std::exp(-0.5 * ((1.0 + rho) * double(col.n) - double(m)));
      rep.worst_margin = std::max(rep.worst_margin, av - bound - 1e-12);
      if (av > bound + 1e-12) {
        rep.pass = false;
        rep.violating_m.push_back(m);
      }
    }
    ++rep.checked;
  }
  return rep;
}

void write_column_cache(const std::string& path, const std::string& symbol,
                        const CoeffColumn& col) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_column_cache: cannot open " + path);
  auto put_u64 = [&](std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;  // little-endian
    out.write(reinterpret_cast<const char*>(b), 8);
  };
  auto put_f64 = [&](double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    put_u64(v);
  };
  const std::string method = to_string(col.method);
  put_u64(symbol.size());
  out.write(symbol.data(), long(symbol.size()));
  put_u64(std::uint64_t(col.n));
  put_u64(std::uint64_t(col.M()));
  put_u64(method.size());
  out.write(method.data(), long(method.size()));
  bool complex_entries = false;
  for (const auto& v : col.a)
    if (v.imag() != 0.0) complex_entries = true;
  put_u64(complex_entries ? 1 : 0);
  put_f64(col.trunc_error);
  for (const auto& v : col.a) {
    put_f64(v.real());
    if (complex_entries) put_f64(v.imag());
  }
}

CoeffColumn read_column_cache(const std::string& path, std::string* symbol_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_column_cache: cannot open " + path);
  auto get_u64 = [&]() {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    return v;
  };
  auto get_f64 = [&]() {
    const std::uint64_t v = get_u64();
    double d;
    std::memcpy(&d, &v, 8);
    return d;
  };
  const auto slen = get_u64();
  std::string symbol(slen, '\0');
  in.read(symbol.data(), long(slen));
  if (symbol_out) *symbol_out = symbol;
  CoeffColumn col;
  col.n = long(get_u64());
  const long M = long(get_u64());
  const auto mlen = get_u64();
  std::string method(mlen, '\0');
  in.read(method.data(), long(mlen));
  if (method == "series_power") col.method = CoeffMethod::SeriesPower;
  else if (method == "circle_fft") col.method = CoeffMethod::CircleFft;
  else col.method = CoeffMethod::Explicit;
  const bool complex_entries = get_u64() != 0;
  col.trunc_error = get_f64();
  col.a.resize(M + 1);
  for (long m = 0; m <= M; ++m) {
    const double re = get_f64();
    const double im = complex_entries ? get_f64() : 0.0;
    col.a[m] = cplx(re, im);
  }
  if (!in) throw std::runtime_error("read_column_cache: truncated file " + path);
  return col;
}

}  // namespace h2beta
