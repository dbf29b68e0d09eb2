#include "h2beta/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace h2beta {
namespace {

constexpr double kPi = std::numbers::pi;

double parse_value(const std::string& kv, const std::string& key) {
  const auto pos = kv.find(key + "=");
  if (pos == std::string::npos) throw SymbolError("symbol spec: missing parameter " + key);
  return std::stod(kv.substr(pos + key.size() + 1));
}

// Generalized binomial coefficients C(alpha, k) by the ratio recurrence;
// returns terms |C| for tail certification and signed values.
std::vector<double> binomial_series(double alpha, std::size_t K) {
  std::vector<double> c(K + 1);
  c[0] = 1.0;
  for (std::size_t k = 0; k < K; ++k) c[k + 1] = c[k] * (alpha - double(k)) / double(k + 1);
  return c;
}

// l1 tail of |C(alpha, k)| beyond K: |C| is eventually ~ k^{-1-alpha} and
// t_{k} <= t_K (K/k)^{1+alpha} for k >= K >= 2(alpha+1), so the tail is at
// most t_K * K / alpha.
double binomial_l1_tail(double alpha, std::size_t K, double tK) {
  if (alpha <= 0.0) throw SymbolError("binomial tail: alpha must be positive");
  return tK * double(K) / alpha;
}
double binomial_l2_tail(double alpha, std::size_t K, double tK) {
  return tK * tK * double(K) / (1.0 + 2.0 * alpha);
}

}  // namespace

SymbolSpec SymbolSpec::mobius(cplx a) {
  if (std::abs(a) >= 1.0) throw SymbolError("mobius: |a| must be < 1");
  SymbolSpec s;
  s.kind_ = SymbolKind::Mobius;
  s.a_ = a;
  return s;
}

SymbolSpec SymbolSpec::rotation(double theta) {
  SymbolSpec s;
  s.kind_ = SymbolKind::Rotation;
  s.p_ = theta;
  return s;
}

SymbolSpec SymbolSpec::singular_inner(double a) {
  if (!(a > 0.0)) throw SymbolError("singular_inner: a must be > 0");
  SymbolSpec s;
  s.kind_ = SymbolKind::SingularInner;
  s.p_ = a;
  return s;
}

SymbolSpec SymbolSpec::monomial(long k) {
  if (k < 1) throw SymbolError("monomial: k must be >= 1");
  SymbolSpec s;
  s.kind_ = SymbolKind::Monomial;
  s.k_ = k;
  return s;
}

SymbolSpec SymbolSpec::test_symbol(long m, long n) {
  if (!(m > n && n >= 1)) throw SymbolError("test_symbol: need m > n >= 1");
  SymbolSpec s;
  s.kind_ = SymbolKind::TestSymbol;
  s.m_ = m;
  s.k_ = n;
  return s;
}

SymbolSpec SymbolSpec::custom(std::vector<cplx> coeffs) {
  double l1 = 0.0;
  for (const auto& c : coeffs) l1 += std::abs(c);
  if (l1 > 1.0 + 1e-15)
    throw SymbolError("custom: sum |c_k| <= 1 certificate violated (got " + std::to_string(l1) + ")");
  SymbolSpec s;
  s.kind_ = SymbolKind::Custom;
  s.custom_ = std::move(coeffs);
  return s;
}

SymbolSpec SymbolSpec::parse(const std::string& str) {
  const auto colon = str.find(':');
  const std::string name = str.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : str.substr(colon + 1);
  if (name == "mobius") return mobius(parse_value(rest, "a"));
  if (name == "rotation") return rotation(parse_value(rest, "theta"));
  if (name == "inner") return singular_inner(parse_value(rest, "a"));
  if (name == "monomial") return monomial(long(parse_value(rest, "k")));
  if (name == "test") return test_symbol(long(parse_value(rest, "m")), long(parse_value(rest, "n")));
  if (name == "custom") {
    std::vector<cplx> c{cplx(0.0, 0.0)};  // c_0 = 0; list supplies c_1..c_d
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) c.emplace_back(std::stod(tok), 0.0);
    return custom(std::move(c));
  }
  throw SymbolError("unknown symbol: " + name);
}

std::string SymbolSpec::str() const {
  std::ostringstream os;
  switch (kind_) {
    case SymbolKind::Mobius:
      os << "mobius:a=" << a_.real();
      if (a_.imag() != 0.0) os << "+" << a_.imag() << "i";
      break;
    case SymbolKind::Rotation:
      os << "rotation:theta=" << p_;
      break;
    case SymbolKind::SingularInner:
      os << "inner:a=" << p_;
      break;
    case SymbolKind::Monomial:
      os << "monomial:k=" << k_;
      break;
    case SymbolKind::TestSymbol:
      os << "test:m=" << m_ << ",n=" << k_;
      break;
    case SymbolKind::Custom:
      os << "custom:d=" << custom_.size() - 1;
      break;
  }
  return os.str();
}

cplx SymbolSpec::eval(cplx z) const {
  switch (kind_) {
    case SymbolKind::Mobius:
      return (a_ + z) / (1.0 + std::conj(a_) * z);
    case SymbolKind::Rotation:
      return std::polar(1.0, p_) * z;
    case SymbolKind::SingularInner: {
      if (z == cplx(1.0, 0.0))
        throw SymbolError("singular_inner: essential singularity at z = 1");
      return std::exp(-p_ * (1.0 + z) / (1.0 - z));
    }
    case SymbolKind::Monomial:
      return std::pow(z, double(k_));
    case SymbolKind::TestSymbol: {
      // principal branch; (1 + z^{m-n})/2 has positive real part on |z| < 1
      const cplx w = 0.5 * (1.0 + std::pow(z, double(m_ - k_)));
      return z * std::exp(std::log(w) / double(k_));
    }
    case SymbolKind::Custom: {
      cplx acc{0.0, 0.0};
      for (std::size_t k = custom_.size(); k-- > 0;) acc = acc * z + custom_[k];
      return acc;
    }
  }
  throw SymbolError("eval: unreachable");
}

bool SymbolSpec::fixes_origin() const {
  switch (kind_) {
    case SymbolKind::Mobius:
      return a_ == cplx(0.0, 0.0);
    case SymbolKind::Rotation:
    case SymbolKind::Monomial:
    case SymbolKind::TestSymbol:
      return true;
    case SymbolKind::SingularInner:
      return false;
    case SymbolKind::Custom:
      return custom_.empty() || custom_[0] == cplx(0.0, 0.0);
  }
  return false;
}

bool SymbolSpec::inner() const {
  switch (kind_) {
    case SymbolKind::Mobius:
    case SymbolKind::Rotation:
    case SymbolKind::Monomial:
    case SymbolKind::SingularInner:
      return true;
    default:
      return false;
  }
}

bool SymbolSpec::real_coefficients() const {
  switch (kind_) {
    case SymbolKind::Mobius:
      return a_.imag() == 0.0;
    case SymbolKind::Rotation: {
      const double t = std::fmod(p_, 2.0 * kPi);
      return t == 0.0 || t == kPi || t == -kPi;
    }
    case SymbolKind::SingularInner:
    case SymbolKind::Monomial:
    case SymbolKind::TestSymbol:
      return true;
    case SymbolKind::Custom:
      return std::all_of(custom_.begin(), custom_.end(),
                         [](const cplx& c) { return c.imag() == 0.0; });
  }
  return false;
}

double SymbolSpec::sup_modulus(double r, int grid) const {
  if (!(r > 0.0 && r < 1.0)) throw SymbolError("sup_modulus: r must be in (0,1)");
  if (grid < 64) grid = 64;
  auto f = [&](double t) { return std::abs(eval(std::polar(r, t))); };
  double best = 0.0, best_t = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double t = 2.0 * kPi * double(j) / double(grid);
    const double v = f(t);
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  // golden-section refinement around the best grid point
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best_t - 2.0 * kPi / grid, b = best_t + 2.0 * kPi / grid;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
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
  return std::max(best, std::max(f1, f2));
}

SymbolSpec::Series SymbolSpec::taylor(std::size_t M) const {
  Series s;
  s.c.assign(M + 1, cplx(0.0, 0.0));
  switch (kind_) {
    case SymbolKind::Mobius: {
      // (a+z)/(1+conj(a) z) = a + (1-|a|^2) sum_{k>=1} (-conj(a))^{k-1} z^k
      const double aa = std::abs(a_);
      s.c[0] = a_;
      cplx pw{1.0, 0.0};
      const double scale = 1.0 - aa * aa;
      for (std::size_t k = 1; k <= M; ++k) {
        s.c[k] = scale * pw;
        pw *= -std::conj(a_);
      }
      if (aa > 0.0) {
        s.l1_tail = scale * std::pow(aa, double(M)) / (1.0 - aa);
        s.l2_tail = scale * std::pow(aa, 2.0 * double(M));
      }
      return s;
    }
    case SymbolKind::Rotation: {
      if (M >= 1) s.c[1] = std::polar(1.0, p_);
      if (M < 1) s.l1_tail = s.l2_tail = 1.0;
      return s;
    }
    case SymbolKind::Monomial: {
      if (std::size_t(k_) <= M) s.c[k_] = 1.0;
      else s.l1_tail = s.l2_tail = 1.0;
      return s;
    }
    case SymbolKind::TestSymbol: {
      // z * 2^{-1/n} (1 + z^d)^{1/n}, d = m - n: coefficient 2^{-1/n} C(1/n, k)
      // sits at index 1 + k d.
      const double alpha = 1.0 / double(k_);
      const long d = m_ - k_;
      const std::size_t K = M >= 1 ? (M - 1) / std::size_t(d) : 0;
      // extend past K to certify the tail from a term within the decaying regime
      const std::size_t Kext = std::max<std::size_t>(K + 1, std::size_t(2.0 * (alpha + 1.0)) + 2);
      const auto bin = binomial_series(alpha, Kext);
      const double scale = std::pow(2.0, -alpha);
      for (std::size_t k = 0; k <= K; ++k)
        if (1 + long(k) * d <= long(M)) s.c[1 + long(k) * d] = scale * bin[k];
      const double tK = scale * std::abs(bin[Kext]);
      s.l1_tail = binomial_l1_tail(alpha, Kext, tK);
      s.l2_tail = binomial_l2_tail(alpha, Kext, tK);
      return s;
    }
    case SymbolKind::Custom: {
      for (std::size_t k = 0; k < custom_.size(); ++k) {
        if (k <= M) s.c[k] = custom_[k];
        else {
          s.l1_tail += std::abs(custom_[k]);
          s.l2_tail += std::norm(custom_[k]);
        }
      }
      return s;
    }
    case SymbolKind::SingularInner: {
      // No geometric tail: sample on radius 1 - 1/(2(M+1)) with a grid large
      // enough that the sup-norm aliasing bound r^G/(1-r^G), amplified by
      // r^{-M}, is below 1e-13.
      const double r = 1.0 - 1.0 / (2.0 * double(M + 1));
      std::size_t G = 1;
      while (G < 64 * (M + 1)) G <<= 1;
      std::vector<cplx> samples(G);
      for (std::size_t j = 0; j < G; ++j) {
        const cplx z = std::polar(r, 2.0 * kPi * double(j) / double(G));
        samples[j] = std::exp(-p_ * (1.0 + z) / (1.0 - z));
      }
      fft_pow2(samples, false);
      double rm = 1.0;
      for (std::size_t m = 0; m <= M; ++m) {
        s.c[m] = samples[m] / (double(G) * rm);
        rm *= r;
      }
      const double rG = std::pow(r, double(G));
      s.entry_err = rG / (1.0 - rG) / std::pow(r, double(M));
      // l2 tail of the coefficients themselves from the m^{-3/4} envelope
      // (Laguerre asymptotics), x10 safety: sum_{m>M} env^2 <= 200 c^2 sqrt(a) / sqrt(M)
      const double c2 = std::sqrt(2.0) / kPi;
      s.l2_tail = 200.0 * c2 * std::sqrt(std::max(p_, 1.0)) / std::sqrt(double(M));
      s.l1_tail = std::numeric_limits<double>::infinity();  // m^{-3/4} is not summable
      return s;
    }
  }
  throw SymbolError("taylor: unreachable");
}

// ---------------------------------------------------------------------------

double mobius_param_compose(double a, double b) {
  if (std::abs(a) >= 1.0 || std::abs(b) >= 1.0)
    throw SymbolError("mobius_param_compose: parameters must lie in (-1,1)");
  return (a + b) / (1.0 + a * b);
}

double poisson_eval(double a, double x) {
  return (1.0 - a * a) / (1.0 + 2.0 * a * std::cos(x) + a * a);
}

double poisson_deriv(double a, double x) {
  const double D = 1.0 + 2.0 * a * std::cos(x) + a * a;
  return 2.0 * a * (1.0 - a * a) * std::sin(x) / (D * D);
}

double poisson_deriv2(double a, double x) {
  const double D = 1.0 + 2.0 * a * std::cos(x) + a * a;
  const double sx = std::sin(x), cx = std::cos(x);
  return 2.0 * a * (1.0 - a * a) * (cx / (D * D) + 4.0 * a * sx * sx / (D * D * D));
}

double phase_eval(double a, double x, double /*tol*/) {
  // h_a(x) = 2 atan2((1-a) sin(x/2), (1+a) cos(x/2)): odd, h(0)=0, h(pi)=pi,
  // h' = P_{-a}. Derived once from T_a(e^{ix}) and cross-validated against
  // the quadrature of P_{-a} in the test suite.
  return 2.0 * std::atan2((1.0 - a) * std::sin(0.5 * x), (1.0 + a) * std::cos(0.5 * x));
}

double rho_exponent(double a, double r) {
  if (!(r > 0.0 && r < 1.0)) throw SymbolError("rho_exponent: r must be in (0,1)");
  const double M = (a + r) / (1.0 + a * r);
  return std::log(M) / std::log(r);
}

MobiusGeometry main_lemma_geometry(double a, long n) {
  if (!(a > 0.0 && a < 1.0)) throw SymbolError("main_lemma_geometry: a must be in (0,1)");
  if (n < 1) throw SymbolError("main_lemma_geometry: n must be >= 1");
  MobiusGeometry g;
  g.a = a;
  g.tau = (1.0 + a) / (1.0 - a);
  g.mu = (1.0 - 1.0 / g.tau) / 3.0;
  g.j_lo = long(std::ceil((1.0 - 2.0 * g.mu) * double(n) - 1e-12));
  g.j_hi = long(std::floor((1.0 - g.mu) * double(n) + 1e-12));
  return g;
}

double critical_point(double a, long m, long n) {
  const double tau = (1.0 + a) / (1.0 - a);
  const double t = double(m) / double(n);
  if (!(t > 1.0 / tau && t < tau))
    throw SymbolError("critical_point: m/n outside (1/tau, tau), no interior critical point");
  // P_{-a} increases from 1/tau at 0 to tau at pi; bisect n P(x) = m
  double lo = 0.0, hi = kPi;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (poisson_eval(a, mid) < t) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace h2beta
