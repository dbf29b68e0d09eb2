#include "h2beta/operator_lab.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "h2beta/series.hpp"

namespace h2beta {
namespace {

// Trim trailing coefficients below machine noise; the dropped l1 mass is
// bounded by size * 1e-18 and is far below every tolerance in use.
std::vector<cplx> trimmed(std::vector<cplx> c) {
  std::size_t last = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (std::abs(c[i]) > 1e-18) last = i;
  c.resize(last + 1);
  return c;
}

template <class Mat>
NormEstimate power_iteration(
    const Mat& A, double tol, long max_iters,
    const Eigen::Matrix<typename Mat::Scalar, Eigen::Dynamic, 1>* warm = nullptr,
    Eigen::Matrix<typename Mat::Scalar, Eigen::Dynamic, 1>* vec_out = nullptr) {
  using Vec = Eigen::Matrix<typename Mat::Scalar, Eigen::Dynamic, 1>;
  const long N = A.rows();
  NormEstimate best;
  best.N = N;
  Vec best_vec;
  const auto run = [&](Vec v, Vec* out) {
    v.normalize();
    NormEstimate est;
    est.N = N;
    double sigma_prev = 0.0;
    long stall = 0;
    for (long it = 1; it <= max_iters; ++it) {
      Vec w = A * v;
      const double sigma = w.norm();
      Vec u = A.adjoint() * w;
      const double un = u.norm();
      est.iterations = it;
      est.value = sigma;
      // residual of the Gram eigenproblem at the current Rayleigh estimate
      est.residual = (u - (sigma * sigma) * v).norm() / std::max(sigma * sigma, 1e-300);
      if (un == 0.0) break;  // A v = 0
      if (est.residual <= tol) {
        if (out) *out = v;
        break;
      }
      v = u / un;
      if (out) *out = v;
      if (sigma - sigma_prev <= 1e-13 * std::max(sigma, 1.0)) {
        if (++stall >= 25) break;  // spectral cluster: Rayleigh gain exhausted
      } else {
        stall = 0;
      }
      sigma_prev = sigma;
    }
    return est;
  };

  Vec start = warm ? *warm : Vec::Ones(N);
  Vec v1;
  best = run(start, &v1);
  best_vec = v1;

  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> g(0.0, 1.0);
  Vec rnd(N);
  for (long i = 0; i < N; ++i) {
    if constexpr (std::is_same_v<typename Mat::Scalar, double>) rnd(i) = g(rng);
    else rnd(i) = cplx(g(rng), g(rng));
  }
  Vec v2;
  NormEstimate second = run(rnd, &v2);
  const long total_iters = best.iterations + second.iterations;
  if (second.value > best.value) {
    best.value = second.value;
    best.residual = second.residual;
    best_vec = v2;
  }
  best.iterations = total_iters;
  if (vec_out) *vec_out = best_vec;
  return best;
}

}  // namespace

TruncatedOperator assemble(const SymbolSpec& phi, const WeightSequence& beta, long N) {
  if (N < 1) throw std::invalid_argument("assemble: N >= 1");
  if (beta.horizon() < N - 1) throw WeightError("assemble: weight memo shorter than N");
  const long M = N - 1;
  const auto series = phi.taylor(std::size_t(M));
  const auto base = trimmed(series.c);

  TruncatedOperator T;
  T.N = N;
  T.symbol = phi.str();
  T.weight = beta.rule();
  double worst_tail = 0.0;

  std::vector<double> half_log(N);
  for (long m = 0; m < N; ++m) half_log[m] = 0.5 * beta.log_beta(m);

  const bool real = phi.real_coefficients();
  Eigen::MatrixXd Ar;
  Eigen::MatrixXcd Ac;
  if (real) Ar = Eigen::MatrixXd::Zero(N, N);
  else Ac = Eigen::MatrixXcd::Zero(N, N);

  std::vector<cplx> col(std::size_t(M) + 1, cplx(0.0, 0.0));
  col[0] = 1.0;
  for (long n = 0; n < N; ++n) {
    if (n > 0) col = truncated_mul(col, base, std::size_t(M));
    worst_tail = std::max(worst_tail, column_tail_l2(phi, n, M));
    for (long m = 0; m < N; ++m) {
      const cplx v = col[m] * std::exp(half_log[m] - half_log[n]);
      if (real) Ar(m, n) = v.real();
      else Ac(m, n) = v;
    }
  }
  T.trunc_error = worst_tail;
  if (real) T.mat = std::move(Ar);
  else T.mat = std::move(Ac);
  return T;
}

NormEstimate op_norm(const Eigen::MatrixXd& A, double tol, long max_iters,
                     const Eigen::VectorXd* warm, Eigen::VectorXd* vec_out) {
  if (!(tol > 0.0)) throw std::invalid_argument("op_norm: tol > 0");
  return power_iteration(A, tol, max_iters, warm, vec_out);
}

NormEstimate op_norm(const Eigen::MatrixXcd& A, double tol, long max_iters) {
  if (!(tol > 0.0)) throw std::invalid_argument("op_norm: tol > 0");
  return power_iteration(A, tol, max_iters);
}

NormEstimate op_norm(const TruncatedOperator& T, double tol, long max_iters) {
  return T.is_real() ? op_norm(T.real(), tol, max_iters) : op_norm(T.cplx_mat(), tol, max_iters);
}

double column_norm_ratio(const SymbolSpec& phi, const WeightSequence& beta, long n) {
  // pick M so the certified tail, weighted by the tail sup of beta, is far
  // below the partial sum; for catalog weights the tail sup is available
  long M = 256;
  while (column_tail_l2(phi, n, M) > 1e-14 && M < (1L << 21)) M <<= 1;
  M = std::min(M, beta.horizon());
  const auto col = column_series_power(phi, n, M);
  double s = 0.0;
  for (long m = 0; m <= M; ++m) s += std::norm(col.a[m]) * beta.beta(m);
  return s / beta.beta(n);
}

double kernel_norm(const WeightSequence& beta, double x, double tol) {
  if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("kernel_norm: x in [0,1)");
  if (x == 0.0) return std::sqrt(1.0 / beta.beta(0));
  const long N = beta.horizon();
  const double l2x = 2.0 * std::log(x);
  double sum = 0.0, t_prev = 0.0;
  double recent_q[8] = {2, 2, 2, 2, 2, 2, 2, 2};  // trailing term ratios
  for (long k = 0; k <= N; ++k) {
    const double t = std::exp(double(k) * l2x - beta.log_beta(k));
    sum += t;
    if (k > 0 && t_prev > 0.0) {
      recent_q[k % 8] = t / t_prev;
      // once the last 8 ratios all sit below 1, the terms are dominated by a
      // geometric with their maximum as ratio
      const double q = *std::max_element(recent_q, recent_q + 8);
      if (k >= 8 && q < 0.999 && t * q / (1.0 - q) < tol) return std::sqrt(sum);
    }
    t_prev = t;
  }
  throw WeightError("kernel_norm: tail not certified within the memoized horizon");
}

double kernel_growth_fit(const WeightSequence& beta, const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::invalid_argument("kernel_growth_fit: need at least 2 points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const double x : xs) {
    const double u = -std::log(1.0 - x);
    const double v = std::log(kernel_norm(beta, x, 1e-12));
    sx += u;
    sy += v;
    sxx += u * u;
    sxy += u * v;
  }
  const double n = double(xs.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

BlockReport block_decompose(const TruncatedOperator& T, long N_base, double tol) {
  if (N_base < 2) throw std::invalid_argument("block_decompose: N_base >= 2");
  if (!T.is_real())
    throw std::invalid_argument("block_decompose: implemented for real sections");
  const long N = T.N;
  if (N_base >= N) throw std::invalid_argument("block_decompose: N_base exceeds section size");
  const Eigen::MatrixXd& A = T.real();

  // block index of position j: I_0 = [0, N_base), I_k = [N_base^k, N_base^{k+1})
  std::vector<int> blk(N);
  {
    long lo = 0, hi = N_base;
    int k = 0;
    for (long j = 0; j < N; ++j) {
      if (j >= hi) {
        ++k;
        lo = hi;
        hi = hi * N_base;
      }
      blk[j] = k;
    }
    (void)lo;
  }

  BlockReport rep;
  rep.D = Eigen::MatrixXd::Zero(N, N);
  rep.R = Eigen::MatrixXd::Zero(N, N);
  rep.S = Eigen::MatrixXd::Zero(N, N);
  for (long n = 0; n < N; ++n) {
    for (long m = 0; m < N; ++m) {
      if (blk[m] == blk[n]) rep.D(m, n) = A(m, n);
      else if (blk[n] == blk[m] + 1) rep.R(m, n) = A(m, n);
      else if (blk[m] > blk[n]) rep.S(m, n) = A(m, n);
    }
  }
  rep.U = A - rep.D - rep.R - rep.S;  // exact partition by construction
  rep.norm_A = op_norm(A, tol).value;
  rep.norm_D = op_norm(rep.D, tol).value;
  rep.norm_R = op_norm(rep.R, tol).value;
  rep.norm_S = op_norm(rep.S, tol).value;
  rep.hs_U = rep.U.norm();
  return rep;
}

std::pair<double, double> kacnelson_check(const Eigen::MatrixXd& M,
                                          const std::vector<double>& gamma, double tol) {
  const long N = M.rows();
  if (long(gamma.size()) != N) throw std::invalid_argument("kacnelson_check: gamma size mismatch");
  for (long i = 0; i + 1 < N; ++i)
    if (gamma[i] > gamma[i + 1]) throw std::invalid_argument("kacnelson_check: gamma must be non-decreasing");
  for (long i = 0; i < N; ++i)
    if (!(gamma[i] > 0.0)) throw std::invalid_argument("kacnelson_check: gamma must be positive");
  for (long j = 0; j < N; ++j)
    for (long i = 0; i < j; ++i)
      if (M(i, j) != 0.0) throw std::invalid_argument("kacnelson_check: M must be lower-triangular");

  Eigen::MatrixXd C = M;
  for (long i = 0; i < N; ++i)
    for (long j = 0; j <= i; ++j) C(i, j) = M(i, j) * gamma[j] / gamma[i];
  return {op_norm(C, tol).value, op_norm(M, tol).value};
}

std::pair<double, double> band_schur_check(const Eigen::MatrixXd& A, const WeightSequence& beta,
                                           double C, double tol) {
  if (!(C > 1.0)) throw std::invalid_argument("band_schur_check: C > 1");
  const long N = A.rows();
  if (beta.horizon() < N - 1) throw WeightError("band_schur_check: weight memo too short");
  const auto rep = predicate_report(beta, N - 1);
  if (!(rep.slowosc_min > 0.0))
    throw WeightError("band_schur_check: degenerate slow-oscillation profile");
  const double K = std::sqrt(rep.slowosc_max / rep.slowosc_min);

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
  for (long n = 0; n < N; ++n) {
    for (long m = 0; m < N; ++m) {
      const bool in_band = double(m) >= double(n) / C - 1e-12 && double(m) <= C * double(n) + 1e-12;
      if (in_band)
        H(m, n) = A(m, n) * std::exp(0.5 * (beta.log_beta(m) - beta.log_beta(n)));
    }
  }
  return {op_norm(H, tol).value, K * op_norm(A, tol).value};
}

}  // namespace h2beta
