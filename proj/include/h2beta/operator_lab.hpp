#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "h2beta/coeff_engine.hpp"
#include "h2beta/symbols.hpp"
#include "h2beta/weights.hpp"

namespace h2beta {

// N x N finite section of A_beta = (sqrt(beta_m/beta_n) a_{m,n}).
// Real storage for real-coefficient symbols, complex otherwise.
struct TruncatedOperator {
  long N = 0;
  std::variant<Eigen::MatrixXd, Eigen::MatrixXcd> mat;
  double trunc_error = 0.0;  // max over columns of the certified l2 tail
  std::string symbol, weight;

  bool is_real() const { return std::holds_alternative<Eigen::MatrixXd>(mat); }
  const Eigen::MatrixXd& real() const { return std::get<Eigen::MatrixXd>(mat); }
  const Eigen::MatrixXcd& cplx_mat() const { return std::get<Eigen::MatrixXcd>(mat); }
};

TruncatedOperator assemble(const SymbolSpec& phi, const WeightSequence& beta, long N);

struct NormEstimate {
  double value = 0.0;
  long N = 0;
  long iterations = 0;
  double residual = 0.0;
  bool lower_bound_only = true;  // finite sections under-estimate the operator norm
};

/// Largest singular value by power iteration on the Gram form, deterministic
/// all-ones start plus one seeded random restart. The returned value is a
/// certified lower bound (Rayleigh quotients of A^T A never overshoot).
/// `warm` replaces the all-ones start (e.g. the converged vector of a
/// smaller section, zero-padded).
NormEstimate op_norm(const TruncatedOperator& T, double tol, long max_iters = 5000);
NormEstimate op_norm(const Eigen::MatrixXd& A, double tol, long max_iters = 5000,
                     const Eigen::VectorXd* warm = nullptr, Eigen::VectorXd* vec_out = nullptr);
NormEstimate op_norm(const Eigen::MatrixXcd& A, double tol, long max_iters = 5000);

/// (sum_m a_{m,n}^2 beta_m) / beta_n over the certified column support: a
/// lower bound for ||C_phi||^2 when maximized over n.
double column_norm_ratio(const SymbolSpec& phi, const WeightSequence& beta, long n);

/// ||K_x|| with ||K_x||^2 = sum x^{2k}/beta_k, adaptively truncated until the
/// certified geometric tail is below tol.
double kernel_norm(const WeightSequence& beta, double x, double tol);

/// Least-squares slope s of log ||K_x|| against -log(1-x) over the grid.
double kernel_growth_fit(const WeightSequence& beta, const std::vector<double>& xs);

// Block decomposition along I_k = [N_base^k, N_base^{k+1}) (I_0 = [0, N_base)):
// D diagonal blocks, R super-diagonal blocks, S everything below, U the rest.
struct BlockReport {
  Eigen::MatrixXd D, R, S, U;
  double norm_D = 0.0, norm_R = 0.0, norm_S = 0.0, norm_A = 0.0;
  double hs_U = 0.0;  // Frobenius
};
BlockReport block_decompose(const TruncatedOperator& T, long N_base, double tol);

/// (||Gamma^{-1} M Gamma||, ||M||) for lower-triangular M and non-decreasing
/// gamma (Kacnel'son's inequality states lhs <= rhs).
std::pair<double, double> kacnelson_check(const Eigen::MatrixXd& M,
                                          const std::vector<double>& gamma, double tol);

/// (||A o W||, K ||A||) where W is the band mask sqrt(beta_m/beta_n) on
/// C^{-1} n <= m <= C n and K = sqrt(C2/C1) from the slow-oscillation profile.
std::pair<double, double> band_schur_check(const Eigen::MatrixXd& A, const WeightSequence& beta,
                                           double C, double tol);

}  // namespace h2beta
