#pragma once

#include "slr/assignment.hpp"
#include "slr/model.hpp"
#include "slr/spectral.hpp"
#include "slr/types.hpp"

#include <chrono>
#include <cmath>
#include <vector>

namespace slr {

enum class Method { Spectral, Oracle, Spatial, Leverage, Threshold };
enum class Recovery { LeastSquares, Lasso };

template <typename Scalar>
struct BasicSlrSolution {
  Permutation perm;   // estimated Pi
  MatrixX<Scalar> X;  // n x t
  Index k = 0;        // matched components (spectral method only)
  Scalar delta = 0;   // minimum spectral gap of the matched components
  std::chrono::duration<double> elapsed{0};
  Method method = Method::Spectral;
  Recovery recovery = Recovery::LeastSquares;
  /// LASSO columns that hit lasso_max_iters before converging.
  std::vector<Index> unconverged_columns;
};

using SlrSolution = BasicSlrSolution<double>;

template <typename Scalar>
struct BasicLassoState {
  VectorX<Scalar> coefficients;
  VectorX<Scalar> residual;  // b - A * coefficients
  int iterations = 0;        // full coordinate sweeps
  bool converged = false;
};

using LassoState = BasicLassoState<double>;

/// ||b - A x||^2 + rho ||x||_1 (no 1/2 factor).
template <typename DerivedA, typename DerivedB, typename DerivedX>
typename DerivedA::Scalar lasso_objective(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                                          const Eigen::MatrixBase<DerivedX>& x, double rho) {
  using Scalar = typename DerivedA::Scalar;
  return (b - a * x).squaredNorm() + static_cast<Scalar>(rho) * x.template lpNorm<1>();
}

namespace detail {

template <typename Scalar>
Scalar soft_threshold(Scalar z, Scalar level) {
  if (z > level) return z - level;
  if (z < -level) return z + level;
  return Scalar(0);
}

// Cyclic coordinate descent; `col_sq_norms` caches ||a_j||^2 across columns sharing A.
template <typename DerivedA, typename DerivedB, typename Scalar = typename DerivedA::Scalar>
BasicLassoState<Scalar> lasso_cd(const Eigen::MatrixBase<DerivedA>& a_expr, const Eigen::MatrixBase<DerivedB>& b,
                                 const VectorX<Scalar>& col_sq_norms, double rho, double tol, int max_iters) {
  const auto& a = a_expr.eval();
  const Index n = a.cols();
  const Scalar half_rho = static_cast<Scalar>(rho) / Scalar(2);
  BasicLassoState<Scalar> state;
  state.coefficients = VectorX<Scalar>::Zero(n);
  state.residual = b;
  while (state.iterations < max_iters) {
    ++state.iterations;
    Scalar max_change = 0;
    for (Index j = 0; j < n; ++j) {
      const Scalar old = state.coefficients(j);
      // argmin over x_j of ||r_{-j} - a_j x_j||^2 + rho |x_j|
      const Scalar z = a.col(j).dot(state.residual) + col_sq_norms(j) * old;
      const Scalar updated = soft_threshold(z, half_rho) / col_sq_norms(j);
      const Scalar change = updated - old;
      if (change != Scalar(0)) {
        state.residual.noalias() -= change * a.col(j);
        state.coefficients(j) = updated;
        max_change = std::max(max_change, std::abs(change));
      }
    }
    if (max_change < static_cast<Scalar>(tol)) {
      state.converged = true;
      break;
    }
  }
  state.residual = b - a * state.coefficients;
  return state;
}

template <typename Derived>
VectorX<typename Derived::Scalar> column_sq_norms(const Eigen::MatrixBase<Derived>& a) {
  VectorX<typename Derived::Scalar> out = a.colwise().squaredNorm().transpose();
  require((out.array() > 0).all(), "lasso: sensing matrix has a zero column");
  return out;
}

}  // namespace detail

/// Minimizes ||b - A x||^2 + rho ||x||_1 by cyclic coordinate descent with
/// exact soft-threshold updates, starting from x = 0. Stops when a full sweep
/// moves no coordinate by tol or more; otherwise returns the last iterate
/// with converged = false after max_iters sweeps.
template <typename DerivedA, typename DerivedB>
BasicLassoState<typename DerivedA::Scalar> solve_lasso_column(const Eigen::MatrixBase<DerivedA>& a,
                                                              const Eigen::MatrixBase<DerivedB>& b, double rho,
                                                              double tol, int max_iters) {
  detail::require_dims(b.rows() == a.rows() && b.cols() == 1, "solve_lasso_column: b must be an m-vector");
  detail::require(rho >= 0 && tol > 0 && max_iters >= 1, "solve_lasso_column: invalid rho/tol/max_iters");
  return detail::lasso_cd(a, b, detail::column_sq_norms(a), rho, tol, max_iters);
}

/// Column-wise LASSO for every column of `b`; reports unconverged columns.
template <typename DerivedA, typename DerivedB>
MatrixX<typename DerivedA::Scalar> solve_lasso_columns(const Eigen::MatrixBase<DerivedA>& a,
                                                       const Eigen::MatrixBase<DerivedB>& b,
                                                       const SolverConfig& config,
                                                       std::vector<Index>* unconverged = nullptr) {
  using Scalar = typename DerivedA::Scalar;
  detail::require_dims(b.rows() == a.rows(), "solve_lasso_columns: row count mismatch");
  const VectorX<Scalar> norms = detail::column_sq_norms(a);
  MatrixX<Scalar> x(a.cols(), b.cols());
  for (Index c = 0; c < b.cols(); ++c) {
    auto state = detail::lasso_cd(a, b.col(c), norms, config.rho, config.lasso_tol, config.lasso_max_iters);
    x.col(c) = state.coefficients;
    if (!state.converged && unconverged) unconverged->push_back(c);
  }
  return x;
}

/// Throws RankDeficient unless the smallest singular value of A exceeds 1e-10 times the largest.
template <typename Derived>
void require_full_column_rank(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() < a.cols()) throw RankDeficient("least squares needs m >= n");
  Eigen::BDCSVD<MatrixX<Scalar>> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(sv.size() - 1) > Scalar(1e-10) * sv(0)))
    throw RankDeficient("sensing matrix does not have full column rank");
}

/// X = A^+ Pi^T Y (or the LASSO analogue) for a known permutation.
template <typename Scalar>
MatrixX<Scalar> recover_features(const BasicSlrProblem<Scalar>& problem, const Permutation& perm, Recovery recovery,
                                 std::vector<Index>* unconverged = nullptr) {
  detail::require_dims(perm.size() == problem.m(), "recover_features: permutation size != m");
  const MatrixX<Scalar> unshuffled = perm.apply_transpose(problem.Y);
  if (recovery == Recovery::Lasso) return solve_lasso_columns(problem.A, unshuffled, problem.config, unconverged);
  require_full_column_rank(problem.A);
  Eigen::ColPivHouseholderQR<MatrixX<Scalar>> qr(problem.A);
  return qr.solve(unshuffled);
}

template <typename Scalar>
struct BasicSpectralEstimate {
  BasicAssignmentResult<Scalar> assignment;
  BasicSpectralBasis<Scalar> signal;
  BasicSpectralBasis<Scalar> measurement;
};

using SpectralEstimate = BasicSpectralEstimate<double>;

/// Permutation-estimation stage: eigenbases of A C_X A^T and of the sample
/// covariance, then linear assignment on their absolute eigenvectors.
template <typename Scalar, typename DerivedC>
BasicSpectralEstimate<Scalar> estimate_permutation_spectral(const BasicSlrProblem<Scalar>& problem,
                                                            const Eigen::MatrixBase<DerivedC>& c_x) {
  auto signal = build_signal_basis(problem.A, c_x, problem.config);
  auto measurement = build_measurement_basis(problem, signal);
  auto assignment = spectral_match(signal, measurement);
  return {std::move(assignment), std::move(signal), std::move(measurement)};
}

namespace detail {

template <typename Scalar, typename DerivedC>
BasicSlrSolution<Scalar> solve_spectral(const BasicSlrProblem<Scalar>& problem, const Eigen::MatrixBase<DerivedC>& c_x,
                                        Recovery recovery) {
  const auto start = std::chrono::steady_clock::now();
  if (recovery == Recovery::LeastSquares) require_full_column_rank(problem.A);
  auto estimate = estimate_permutation_spectral(problem, c_x);
  BasicSlrSolution<Scalar> out;
  out.X = recover_features(problem, estimate.assignment.perm, recovery, &out.unconverged_columns);
  out.perm = std::move(estimate.assignment.perm);
  out.k = estimate.signal.k();
  out.delta = estimate.signal.delta;
  out.method = Method::Spectral;
  out.recovery = recovery;
  out.elapsed = std::chrono::steady_clock::now() - start;
  return out;
}

}  // namespace detail

/// Shuffled least squares: spectral permutation estimate, then X = A^+ Pi^T Y.
/// Requires m >= n and full column rank A (RankDeficient otherwise).
template <typename Scalar, typename DerivedC>
BasicSlrSolution<Scalar> solve_shuffled_ls(const BasicSlrProblem<Scalar>& problem,
                                           const Eigen::MatrixBase<DerivedC>& c_x) {
  return detail::solve_spectral(problem, c_x, Recovery::LeastSquares);
}

/// Shuffled LASSO: spectral permutation estimate, then one LASSO per column of Pi^T Y.
template <typename Scalar, typename DerivedC>
BasicSlrSolution<Scalar> solve_shuffled_lasso(const BasicSlrProblem<Scalar>& problem,
                                              const Eigen::MatrixBase<DerivedC>& c_x) {
  return detail::solve_spectral(problem, c_x, Recovery::Lasso);
}

/// Known-permutation baseline.
template <typename Scalar>
BasicSlrSolution<Scalar> oracle_solution(const BasicSlrProblem<Scalar>& problem, const BasicGroundTruth<Scalar>& truth,
                                         bool sparse) {
  detail::require_dims(truth.perm.size() == problem.m(), "oracle_solution: permutation size != m");
  const auto start = std::chrono::steady_clock::now();
  BasicSlrSolution<Scalar> out;
  out.recovery = sparse ? Recovery::Lasso : Recovery::LeastSquares;
  out.method = Method::Oracle;
  out.X = recover_features(problem, truth.perm, out.recovery, &out.unconverged_columns);
  out.perm = truth.perm;
  out.elapsed = std::chrono::steady_clock::now() - start;
  return out;
}

}  // namespace slr
