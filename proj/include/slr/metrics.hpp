#pragma once

#include "slr/permutation.hpp"
#include "slr/spectral.hpp"
#include "slr/types.hpp"

#include <chrono>
#include <cmath>

namespace slr {

struct TrialMetrics {
  double perm_error_rate = 0;
  double nmse_x = 0;
  double nmse_x_db = 0;
  double optimality_gap = 0;
  double reconstruction_mse = 0;
  std::chrono::duration<double> elapsed{0};
};

/// Fraction of rows whose estimated mapping differs from the true one.
inline double permutation_error_rate(const Permutation& estimate, const Permutation& truth) {
  detail::require_dims(estimate.size() == truth.size(), "permutation_error_rate: size mismatch");
  if (truth.size() == 0) return 0.0;
  Index wrong = 0;
  for (Index k = 0; k < truth.size(); ++k) wrong += estimate[k] != truth[k] ? 1 : 0;
  return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

/// ||X_true - X_hat||_F^2 / (n t).
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar nmse(const Eigen::MatrixBase<DerivedA>& x_hat, const Eigen::MatrixBase<DerivedB>& x_true) {
  using Scalar = typename DerivedA::Scalar;
  detail::require_dims(x_hat.rows() == x_true.rows() && x_hat.cols() == x_true.cols(), "nmse: shape mismatch");
  detail::require(x_hat.size() > 0, "nmse: empty matrices");
  return (x_true - x_hat).squaredNorm() / Scalar(x_hat.size());
}

/// 10 log10 of a power ratio.
inline double to_db(double power) { return 10.0 * std::log10(power); }

/// 1 - (1/k) tr(Pi_hat^T Pi* V_A V_A^T), computed on the signal basis.
template <typename Scalar>
Scalar optimality_gap(const Permutation& estimate, const Permutation& truth, const BasicSpectralBasis<Scalar>& signal) {
  detail::require_dims(estimate.size() == truth.size() && truth.size() == signal.m(),
                       "optimality_gap: dimension mismatch");
  detail::require(signal.k() >= 1, "optimality_gap: empty component set");
  const MatrixX<Scalar> v = signal.selected_vectors();
  // The trace reduces to sum_j <v_{pi*(j)}, v_{pi_hat(j)}>.
  Scalar trace = 0;
  for (Index j = 0; j < truth.size(); ++j) trace += v.row(truth[j]).dot(v.row(estimate[j]));
  return Scalar(1) - trace / Scalar(signal.k());
}

/// ||Pi_hat A X_hat - Pi* A X*||_F^2 / (m t).
template <typename Scalar>
Scalar reconstruction_mse(const Permutation& perm_hat, const MatrixX<Scalar>& x_hat, const Permutation& perm_true,
                          const MatrixX<Scalar>& x_true, const MatrixX<Scalar>& a) {
  detail::require_dims(x_hat.rows() == a.cols() && x_true.rows() == a.cols() && x_hat.cols() == x_true.cols(),
                       "reconstruction_mse: feature shapes do not match A");
  detail::require_dims(perm_hat.size() == a.rows() && perm_true.size() == a.rows(),
                       "reconstruction_mse: permutation size != m");
  const MatrixX<Scalar> diff = perm_hat.apply(a * x_hat) - perm_true.apply(a * x_true);
  return diff.squaredNorm() / Scalar(diff.size());
}

template <typename Scalar>
struct CostMatrices {
  MatrixX<Scalar> D;      // V_A (Pi* V_A)^T, maximized by Pi*
  MatrixX<Scalar> D_hat;  // abs(V_A) abs(U_A)^T, the matching cost
};

/// Diagnostic dump of the noiseless and sample assignment costs.
template <typename Scalar>
CostMatrices<Scalar> appendix_cost_matrices(const BasicSpectralBasis<Scalar>& signal,
                                            const BasicSpectralBasis<Scalar>& measurement, const Permutation& truth) {
  detail::require_dims(signal.selected == measurement.selected, "appendix_cost_matrices: bases select different components");
  detail::require_dims(truth.size() == signal.m() && signal.m() == measurement.m(),
                       "appendix_cost_matrices: dimension mismatch");
  const MatrixX<Scalar> v = signal.selected_vectors();
  CostMatrices<Scalar> out;
  out.D = v * truth.apply(v).transpose();
  out.D_hat = v.cwiseAbs() * measurement.selected_vectors().cwiseAbs().transpose();
  return out;
}

}  // namespace slr
