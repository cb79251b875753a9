#pragma once

#include "slr/model.hpp"
#include "slr/types.hpp"

#include <fmt/core.h>

#include <limits>
#include <vector>

namespace slr {

/// Eigenbasis of a (signal or measurement) covariance with the matched components.
template <typename Scalar>
struct BasicSpectralBasis {
  VectorX<Scalar> eigenvalues;  // descending
  MatrixX<Scalar> vectors;      // columns aligned with eigenvalues
  std::vector<Index> selected;  // 0-based, ascending
  Scalar delta = 0;             // min over selected of lambda_i - lambda_{i+1}

  Index k() const { return static_cast<Index>(selected.size()); }
  Index m() const { return vectors.rows(); }

  /// Columns of `vectors` indexed by `selected`.
  MatrixX<Scalar> selected_vectors() const {
    MatrixX<Scalar> out(vectors.rows(), k());
    for (Index c = 0; c < k(); ++c) out.col(c) = vectors.col(selected[static_cast<std::size_t>(c)]);
    return out;
  }
};

using SpectralBasis = BasicSpectralBasis<double>;

template <typename Scalar>
struct ComponentSelection {
  std::vector<Index> selected;
  Scalar delta;
};

/// (1/t) Y Y^T - C_N, symmetrized.
template <typename Derived, typename DerivedN>
MatrixX<typename Derived::Scalar> sample_covariance(const Eigen::MatrixBase<Derived>& y,
                                                    const Eigen::MatrixBase<DerivedN>& c_n) {
  using Scalar = typename Derived::Scalar;
  detail::require(y.cols() >= 1, "sample_covariance: need at least one sample");
  detail::require_dims(c_n.rows() == y.rows() && c_n.cols() == y.rows(), "sample_covariance: C_N must be m x m");
  const Index m = y.rows();
  MatrixX<Scalar> acc = MatrixX<Scalar>::Zero(m, m);
  acc.template selfadjointView<Eigen::Lower>().rankUpdate(y, Scalar(1) / Scalar(y.cols()));
  acc.template triangularView<Eigen::StrictlyUpper>() = acc.transpose();
  MatrixX<Scalar> out = acc - c_n;
  return (out + out.transpose()) / Scalar(2);
}

template <typename Scalar>
struct Eigendecomposition {
  VectorX<Scalar> eigenvalues;  // descending
  MatrixX<Scalar> vectors;
};

/// Symmetric eigendecomposition with eigenvalues in descending order.
template <typename Derived>
Eigendecomposition<typename Derived::Scalar> eigendecompose_descending(const Eigen::MatrixBase<Derived>& mat) {
  using Scalar = typename Derived::Scalar;
  detail::require_dims(mat.rows() == mat.cols(), "eigendecompose: matrix must be square");
  detail::require(mat.allFinite(), "eigendecompose: non-finite entries");
  const Scalar scale = std::max(Scalar(1), mat.cwiseAbs().maxCoeff());
  detail::require((mat - mat.transpose()).cwiseAbs().maxCoeff() <= Scalar(1e-8) * scale,
                  "eigendecompose: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(mat);
  if (solver.info() != Eigen::Success) throw Error("eigendecompose: solver did not converge");
  Eigendecomposition<Scalar> out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

/// Membership rule for matched components, with lambda_0 = +inf and lambda_{m+1} = 0:
/// lambda_i > thr, lambda_i - lambda_{i+1} >= thr and lambda_{i-1} - lambda_i >= thr.
/// Eligible indices are taken in descending-eigenvalue order up to `max_components`.
template <typename Derived>
ComponentSelection<typename Derived::Scalar> select_components(const Eigen::MatrixBase<Derived>& eigenvalues,
                                                               double gap_threshold,
                                                               std::optional<Index> max_components = {}) {
  using Scalar = typename Derived::Scalar;
  const Index m = eigenvalues.size();
  const Scalar thr = static_cast<Scalar>(gap_threshold);
  for (Index i = 1; i < m; ++i)
    detail::require(eigenvalues(i) <= eigenvalues(i - 1), "select_components: eigenvalues must be descending");

  ComponentSelection<Scalar> out{{}, std::numeric_limits<Scalar>::infinity()};
  const Index cap = max_components.value_or(m);
  for (Index i = 0; i < m && static_cast<Index>(out.selected.size()) < cap; ++i) {
    const Scalar lambda = eigenvalues(i);
    const Scalar next = i + 1 < m ? eigenvalues(i + 1) : Scalar(0);
    const Scalar prev_gap = i == 0 ? std::numeric_limits<Scalar>::infinity() : eigenvalues(i - 1) - lambda;
    if (lambda > thr && lambda - next >= thr && prev_gap >= thr) {
      out.selected.push_back(i);
      out.delta = std::min(out.delta, lambda - next);
    }
  }
  if (out.selected.empty())
    throw EmptySelection(fmt::format("no eigenvalue has spectral gaps >= {} (largest eigenvalue {})", gap_threshold,
                                     m > 0 ? static_cast<double>(eigenvalues(0)) : 0.0));
  return out;
}

/// Basis of A C_X A^T with components chosen by `select_components`.
template <typename DerivedA, typename DerivedC>
BasicSpectralBasis<typename DerivedA::Scalar> build_signal_basis(const Eigen::MatrixBase<DerivedA>& a,
                                                                 const Eigen::MatrixBase<DerivedC>& c_x,
                                                                 const SolverConfig& config) {
  using Scalar = typename DerivedA::Scalar;
  detail::require_dims(c_x.rows() == a.cols() && c_x.cols() == a.cols(), "build_signal_basis: C_X must be n x n");
  MatrixX<Scalar> cov = a * c_x * a.transpose();
  cov = (cov + cov.transpose()) / Scalar(2);
  auto eig = eigendecompose_descending(cov);
  auto sel = select_components(eig.eigenvalues, config.gap_threshold, config.max_components);
  return {std::move(eig.eigenvalues), std::move(eig.vectors), std::move(sel.selected), sel.delta};
}

/// Basis of the sample covariance (1/t) Y Y^T - C_N, matched on the same
/// component indices as the signal basis.
///
/// Throws EmptySelection when no selected eigenvalue of the sample matrix
/// exceeds the gap threshold (no signal left after removing C_N).
template <typename DerivedY, typename DerivedN>
BasicSpectralBasis<typename DerivedY::Scalar> build_measurement_basis(const Eigen::MatrixBase<DerivedY>& y,
                                                                      const Eigen::MatrixBase<DerivedN>& c_n,
                                                                      const std::vector<Index>& selected,
                                                                      double gap_threshold) {
  using Scalar = typename DerivedY::Scalar;
  auto eig = eigendecompose_descending(sample_covariance(y, c_n));
  const Index m = eig.eigenvalues.size();
  detail::require(!selected.empty(), "build_measurement_basis: empty component set");
  Scalar delta = std::numeric_limits<Scalar>::infinity();
  bool any_signal = false;
  for (Index i : selected) {
    detail::require_dims(i >= 0 && i < m, "build_measurement_basis: component index out of range");
    const Scalar next = i + 1 < m ? eig.eigenvalues(i + 1) : Scalar(0);
    delta = std::min(delta, eig.eigenvalues(i) - next);
    any_signal = any_signal || eig.eigenvalues(i) > static_cast<Scalar>(gap_threshold);
  }
  if (!any_signal)
    throw EmptySelection("sample covariance minus noise covariance has no eigenvalue above the gap threshold");
  return {std::move(eig.eigenvalues), std::move(eig.vectors), selected, delta};
}

template <typename Scalar>
BasicSpectralBasis<Scalar> build_measurement_basis(const BasicSlrProblem<Scalar>& problem,
                                                   const BasicSpectralBasis<Scalar>& signal) {
  return build_measurement_basis(problem.Y, problem.C_N, signal.selected, problem.config.gap_threshold);
}

}  // namespace slr
