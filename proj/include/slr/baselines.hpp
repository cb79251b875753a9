#pragma once

#include "slr/assignment.hpp"
#include "slr/model.hpp"
#include "slr/types.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace slr {

/// Spatial-correlation matching: argmax over Pi of tr(Pi A A^T Y Y^T).
template <typename Scalar>
Permutation spatial_match(const BasicSlrProblem<Scalar>& problem) {
  const MatrixX<Scalar> gram_a = problem.A * problem.A.transpose();
  MatrixX<Scalar> gram_y = MatrixX<Scalar>::Zero(problem.m(), problem.m());
  gram_y.template selfadjointView<Eigen::Lower>().rankUpdate(problem.Y);
  gram_y.template triangularView<Eigen::StrictlyUpper>() = gram_y.transpose();
  // tr(Pi M) = tr(M Pi), which is the form max_trace_assignment solves.
  return max_trace_assignment(gram_a * gram_y).perm;
}

/// Squared row norms of the leading `rank` left singular vectors.
template <typename Derived>
VectorX<typename Derived::Scalar> leverage_scores(const Eigen::MatrixBase<Derived>& m, Index rank) {
  using Scalar = typename Derived::Scalar;
  detail::require(rank >= 1 && rank <= std::min(m.rows(), m.cols()), "leverage_scores: rank out of range");
  // Left singular vectors of M are eigenvectors of M M^T; m is small here.
  MatrixX<Scalar> gram = MatrixX<Scalar>::Zero(m.rows(), m.rows());
  gram.template selfadjointView<Eigen::Lower>().rankUpdate(m);
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(gram.template selfadjointView<Eigen::Lower>());
  const MatrixX<Scalar> left = eig.eigenvectors().rightCols(rank);
  return left.rowwise().squaredNorm();
}

/// Permutation minimizing ||y_scores - Pi a_scores||^2: match ranks of the sorted scores.
template <typename DerivedY, typename DerivedA>
Permutation match_sorted_scores(const Eigen::MatrixBase<DerivedY>& y_scores,
                                const Eigen::MatrixBase<DerivedA>& a_scores) {
  detail::require_dims(y_scores.size() == a_scores.size(), "match_sorted_scores: size mismatch");
  const Index m = y_scores.size();
  auto order = [](const auto& v) {
    std::vector<Index> idx(static_cast<std::size_t>(v.size()));
    std::iota(idx.begin(), idx.end(), Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Index i, Index j) { return v(i) < v(j); });
    return idx;
  };
  const auto by_y = order(y_scores);
  const auto by_a = order(a_scores);
  std::vector<Index> map(static_cast<std::size_t>(m));
  for (std::size_t r = 0; r < by_y.size(); ++r) map[static_cast<std::size_t>(by_y[r])] = by_a[r];
  return Permutation(std::move(map));
}

/// Leverage-score matching. Both score vectors use rank(A) singular vectors,
/// the rank of the noiseless Y = Pi A X.
template <typename Scalar>
Permutation leverage_match(const BasicSlrProblem<Scalar>& problem) {
  Eigen::ColPivHouseholderQR<MatrixX<Scalar>> qr(problem.A);
  const Index rank = std::clamp<Index>(qr.rank(), 1, std::min(problem.m(), problem.t()));
  return match_sorted_scores(leverage_scores(problem.Y, rank), leverage_scores(problem.A, rank));
}

/// Keeps the largest-magnitude entry of each column (lowest row on ties) and zeroes the rest.
template <typename Derived>
MatrixX<typename Derived::Scalar> column_max_threshold(const Eigen::MatrixBase<Derived>& expr) {
  using Scalar = typename Derived::Scalar;
  const auto& m = expr.eval();
  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(m.rows(), m.cols());
  for (Index c = 0; c < m.cols(); ++c) {
    if (m.rows() == 0) break;
    Index best = 0;
    for (Index r = 1; r < m.rows(); ++r)
      if (std::abs(m(r, c)) > std::abs(m(best, c))) best = r;
    out(best, c) = m(best, c);
  }
  return out;
}

/// Thresholded-correlation matching: argmax over Pi of tr(Pi A thres(A^T Y) Y^T).
template <typename Scalar>
Permutation threshold_match(const BasicSlrProblem<Scalar>& problem) {
  const MatrixX<Scalar> sparse_x = column_max_threshold(problem.A.transpose() * problem.Y);
  return max_trace_assignment((problem.A * sparse_x) * problem.Y.transpose()).perm;
}

}  // namespace slr
