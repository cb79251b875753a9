#pragma once

#include "slr/permutation.hpp"
#include "slr/spectral.hpp"
#include "slr/types.hpp"

#include <limits>
#include <vector>

namespace slr {

template <typename Scalar>
struct BasicAssignmentResult {
  Permutation perm;
  Scalar objective = 0;  // tr(D * Pi)
};

using AssignmentResult = BasicAssignmentResult<double>;

/// tr(D * Pi) = sum_l D(map[l], l).
template <typename Derived>
typename Derived::Scalar trace_objective(const Eigen::MatrixBase<Derived>& expr, const Permutation& perm) {
  using Scalar = typename Derived::Scalar;
  const auto& d = expr.eval();
  detail::require_dims(d.rows() == perm.size() && d.cols() == perm.size(), "trace_objective: size mismatch");
  Scalar sum = 0;
  for (Index l = 0; l < perm.size(); ++l) sum += d(perm[l], l);
  return sum;
}

/// Exact maximizer of tr(D * Pi) over m x m permutation matrices, O(m^3).
///
/// Shortest-augmenting-path Hungarian method on cost(l, i) = max(D) - D(i, l),
/// assigning each row l of the cost (column of D) to map[l]. Rows are inserted
/// in increasing index order, and among equally short augmenting columns the
/// lowest index wins, which fixes the tie-breaking on every platform.
template <typename Derived>
BasicAssignmentResult<typename Derived::Scalar> max_trace_assignment(const Eigen::MatrixBase<Derived>& expr) {
  using Scalar = typename Derived::Scalar;
  const MatrixX<Scalar> d = expr;
  detail::require_dims(d.rows() == d.cols(), "max_trace_assignment: cost matrix must be square");
  detail::require(d.allFinite(), "max_trace_assignment: cost matrix has non-finite entries");
  const Index m = d.rows();
  if (m == 0) return {Permutation::identity(0), Scalar(0)};

  const Scalar top = d.maxCoeff();
  auto cost = [&](Index row, Index col) { return top - d(col, row); };

  constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
  const auto n = static_cast<std::size_t>(m);
  // 1-based potentials; index 0 is the virtual start column.
  std::vector<Scalar> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<std::size_t> owner(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t row = 1; row <= n; ++row) {
    owner[0] = row;
    std::size_t col0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t row0 = owner[col0];
      Scalar step = inf;
      std::size_t col1 = 0;
      for (std::size_t col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const Scalar reduced =
            cost(static_cast<Index>(row0 - 1), static_cast<Index>(col - 1)) - u[row0] - v[col];
        if (reduced < minv[col]) {
          minv[col] = reduced;
          way[col] = col0;
        }
        if (minv[col] < step) {
          step = minv[col];
          col1 = col;
        }
      }
      for (std::size_t col = 0; col <= n; ++col) {
        if (used[col]) {
          u[owner[col]] += step;
          v[col] -= step;
        } else {
          minv[col] -= step;
        }
      }
      col0 = col1;
    } while (owner[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      owner[col0] = owner[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<Index> map(n);
  for (std::size_t col = 1; col <= n; ++col) map[owner[col] - 1] = static_cast<Index>(col - 1);
  Permutation perm(std::move(map));
  const Scalar objective = trace_objective(d, perm);
  return {std::move(perm), objective};
}

/// abs(V_A) abs(U_A)^T for two bases sharing the same component set.
template <typename Scalar>
MatrixX<Scalar> spectral_cost_matrix(const BasicSpectralBasis<Scalar>& signal,
                                     const BasicSpectralBasis<Scalar>& measurement) {
  detail::require_dims(signal.k() == measurement.k(), "spectral_match: bases select different numbers of components");
  detail::require_dims(signal.m() == measurement.m(), "spectral_match: bases have different dimensions");
  return signal.selected_vectors().cwiseAbs() * measurement.selected_vectors().cwiseAbs().transpose();
}

/// Permutation aligning the measurement eigenvectors to the signal eigenvectors.
/// Taking absolute values removes the per-eigenvector sign ambiguity.
template <typename Scalar>
BasicAssignmentResult<Scalar> spectral_match(const BasicSpectralBasis<Scalar>& signal,
                                             const BasicSpectralBasis<Scalar>& measurement) {
  return max_trace_assignment(spectral_cost_matrix(signal, measurement));
}

}  // namespace slr
