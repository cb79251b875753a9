#pragma once

#include "slr/types.hpp"

#include <numeric>
#include <string>
#include <vector>

namespace slr {

/// Row permutation of an m-row matrix, stored as an index map.
///
/// map[k] = l means the permutation matrix has a one at (k, l), so row k of
/// `apply(M)` is row l of M. The dense matrix is never formed.
class Permutation {
 public:
  Permutation() = default;

  /// Throws InvalidArgument unless `map` is a bijection on {0, ..., m-1}.
  explicit Permutation(std::vector<Index> map) : map_(std::move(map)) {
    std::vector<char> seen(map_.size(), 0);
    for (Index l : map_) {
      if (l < 0 || l >= size() || seen[static_cast<std::size_t>(l)])
        throw InvalidArgument("permutation map is not a bijection");
      seen[static_cast<std::size_t>(l)] = 1;
    }
  }

  static Permutation identity(Index m) {
    std::vector<Index> map(static_cast<std::size_t>(m));
    std::iota(map.begin(), map.end(), Index{0});
    return Permutation(std::move(map), Unchecked{});
  }

  Index size() const { return static_cast<Index>(map_.size()); }
  Index operator[](Index k) const { return map_[static_cast<std::size_t>(k)]; }
  const std::vector<Index>& map() const { return map_; }

  bool is_identity() const {
    for (Index k = 0; k < size(); ++k)
      if ((*this)[k] != k) return false;
    return true;
  }

  Permutation inverse() const {
    std::vector<Index> inv(map_.size());
    for (Index k = 0; k < size(); ++k) inv[static_cast<std::size_t>((*this)[k])] = k;
    return Permutation(std::move(inv), Unchecked{});
  }

  /// Permutation whose matrix is (this matrix) * (other matrix).
  Permutation compose(const Permutation& other) const {
    detail::require_dims(size() == other.size(), "compose: size mismatch");
    std::vector<Index> out(map_.size());
    for (Index k = 0; k < size(); ++k) out[static_cast<std::size_t>(k)] = other[(*this)[k]];
    return Permutation(std::move(out), Unchecked{});
  }

  /// Returns Pi * M.
  template <typename Derived>
  auto apply(const Eigen::MatrixBase<Derived>& expr) const {
    const auto& m = expr.eval();
    using Scalar = typename Derived::Scalar;
    detail::require_dims(m.rows() == size(), "apply_permutation: row count != permutation size");
    MatrixX<Scalar> out(m.rows(), m.cols());
    for (Index k = 0; k < size(); ++k) out.row(k) = m.row((*this)[k]);
    return out;
  }

  /// Returns Pi^T * M.
  template <typename Derived>
  auto apply_transpose(const Eigen::MatrixBase<Derived>& expr) const {
    const auto& m = expr.eval();
    using Scalar = typename Derived::Scalar;
    detail::require_dims(m.rows() == size(), "apply_permutation: row count != permutation size");
    MatrixX<Scalar> out(m.rows(), m.cols());
    for (Index k = 0; k < size(); ++k) out.row((*this)[k]) = m.row(k);
    return out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  struct Unchecked {};
  Permutation(std::vector<Index> map, Unchecked) : map_(std::move(map)) {}

  std::vector<Index> map_;
};

/// Free-function spelling of Permutation::apply.
template <typename Derived>
auto apply_permutation(const Permutation& perm, const Eigen::MatrixBase<Derived>& m) {
  return perm.apply(m);
}

inline Permutation invert(const Permutation& perm) { return perm.inverse(); }

}  // namespace slr
