#pragma once

#include "slr/permutation.hpp"
#include "slr/types.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <bit>
#include <cstdint>
#include <random>
#include <vector>

namespace slr {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// seed XOR hash(sweep value, trial): every (sweep point, trial) gets its own stream.
inline std::uint64_t derive_seed(std::uint64_t seed, double sweep_value, std::uint64_t trial) {
  const std::uint64_t h = splitmix64(std::bit_cast<std::uint64_t>(sweep_value) ^ splitmix64(trial));
  return seed ^ h;
}

template <typename Derived>
void fill_gaussian(Rng& rng, Eigen::MatrixBase<Derived>& m, double stddev = 1.0) {
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) m(i, j) = stddev * normal(rng);
}

inline double uniform01(Rng& rng) { return boost::random::uniform_01<double>()(rng); }

/// Fisher-Yates shuffle with a portable index distribution.
template <typename T>
void portable_shuffle(Rng& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) {
    boost::random::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(v[i - 1], v[pick(rng)]);
  }
}

inline Permutation random_permutation(Rng& rng, Index m) {
  std::vector<Index> map(static_cast<std::size_t>(m));
  for (Index k = 0; k < m; ++k) map[static_cast<std::size_t>(k)] = k;
  portable_shuffle(rng, map);
  return Permutation(std::move(map));
}

}  // namespace slr
