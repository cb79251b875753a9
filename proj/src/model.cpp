#include "slr/model.hpp"

#include "slr/random.hpp"

#include <cmath>

namespace slr {
namespace {

Eigen::MatrixXd column_normalized_gaussian(Rng& rng, Index m, Index n) {
  Eigen::MatrixXd a(m, n);
  fill_gaussian(rng, a);
  for (Index j = 0; j < n; ++j) {
    const double norm = a.col(j).norm();
    // A Gaussian column is zero with probability 0; guard anyway for m == 1 underflow.
    if (norm > 0) a.col(j) /= norm;
  }
  return a;
}

// Shuffles floor(p_e * m) uniformly chosen rows among themselves with a
// uniform (not necessarily fixed-point-free) permutation.
Permutation partial_shuffle(Rng& rng, Index m, double p_e) {
  const auto count = static_cast<std::size_t>(std::floor(p_e * static_cast<double>(m)));
  std::vector<Index> rows(static_cast<std::size_t>(m));
  for (Index k = 0; k < m; ++k) rows[static_cast<std::size_t>(k)] = k;
  portable_shuffle(rng, rows);
  std::vector<Index> selected(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(count));
  std::vector<Index> targets = selected;
  portable_shuffle(rng, targets);

  std::vector<Index> map(static_cast<std::size_t>(m));
  for (Index k = 0; k < m; ++k) map[static_cast<std::size_t>(k)] = k;
  for (std::size_t i = 0; i < count; ++i) map[static_cast<std::size_t>(selected[i])] = targets[i];
  return Permutation(std::move(map));
}

SyntheticInstance assemble(Rng& rng, Eigen::MatrixXd a, Eigen::MatrixXd x, Permutation perm, double sigma2,
                           const SolverConfig& config) {
  const Index m = a.rows();
  const Index t = x.cols();
  Eigen::MatrixXd noise(m, t);
  fill_gaussian(rng, noise, std::sqrt(sigma2));
  Eigen::MatrixXd y = perm.apply(a * x) + noise;
  Eigen::MatrixXd c_n = sigma2 * Eigen::MatrixXd::Identity(m, m);
  SyntheticInstance out{SlrProblem(std::move(y), std::move(a), std::move(c_n), config),
                        GroundTruth{std::move(perm), std::move(x), sigma2}};
  return out;
}

void check_common(Index m, Index n, Index t, double snr_db) {
  detail::require(m >= 1 && n >= 1 && t >= 1, "m, n, t must be >= 1");
  detail::require(std::isfinite(snr_db), "snr_db must be finite");
}

}  // namespace

SyntheticInstance generate_dense_problem(Index m, Index n, Index t, double snr_db, double p_e,
                                         std::uint64_t seed, SolverConfig config) {
  check_common(m, n, t, snr_db);
  detail::require(p_e >= 0.0 && p_e <= 1.0, "p_e must lie in [0, 1]");
  Rng rng(seed);
  Eigen::MatrixXd a = column_normalized_gaussian(rng, m, n);
  Eigen::MatrixXd x(n, t);
  fill_gaussian(rng, x);
  Permutation perm = partial_shuffle(rng, m, p_e);
  return assemble(rng, std::move(a), std::move(x), std::move(perm), noise_variance_from_snr_db(snr_db), config);
}

SyntheticInstance generate_sparse_problem(Index m, Index n, Index t, double snr_db, double s,
                                          std::uint64_t seed, SolverConfig config) {
  check_common(m, n, t, snr_db);
  detail::require(s > 0 && s <= static_cast<double>(n), "sparsity s must satisfy 0 < s <= n");
  Rng rng(seed);
  Eigen::MatrixXd a = column_normalized_gaussian(rng, m, n);
  const double active = s / static_cast<double>(n);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd x(n, t);
  for (Index j = 0; j < t; ++j)
    for (Index i = 0; i < n; ++i) {
      const bool on = uniform01(rng) < active;
      const double g = normal(rng);
      x(i, j) = on ? g : 0.0;
    }
  Permutation perm = random_permutation(rng, m);
  return assemble(rng, std::move(a), std::move(x), std::move(perm), noise_variance_from_snr_db(snr_db), config);
}

}  // namespace slr
