#include "slr/baselines.hpp"
#include "slr/model.hpp"
#include "slr/random.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace slr;

namespace {

SlrProblem small_problem(std::uint64_t seed, Index m = 6) {
  return generate_dense_problem(m, 3, 20, 10, 1.0, seed).problem;
}

bool is_bijection(const Permutation& p, Index m) {
  std::vector<int> seen(static_cast<std::size_t>(m), 0);
  for (Index k = 0; k < p.size(); ++k) ++seen[static_cast<std::size_t>(p[k])];
  return p.size() == m && std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
}

}  // namespace

TEST(Spatial, NoiselessDiagonalDominantIsIdentity) {
  Rng rng(1);
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(5, 5);
  Eigen::MatrixXd x(5, 200);
  fill_gaussian(rng, x);
  const SlrProblem p(a * x, a, Eigen::MatrixXd::Zero(5, 5));
  EXPECT_TRUE(spatial_match(p).is_identity());
}

TEST(Spatial, MatchesExhaustiveSearch) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto p = small_problem(seed);
    const Eigen::MatrixXd d = p.A * p.A.transpose() * p.Y * p.Y.transpose();
    const auto perm = spatial_match(p);
    EXPECT_NEAR((testing_oracles::dense_permutation(perm) * d).trace(), testing_oracles::brute_force_max_trace(d),
                1e-9 * d.cwiseAbs().maxCoeff());
  }
}

TEST(Leverage, SortedMatchExamples) {
  Eigen::VectorXd a = Eigen::VectorXd::LinSpaced(5, 0.1, 0.5);
  EXPECT_TRUE(match_sorted_scores(a, a).is_identity());
  EXPECT_EQ(match_sorted_scores(Eigen::Vector2d(0.8, 0.2), Eigen::Vector2d(0.1, 0.9)), Permutation({1, 0}));
}

TEST(Leverage, MatchesExhaustiveSearch) {
  Rng rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd y(6), a(6);
    for (Index i = 0; i < 6; ++i) {
      y(i) = uniform01(rng);
      a(i) = uniform01(rng);
    }
    const auto perm = match_sorted_scores(y, a);
    const double cost = (y - perm.apply(a)).squaredNorm();
    double best = std::numeric_limits<double>::infinity();
    testing_oracles::for_each_permutation(6, [&](const std::vector<Index>& map) {
      best = std::min(best, (y - Permutation(map).apply(a)).squaredNorm());
    });
    EXPECT_NEAR(cost, best, 1e-12);
  }
}

TEST(Leverage, ScoresAreRowNormsOfLeftSingularVectors) {
  Rng rng(3);
  Eigen::MatrixXd m(7, 3);
  fill_gaussian(rng, m);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const Eigen::VectorXd expected = svd.matrixU().rowwise().squaredNorm();
  EXPECT_LT((leverage_scores(m, 3) - expected).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(leverage_scores(m, 3).sum(), 3.0, 1e-10);
}

TEST(Leverage, InvariantToColumnRotation) {
  Rng rng(4);
  Eigen::MatrixXd y(5, 12);
  fill_gaussian(rng, y);
  Eigen::MatrixXd g(12, 12);
  fill_gaussian(rng, g);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  EXPECT_LT((leverage_scores(y, 5) - leverage_scores(Eigen::MatrixXd(y * q), 5)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Threshold, KeepsLargestMagnitudeWithSign) {
  Eigen::Vector3d c(3, -5, 1);
  EXPECT_EQ(column_max_threshold(c), Eigen::Vector3d(0, -5, 0));
  Eigen::Vector3d tie(2, -2, 1);
  EXPECT_EQ(column_max_threshold(tie), Eigen::Vector3d(2, 0, 0));
}

TEST(Threshold, Idempotent) {
  Rng rng(5);
  Eigen::MatrixXd m(6, 9);
  fill_gaussian(rng, m);
  const Eigen::MatrixXd once = column_max_threshold(m);
  EXPECT_EQ(column_max_threshold(once), once);
}

TEST(Threshold, NoiselessOrthonormalIsIdentity) {
  Rng rng(6);
  Eigen::MatrixXd g(6, 6);
  fill_gaussian(rng, g);
  const Eigen::MatrixXd a = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  Eigen::MatrixXd x(6, 300);
  fill_gaussian(rng, x);
  const SlrProblem p(a * x, a, Eigen::MatrixXd::Zero(6, 6));
  EXPECT_TRUE(threshold_match(p).is_identity());
}

TEST(Threshold, MatchesExhaustiveSearch) {
  for (std::uint64_t seed = 20; seed < 30; ++seed) {
    const auto p = small_problem(seed);
    const Eigen::MatrixXd d = p.A * column_max_threshold(p.A.transpose() * p.Y) * p.Y.transpose();
    const auto perm = threshold_match(p);
    EXPECT_NEAR((testing_oracles::dense_permutation(perm) * d).trace(), testing_oracles::brute_force_max_trace(d),
                1e-9 * d.cwiseAbs().maxCoeff());
  }
}

TEST(Baselines, AlwaysReturnBijections) {
  for (std::uint64_t seed = 40; seed < 50; ++seed) {
    const auto p = small_problem(seed, 9);
    EXPECT_TRUE(is_bijection(spatial_match(p), 9));
    EXPECT_TRUE(is_bijection(leverage_match(p), 9));
    EXPECT_TRUE(is_bijection(threshold_match(p), 9));
  }
}
