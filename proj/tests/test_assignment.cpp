#include "slr/assignment.hpp"
#include "slr/model.hpp"
#include "slr/random.hpp"
#include "slr/spectral.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace slr;

TEST(Assignment, IdentityCost) {
  const auto r = max_trace_assignment(Eigen::MatrixXd::Identity(2, 2));
  EXPECT_TRUE(r.perm.is_identity());
  EXPECT_DOUBLE_EQ(r.objective, 2.0);
}

TEST(Assignment, SwapCost) {
  Eigen::Matrix2d d;
  d << 0, 1, 1, 0;
  const auto r = max_trace_assignment(d);
  EXPECT_EQ(r.perm, Permutation({1, 0}));
  EXPECT_DOUBLE_EQ(r.objective, 2.0);
}

TEST(Assignment, ObjectiveIsTraceOfDPi) {
  Rng rng(1);
  Eigen::MatrixXd d(6, 6);
  fill_gaussian(rng, d);
  const auto r = max_trace_assignment(d);
  const double dense = (d * testing_oracles::dense_permutation(r.perm)).trace();
  EXPECT_NEAR(r.objective, dense, 1e-10);
  EXPECT_NEAR(r.objective, trace_objective(d, r.perm), 1e-10);
}

TEST(Assignment, MatchesExhaustiveSearch) {
  Rng rng(2);
  for (Index m = 1; m <= 8; ++m) {
    for (int rep = 0; rep < (m <= 6 ? 20 : 3); ++rep) {
      Eigen::MatrixXd d(m, m);
      fill_gaussian(rng, d);
      EXPECT_EQ(max_trace_assignment(d).objective, testing_oracles::brute_force_max_trace(d)) << "m=" << m;
    }
  }
}

TEST(Assignment, IntegerTiesStillOptimal) {
  Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::MatrixXd d(5, 5);
    for (Index i = 0; i < 5; ++i)
      for (Index j = 0; j < 5; ++j) d(i, j) = std::floor(uniform01(rng) * 3);
    EXPECT_EQ(max_trace_assignment(d).objective, testing_oracles::brute_force_max_trace(d));
  }
}

TEST(Assignment, ScaleInvariance) {
  Rng rng(4);
  Eigen::MatrixXd d(7, 7);
  fill_gaussian(rng, d);
  const auto base = max_trace_assignment(d);
  const auto scaled = max_trace_assignment(Eigen::MatrixXd(3.5 * d));
  EXPECT_NEAR(scaled.objective, 3.5 * base.objective, 1e-10);
  EXPECT_NEAR(trace_objective(d, scaled.perm), base.objective, 1e-10);
}

TEST(Assignment, BeatsRandomPermutations) {
  Rng rng(5);
  Eigen::MatrixXd d(20, 20);
  fill_gaussian(rng, d);
  const auto r = max_trace_assignment(d);
  for (int rep = 0; rep < 100; ++rep) EXPECT_GE(r.objective, trace_objective(d, random_permutation(rng, 20)));
}

TEST(Assignment, RejectsBadInput) {
  EXPECT_THROW(max_trace_assignment(Eigen::MatrixXd::Zero(2, 3)), DimensionMismatch);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(max_trace_assignment(d), InvalidArgument);
}

TEST(SpectralMatch, SignFlipsDoNotMatter) {
  Rng rng(6);
  Eigen::MatrixXd a(8, 8);
  fill_gaussian(rng, a);
  const auto signal = build_signal_basis(a, Eigen::MatrixXd::Identity(8, 8), SolverConfig{});
  const auto truth = random_permutation(rng, 8);
  for (int rep = 0; rep < 5; ++rep) {
    SpectralBasis meas = signal;
    meas.vectors = truth.apply(signal.vectors);
    for (Index c = 0; c < 8; ++c)
      if (uniform01(rng) < 0.5) meas.vectors.col(c) *= -1;
    EXPECT_EQ(spectral_match(signal, meas).perm, truth);
  }
}

TEST(SpectralMatch, NoiselessEndToEnd) {
  const Index m = 6, n = 6, t = 6;
  Rng rng(7);
  Eigen::MatrixXd a(m, n);
  fill_gaussian(rng, a);
  const auto truth = random_permutation(rng, m);
  const Eigen::MatrixXd x = std::sqrt(static_cast<double>(t)) * Eigen::MatrixXd::Identity(n, t);
  const auto signal = build_signal_basis(a, Eigen::MatrixXd::Identity(n, n), SolverConfig{});
  ASSERT_EQ(signal.k(), m);
  const auto meas = build_measurement_basis(truth.apply(a * x), Eigen::MatrixXd::Zero(m, m), signal.selected, 1e-3);
  EXPECT_EQ(spectral_match(signal, meas).perm, truth);
}

TEST(SpectralMatch, ConstantEigenvectorTieIsOptimal) {
  SpectralBasis basis;
  basis.eigenvalues = Eigen::Vector4d(1, 0, 0, 0);
  basis.vectors = Eigen::MatrixXd::Identity(4, 4);
  basis.vectors.col(0).setConstant(0.5);
  basis.selected = {0};
  basis.delta = 1;
  const auto r = spectral_match(basis, basis);
  EXPECT_EQ(r.objective, testing_oracles::brute_force_max_trace(spectral_cost_matrix(basis, basis)));
}

TEST(SpectralMatch, RejectsMismatchedComponents) {
  SpectralBasis a;
  a.eigenvalues = Eigen::Vector2d(2, 1);
  a.vectors = Eigen::MatrixXd::Identity(2, 2);
  a.selected = {0, 1};
  SpectralBasis b = a;
  b.selected = {0};
  EXPECT_THROW(spectral_match(a, b), DimensionMismatch);
}
