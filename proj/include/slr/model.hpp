#pragma once

#include "slr/permutation.hpp"
#include "slr/types.hpp"

#include <cmath>
#include <cstdint>
#include <optional>

namespace slr {

struct SolverConfig {
  /// Minimum spectral gap (and minimum eigenvalue) for a component to be matched.
  double gap_threshold = 1e-3;
  /// Cap on the number of matched components; empty means all eligible ones.
  std::optional<Index> max_components;
  /// LASSO penalty on the entrywise l1 norm of X.
  double rho = 1.0;
  double lasso_tol = 1e-8;
  int lasso_max_iters = 10'000;

  void validate() const {
    detail::require(gap_threshold > 0 && std::isfinite(gap_threshold), "gap_threshold must be > 0");
    detail::require(!max_components || *max_components >= 1, "max_components must be >= 1");
    detail::require(rho >= 0 && std::isfinite(rho), "rho must be >= 0");
    detail::require(lasso_tol > 0, "lasso_tol must be > 0");
    detail::require(lasso_max_iters >= 1, "lasso_max_iters must be >= 1");
  }
};

/// Observations Y = Pi* A X* + N of a shuffled linear regression instance.
template <typename Scalar>
struct BasicSlrProblem {
  MatrixX<Scalar> Y;    // m x t, column i is y_i
  MatrixX<Scalar> A;    // m x n sensing matrix
  MatrixX<Scalar> C_N;  // m x m noise covariance
  SolverConfig config;

  BasicSlrProblem() = default;
  BasicSlrProblem(MatrixX<Scalar> y, MatrixX<Scalar> a, MatrixX<Scalar> c_n, SolverConfig cfg = {})
      : Y(std::move(y)), A(std::move(a)), C_N(std::move(c_n)), config(cfg) {
    validate();
  }

  Index m() const { return Y.rows(); }
  Index t() const { return Y.cols(); }
  Index n() const { return A.cols(); }

  void validate() const {
    detail::require(Y.rows() >= 1 && Y.cols() >= 1 && A.cols() >= 1, "problem dimensions must be >= 1");
    detail::require_dims(A.rows() == Y.rows(), "A and Y row counts differ");
    detail::require_dims(C_N.rows() == Y.rows() && C_N.cols() == Y.rows(), "C_N must be m x m");
    detail::require(Y.allFinite() && A.allFinite() && C_N.allFinite(), "problem has non-finite entries");
    detail::require((C_N - C_N.transpose()).cwiseAbs().maxCoeff() <= Scalar(1e-10),
                    "C_N is not symmetric");
    config.validate();
  }
};

template <typename Scalar>
struct BasicGroundTruth {
  Permutation perm;    // Pi*
  MatrixX<Scalar> X;   // n x t
  Scalar sigma2 = 0;   // noise variance
};

using SlrProblem = BasicSlrProblem<double>;
using GroundTruth = BasicGroundTruth<double>;

/// m x 3 point set, one Cartesian point per row.
template <typename Scalar>
struct BasicPointCloud {
  using Points = Eigen::Matrix<Scalar, Eigen::Dynamic, 3>;
  Points points;

  BasicPointCloud() = default;
  explicit BasicPointCloud(Points p) : points(std::move(p)) {
    detail::require(points.allFinite(), "point cloud has non-finite coordinates");
  }
  Index size() const { return points.rows(); }
};

using PointCloud = BasicPointCloud<double>;

struct SyntheticInstance {
  SlrProblem problem;
  GroundTruth truth;
};

/// SNR in dB (defined as 1/sigma^2) to noise variance.
inline double noise_variance_from_snr_db(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

/// Dense Gaussian features, column-normalized Gaussian A, and a permutation
/// that shuffles floor(p_e * m) randomly chosen rows among themselves.
///
/// Sampling uses std::mt19937_64 with Boost.Random distributions, whose output
/// is fixed by their algorithms, so a seed replays the same instance everywhere.
SyntheticInstance generate_dense_problem(Index m, Index n, Index t, double snr_db, double p_e,
                                         std::uint64_t seed, SolverConfig config = {});

/// Bernoulli-Gaussian features with E||x_i||_0 = s and a uniformly random permutation.
SyntheticInstance generate_sparse_problem(Index m, Index n, Index t, double snr_db, double s,
                                          std::uint64_t seed, SolverConfig config = {});

}  // namespace slr
