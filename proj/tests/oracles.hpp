#pragma once
// Independent reference computations used only by tests.

#include "slr/permutation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace testing_oracles {

using slr::Index;

// Pi with entry (k, map[k]) = 1.
inline Eigen::MatrixXd dense_permutation(const slr::Permutation& perm) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(perm.size(), perm.size());
  for (Index k = 0; k < perm.size(); ++k) p(k, perm[k]) = 1.0;
  return p;
}

// Calls f(map) for every permutation of {0..m-1}.
template <typename F>
void for_each_permutation(Index m, F&& f) {
  std::vector<Index> map(static_cast<std::size_t>(m));
  std::iota(map.begin(), map.end(), Index{0});
  do {
    f(map);
  } while (std::next_permutation(map.begin(), map.end()));
}

// max over Pi of tr(D Pi) = sum_l D(map[l], l), summed in the same order as the solver.
inline double brute_force_max_trace(const Eigen::MatrixXd& d) {
  double best = -std::numeric_limits<double>::infinity();
  for_each_permutation(d.rows(), [&](const std::vector<Index>& map) {
    double s = 0;
    for (Index l = 0; l < d.rows(); ++l) s += d(map[static_cast<std::size_t>(l)], l);
    best = std::max(best, s);
  });
  return best;
}

inline double lasso_objective(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& x,
                              double rho) {
  return (b - a * x).squaredNorm() + rho * x.lpNorm<1>();
}

// Proximal gradient (ISTA) with step 1/L, L = 2 ||A||_2^2.
inline Eigen::VectorXd ista(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double rho, int iters) {
  const double sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
  const double step = 1.0 / (2.0 * sigma * sigma);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(a.cols());
  for (int it = 0; it < iters; ++it) {
    const Eigen::VectorXd z = x - step * 2.0 * a.transpose() * (a * x - b);
    for (Index j = 0; j < x.size(); ++j) {
      const double level = step * rho;
      x(j) = z(j) > level ? z(j) - level : (z(j) < -level ? z(j) + level : 0.0);
    }
  }
  return x;
}

// Largest violation of the stationarity conditions of ||b - Ax||^2 + rho ||x||_1.
inline double kkt_violation(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& x,
                            double rho) {
  const Eigen::VectorXd g = 2.0 * a.transpose() * (a * x - b);
  double worst = 0;
  for (Index j = 0; j < x.size(); ++j) {
    const double v = x(j) == 0.0 ? std::max(0.0, std::abs(g(j)) - rho) : std::abs(g(j) + rho * (x(j) > 0 ? 1.0 : -1.0));
    worst = std::max(worst, v);
  }
  return worst;
}

inline Eigen::MatrixXd naive_covariance(const Eigen::MatrixXd& y, const Eigen::MatrixXd& c_n) {
  const Index m = y.rows();
  Eigen::MatrixXd c(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      double s = 0;
      for (Index k = 0; k < y.cols(); ++k) s += y(i, k) * y(j, k);
      c(i, j) = s / static_cast<double>(y.cols()) - c_n(i, j);
    }
  return c;
}

}  // namespace testing_oracles
