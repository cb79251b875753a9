#include "slr/random.hpp"
#include "slr/registration.hpp"

#include <algorithm>
#include <numeric>

namespace slr {

Eigen::Matrix3d random_rotation(std::uint64_t seed) {
  Rng rng(seed);
  Eigen::Vector4d g;
  do {
    fill_gaussian(rng, g);
  } while (g.norm() < 1e-12);
  // A normalized 4D Gaussian is a uniform unit quaternion, hence a Haar rotation.
  Eigen::Quaterniond q(g(0), g(1), g(2), g(3));
  q.normalize();
  return q.toRotationMatrix();
}

GeneratedScene generate_scene(const PointCloud& model, Index m, double sigma2, std::uint64_t seed) {
  detail::require(m >= 1, "generate_scene: m must be >= 1");
  detail::require(model.size() >= m, "generate_scene: model has fewer points than requested");
  detail::require(sigma2 >= 0 && std::isfinite(sigma2), "generate_scene: sigma2 must be >= 0");
  Rng rng(seed);

  std::vector<Index> rows(static_cast<std::size_t>(model.size()));
  std::iota(rows.begin(), rows.end(), Index{0});
  portable_shuffle(rng, rows);
  PointCloud::Points q(m, 3);
  for (Index k = 0; k < m; ++k) q.row(k) = model.points.row(rows[static_cast<std::size_t>(k)]);

  const Eigen::RowVector3d lo = q.colwise().minCoeff();
  const Eigen::RowVector3d range = q.colwise().maxCoeff() - lo;
  detail::require((range.array() > 0).all(), "generate_scene: sampled points are flat along an axis");
  q = (q.rowwise() - lo).array().rowwise() / range.array();

  const Eigen::Matrix3d rotation = random_rotation(splitmix64(seed));
  const Eigen::Vector3d translation(10.0, 10.0, 0.0);
  const PointCloud::Points moved = (q * rotation).rowwise() + translation.transpose();

  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    for (Index c = 0; c < 3; ++c)
      if (moved(a, c) != moved(b, c)) return moved(a, c) < moved(b, c);
    return a < b;
  });
  Permutation perm(order);
  PointCloud::Points p = perm.apply(moved);

  PointCloud::Points noise(m, 3);
  fill_gaussian(rng, noise, std::sqrt(sigma2));
  PointCloud::Points noisy_q = q + noise;

  GeneratedScene out{RegistrationScene(PointCloud(std::move(p)), PointCloud(std::move(noisy_q))),
                     SceneTruth{std::move(perm), rotation, translation, PointCloud(std::move(q))}};
  return out;
}

}  // namespace slr
