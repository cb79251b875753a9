#include "slr/experiment.hpp"
#include "slr/random.hpp"
#include "slr/registration.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace slr;

namespace {

Eigen::Matrix3d rot_z(double deg) {
  return Eigen::AngleAxisd(deg * M_PI / 180.0, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

PointCloud generic_cloud(Index m, std::uint64_t seed) {
  Rng rng(seed);
  PointCloud::Points pts(m, 3);
  fill_gaussian(rng, pts);
  pts.col(0) *= 3.0;
  pts.col(1) *= 2.0;
  return PointCloud(pts);
}

void expect_rotation(const Eigen::Matrix3d& r) {
  EXPECT_LT((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_NEAR(r.determinant(), 1.0, 1e-8);
}

}  // namespace

TEST(Center, Examples) {
  PointCloud::Points pts(2, 3);
  pts << 0, 0, 0, 2, 2, 2;
  const auto c = center(PointCloud(pts));
  EXPECT_EQ(c.mean, Eigen::Vector3d(1, 1, 1));
  PointCloud::Points expected(2, 3);
  expected << -1, -1, -1, 1, 1, 1;
  EXPECT_EQ(c.cloud.points, expected);
  const auto again = center(c.cloud);
  EXPECT_LT((again.cloud.points - c.cloud.points).cwiseAbs().maxCoeff(), 1e-12);
  const auto r = center(generic_cloud(50, 1));
  EXPECT_LT(r.cloud.points.colwise().sum().cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_THROW(center(PointCloud()), InvalidArgument);
}

TEST(Correspondence, IdentityPose) {
  const auto q = generic_cloud(30, 2);
  EXPECT_TRUE(estimate_correspondence(RegistrationScene(q, q)).is_identity());
}

TEST(Correspondence, RecoversShuffleUnderRigidMotion) {
  Rng rng(3);
  const auto q = generic_cloud(40, 3);
  const auto perm = random_permutation(rng, 40);
  const Eigen::Matrix3d r = random_rotation(4);
  const PointCloud p(perm.apply(q.points * r).rowwise() + Eigen::RowVector3d(10, 10, 0));
  EXPECT_EQ(estimate_correspondence(RegistrationScene(p, q)), perm);
}

TEST(Correspondence, SymmetricCloudThrows) {
  PointCloud::Points pts(6, 3);
  pts << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1;
  const PointCloud q(pts);
  EXPECT_THROW(estimate_correspondence(RegistrationScene(q, q)), EmptySelection);
}

TEST(Rotation, IdentityAndKnownRotation) {
  const auto q = center(generic_cloud(20, 5)).cloud.points;
  const auto id = Permutation::identity(20);
  EXPECT_LT((estimate_rotation(q, q, id) - Eigen::Matrix3d::Identity()).norm(), 1e-10);
  const Eigen::Matrix3d r = rot_z(90);
  const Eigen::MatrixXd p = q * r;
  EXPECT_LT((estimate_rotation(p, q, id) - r).norm(), 1e-8);
}

TEST(Rotation, NearPlanarCloudStaysProper) {
  Rng rng(6);
  PointCloud::Points q(30, 3);
  fill_gaussian(rng, q);
  q.col(2) *= 1e-9;
  PointCloud::Points noise(30, 3);
  fill_gaussian(rng, noise, 0.05);
  const auto qc = center(PointCloud(q)).cloud.points;
  const auto pc = center(PointCloud(PointCloud::Points(q * random_rotation(7) + noise))).cloud.points;
  expect_rotation(estimate_rotation(pc, qc, Permutation::identity(30)));
}

TEST(Rotation, DegenerateCrossCovarianceThrows) {
  PointCloud::Points q = PointCloud::Points::Zero(4, 3);
  q.col(0) << -1.5, -0.5, 0.5, 1.5;
  EXPECT_THROW(estimate_rotation(q, q, Permutation::identity(4)), RotationDegenerate);
}

TEST(Translation, Examples) {
  const auto q = generic_cloud(10, 8).points;
  EXPECT_LT(estimate_translation(q, q, Eigen::Matrix3d::Identity()).norm(), 1e-12);
  const PointCloud::Points p = q.rowwise() + Eigen::RowVector3d(1, 2, 3);
  EXPECT_LT((estimate_translation(p, q, Eigen::Matrix3d::Identity()) - Eigen::Vector3d(1, 2, 3)).norm(), 1e-12);
}

TEST(Register, NoiselessSceneIsExact) {
  const auto model = synthetic_model_cloud(2000, 9);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto gen = generate_scene(model, 200, 0.0, seed);
    const auto res = register_point_sets(gen.scene, &gen.truth.perm);
    EXPECT_EQ(res.perm, gen.truth.perm);
    EXPECT_LT((res.rotation - gen.truth.rotation).norm(), 1e-6);
    EXPECT_LT((res.translation - gen.truth.translation).norm(), 1e-6);
    ASSERT_TRUE(res.matching_accuracy.has_value());
    EXPECT_EQ(*res.matching_accuracy, 1.0);
    expect_rotation(res.rotation);
    const auto rebuilt = reconstruct_model(gen.scene.P, res.perm, res.rotation, res.translation);
    EXPECT_LT((rebuilt - gen.scene.Q.points).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Register, CenteringRemovesTranslation) {
  const auto gen = generate_scene(synthetic_model_cloud(1000, 10), 100, 0.0, 11);
  const auto pc = center(gen.scene.P).cloud.points;
  const auto qc = center(gen.scene.Q).cloud.points;
  EXPECT_LT((pc - gen.truth.perm.apply(qc * gen.truth.rotation)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Register, TetrahedronWithDistinctEdges) {
  PointCloud::Points q(4, 3);
  q << 0, 0, 0, 1.3, 0, 0, 0.2, 0.9, 0, 0.4, 0.3, 0.7;
  Rng rng(12);
  for (int rep = 0; rep < 5; ++rep) {
    const auto perm = random_permutation(rng, 4);
    const Eigen::Matrix3d r = random_rotation(100 + rep);
    const PointCloud p(perm.apply(q * r).rowwise() + Eigen::RowVector3d(10, 10, 0));
    const RegistrationScene scene(p, PointCloud(q));
    const auto res = register_point_sets(scene);
    // Exhaustive search over the 24 correspondences.
    double best = std::numeric_limits<double>::infinity();
    std::vector<Index> best_map;
    const auto pc = center(scene.P).cloud.points;
    const auto qc = center(scene.Q).cloud.points;
    testing_oracles::for_each_permutation(4, [&](const std::vector<Index>& map) {
      const Permutation cand(map);
      const double err = (pc - cand.apply(qc) * estimate_rotation(pc, qc, cand)).squaredNorm();
      if (err < best) {
        best = err;
        best_map = map;
      }
    });
    EXPECT_EQ(Permutation(best_map), perm);
    EXPECT_EQ(res.perm, perm);
    EXPECT_LT((res.rotation - r).norm(), 1e-6);
  }
}

TEST(Register, RigidMotionEquivariance) {
  const auto gen = generate_scene(synthetic_model_cloud(1000, 13), 100, 0.0, 14);
  const Eigen::Matrix3d r0 = random_rotation(15);
  const RegistrationScene moved(PointCloud(gen.scene.P.points * r0), PointCloud(gen.scene.Q.points * r0));
  const auto a = register_point_sets(gen.scene);
  const auto b = register_point_sets(moved);
  EXPECT_LT((b.rotation - r0.transpose() * a.rotation * r0).norm(), 1e-6);
}

TEST(Register, RejectsMismatchedClouds) {
  EXPECT_THROW(RegistrationScene(generic_cloud(5, 1), generic_cloud(6, 1)), DimensionMismatch);
}

TEST(Scene, NormalizationAndNoise) {
  const auto model = synthetic_model_cloud(3000, 16);
  const auto clean = generate_scene(model, 200, 0.0, 17);
  const auto& q = clean.scene.Q.points;
  EXPECT_EQ(q.colwise().minCoeff(), Eigen::RowVector3d::Zero());
  EXPECT_EQ(q.colwise().maxCoeff(), Eigen::RowVector3d::Ones());
  EXPECT_EQ(clean.truth.clean_model.points, q);
  expect_rotation(clean.truth.rotation);
  EXPECT_EQ(clean.truth.translation, Eigen::Vector3d(10, 10, 0));

  const auto noisy = generate_scene(model, 3000, 1e-4, 18);
  const double rms = std::sqrt((noisy.scene.Q.points - noisy.truth.clean_model.points).squaredNorm() / (3.0 * 3000));
  EXPECT_NEAR(rms, 0.01, 0.0005);
  EXPECT_THROW(generate_scene(model, 3001, 0.0, 1), InvalidArgument);
}

TEST(Scene, RandomRotationIsProper) {
  for (std::uint64_t s = 0; s < 20; ++s) expect_rotation(random_rotation(s));
}
