#pragma once

#include "slr/assignment.hpp"
#include "slr/model.hpp"
#include "slr/spectral.hpp"
#include "slr/types.hpp"

#include <cstdint>
#include <optional>

namespace slr {

template <typename Scalar>
struct BasicRegistrationResult {
  Permutation perm;
  Matrix3<Scalar> rotation = Matrix3<Scalar>::Identity();
  Vector3<Scalar> translation = Vector3<Scalar>::Zero();
  /// Fraction of correctly corresponding points; set only when ground truth is known.
  std::optional<Scalar> matching_accuracy;
};

using RegistrationResult = BasicRegistrationResult<double>;

/// P = Pi* Q R + 1 t^T: P is the observed set, Q the model set.
template <typename Scalar>
struct BasicRegistrationScene {
  BasicPointCloud<Scalar> P;
  BasicPointCloud<Scalar> Q;

  BasicRegistrationScene() = default;
  BasicRegistrationScene(BasicPointCloud<Scalar> p, BasicPointCloud<Scalar> q) : P(std::move(p)), Q(std::move(q)) {
    detail::require_dims(P.size() == Q.size(), "registration scene: point counts differ");
  }
};

using RegistrationScene = BasicRegistrationScene<double>;

template <typename Scalar>
struct Centered {
  BasicPointCloud<Scalar> cloud;
  Vector3<Scalar> mean;
};

template <typename Scalar>
Centered<Scalar> center(const BasicPointCloud<Scalar>& cloud) {
  detail::require(cloud.size() >= 1, "center: empty point cloud");
  const Vector3<Scalar> mean = cloud.points.colwise().mean().transpose();
  typename BasicPointCloud<Scalar>::Points shifted = cloud.points.rowwise() - mean.transpose();
  return {BasicPointCloud<Scalar>(std::move(shifted)), mean};
}

/// Spectral correspondence between centered clouds from the eigenvectors of
/// Q~ Q~^T (signal side) and P~ P~^T (measurement side). Both Gram matrices
/// have rank <= 3, so at most three components are matched; the selection is
/// made on Q~ Q~^T. A symmetric shape with repeated top eigenvalues has no
/// admissible component and raises EmptySelection.
template <typename Scalar>
Permutation estimate_correspondence(const BasicRegistrationScene<Scalar>& scene, double gap_threshold = 1e-3) {
  detail::require(scene.P.size() >= 3, "estimate_correspondence: need at least 3 points");
  const auto p = center(scene.P).cloud.points;
  const auto q = center(scene.Q).cloud.points;
  SolverConfig config;
  config.gap_threshold = gap_threshold;
  config.max_components = 3;
  const MatrixX<Scalar> qq = q * q.transpose();
  auto signal_eig = eigendecompose_descending(qq);
  auto sel = select_components(signal_eig.eigenvalues, gap_threshold, config.max_components);
  BasicSpectralBasis<Scalar> signal{std::move(signal_eig.eigenvalues), std::move(signal_eig.vectors), sel.selected,
                                    sel.delta};
  const MatrixX<Scalar> pp = p * p.transpose();
  auto meas_eig = eigendecompose_descending(pp);
  BasicSpectralBasis<Scalar> measurement{std::move(meas_eig.eigenvalues), std::move(meas_eig.vectors), sel.selected,
                                         sel.delta};
  return spectral_match(signal, measurement).perm;
}

/// Rotation maximizing tr(P~^T Pi Q~ R) over SO(3), with the determinant
/// correction that keeps near-planar clouds from returning a reflection.
template <typename DerivedP, typename DerivedQ>
Matrix3<typename DerivedP::Scalar> estimate_rotation(const Eigen::MatrixBase<DerivedP>& p_centered,
                                                     const Eigen::MatrixBase<DerivedQ>& q_centered,
                                                     const Permutation& perm) {
  using Scalar = typename DerivedP::Scalar;
  detail::require_dims(p_centered.cols() == 3 && q_centered.cols() == 3, "estimate_rotation: clouds must be m x 3");
  detail::require_dims(p_centered.rows() == q_centered.rows() && perm.size() == p_centered.rows(),
                       "estimate_rotation: size mismatch");
  const Matrix3<Scalar> cross = p_centered.transpose() * perm.apply(q_centered);
  Eigen::JacobiSVD<Matrix3<Scalar>> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(1) > Scalar(1e-12) * std::max(Scalar(1), sv(0))))
    throw RotationDegenerate("cross-covariance has rank < 2");
  const Matrix3<Scalar> u = svd.matrixU();
  const Matrix3<Scalar> v = svd.matrixV();
  Vector3<Scalar> signs(1, 1, (v * u.transpose()).determinant() < 0 ? -1 : 1);
  return v * signs.asDiagonal() * u.transpose();
}

/// Column means of P - Q R.
template <typename DerivedP, typename DerivedQ>
Vector3<typename DerivedP::Scalar> estimate_translation(const Eigen::MatrixBase<DerivedP>& p,
                                                        const Eigen::MatrixBase<DerivedQ>& q,
                                                        const Matrix3<typename DerivedP::Scalar>& rotation) {
  detail::require_dims(p.rows() == q.rows() && p.cols() == 3 && q.cols() == 3, "estimate_translation: size mismatch");
  detail::require(p.rows() >= 1, "estimate_translation: empty cloud");
  return (p - q * rotation).colwise().mean().transpose();
}

template <typename Scalar>
Scalar matching_accuracy(const Permutation& estimate, const Permutation& truth) {
  detail::require_dims(estimate.size() == truth.size(), "matching_accuracy: size mismatch");
  Index hits = 0;
  for (Index k = 0; k < truth.size(); ++k) hits += estimate[k] == truth[k] ? 1 : 0;
  return truth.size() == 0 ? Scalar(1) : Scalar(hits) / Scalar(truth.size());
}

/// Centering, spectral correspondence, Procrustes rotation, translation.
template <typename Scalar>
BasicRegistrationResult<Scalar> register_point_sets(const BasicRegistrationScene<Scalar>& scene,
                                                    const Permutation* truth = nullptr,
                                                    double gap_threshold = 1e-3) {
  detail::require(scene.P.size() >= 3, "register: need at least 3 points");
  BasicRegistrationResult<Scalar> out;
  out.perm = estimate_correspondence(scene, gap_threshold);
  const auto p = center(scene.P);
  const auto q = center(scene.Q);
  out.rotation = estimate_rotation(p.cloud.points, q.cloud.points, out.perm);
  out.translation = estimate_translation(scene.P.points, scene.Q.points, out.rotation);
  if (truth) out.matching_accuracy = matching_accuracy<Scalar>(out.perm, *truth);
  return out;
}

/// Model-frame reconstruction Pi^T (P - 1 t^T) R^T of the observed set.
template <typename Scalar>
typename BasicPointCloud<Scalar>::Points reconstruct_model(const BasicPointCloud<Scalar>& observed,
                                                           const Permutation& perm, const Matrix3<Scalar>& rotation,
                                                           const Vector3<Scalar>& translation) {
  detail::require_dims(perm.size() == observed.size(), "reconstruct_model: size mismatch");
  const MatrixX<Scalar> shifted = observed.points.rowwise() - translation.transpose();
  return perm.apply_transpose(shifted) * rotation.transpose();
}

struct SceneTruth {
  Permutation perm;
  Eigen::Matrix3d rotation;
  Eigen::Vector3d translation;
  PointCloud clean_model;  // Q before coordinate noise
};

struct GeneratedScene {
  RegistrationScene scene;  // scene.Q is the noisy model Q'
  SceneTruth truth;
};

/// Samples m model points without replacement, min-max normalizes them to
/// [0,1]^3, applies a uniformly random rotation and t = (10, 10, 0), orders
/// the observed points lexicographically (a stand-in for a raster scan of the
/// image), and perturbs the model coordinates with N(0, sigma2) noise.
GeneratedScene generate_scene(const PointCloud& model, Index m, double sigma2, std::uint64_t seed);

/// Haar-uniform rotation.
Eigen::Matrix3d random_rotation(std::uint64_t seed);

}  // namespace slr
