#pragma once

// Two-view and multi-view pose-only primitives.
//
// Conventions: X_cam = R (X_world - t) with t the camera center. For a view
// pair (i, j) the relative pose is R_ij = R_j R_i^T, t_ij = R_j (t_i - t_j),
// so that z_j X_j = z_i R_ij X_i + t_ij. All skew-matrix products are
// evaluated as explicit cross products.

#include <algorithm>
#include <cmath>

#include "poseonly/types.hpp"

namespace poseonly {

/// Pair depths below this parallax are never divided through.
inline constexpr double kDepthThetaFloor = 1e-12;

struct RelativePose {
  RotationMatrix rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
};

/// Per-pair quantities derived from a relative pose and one ray in each view.
struct PairGeometry {
  RotationMatrix rel_rotation = Mat3::Identity();
  Vec3 rel_translation = Vec3::Zero();
  double theta = 0.0;
  Vec3 a_vec = Vec3::Zero();
  Vec3 b_vec = Vec3::Zero();
  Vec3 ray_i = Vec3::UnitZ();          // X_i
  Vec3 ray_j = Vec3::UnitZ();          // X_j
  Vec3 rotated_ray_i = Vec3::UnitZ();  // R_ij X_i
};

struct PairDepths {
  double left = 0.0;   // depth in view i
  double right = 0.0;  // depth in view j
};

/// Projects a world point. Throws NonPositiveDepth when the point is not in
/// front of the camera.
inline NormalizedImagePoint project(const CameraPose& pose, const Vec3& point_w) {
  const Vec3 pc = pose.to_camera(point_w);
  if (!(pc.z() > 1e-12)) {
    throw Error(ErrorCode::NonPositiveDepth,
                "point depth " + std::to_string(pc.z()) + " in camera frame");
  }
  return {pc.x() / pc.z(), pc.y() / pc.z()};
}

inline RelativePose relative_pose(const CameraPose& pose_i, const CameraPose& pose_j) {
  return {pose_j.rotation * pose_i.rotation.transpose(),
          pose_j.rotation * (pose_i.center - pose_j.center)};
}

/// theta = |X_j x R_ij X_i|; a = (R_ij X_i x X_j) x X_j; b = (R_ij X_i x X_j) x R_ij X_i.
inline PairGeometry compute_pair_geometry(const RelativePose& rel,
                                          const NormalizedImagePoint& x_i,
                                          const NormalizedImagePoint& x_j) {
  PairGeometry pg;
  pg.rel_rotation = rel.rotation;
  pg.rel_translation = rel.translation;
  pg.ray_i = x_i.homogeneous();
  pg.ray_j = x_j.homogeneous();
  pg.rotated_ray_i = rel.rotation * pg.ray_i;
  const Vec3 v = pg.rotated_ray_i.cross(pg.ray_j);
  pg.theta = v.norm();
  pg.a_vec = v.cross(pg.ray_j);
  pg.b_vec = v.cross(pg.rotated_ray_i);
  return pg;
}

/// Parallax of a pair of world-frame bearing rays; equals theta_ij because the
/// cross-product norm is rotation invariant.
inline double world_theta(const Vec3& world_ray_i, const Vec3& world_ray_j) {
  return world_ray_i.cross(world_ray_j).norm();
}

namespace detail {
inline void require_parallax(const PairGeometry& pg, double theta_min) {
  const double floor = std::max(theta_min, kDepthThetaFloor);
  if (!(pg.theta > floor)) {
    throw Error(ErrorCode::DegeneratePair,
                "theta " + std::to_string(pg.theta) + " <= " + std::to_string(floor));
  }
}
}  // namespace detail

/// Magnitude depths: d_i = |X_j x t| / theta, d_j = |R X_i x t| / theta.
inline PairDepths pair_depths(const PairGeometry& pg, double theta_min = 0.0) {
  detail::require_parallax(pg, theta_min);
  const Vec3& t = pg.rel_translation;
  return {pg.ray_j.cross(t).norm() / pg.theta,
          pg.rotated_ray_i.cross(t).norm() / pg.theta};
}

/// Signed depths from the linear forms a^T t / theta^2 and b^T t / theta^2.
inline PairDepths linear_depths(const PairGeometry& pg, double theta_min = 0.0) {
  detail::require_parallax(pg, theta_min);
  const double theta2 = pg.theta * pg.theta;
  return {pg.a_vec.dot(pg.rel_translation) / theta2,
          pg.b_vec.dot(pg.rel_translation) / theta2};
}

/// d_j X_j - d_i R_ij X_i - t_ij with the depths of `pg` and the supplied rays.
inline Vec3 ppo_residual(const PairGeometry& pg, const NormalizedImagePoint& x_i,
                         const NormalizedImagePoint& x_j, double theta_min = 0.0) {
  const PairDepths d = linear_depths(pg, theta_min);
  return d.right * x_j.homogeneous() - d.left * (pg.rel_rotation * x_i.homogeneous()) -
         pg.rel_translation;
}

/// (X_j b^T - R_ij X_i a^T - theta^2 I) t_ij. This is theta^2 times the PPO
/// residual with linear depths, so it vanishes on exact geometry.
inline Vec3 two_view_translation_residual(const PairGeometry& pg) {
  const Vec3& t = pg.rel_translation;
  return pg.ray_j * pg.b_vec.dot(t) - pg.rotated_ray_i * pg.a_vec.dot(t) -
         pg.theta * pg.theta * t;
}

/// Multi-view linear form for base pair (zeta, eta) and pair (zeta, i):
///
///   theta_zi^2 R_zi X_z (a_ze^T t_ze) + theta_ze^2 theta_zi^2 t_zi
///     - theta_ze^2 X_i (b_zi^T t_zi) = 0
///
/// Derivation: the depth-pose-only relation z_i X_i = z_z R_zi X_z + t_zi with
/// z_z = a_ze^T t_ze / theta_ze^2 (left-base depth from the base pair) and
/// z_i = b_zi^T t_zi / theta_zi^2 (right depth of pair (zeta, i)), multiplied
/// through by theta_ze^2 theta_zi^2. The vector paired with t_ze in the first
/// term must be a_ze; a_zi^T t_ze has no geometric meaning.
inline Vec3 multi_view_translation_residual(const PairGeometry& base,
                                            const PairGeometry& pair) {
  const double tb2 = base.theta * base.theta;
  const double tp2 = pair.theta * pair.theta;
  return tp2 * pair.rotated_ray_i * base.a_vec.dot(base.rel_translation) +
         tb2 * tp2 * pair.rel_translation -
         tb2 * pair.ray_j * pair.b_vec.dot(pair.rel_translation);
}

enum class TranslationForm { two_view, multi_view };

/// For two_view only `first` is used. For multi_view `first` is the base pair
/// (zeta, eta) and `second` the pair (zeta, i).
inline Vec3 linear_translation_residual(const PairGeometry& first,
                                        const PairGeometry& second,
                                        TranslationForm form) {
  return form == TranslationForm::two_view
             ? two_view_translation_residual(first)
             : multi_view_translation_residual(first, second);
}

/// Depth-pose-only residual d_i X_i - d_z R_zi X_z - t_zi, where d_z comes
/// from the base pair and d_i from the pair (zeta, i).
inline Vec3 dpo_residual(const PairGeometry& base, const PairGeometry& pair,
                         double theta_min = 0.0) {
  const double left = linear_depths(base, theta_min).left;
  const double right = linear_depths(pair, theta_min).right;
  return right * pair.ray_j - left * pair.rotated_ray_i - pair.rel_translation;
}

/// Pair geometry for two observations given global rotations and centers.
inline PairGeometry pair_geometry_from_poses(const CameraPose& pose_i,
                                             const CameraPose& pose_j,
                                             const NormalizedImagePoint& x_i,
                                             const NormalizedImagePoint& x_j) {
  return compute_pair_geometry(relative_pose(pose_i, pose_j), x_i, x_j);
}

}  // namespace poseonly
