#pragma once

// Test-only oracles. Everything here is built from the textbook formulas with
// materialized skew matrices and dense SVD, independent of the library's
// cross-product code paths.

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "poseonly/poseonly.hpp"

namespace testing_support {

using poseonly::CameraPose;
using poseonly::Mat3;
using poseonly::Vec3;

inline Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0, -v(2), v(1), v(2), 0, -v(0), -v(1), v(0), 0;
  return m;
}

inline Vec3 ray(const poseonly::NormalizedImagePoint& p) { return {p.x, p.y, 1.0}; }

struct OraclePair {
  double theta;
  Vec3 a, b, t;
  Mat3 r;
};

inline OraclePair oracle_pair(const CameraPose& pi, const CameraPose& pj, const Vec3& xi,
                              const Vec3& xj) {
  OraclePair o;
  o.r = pj.rotation * pi.rotation.transpose();
  o.t = pj.rotation * (pi.center - pj.center);
  const Vec3 v = hat(o.r * xi) * xj;
  o.theta = (hat(xj) * o.r * xi).norm();
  o.a = (v.transpose() * hat(xj)).transpose();
  o.b = (v.transpose() * hat(o.r * xi)).transpose();
  return o;
}

/// Base pair by exhaustive search; only rotations enter theta.
inline std::pair<poseonly::ViewId, poseonly::ViewId> oracle_base(
    const poseonly::Track& track, const std::vector<Mat3>& rotations) {
  double best = -1.0;
  std::pair<poseonly::ViewId, poseonly::ViewId> out{0, 0};
  for (std::size_t p = 0; p < track.size(); ++p) {
    for (std::size_t q = p + 1; q < track.size(); ++q) {
      const auto vi = track.observations[p].view_id, vj = track.observations[q].view_id;
      const Mat3 rij = rotations[vj] * rotations[vi].transpose();
      const double th =
          (hat(ray(track.observations[q].point)) * rij * ray(track.observations[p].point)).norm();
      if (th > best) {
        best = th;
        out = {vi, vj};
      }
    }
  }
  return out;
}

/// Full 3m' x 3n LiGT matrix from B = [X_i]x R_zi X_z a_ze^T R_e,
/// C = theta_ze^2 [X_i]x R_i, D = -(B + C).
inline Eigen::MatrixXd oracle_ligt_matrix(const std::vector<poseonly::Track>& tracks,
                                          const std::vector<Mat3>& rotations) {
  const std::size_t n = rotations.size();
  std::vector<Eigen::Matrix<double, 3, Eigen::Dynamic>> blocks;
  for (const auto& track : tracks) {
    const auto [z, e] = oracle_base(track, rotations);
    const Vec3 xz = ray(track.find(z)->point), xe = ray(track.find(e)->point);
    const Mat3 rze = rotations[e] * rotations[z].transpose();
    const double theta = (hat(xe) * rze * xz).norm();
    if (!(theta > 0.0)) continue;
    const Vec3 a = ((hat(rze * xz) * xe).transpose() * hat(xe)).transpose();
    for (const auto& obs : track.observations) {
      const auto i = obs.view_id;
      if (i == z) continue;
      const Vec3 xi = ray(obs.point);
      const Mat3 rzi = rotations[i] * rotations[z].transpose();
      const Mat3 b = hat(xi) * rzi * xz * a.transpose() * rotations[e];
      const Mat3 c = theta * theta * hat(xi) * rotations[i];
      Eigen::Matrix<double, 3, Eigen::Dynamic> row = Eigen::MatrixXd::Zero(3, 3 * n);
      row.block<3, 3>(0, 3 * e) += b;
      row.block<3, 3>(0, 3 * i) += c;
      row.block<3, 3>(0, 3 * z) += -(b + c);
      if (row.norm() == 0.0) continue;
      blocks.push_back(row);
    }
  }
  Eigen::MatrixXd l(3 * blocks.size(), 3 * n);
  for (std::size_t k = 0; k < blocks.size(); ++k) l.middleRows(3 * k, 3) = blocks[k];
  return l;
}

inline Eigen::MatrixXd drop_view_columns(const Eigen::MatrixXd& l, std::size_t view) {
  Eigen::MatrixXd out(l.rows(), l.cols() - 3);
  const auto c = static_cast<Eigen::Index>(3 * view);
  out.leftCols(c) = l.leftCols(c);
  out.rightCols(l.cols() - c - 3) = l.rightCols(l.cols() - c - 3);
  return out;
}

inline Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues();  // descending
}

inline int numerical_rank(const Eigen::MatrixXd& m, double rel = 1e-10) {
  const auto s = singular_values(m);
  int r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) r += s(k) > rel * s(0) ? 1 : 0;
  return r;
}

inline double aligned_rms(const std::vector<Vec3>& est, const std::vector<Vec3>& gt) {
  return poseonly::align_similarity(est, gt).rms;
}

inline poseonly::SceneProblem scene(std::size_t n, std::size_t m, std::uint64_t seed,
                                    poseonly::MotionKind motion = poseonly::MotionKind::generic_ring,
                                    double sigma = 0.0) {
  poseonly::SceneConfig c;
  c.n_views = n;
  c.n_points = m;
  c.motion = motion;
  c.seed = seed;
  c.obs_noise_sigma = sigma;
  return poseonly::generate_scene(c);
}

inline double scene_extent(const std::vector<CameraPose>& poses) {
  Vec3 mean = Vec3::Zero();
  for (const auto& p : poses) mean += p.center;
  mean /= static_cast<double>(poses.size());
  double s = 0.0;
  for (const auto& p : poses) s += (p.center - mean).squaredNorm();
  return std::sqrt(s / static_cast<double>(poses.size()));
}

inline poseonly::LigtOptions inline_options() {
  poseonly::LigtOptions o;
  o.threads = 0;
  return o;
}

inline poseonly::TranslationSolution ligt_solve(const poseonly::SceneProblem& p,
                                                poseonly::LigtOptions o = inline_options()) {
  const auto tracks = poseonly::tracks_of(p);
  const auto sys = poseonly::assemble_system(tracks, p.rotations, p.reference_view, o);
  return poseonly::solve_translations(sys, o);
}

/// Map from track id to ground-truth point.
inline std::map<poseonly::TrackId, Vec3> gt_point_map(const poseonly::SceneProblem& p) {
  std::map<poseonly::TrackId, Vec3> m;
  for (std::size_t t = 0; t < p.gt_points.size(); ++t) m.emplace(static_cast<poseonly::TrackId>(t), p.gt_points[t]);
  return m;
}

}  // namespace testing_support
