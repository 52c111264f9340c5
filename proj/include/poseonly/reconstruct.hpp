#pragma once

// Analytical scene reconstruction from poses. A track's point is placed along
// the left-base ray at the parallax-weighted mean of the left-base depths of
// every pair (zeta, i):
//
//   z = sum_i w_i d_zeta^(zeta, i),   w_i = theta_zi / sum_k theta_zk,
//   X = z R_zeta^T X_zeta + t_zeta.

#include <Eigen/SVD>

#include <map>
#include <optional>
#include <vector>

#include "poseonly/geometry.hpp"
#include "poseonly/ligt.hpp"
#include "poseonly/parallel.hpp"
#include "poseonly/types.hpp"

namespace poseonly {

struct WeightedDepth {
  double depth = 0.0;
  double weight_sum = 0.0;  // sum of theta_zi over contributing pairs
  std::size_t contributing_views = 0;
};

/// Throws AllPairsDegenerate when no pair (zeta, i) has parallax above theta_min.
inline WeightedDepth weighted_depth(const Track& track, const BaseViewPair& base,
                                    std::span<const CameraPose> poses, double theta_min = 0.0) {
  const auto* oz = track.find(base.left);
  if (oz == nullptr) throw Error(ErrorCode::InvalidArgument, "left base view not in track");
  const CameraPose& pz = poses[base.left];
  struct Term {
    double theta;
    double depth;
  };
  std::vector<Term> terms;
  terms.reserve(track.size());
  double sum = 0.0;
  for (const auto& obs : track.observations) {
    if (obs.view_id == base.left) continue;
    const PairGeometry pg = pair_geometry_from_poses(pz, poses[obs.view_id], oz->point, obs.point);
    if (!(pg.theta > std::max(theta_min, kDepthThetaFloor))) continue;
    terms.push_back({pg.theta, linear_depths(pg).left});
    sum += pg.theta;
  }
  if (terms.empty() || !(sum > theta_min)) {
    throw Error(ErrorCode::AllPairsDegenerate,
                "track " + std::to_string(track.track_id) + " has no parallax from its left base");
  }
  WeightedDepth out;
  for (const auto& t : terms) out.depth += (t.theta / sum) * t.depth;
  out.weight_sum = sum;
  out.contributing_views = terms.size();
  return out;
}

struct ReconstructedPoint {
  TrackId track_id = 0;
  Vec3 position_w = Vec3::Zero();
  double fused_depth = 0.0;
  double weight_sum = 0.0;
  std::size_t contributing_views = 0;
};

/// Throws AllPairsDegenerate or NegativeDepth (cheirality failure).
inline ReconstructedPoint reconstruct_point(const Track& track, const BaseViewPair& base,
                                            std::span<const CameraPose> poses,
                                            double theta_min = 0.0) {
  const WeightedDepth wd = weighted_depth(track, base, poses, theta_min);
  if (!(wd.depth > 0.0)) {
    throw Error(ErrorCode::NegativeDepth,
                "track " + std::to_string(track.track_id) + " fused depth " +
                    std::to_string(wd.depth));
  }
  const CameraPose& pz = poses[base.left];
  ReconstructedPoint p;
  p.track_id = track.track_id;
  p.fused_depth = wd.depth;
  p.weight_sum = wd.weight_sum;
  p.contributing_views = wd.contributing_views;
  p.position_w = wd.depth * (pz.rotation.transpose() * track.find(base.left)->point.homogeneous()) +
                 pz.center;
  return p;
}

struct RejectionSummary {
  std::size_t all_pairs_degenerate = 0;
  std::size_t negative_depth = 0;
  std::size_t too_short = 0;

  std::size_t total() const { return all_pairs_degenerate + negative_depth + too_short; }
};

struct Reconstruction {
  std::vector<ReconstructedPoint> points;  // ordered by track_id
  RejectionSummary rejected;

  std::map<TrackId, Vec3> point_map() const {
    std::map<TrackId, Vec3> m;
    for (const auto& p : points) m.emplace(p.track_id, p.position_w);
    return m;
  }
};

struct ReconstructOptions {
  double theta_min = 0.0;
  std::size_t min_track_length = 2;
  unsigned threads = configured_threads();
};

/// Base views are selected from the pose rotations for every track.
inline Reconstruction reconstruct_all(std::span<const Track> tracks,
                                      std::span<const CameraPose> poses,
                                      const ReconstructOptions& options = {}) {
  enum class Outcome { ok, degenerate, negative, short_track };
  struct Slot {
    Outcome outcome = Outcome::ok;
    ReconstructedPoint point;
  };
  const auto rotations = rotations_of(poses);
  std::vector<std::size_t> order(tracks.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return tracks[a].track_id < tracks[b].track_id;
  });
  std::vector<Slot> slots(tracks.size());
  parallel_chunks(order.size(), options.threads, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const Track& track = tracks[order[k]];
      if (track.size() < std::max<std::size_t>(options.min_track_length, 2)) {
        slots[k].outcome = Outcome::short_track;
        continue;
      }
      try {
        const BaseViewPair base = select_base_views(track, rotations, options.theta_min);
        slots[k].point = reconstruct_point(track, base, poses, options.theta_min);
      } catch (const Error& err) {
        if (err.code() == ErrorCode::NegativeDepth) slots[k].outcome = Outcome::negative;
        else if (err.code() == ErrorCode::AllPairsDegenerate) slots[k].outcome = Outcome::degenerate;
        else throw;
      }
    }
  });
  Reconstruction out;
  for (auto& s : slots) {
    switch (s.outcome) {
      case Outcome::ok: out.points.push_back(s.point); break;
      case Outcome::degenerate: ++out.rejected.all_pairs_degenerate; break;
      case Outcome::negative: ++out.rejected.negative_depth; break;
      case Outcome::short_track: ++out.rejected.too_short; break;
    }
  }
  return out;
}

/// Linear triangulation from [X_i]x R_i (X - t_i) = 0, solved in the least
/// squares sense. Throws Degenerate when the stacked system has rank < 3.
inline Vec3 triangulate_dlt(const Track& track, std::span<const CameraPose> poses) {
  const auto rows = static_cast<Eigen::Index>(3 * track.size());
  Eigen::MatrixXd a(rows, 3);
  Eigen::VectorXd b(rows);
  Eigen::Index r = 0;
  for (const auto& obs : track.observations) {
    const CameraPose& p = poses[obs.view_id];
    const Mat3 m = skew(obs.point.homogeneous()) * p.rotation;
    a.middleRows<3>(r) = m;
    b.segment<3>(r) = m * p.center;
    r += 3;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(2) > 1e-12 * sv(0))) {
    throw Error(ErrorCode::Degenerate,
                "track " + std::to_string(track.track_id) + " triangulation is rank deficient");
  }
  return svd.solve(b);
}

}  // namespace poseonly
