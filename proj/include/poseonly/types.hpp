#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "poseonly/error.hpp"

namespace poseonly {

using ViewId = std::uint32_t;
using TrackId = std::uint32_t;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// World-to-camera rotation. Kept as a plain 3x3 so Eigen expressions compose
/// without conversions; use is_rotation() to check the invariants.
using RotationMatrix = Mat3;

inline bool is_rotation(const Mat3& r, double tol = 1e-9) {
  const double ortho = (r.transpose() * r - Mat3::Identity()).norm();
  const double det = r.determinant();
  return ortho < tol && std::abs(det - 1.0) <= tol;
}

/// Skew-symmetric matrix [v]_x with [v]_x w = v x w.
inline Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),  //
      v.z(), 0.0, -v.x(),   //
      -v.y(), v.x(), 0.0;
  return m;
}

/// Exponential map so(3) -> SO(3).
inline Mat3 exp_so3(const Vec3& w) {
  const double angle = w.norm();
  if (angle < 1e-300) return Mat3::Identity();
  return Eigen::AngleAxisd(angle, w / angle).toRotationMatrix();
}

/// Logarithm SO(3) -> so(3); returns the axis-angle vector.
inline Vec3 log_so3(const Mat3& r) {
  const Eigen::AngleAxisd aa(r);
  return aa.angle() * aa.axis();
}

/// Geodesic distance between two rotations, radians.
inline double rotation_distance(const Mat3& a, const Mat3& b) {
  return log_so3(a * b.transpose()).norm();
}

/// Camera pose with the projection convention X_cam = R (X_world - center).
struct CameraPose {
  RotationMatrix rotation = Mat3::Identity();
  Vec3 center = Vec3::Zero();

  Vec3 to_camera(const Vec3& point_w) const {
    return rotation * (point_w - center);
  }
};

/// Observation on the z = 1 plane. The third coordinate is implicit.
struct NormalizedImagePoint {
  double x = 0.0;
  double y = 0.0;

  Vec3 homogeneous() const { return {x, y, 1.0}; }

  friend bool operator==(const NormalizedImagePoint&,
                         const NormalizedImagePoint&) = default;
};

struct Observation {
  TrackId track_id = 0;
  ViewId view_id = 0;
  NormalizedImagePoint point;

  friend bool operator==(const Observation&, const Observation&) = default;
};

struct TrackObservation {
  ViewId view_id = 0;
  NormalizedImagePoint point;
};

/// One 3D feature seen in two or more views, ordered by strictly increasing
/// view id.
struct Track {
  TrackId track_id = 0;
  std::vector<TrackObservation> observations;

  std::size_t size() const { return observations.size(); }

  const TrackObservation* find(ViewId view) const {
    auto it = std::lower_bound(
        observations.begin(), observations.end(), view,
        [](const TrackObservation& o, ViewId v) { return o.view_id < v; });
    if (it == observations.end() || it->view_id != view) return nullptr;
    return &*it;
  }
};

/// Groups observations into tracks sorted by track id. Tracks with fewer than
/// `min_length` observations are dropped. Throws InvalidArgument when a
/// (track, view) pair repeats.
inline std::vector<Track> build_tracks(std::span<const Observation> observations,
                                       std::size_t min_length = 2) {
  std::map<TrackId, Track> grouped;
  for (const auto& obs : observations) {
    auto& track = grouped[obs.track_id];
    track.track_id = obs.track_id;
    track.observations.push_back({obs.view_id, obs.point});
  }
  std::vector<Track> tracks;
  tracks.reserve(grouped.size());
  for (auto& [id, track] : grouped) {
    std::sort(track.observations.begin(), track.observations.end(),
              [](const auto& a, const auto& b) { return a.view_id < b.view_id; });
    for (std::size_t k = 1; k < track.observations.size(); ++k) {
      if (track.observations[k].view_id == track.observations[k - 1].view_id) {
        throw Error(ErrorCode::InvalidArgument,
                    "duplicate observation of track " + std::to_string(id) +
                        " in view " +
                        std::to_string(track.observations[k].view_id));
      }
    }
    if (track.observations.size() >= std::max<std::size_t>(min_length, 2)) {
      tracks.push_back(std::move(track));
    }
  }
  return tracks;
}

inline std::vector<RotationMatrix> rotations_of(std::span<const CameraPose> poses) {
  std::vector<RotationMatrix> out;
  out.reserve(poses.size());
  for (const auto& p : poses) out.push_back(p.rotation);
  return out;
}

inline std::vector<Vec3> centers_of(std::span<const CameraPose> poses) {
  std::vector<Vec3> out;
  out.reserve(poses.size());
  for (const auto& p : poses) out.push_back(p.center);
  return out;
}

}  // namespace poseonly
