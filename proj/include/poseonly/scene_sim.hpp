#pragma once

// Deterministic synthetic scenes.
//
// Random numbers come from std::mt19937_64 (the 64-bit Mersenne Twister,
// whose output sequence is fixed by the C++ standard). Uniform doubles take
// the top 53 bits; Gaussian samples use the Box-Muller transform on that
// stream. No std::*_distribution is used, so fixtures are reproducible across
// platforms and languages.
//
// Observation noise is in normalized image coordinates: sigma = 1e-3 is about
// one pixel for a focal length of 1000 px.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "poseonly/geometry.hpp"
#include "poseonly/types.hpp"

namespace poseonly {

enum class MotionKind { generic_ring, collinear, local_pure_rotation, loop_closure };
enum class CloudKind { box, shell };

struct SceneConfig {
  std::size_t n_views = 10;
  std::size_t n_points = 100;
  MotionKind motion = MotionKind::generic_ring;
  CloudKind point_cloud = CloudKind::box;
  Vec3 cloud_center = Vec3::Zero();
  double box_extent = 2.0;    // full side length of the box
  double shell_radius = 1.0;
  double camera_distance = 8.0;  // from the cloud center
  double obs_noise_sigma = 0.0;
  double rotation_noise_deg = 0.0;
  std::size_t min_track_len = 2;
  std::size_t shared_center_views = 2;  // local_pure_rotation only
  double aim_jitter_deg = 2.0;
  double max_abs_image_coord = 1.0;  // field of view: |x|, |y| <= this
  std::uint64_t seed = 0;
};

struct SceneProblem {
  std::vector<RotationMatrix> rotations;  // solver input, possibly perturbed
  std::vector<Observation> observations;  // sorted by (track_id, view_id)
  std::vector<CameraPose> gt_poses;       // empty when unknown
  std::vector<Vec3> gt_points;            // indexed by track id; empty when unknown
  ViewId reference_view = 0;

  std::size_t n_views() const { return rotations.size(); }
  bool has_ground_truth() const { return !gt_poses.empty(); }
};

class SceneRng {
 public:
  explicit SceneRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  Vec3 unit_vector() {
    Vec3 v(gaussian(), gaussian(), gaussian());
    double n = v.norm();
    while (n < 1e-12) {
      v = Vec3(gaussian(), gaussian(), gaussian());
      n = v.norm();
    }
    return v / n;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

namespace detail {

inline Mat3 look_at(const Vec3& center, const Vec3& target) {
  const Vec3 z = (target - center).normalized();
  Vec3 up = Vec3::UnitY();
  if (std::abs(z.dot(up)) > 0.95) up = Vec3::UnitX();
  const Vec3 x = up.cross(z).normalized();
  const Vec3 y = z.cross(x);
  Mat3 r;
  r.row(0) = x.transpose();
  r.row(1) = y.transpose();
  r.row(2) = z.transpose();
  return r;
}

inline Mat3 jitter(const Mat3& r, double degrees, SceneRng& rng) {
  if (degrees <= 0.0) return r;
  const double angle = degrees * std::numbers::pi / 180.0 * rng.uniform();
  return exp_so3(angle * rng.unit_vector()) * r;
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline void validate(const SceneConfig& c) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::ConfigInvalid, why); };
  if (c.n_views < 2) fail("n_views must be >= 2");
  if (c.motion == MotionKind::local_pure_rotation) {
    if (c.n_views < 3) fail("local_pure_rotation needs n_views >= 3");
    if (c.shared_center_views < 2 || c.shared_center_views >= c.n_views)
      fail("shared_center_views must be in [2, n_views)");
  }
  if (c.n_points < 2) fail("n_points must be >= 2");
  if (c.obs_noise_sigma < 0.0 || c.rotation_noise_deg < 0.0) fail("sigmas must be >= 0");
  if (c.min_track_len < 2 || c.min_track_len > c.n_views)
    fail("min_track_len must be in [2, n_views]");
  if (!(c.camera_distance > 0.0) || !(c.box_extent > 0.0) || !(c.shell_radius > 0.0))
    fail("scene dimensions must be positive");
  if (!(c.max_abs_image_coord > 0.0)) fail("field of view must be positive");
}

inline std::vector<Vec3> camera_centers(const SceneConfig& c, SceneRng& rng) {
  const std::size_t n = c.n_views;
  const double dist = c.camera_distance;
  std::vector<Vec3> centers(n);
  switch (c.motion) {
    case MotionKind::generic_ring: {
      for (std::size_t k = 0; k < n; ++k) {
        const double phi = std::numbers::pi * (static_cast<double>(k) + rng.uniform(-0.3, 0.3)) /
                           static_cast<double>(n);
        const double radius = dist * rng.uniform(0.9, 1.1);
        centers[k] = c.cloud_center + Vec3(radius * std::cos(phi), dist * rng.uniform(-0.2, 0.2),
                                           -radius * std::sin(phi));
      }
      break;
    }
    case MotionKind::loop_closure: {
      for (std::size_t k = 0; k < n; ++k) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        centers[k] = c.cloud_center + Vec3(dist * std::cos(phi), 0.1 * dist * std::sin(3.0 * phi),
                                           dist * std::sin(phi));
      }
      break;
    }
    case MotionKind::collinear: {
      const double heading = rng.uniform(-0.5, 0.5);
      const Vec3 dir(std::cos(heading), rng.uniform(-0.2, 0.2), std::sin(heading));
      const Vec3 axis = dir.normalized();
      const Vec3 origin = c.cloud_center + Vec3(0.0, 0.0, -dist);
      const double spacing = dist / static_cast<double>(n);
      for (std::size_t k = 0; k < n; ++k) {
        const double s = (static_cast<double>(k) - 0.5 * static_cast<double>(n - 1) +
                          rng.uniform(-0.25, 0.25)) * spacing;
        centers[k] = origin + s * axis;
      }
      break;
    }
    case MotionKind::local_pure_rotation: {
      const std::size_t offset_views = n - c.shared_center_views + 1;
      std::vector<Vec3> ring(offset_views);
      for (std::size_t k = 0; k < offset_views; ++k) {
        const double phi = 0.6 * std::numbers::pi *
                           (static_cast<double>(k) + rng.uniform(-0.2, 0.2)) /
                           static_cast<double>(offset_views);
        ring[k] = c.cloud_center + Vec3(dist * std::sin(phi), dist * rng.uniform(-0.1, 0.1),
                                        -dist * std::cos(phi));
      }
      for (std::size_t k = 0; k < n; ++k) {
        centers[k] = k < c.shared_center_views ? ring[0] : ring[k - c.shared_center_views + 1];
      }
      break;
    }
  }
  return centers;
}

inline Vec3 sample_point(const SceneConfig& c, SceneRng& rng) {
  if (c.point_cloud == CloudKind::shell) return c.cloud_center + c.shell_radius * rng.unit_vector();
  const double h = 0.5 * c.box_extent;
  return c.cloud_center + Vec3(rng.uniform(-h, h), rng.uniform(-h, h), rng.uniform(-h, h));
}

}  // namespace detail

/// Adds i.i.d. N(0, sigma^2) noise to every observation coordinate.
inline SceneProblem add_observation_noise(SceneProblem problem, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw Error(ErrorCode::ConfigInvalid, "sigma must be >= 0");
  if (sigma == 0.0) return problem;
  SceneRng rng(seed);
  for (auto& obs : problem.observations) {
    obs.point.x += sigma * rng.gaussian();
    obs.point.y += sigma * rng.gaussian();
  }
  return problem;
}

/// Right-multiplies every solver-input rotation by a rotation of exactly
/// `degrees` about a random axis. Ground truth is left untouched.
inline SceneProblem perturb_rotations(SceneProblem problem, double degrees, std::uint64_t seed) {
  if (degrees < 0.0) throw Error(ErrorCode::ConfigInvalid, "degrees must be >= 0");
  if (degrees == 0.0) return problem;
  SceneRng rng(seed);
  const double angle = degrees * std::numbers::pi / 180.0;
  for (auto& r : problem.rotations) r = r * exp_so3(angle * rng.unit_vector());
  return problem;
}

inline SceneProblem generate_scene(const SceneConfig& config) {
  detail::validate(config);
  SceneRng rng(detail::mix_seed(config.seed, 0));
  const auto centers = detail::camera_centers(config, rng);

  SceneProblem problem;
  problem.reference_view = 0;
  problem.gt_poses.resize(config.n_views);
  for (std::size_t k = 0; k < config.n_views; ++k) {
    Mat3 r = detail::look_at(centers[k], config.cloud_center);
    double aim = config.aim_jitter_deg;
    // Views sharing a center must differ in orientation.
    if (config.motion == MotionKind::local_pure_rotation && k > 0 &&
        k < config.shared_center_views) {
      aim = std::max(aim, 8.0);
      r = exp_so3((aim * std::numbers::pi / 180.0) * rng.unit_vector()) * r;
    } else {
      r = detail::jitter(r, aim, rng);
    }
    problem.gt_poses[k] = {r, centers[k]};
  }

  constexpr int kMaxAttempts = 1000;
  problem.gt_points.reserve(config.n_points);
  for (std::size_t p = 0; p < config.n_points; ++p) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const Vec3 x = detail::sample_point(config, rng);
      std::vector<Observation> seen;
      for (std::size_t v = 0; v < config.n_views; ++v) {
        const Vec3 pc = problem.gt_poses[v].to_camera(x);
        if (!(pc.z() > 1e-6 * config.camera_distance)) continue;
        const NormalizedImagePoint ip{pc.x() / pc.z(), pc.y() / pc.z()};
        if (std::abs(ip.x) > config.max_abs_image_coord ||
            std::abs(ip.y) > config.max_abs_image_coord)
          continue;
        seen.push_back({static_cast<TrackId>(p), static_cast<ViewId>(v), ip});
      }
      if (seen.size() < config.min_track_len) continue;
      problem.gt_points.push_back(x);
      problem.observations.insert(problem.observations.end(), seen.begin(), seen.end());
      placed = true;
    }
    if (!placed) {
      throw Error(ErrorCode::GeometryInfeasible,
                  "point " + std::to_string(p) + " not visible in " +
                      std::to_string(config.min_track_len) + " views after " +
                      std::to_string(kMaxAttempts) + " attempts");
    }
  }

  problem.rotations = rotations_of(problem.gt_poses);
  problem = add_observation_noise(std::move(problem), config.obs_noise_sigma,
                                  detail::mix_seed(config.seed, 1));
  problem = perturb_rotations(std::move(problem), config.rotation_noise_deg,
                              detail::mix_seed(config.seed, 2));
  return problem;
}

/// Three identity-rotation cameras centered at (0,0,0), (-1,0,0), (1,0,0)
/// observing (0,0,5) and (1,1,6) without noise.
inline SceneProblem reference_scene_s1() {
  SceneProblem problem;
  problem.gt_poses = {{Mat3::Identity(), Vec3(0, 0, 0)},
                      {Mat3::Identity(), Vec3(-1, 0, 0)},
                      {Mat3::Identity(), Vec3(1, 0, 0)}};
  problem.gt_points = {Vec3(0, 0, 5), Vec3(1, 1, 6)};
  for (TrackId t = 0; t < problem.gt_points.size(); ++t) {
    for (ViewId v = 0; v < problem.gt_poses.size(); ++v) {
      problem.observations.push_back({t, v, project(problem.gt_poses[v], problem.gt_points[t])});
    }
  }
  problem.rotations = rotations_of(problem.gt_poses);
  problem.reference_view = 0;
  return problem;
}

inline std::vector<Track> tracks_of(const SceneProblem& problem, std::size_t min_length = 2) {
  return build_tracks(problem.observations, min_length);
}

}  // namespace poseonly
