#include <gtest/gtest.h>

#include "support.hpp"

using namespace poseonly;
namespace ts = testing_support;

namespace {

SceneConfig config(MotionKind motion, std::uint64_t seed) {
  SceneConfig c;
  c.n_views = 6;
  c.n_points = 80;
  c.motion = motion;
  c.seed = seed;
  return c;
}

bool identical(const SceneProblem& a, const SceneProblem& b) {
  if (a.observations != b.observations || a.gt_points.size() != b.gt_points.size()) return false;
  for (std::size_t k = 0; k < a.gt_poses.size(); ++k) {
    if (a.gt_poses[k].rotation != b.gt_poses[k].rotation) return false;
    if (a.gt_poses[k].center != b.gt_poses[k].center) return false;
    if (a.rotations[k] != b.rotations[k]) return false;
  }
  for (std::size_t k = 0; k < a.gt_points.size(); ++k) {
    if (a.gt_points[k] != b.gt_points[k]) return false;
  }
  return true;
}

}  // namespace

TEST(Rng, PinnedStream) {
  // mt19937_64 is fully specified by the standard: the 10000th output of the
  // default-seeded engine is 9981545732273789042.
  std::mt19937_64 e;
  e.discard(9999);
  EXPECT_EQ(e(), 9981545732273789042ULL);
  SceneRng a(5), b(5);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(a.uniform(), b.uniform());
  SceneRng c(1);
  for (int k = 0; k < 1000; ++k) {
    const double u = c.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(ReferenceScene, HandProjections) {
  const auto s1 = reference_scene_s1();
  ASSERT_EQ(s1.observations.size(), 6u);
  EXPECT_EQ(s1.observations[0].point, (NormalizedImagePoint{0.0, 0.0}));
  EXPECT_NEAR(s1.observations[1].point.x, 0.2, 1e-15);
  EXPECT_NEAR(s1.observations[2].point.x, -0.2, 1e-15);
  EXPECT_EQ(s1.observations[1].point.y, 0.0);
}

TEST(Generate, Deterministic) {
  for (auto motion : {MotionKind::generic_ring, MotionKind::collinear,
                      MotionKind::local_pure_rotation, MotionKind::loop_closure}) {
    EXPECT_TRUE(identical(generate_scene(config(motion, 3)), generate_scene(config(motion, 3))));
    EXPECT_FALSE(identical(generate_scene(config(motion, 3)), generate_scene(config(motion, 4))));
  }
}

TEST(Generate, InvariantsHold) {
  for (auto motion : {MotionKind::generic_ring, MotionKind::collinear,
                      MotionKind::local_pure_rotation, MotionKind::loop_closure}) {
    for (auto cloud : {CloudKind::box, CloudKind::shell}) {
      auto c = config(motion, 11);
      c.point_cloud = cloud;
      c.min_track_len = 3;
      const auto p = generate_scene(c);
      EXPECT_EQ(p.gt_points.size(), c.n_points);
      for (const auto& o : p.observations) {
        EXPECT_GT(p.gt_poses[o.view_id].to_camera(p.gt_points[o.track_id]).z(), 0.0);
      }
      for (const auto& t : tracks_of(p)) EXPECT_GE(t.size(), 3u);
      EXPECT_EQ(tracks_of(p).size(), c.n_points);
      for (const auto& r : p.rotations) EXPECT_TRUE(is_rotation(r, 1e-12));
    }
  }
}

TEST(Generate, NoiselessClosure) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto p = generate_scene(config(MotionKind::generic_ring, seed));
    EXPECT_LT(reprojection_rms(p.gt_poses, ts::gt_point_map(p), p.observations).rms, 1e-15);
  }
}

TEST(Generate, CollinearCentersOnOneLine) {
  const auto p = generate_scene(config(MotionKind::collinear, 5));
  const Vec3 a = p.gt_poses[0].center, b = p.gt_poses[1].center;
  const Vec3 dir = (b - a).normalized();
  for (std::size_t k = 0; k < p.gt_poses.size(); ++k) {
    const Vec3 d = p.gt_poses[k].center - a;
    EXPECT_LT(d.cross(dir).norm(), 1e-12);
    for (std::size_t l = 0; l < k; ++l) {
      EXPECT_GT((p.gt_poses[k].center - p.gt_poses[l].center).norm(), 1e-3);
    }
  }
}

TEST(Generate, LocalPureRotationSharesCenter) {
  const auto p = generate_scene(config(MotionKind::local_pure_rotation, 6));
  EXPECT_EQ(p.gt_poses[0].center, p.gt_poses[1].center);
  EXPECT_GT(rotation_distance(p.gt_poses[0].rotation, p.gt_poses[1].rotation), 1e-3);
  EXPECT_GT((p.gt_poses[2].center - p.gt_poses[0].center).norm(), 1e-3);
}

TEST(Generate, ConfigInvalid) {
  auto expect_invalid = [](SceneConfig c) {
    try {
      generate_scene(c);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ConfigInvalid);
    }
  };
  auto c = config(MotionKind::generic_ring, 0);
  c.n_views = 1;
  expect_invalid(c);
  c = config(MotionKind::local_pure_rotation, 0);
  c.n_views = 2;
  expect_invalid(c);
  c = config(MotionKind::generic_ring, 0);
  c.n_points = 1;
  expect_invalid(c);
  c = config(MotionKind::generic_ring, 0);
  c.obs_noise_sigma = -1.0;
  expect_invalid(c);
}

TEST(Generate, GeometryInfeasible) {
  auto c = config(MotionKind::generic_ring, 0);
  c.max_abs_image_coord = 1e-6;  // a pinhole field of view
  c.min_track_len = 6;
  try {
    generate_scene(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GeometryInfeasible);
  }
}

TEST(Generate, PipelineSolvesEveryMode) {
  for (auto motion : {MotionKind::generic_ring, MotionKind::collinear,
                      MotionKind::local_pure_rotation, MotionKind::loop_closure}) {
    const auto p = generate_scene(config(motion, 21));
    const auto sol = ts::ligt_solve(p);
    EXPECT_LT(ts::aligned_rms(sol.translations, centers_of(p.gt_poses)), 1e-8);
  }
}

TEST(Noise, ZeroSigmaIsIdentity) {
  const auto p = generate_scene(config(MotionKind::generic_ring, 1));
  EXPECT_EQ(add_observation_noise(p, 0.0, 5).observations, p.observations);
}

TEST(Noise, SampleStdAndIndependence) {
  auto c = config(MotionKind::generic_ring, 2);
  c.n_points = 2000;
  const auto p = generate_scene(c);
  const auto noisy = add_observation_noise(p, 1e-3, 77);
  std::vector<double> e, coord;
  for (std::size_t k = 0; k < p.observations.size(); ++k) {
    e.push_back(noisy.observations[k].point.x - p.observations[k].point.x);
    e.push_back(noisy.observations[k].point.y - p.observations[k].point.y);
    coord.push_back(p.gt_points[p.observations[k].track_id].x());
    coord.push_back(p.gt_points[p.observations[k].track_id].y());
  }
  ASSERT_GE(e.size(), 10000u);
  const auto n = static_cast<double>(e.size());
  double me = 0, mc = 0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    me += e[k];
    mc += coord[k];
  }
  me /= n;
  mc /= n;
  double ve = 0, vc = 0, cov = 0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    ve += (e[k] - me) * (e[k] - me);
    vc += (coord[k] - mc) * (coord[k] - mc);
    cov += (e[k] - me) * (coord[k] - mc);
  }
  const double sd = std::sqrt(ve / (n - 1));
  EXPECT_NEAR(sd, 1e-3, 0.05e-3);
  EXPECT_LT(std::abs(cov / std::sqrt(ve * vc)), 0.05);
  EXPECT_EQ(noisy.gt_points, p.gt_points);
}

TEST(RotationNoise, ExactMagnitude) {
  const auto p = generate_scene(config(MotionKind::generic_ring, 3));
  EXPECT_EQ(perturb_rotations(p, 0.0, 1).rotations, p.rotations);
  const auto q = perturb_rotations(p, 2.5, 9);
  for (std::size_t k = 0; k < p.rotations.size(); ++k) {
    EXPECT_TRUE(is_rotation(q.rotations[k], 1e-12));
    const double deg = log_so3(p.rotations[k].transpose() * q.rotations[k]).norm() * 180.0 / std::numbers::pi;
    EXPECT_NEAR(deg, 2.5, 1e-9);
    EXPECT_EQ(q.gt_poses[k].rotation, p.gt_poses[k].rotation);
  }
}
