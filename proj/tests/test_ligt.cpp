#include <gtest/gtest.h>

#include "support.hpp"

using namespace poseonly;
namespace ts = testing_support;

namespace {

std::vector<Vec3> gt_centers(const SceneProblem& p) { return centers_of(p.gt_poses); }

LigtSystem assemble(const SceneProblem& p, const LigtOptions& o = ts::inline_options()) {
  return assemble_system(tracks_of(p), p.rotations, p.reference_view, o);
}

}  // namespace

TEST(BaseViews, ThreeCameraPointZero) {
  const auto s1 = reference_scene_s1();
  const auto tracks = tracks_of(s1);
  const auto base = select_base_views(tracks[0], s1.rotations);
  EXPECT_EQ(base.left, 1u);
  EXPECT_EQ(base.right, 2u);
  EXPECT_NEAR(base.theta, 0.4, 1e-15);
}

TEST(BaseViews, IdenticalPosesAreDegenerate) {
  Track t{0, {{0, {0.1, 0.2}}, {1, {0.1, 0.2}}}};
  const std::vector<RotationMatrix> rs{Mat3::Identity(), Mat3::Identity()};
  try {
    select_base_views(t, rs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllPairsDegenerate);
  }
}

TEST(BaseViews, TwoObservationTrack) {
  Track t{0, {{1, {0.0, 0.0}}, {3, {0.2, 0.0}}}};
  const std::vector<RotationMatrix> rs(4, Mat3::Identity());
  const auto base = select_base_views(t, rs);
  EXPECT_EQ(base.left, 1u);
  EXPECT_EQ(base.right, 3u);
}

TEST(BaseViews, TiesGoToSmallestPair) {
  // Views 0 and 2 see the same ray, so pairs (0,1) and (1,2) tie.
  Track t{0, {{0, {0.0, 0.0}}, {1, {0.2, 0.0}}, {2, {0.0, 0.0}}}};
  const std::vector<RotationMatrix> rs(3, Mat3::Identity());
  const auto base = select_base_views(t, rs);
  EXPECT_EQ(base.left, 0u);
  EXPECT_EQ(base.right, 1u);
}

TEST(BaseViews, MatchesExhaustiveOracle) {
  const auto p = ts::scene(8, 100, 31);
  for (const auto& t : tracks_of(p)) {
    const auto base = select_base_views(t, p.rotations);
    const auto [z, e] = ts::oracle_base(t, p.rotations);
    EXPECT_EQ(base.left, z);
    EXPECT_EQ(base.right, e);
  }
}

TEST(RowBlocks, ConstructionIdentityAndExactness) {
  const auto s1 = reference_scene_s1();
  const auto tracks = tracks_of(s1);
  for (const auto& t : tracks) {
    const auto base = select_base_views(t, s1.rotations);
    const auto blocks = build_row_blocks(t, base, s1.rotations);
    EXPECT_EQ(blocks.size(), t.size() - 1);
    for (const auto& b : blocks) {
      EXPECT_EQ(b.D, -(b.B + b.C));
      const Vec3 r = b.B * s1.gt_poses[b.right].center + b.C * s1.gt_poses[b.row_view].center +
                     b.D * s1.gt_poses[b.left].center;
      EXPECT_LT(r.norm(), 1e-12);
    }
  }
}

TEST(RowBlocks, ParallelRayGivesZeroBlock) {
  // View 2 sees exactly the ray of view 0 from the same center.
  Track t{0, {{0, {0.1, 0.1}}, {1, {0.3, 0.1}}, {2, {0.1, 0.1}}}};
  const std::vector<RotationMatrix> rs(3, Mat3::Identity());
  const auto base = select_base_views(t, rs);
  ASSERT_EQ(base.left, 0u);
  const auto blocks = build_row_blocks(t, base, rs);
  bool found = false;
  for (const auto& b : blocks) {
    if (b.row_view == 2) {
      found = true;
      EXPECT_TRUE(b.degenerate);
      EXPECT_EQ(b.B.norm() + b.C.norm() + b.D.norm(), 0.0);
    }
  }
  EXPECT_TRUE(found);
}

TEST(RowBlocks, ExactRandomScenes) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto p = ts::scene(10, 80, seed);
    for (const auto& t : tracks_of(p)) {
      const auto base = select_base_views(t, p.rotations);
      for (const auto& b : build_row_blocks(t, base, p.rotations)) {
        const Vec3 r = b.B * p.gt_poses[b.right].center + b.C * p.gt_poses[b.row_view].center +
                       b.D * p.gt_poses[b.left].center;
        const double scale = (b.B.norm() + b.C.norm()) * 10.0;
        EXPECT_LT(r.norm(), 1e-12 * std::max(scale, 1.0));
      }
    }
  }
}

TEST(Assemble, MatchesMaterializedOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto p = ts::scene(6, 40, 100 + seed, seed % 2 ? MotionKind::collinear : MotionKind::generic_ring);
    const auto tracks = tracks_of(p);
    const auto sys = assemble(p);
    const Eigen::MatrixXd oracle = ts::oracle_ligt_matrix(tracks, p.rotations);
    const Eigen::MatrixXd full = sys.dense_matrix(false);
    ASSERT_EQ(full.rows(), oracle.rows());
    ASSERT_EQ(full.cols(), oracle.cols());
    EXPECT_LT((full - oracle).norm(), 1e-12 * oracle.norm());
    EXPECT_EQ(sys.dense_matrix(true), ts::drop_view_columns(full, p.reference_view));
  }
}

TEST(Assemble, ThreeCameraShapeAndRank) {
  const auto s1 = reference_scene_s1();
  const auto sys = assemble(s1);
  const Eigen::MatrixXd l = sys.dense_matrix(true);
  EXPECT_EQ(l.rows(), 12);
  EXPECT_EQ(l.cols(), 6);
  const auto sv = ts::singular_values(l);
  int small = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) small += sv(k) < 1e-10 * sv(0) ? 1 : 0;
  EXPECT_EQ(small, 1);
}

TEST(Assemble, GlobalPureRotationIsInsufficient) {
  auto p = ts::scene(4, 30, 3);
  for (auto& g : p.gt_poses) g.center = p.gt_poses[0].center;
  p.observations.clear();
  for (std::size_t t = 0; t < p.gt_points.size(); ++t) {
    for (ViewId v = 0; v < 4; ++v) {
      const Vec3 pc = p.gt_poses[v].to_camera(p.gt_points[t]);
      if (pc.z() > 0) p.observations.push_back({static_cast<TrackId>(t), v, project(p.gt_poses[v], p.gt_points[t])});
    }
  }
  try {
    assemble(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientParallax);
  }
}

TEST(Assemble, RankLawSmallScenes) {
  for (std::size_t n : {3u, 5u, 10u}) {
    const auto p = ts::scene(n, 2, 77 + n);
    const auto tracks = tracks_of(p);
    const Eigen::MatrixXd l = ts::oracle_ligt_matrix(tracks, p.rotations);
    EXPECT_EQ(ts::numerical_rank(l), static_cast<int>(3 * n - 4));
    EXPECT_EQ(ts::numerical_rank(assemble(p).dense_matrix(false)), static_cast<int>(3 * n - 4));
  }
}

TEST(Assemble, DeterministicRowOrder) {
  const auto p = ts::scene(10, 200, 5);
  auto o = ts::inline_options();
  const auto a = assemble(p, o);
  o.threads = 4;
  const auto b = assemble(p, o);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_EQ(a.rows[k].track_id, b.rows[k].track_id);
    EXPECT_EQ(a.rows[k].row_view, b.rows[k].row_view);
    EXPECT_EQ(a.rows[k].B, b.rows[k].B);
    if (k > 0) {
      EXPECT_TRUE(std::make_pair(a.rows[k - 1].track_id, a.rows[k - 1].row_view) <
                  std::make_pair(a.rows[k].track_id, a.rows[k].row_view));
    }
  }
}

TEST(Solve, ThreeCameraRecoversCenters) {
  const auto s1 = reference_scene_s1();
  const auto sol = ts::ligt_solve(s1);
  EXPECT_LT(ts::aligned_rms(sol.translations, gt_centers(s1)), 1e-8);
  EXPECT_EQ(sol.translations[0], Vec3::Zero());
  double norm = 0.0;
  for (const auto& t : sol.translations) norm += t.squaredNorm();
  EXPECT_NEAR(norm, 1.0, 1e-12);
  EXPECT_GT(sol.singular_gap(), 1e6);
  EXPECT_EQ(sol.spectrum.size(), 4u);
}

TEST(Solve, GenericScenesAllBackends) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto p = ts::scene(12, 150, 200 + seed);
    for (auto backend : {NullSpaceBackend::dense_svd, NullSpaceBackend::normal_matrix}) {
      auto o = ts::inline_options();
      o.backend = backend;
      const auto sol = ts::ligt_solve(p, o);
      EXPECT_LT(ts::aligned_rms(sol.translations, gt_centers(p)), 1e-8);
      EXPECT_EQ(sol.backend, backend);
    }
  }
}

TEST(Solve, NormalPathMatchesDense) {
  const auto p = ts::scene(40, 300, 9);
  auto o = ts::inline_options();
  o.backend = NullSpaceBackend::normal_matrix;
  const auto sys = assemble(p, o);
  const auto sol = solve_translations(sys, o);
  EXPECT_LT(ts::aligned_rms(sol.translations, gt_centers(p)), 1e-8);
  // Matches the dense oracle to sign and scale.
  o.backend = NullSpaceBackend::dense_svd;
  const auto ref = solve_translations(sys, o);
  for (std::size_t v = 0; v < sol.translations.size(); ++v) {
    EXPECT_LT((sol.translations[v] - ref.translations[v]).norm(), 1e-9);
  }
}

TEST(Solve, LocalPureRotation) {
  const auto p = ts::scene(5, 100, 17, MotionKind::local_pure_rotation);
  const auto sol = ts::ligt_solve(p);
  EXPECT_LT(ts::aligned_rms(sol.translations, gt_centers(p)), 1e-8);
  EXPECT_LT((sol.translations[0] - sol.translations[1]).norm(), 1e-8);
}

TEST(Solve, SignIsCheiralityPositive) {
  const auto p = ts::scene(8, 60, 41);
  const auto tracks = tracks_of(p);
  const auto sys = assemble(p);
  const auto sol = solve_translations(sys);
  const auto poses = poses_from_translations(p.rotations, sol.translations);
  for (const auto& tb : sys.bases) {
    const auto& t = tracks[tb.track_id];
    const auto pg = pair_geometry_from_poses(poses[tb.base.left], poses[tb.base.right],
                                             t.find(tb.base.left)->point, t.find(tb.base.right)->point);
    EXPECT_GT(linear_depths(pg).left, 0.0);
  }
  EXPECT_EQ(sol.sign_votes.negative, 0u);
}

TEST(Solve, NegatedNullVectorIsReoriented) {
  const auto p = ts::scene(6, 40, 42);
  const auto sys = assemble(p);
  const Eigen::MatrixXd l = sys.dense_matrix(true);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(l, Eigen::ComputeFullV);
  const Eigen::VectorXd v = svd.matrixV().col(l.cols() - 1);
  const auto a = finalize_null_vector(sys, v);
  const auto b = finalize_null_vector(sys, -v);
  for (std::size_t k = 0; k < a.translations.size(); ++k) {
    EXPECT_LT((a.translations[k] - b.translations[k]).norm(), 1e-15);
  }
  EXPECT_GT(a.sign_votes.positive, a.sign_votes.negative);
}

TEST(Solve, ReferenceChangeIsAGauge) {
  auto p = ts::scene(8, 80, 51);
  const auto a = ts::ligt_solve(p);
  p.reference_view = 5;
  const auto b = ts::ligt_solve(p);
  EXPECT_EQ(b.translations[5], Vec3::Zero());
  EXPECT_LT(ts::aligned_rms(a.translations, b.translations), 1e-10);
}

TEST(Solve, ScaleInvariance) {
  auto p = ts::scene(8, 80, 52);
  const auto a = ts::ligt_solve(p);
  // Observations do not change under a global scale; rebuild them from
  // scaled ground truth to make that explicit.
  for (auto& g : p.gt_poses) g.center *= 3.7;
  for (auto& x : p.gt_points) x *= 3.7;
  for (auto& o : p.observations) o.point = project(p.gt_poses[o.view_id], p.gt_points[o.track_id]);
  const auto b = ts::ligt_solve(p);
  for (std::size_t k = 0; k < a.translations.size(); ++k) {
    EXPECT_LT((a.translations[k] - b.translations[k]).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Solve, ExactSolutionSatisfiesDepthEqualityAndDpo) {
  const auto p = ts::scene(7, 60, 53);
  const auto tracks = tracks_of(p);
  const auto sol = ts::ligt_solve(p);
  const auto poses = poses_from_translations(p.rotations, sol.translations);
  for (const auto& t : tracks) {
    const auto base = select_base_views(t, p.rotations);
    const auto& xz = t.find(base.left)->point;
    const auto bg = pair_geometry_from_poses(poses[base.left], poses[base.right], xz,
                                             t.find(base.right)->point);
    const double dz = linear_depths(bg).left;
    for (const auto& o : t.observations) {
      if (o.view_id == base.left) continue;
      const auto pg = pair_geometry_from_poses(poses[base.left], poses[o.view_id], xz, o.point);
      EXPECT_NEAR(linear_depths(pg).left, dz, 1e-8 * dz);
      EXPECT_LT(dpo_residual(bg, pg).norm(), 1e-8 * dz);
    }
  }
}

TEST(Solve, DenseDeterminism) {
  const auto p = ts::scene(10, 100, 54);
  const auto a = ts::ligt_solve(p);
  const auto b = ts::ligt_solve(p);
  for (std::size_t k = 0; k < a.translations.size(); ++k) EXPECT_EQ(a.translations[k], b.translations[k]);
}

TEST(Solve, NormalizeRowsStillExact) {
  const auto p = ts::scene(10, 100, 55);
  auto o = ts::inline_options();
  o.normalize_rows = true;
  const auto sol = ts::ligt_solve(p, o);
  EXPECT_LT(ts::aligned_rms(sol.translations, gt_centers(p)), 1e-8);
}

TEST(Solve, ThetaMinExcludesTracks) {
  const auto p = ts::scene(6, 50, 56);
  auto o = ts::inline_options();
  o.theta_min = 1e6;
  EXPECT_THROW(assemble(p, o), Error);
}

TEST(Spectrum, GenericAndCollinear) {
  for (auto motion : {MotionKind::generic_ring, MotionKind::collinear}) {
    const auto p = ts::scene(6, 30, 60, motion);
    const auto sys = assemble(p);
    const auto s = singular_spectrum(sys, 2);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_GT(s[1] / s[0], 1e6);
    // Oracle: dense SVD of the reduced matrix.
    const auto sv = ts::singular_values(sys.dense_matrix(true));
    EXPECT_NEAR(s[1], sv(sv.size() - 2), 1e-9 * sv(0));
  }
}

TEST(Spectrum, FullColumnsHaveFourZeroValues) {
  const auto p = ts::scene(5, 2, 61);
  const auto s = singular_spectrum(assemble(p), 5, SpectrumColumns::full);
  const double top = ts::singular_values(assemble(p).dense_matrix(false))(0);
  for (int k = 0; k < 4; ++k) EXPECT_LT(s[k], 1e-10 * top);
  EXPECT_GT(s[4], 1e-10 * top);
}

TEST(Solve, AmbiguousNullSpaceIsRankDeficient) {
  // A view without observations leaves its translation unconstrained.
  SceneProblem p = reference_scene_s1();
  p.rotations.push_back(Mat3::Identity());
  p.gt_poses.push_back({Mat3::Identity(), Vec3(0, 3, 0)});
  try {
    ts::ligt_solve(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
  }
}

TEST(Solve, NormalMatrixAccumulationsAgree) {
  const auto p = ts::scene(15, 120, 62);
  const auto sys = assemble(p);
  const Eigen::MatrixXd l = sys.dense_matrix(true);
  const Eigen::MatrixXd oracle = l.transpose() * l;
  const Eigen::MatrixXd dense = detail::dense_normal_matrix(sys, 0);
  const Eigen::MatrixXd sparse = Eigen::MatrixXd(detail::sparse_normal_matrix(sys));
  EXPECT_LT((dense - oracle).norm(), 1e-12 * oracle.norm());
  EXPECT_LT((sparse - oracle).norm(), 1e-12 * oracle.norm());
}

TEST(Solve, SparseFactorizationPath) {
  const auto p = ts::scene(30, 200, 63);
  auto o = ts::inline_options();
  o.backend = NullSpaceBackend::normal_matrix;
  o.sparse_normal_threshold = 0;
  const auto sol = ts::ligt_solve(p, o);
  EXPECT_LT(ts::aligned_rms(sol.translations, centers_of(p.gt_poses)), 1e-8);
  EXPECT_GT(sol.singular_gap(), 100.0);
}

TEST(Solve, NoisyScenesPassTheDefaultGap) {
  for (std::size_t n : {6u, 10u, 20u}) {
    const auto p = ts::scene(n, 10 * n, 600 + n, MotionKind::generic_ring, 1e-3);
    const auto sol = ts::ligt_solve(p);
    EXPECT_GT(sol.singular_gap(), kDefaultRankGapRatio);
    EXPECT_LT(sol.singular_gap(), 1e3);
    EXPECT_LT(ts::aligned_rms(sol.translations, centers_of(p.gt_poses)), 0.1 * ts::scene_extent(p.gt_poses));
  }
}
