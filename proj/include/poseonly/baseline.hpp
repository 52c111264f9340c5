#pragma once

// Cross-product least-squares translation averaging: every relative direction
// d_ij (expressed in view j) contributes d_ij x R_j (t_i - t_j) = 0. Positions
// along a common baseline direction are unconstrained, so collinear camera
// motion leaves a null space of dimension greater than one.

#include <Eigen/SVD>

#include <numeric>
#include <vector>

#include "poseonly/ligt.hpp"
#include "poseonly/types.hpp"

namespace poseonly {

struct RelativeDirection {
  ViewId i = 0;
  ViewId j = 0;
  Vec3 dir = Vec3::UnitX();  // t_ij / |t_ij|, in the frame of view j
};

struct BaselineSolution {
  std::vector<Vec3> translations;
  std::vector<double> spectrum;  // three smallest singular values, ascending

  double singular_gap() const { return spectrum.size() < 2 ? 0.0 : gap_ratio(spectrum[0], spectrum[1]); }
};

/// Unit relative directions for every pair of views that share a track,
/// computed from known poses. Pairs with coincident centers are skipped.
inline std::vector<RelativeDirection> directions_from_poses(std::span<const CameraPose> poses,
                                                            std::span<const Track> tracks) {
  const std::size_t n = poses.size();
  std::vector<char> linked(n * n, 0);
  for (const auto& t : tracks) {
    for (std::size_t a = 0; a < t.size(); ++a)
      for (std::size_t b = a + 1; b < t.size(); ++b)
        linked[t.observations[a].view_id * n + t.observations[b].view_id] = 1;
  }
  std::vector<RelativeDirection> out;
  for (ViewId i = 0; i < n; ++i) {
    for (ViewId j = i + 1; j < n; ++j) {
      if (!linked[i * n + j]) continue;
      const Vec3 t = poses[j].rotation * (poses[i].center - poses[j].center);
      const double norm = t.norm();
      if (!(norm > 0.0)) continue;
      out.push_back({i, j, t / norm});
    }
  }
  return out;
}

namespace detail {
inline bool view_graph_connected(std::size_t n, std::span<const RelativeDirection> dirs) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& d : dirs) parent[find(d.i)] = find(d.j);
  for (std::size_t v = 1; v < n; ++v) {
    if (find(v) != find(0)) return false;
  }
  return true;
}
}  // namespace detail

/// Least-squares solve without the rank check. Throws Disconnected when the
/// direction graph does not span all views.
inline BaselineSolution govindu_solve(std::span<const RelativeDirection> directions,
                                      std::span<const RotationMatrix> rotations,
                                      ViewId reference_view) {
  const std::size_t n = rotations.size();
  if (n < 2 || reference_view >= n) {
    throw Error(ErrorCode::InvalidArgument, "need two views and a valid reference");
  }
  if (!detail::view_graph_connected(n, directions)) {
    throw Error(ErrorCode::Disconnected, "relative direction graph is not connected");
  }
  auto col = [&](ViewId v) -> std::ptrdiff_t {
    if (v == reference_view) return -1;
    return 3 * static_cast<std::ptrdiff_t>(v < reference_view ? v : v - 1);
  };
  const auto cols = static_cast<Eigen::Index>(3 * (n - 1));
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(3 * directions.size()), cols);
  for (std::size_t k = 0; k < directions.size(); ++k) {
    const auto& d = directions[k];
    const Mat3 m = skew(d.dir) * rotations[d.j];
    const auto r = static_cast<Eigen::Index>(3 * k);
    if (auto c = col(d.i); c >= 0) a.block<3, 3>(r, c) += m;
    if (auto c = col(d.j); c >= 0) a.block<3, 3>(r, c) -= m;
  }
  const detail::NullSpace ns = detail::dense_null_space(a, 3);
  BaselineSolution sol;
  sol.spectrum = ns.smallest;
  sol.translations.assign(n, Vec3::Zero());
  for (ViewId v = 0; v < n; ++v) {
    if (auto c = col(v); c >= 0) sol.translations[v] = ns.vector.segment<3>(c);
  }
  // Sign: directions should agree with the recovered baselines.
  double agreement = 0.0;
  for (const auto& d : directions) {
    agreement += d.dir.dot(rotations[d.j] * (sol.translations[d.i] - sol.translations[d.j]));
  }
  if (agreement < 0.0) {
    for (auto& t : sol.translations) t = -t;
  }
  return sol;
}

/// As govindu_solve, and additionally throws RankDeficient when
/// sigma_2 / sigma_1 of the reduced system does not exceed rank_gap_ratio.
inline BaselineSolution govindu_translations(std::span<const RelativeDirection> directions,
                                             std::span<const RotationMatrix> rotations,
                                             ViewId reference_view,
                                             double rank_gap_ratio = kDefaultRankGapRatio) {
  BaselineSolution sol = govindu_solve(directions, rotations, reference_view);
  if (sol.spectrum.size() >= 2 && !(sol.spectrum[1] > rank_gap_ratio * sol.spectrum[0])) {
    throw Error(ErrorCode::RankDeficient,
                "cross-product system singular gap " + std::to_string(sol.singular_gap()));
  }
  return sol;
}

}  // namespace poseonly
