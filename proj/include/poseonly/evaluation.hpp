#pragma once

// Gauge-free comparison against ground truth.

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "poseonly/io.hpp"
#include "poseonly/pose_adjust.hpp"
#include "poseonly/reconstruct.hpp"
#include "poseonly/types.hpp"

namespace poseonly {

struct SimilarityAlignment {
  double scale = 1.0;
  RotationMatrix rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  double rms = 0.0;
  /// Estimated points are collinear (or coincident): the rotation about
  /// their line is not determined and a best fit is returned.
  bool degenerate = false;

  Vec3 apply(const Vec3& p) const { return scale * rotation * p + translation; }
};

/// Least-squares similarity gt ~ s R est + t (Umeyama). Throws TooFewPoints
/// for fewer than two correspondences.
inline SimilarityAlignment align_similarity(std::span<const Vec3> estimated,
                                            std::span<const Vec3> ground_truth) {
  if (estimated.size() != ground_truth.size()) {
    throw Error(ErrorCode::InvalidArgument, "correspondence count mismatch");
  }
  const auto n = static_cast<Eigen::Index>(estimated.size());
  if (n < 2) throw Error(ErrorCode::TooFewPoints, "need at least two correspondences");
  Eigen::Matrix3Xd src(3, n), dst(3, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    src.col(k) = estimated[static_cast<std::size_t>(k)];
    dst.col(k) = ground_truth[static_cast<std::size_t>(k)];
  }
  SimilarityAlignment out;
  const Eigen::Matrix3Xd centered = src.colwise() - src.rowwise().mean();
  const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::Matrix3d>(centered * centered.transpose()).singularValues();
  if (!(sv(0) > 0.0)) {
    // All estimates coincide: only a translation can be fitted.
    out.scale = 0.0;
    out.translation = dst.rowwise().mean();
    out.degenerate = true;
  } else {
    const Eigen::Matrix4d t = Eigen::umeyama(src, dst, true);
    const Mat3 sr = t.topLeftCorner<3, 3>();
    out.scale = std::cbrt(sr.determinant());
    out.rotation = sr / out.scale;
    out.translation = t.topRightCorner<3, 1>();
    out.degenerate = !(sv(1) > 1e-12 * sv(0));
  }
  double sum = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) sum += (out.apply(src.col(k)) - dst.col(k)).squaredNorm();
  out.rms = std::sqrt(sum / static_cast<double>(n));
  return out;
}

/// Mean geodesic rotation error in degrees after removing the best common
/// world rotation Q (R_est ~ R_gt Q). Centers play no part, so the score is
/// defined for collinear camera sets too.
inline double rotation_error_deg_mean(std::span<const RotationMatrix> estimated,
                                      std::span<const RotationMatrix> ground_truth) {
  if (estimated.empty()) return 0.0;
  Mat3 sum = Mat3::Zero();
  for (std::size_t k = 0; k < estimated.size(); ++k) sum += ground_truth[k].transpose() * estimated[k];
  Eigen::JacobiSVD<Mat3> svd(sum, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  const Mat3 q = svd.matrixU() * d * svd.matrixV().transpose();
  double total = 0.0;
  for (std::size_t k = 0; k < estimated.size(); ++k) {
    total += rotation_distance(estimated[k], ground_truth[k] * q);
  }
  return total / static_cast<double>(estimated.size()) * 180.0 / std::numbers::pi;
}

struct EvalReport {
  std::optional<double> translation_rms_after_alignment;  // needs ground truth
  std::optional<double> rotation_error_deg_mean;          // needs ground truth
  double reprojection_rms = 0.0;
  std::size_t points_reconstructed = 0;
  RejectionSummary rejected;
  std::size_t cheirality_violations = 0;
  std::optional<double> singular_gap;
  std::vector<std::pair<std::string, double>> runtime_ms;
};

/// Scores a pose set against a problem. The reprojection error always goes
/// through analytic reconstruction from the supplied poses, whichever method
/// produced them.
inline EvalReport evaluate(const SceneProblem& problem, std::span<const CameraPose> poses,
                           std::span<const double> spectrum = {},
                           const ReconstructOptions& options = {}) {
  if (poses.size() != problem.n_views()) {
    throw Error(ErrorCode::InvalidArgument, "pose count does not match the problem");
  }
  EvalReport report;
  if (problem.has_ground_truth()) {
    const auto est = centers_of(poses);
    const auto gt = centers_of(problem.gt_poses);
    report.translation_rms_after_alignment = align_similarity(est, gt).rms;
    report.rotation_error_deg_mean =
        rotation_error_deg_mean(rotations_of(poses), rotations_of(problem.gt_poses));
  }
  const auto tracks = build_tracks(problem.observations, 2);
  const Reconstruction rec = reconstruct_all(tracks, poses, options);
  const auto stats = reprojection_rms(poses, rec.point_map(), problem.observations);
  report.reprojection_rms = stats.rms;
  report.points_reconstructed = rec.points.size();
  report.rejected = rec.rejected;
  report.cheirality_violations = stats.cheirality_violations;
  if (spectrum.size() >= 2) report.singular_gap = gap_ratio(spectrum[0], spectrum[1]);
  return report;
}

namespace detail {
inline std::string eval_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6e", v);
  return buf;
}
}  // namespace detail

inline void print_eval_table(std::ostream& out, const EvalReport& r) {
  auto row = [&](const std::string& name, const std::string& value) {
    out << "  " << name << std::string(name.size() < 34 ? 34 - name.size() : 1, ' ') << value
        << '\n';
  };
  auto opt = [](const std::optional<double>& v) {
    return v ? detail::eval_value(*v) : std::string("n/a");
  };
  out << "Evaluation\n";
  row("translation RMS (aligned)", opt(r.translation_rms_after_alignment));
  row("rotation error mean [deg]", opt(r.rotation_error_deg_mean));
  row("reprojection RMS", detail::eval_value(r.reprojection_rms));
  row("points reconstructed", std::to_string(r.points_reconstructed));
  row("rejected: all pairs degenerate", std::to_string(r.rejected.all_pairs_degenerate));
  row("rejected: negative depth", std::to_string(r.rejected.negative_depth));
  row("rejected: track too short", std::to_string(r.rejected.too_short));
  row("cheirality violations", std::to_string(r.cheirality_violations));
  row("singular gap s2/s1", opt(r.singular_gap));
  for (const auto& [stage, ms] : r.runtime_ms) row("runtime " + stage + " [ms]", detail::eval_value(ms));
}

/// Flat key=value lines. Values use the shortest round-trip form; metrics
/// that need ground truth are omitted when it is absent.
inline void print_eval_kv(std::ostream& out, const EvalReport& r) {
  auto opt = [&](const char* key, const std::optional<double>& v) {
    if (v) out << key << '=' << format_double(*v) << '\n';
  };
  opt("translation_rms_after_alignment", r.translation_rms_after_alignment);
  opt("rotation_error_deg_mean", r.rotation_error_deg_mean);
  out << "reprojection_rms=" << format_double(r.reprojection_rms) << '\n'
      << "points_reconstructed=" << r.points_reconstructed << '\n'
      << "rejected_all_pairs_degenerate=" << r.rejected.all_pairs_degenerate << '\n'
      << "rejected_negative_depth=" << r.rejected.negative_depth << '\n'
      << "rejected_too_short=" << r.rejected.too_short << '\n'
      << "cheirality_violations=" << r.cheirality_violations << '\n';
  opt("singular_gap", r.singular_gap);
  for (const auto& [stage, ms] : r.runtime_ms) out << "runtime_ms_" << stage << '=' << format_double(ms) << '\n';
}

}  // namespace poseonly
