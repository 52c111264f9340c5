#pragma once

// Pose adjustment: nonlinear least squares over camera poses only.
//
// For a track with base views (zeta, eta) the point is never a parameter.
// Its left-base depth comes from the base pair,
//
//   d = a_ze^T t_ze / theta_ze^2 = ((r_z x r_e) x r_e)^T (c_z - c_e) / |r_z x r_e|^2,
//
// with world bearings r_v = R_v^T X_v of the observed points. Every other
// observing view i predicts Y_i = d R_zi X_z + t_zi = R_i (c_z + d r_z - c_i),
// and the residual is the dehomogenized Y_i minus the observed X_i.

#include <Eigen/Cholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "poseonly/geometry.hpp"
#include "poseonly/ligt.hpp"
#include "poseonly/parallel.hpp"
#include "poseonly/types.hpp"

namespace poseonly {

/// Tracks with frozen base pairs. Built once from the initial rotations.
struct PaProblem {
  std::vector<Track> tracks;
  std::vector<BaseViewPair> bases;
  std::vector<TrackId> excluded_tracks;

  std::size_t residual_count() const {
    std::size_t n = 0;
    for (const auto& t : tracks) n += 2 * (t.size() - 1);
    return n;
  }
};

inline PaProblem prepare_pa_problem(std::span<const Track> tracks,
                                    std::span<const RotationMatrix> rotations,
                                    double theta_min = 0.0) {
  PaProblem problem;
  for (const auto& t : tracks) {
    try {
      const BaseViewPair base = select_base_views(t, rotations, theta_min);
      problem.tracks.push_back(t);
      problem.bases.push_back(base);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::AllPairsDegenerate) throw;
      problem.excluded_tracks.push_back(t.track_id);
    }
  }
  return problem;
}

/// Free parameters: per non-reference view an optional 3-vector rotation
/// increment R <- exp(w) R (camera frame) and a center increment
/// c <- c + R^T dc. The scale-anchor view keeps |c_anchor - c_ref| fixed and
/// moves on that sphere with two tangent parameters. Total 6(n - 1) - 1, or
/// 3(n - 1) - 1 with rotations frozen.
class PoseParameterization {
 public:
  PoseParameterization(std::size_t n_views, ViewId reference, ViewId anchor,
                       bool freeze_rotations)
      : reference_(reference), anchor_(anchor), freeze_rotations_(freeze_rotations),
        rotation_col_(n_views, -1), center_col_(n_views, -1) {
    if (reference >= n_views || anchor >= n_views || anchor == reference) {
      throw Error(ErrorCode::InvalidArgument, "invalid reference/anchor views");
    }
    std::ptrdiff_t col = 0;
    for (ViewId v = 0; v < n_views; ++v) {
      if (v == reference) continue;
      if (!freeze_rotations) {
        rotation_col_[v] = col;
        col += 3;
      }
      center_col_[v] = col;
      col += (v == anchor) ? 2 : 3;
    }
    num_parameters_ = static_cast<std::size_t>(col);
  }

  /// The view sharing the most tracks with the reference among views whose
  /// center is distinct from the reference center; ties go to the lower id.
  static ViewId choose_anchor(std::span<const CameraPose> poses, std::span<const Track> tracks,
                              ViewId reference) {
    std::vector<std::size_t> shared(poses.size(), 0);
    for (const auto& t : tracks) {
      if (t.find(reference) == nullptr) continue;
      for (const auto& o : t.observations) ++shared[o.view_id];
    }
    double extent = 0.0;
    for (const auto& p : poses) {
      extent = std::max(extent, (p.center - poses[reference].center).norm());
    }
    std::ptrdiff_t best = -1;
    for (ViewId v = 0; v < poses.size(); ++v) {
      if (v == reference) continue;
      if (!((poses[v].center - poses[reference].center).norm() > 1e-9 * extent)) continue;
      if (best < 0 || shared[v] > shared[static_cast<std::size_t>(best)]) best = v;
    }
    if (best < 0) {
      throw Error(ErrorCode::Degenerate, "all camera centers coincide with the reference");
    }
    return static_cast<ViewId>(best);
  }

  std::size_t num_parameters() const { return num_parameters_; }
  ViewId reference() const { return reference_; }
  ViewId anchor() const { return anchor_; }
  bool rotations_frozen() const { return freeze_rotations_; }
  std::ptrdiff_t rotation_column(ViewId v) const { return rotation_col_[v]; }
  std::ptrdiff_t center_column(ViewId v) const { return center_col_[v]; }
  int center_dof(ViewId v) const { return v == reference_ ? 0 : (v == anchor_ ? 2 : 3); }

  /// d(center)/d(parameters) at the current poses: 3x3 or 3x2.
  Eigen::Matrix<double, 3, Eigen::Dynamic> center_basis(std::span<const CameraPose> poses,
                                                        ViewId v) const {
    if (v == anchor_) {
      const Vec3 offset = poses[v].center - poses[reference_].center;
      const double radius = offset.norm();
      return radius * tangent_basis(poses[v].rotation, offset / radius);
    }
    return poses[v].rotation.transpose();
  }

  std::vector<CameraPose> apply(std::span<const CameraPose> poses,
                                const Eigen::VectorXd& delta) const {
    std::vector<CameraPose> out(poses.begin(), poses.end());
    for (ViewId v = 0; v < poses.size(); ++v) {
      if (v == reference_) continue;
      const Mat3& r = poses[v].rotation;
      if (v == anchor_) {
        const Vec3 offset = poses[v].center - poses[reference_].center;
        const double radius = offset.norm();
        const Vec3 dir = offset / radius;
        const Vec3 moved =
            dir + tangent_basis(r, dir) * delta.segment<2>(center_col_[v]);
        out[v].center = poses[reference_].center + radius * moved.normalized();
      } else {
        out[v].center = poses[v].center + r.transpose() * delta.segment<3>(center_col_[v]);
      }
      if (!freeze_rotations_) {
        out[v].rotation = exp_so3(delta.segment<3>(rotation_col_[v])) * r;
      }
    }
    return out;
  }

 private:
  // Two world-frame unit vectors orthogonal to `dir`, built in the camera frame
  // so the basis is unchanged by a rigid change of world coordinates.
  static Eigen::Matrix<double, 3, 2> tangent_basis(const Mat3& rotation, const Vec3& dir) {
    const Vec3 u = rotation * dir;
    Eigen::Index axis = 0;
    u.cwiseAbs().minCoeff(&axis);
    const Vec3 e1 = u.cross(Vec3::Unit(axis)).normalized();
    const Vec3 e2 = u.cross(e1);
    Eigen::Matrix<double, 3, 2> basis;
    basis.col(0) = rotation.transpose() * e1;
    basis.col(1) = rotation.transpose() * e2;
    return basis;
  }

  ViewId reference_;
  ViewId anchor_;
  bool freeze_rotations_;
  std::vector<std::ptrdiff_t> rotation_col_;
  std::vector<std::ptrdiff_t> center_col_;
  std::size_t num_parameters_ = 0;
};

namespace detail {

struct SlotView {
  ViewId view = 0;
  Eigen::Matrix<double, 2, 3> d_rotation = Eigen::Matrix<double, 2, 3>::Zero();
  Eigen::Matrix<double, 2, 3> d_center = Eigen::Matrix<double, 2, 3>::Zero();  // world frame
};

struct SlotLinearization {
  Eigen::Vector2d residual = Eigen::Vector2d::Zero();
  std::array<SlotView, 3> views;
  std::size_t view_count = 0;

  SlotView& view_entry(ViewId v) {
    for (std::size_t k = 0; k < view_count; ++k) {
      if (views[k].view == v) return views[k];
    }
    views[view_count].view = v;
    return views[view_count++];
  }
};

// Quantities shared by all residual slots of one track.
struct TrackState {
  bool degenerate = false;
  Vec3 ray_z, ray_e, w, u, delta, point;
  double den = 0.0;
  double depth = 0.0;
};

inline TrackState track_state(std::span<const CameraPose> poses, const Track& track,
                              const BaseViewPair& base, double theta_min) {
  TrackState s;
  const auto& pz = poses[base.left];
  const auto& pe = poses[base.right];
  s.ray_z = pz.rotation.transpose() * track.find(base.left)->point.homogeneous();
  s.ray_e = pe.rotation.transpose() * track.find(base.right)->point.homogeneous();
  s.w = s.ray_z.cross(s.ray_e);
  s.den = s.w.squaredNorm();
  if (!(std::sqrt(s.den) > std::max(theta_min, kDepthThetaFloor))) {
    s.degenerate = true;
    return s;
  }
  s.u = s.w.cross(s.ray_e);
  s.delta = pz.center - pe.center;
  s.depth = s.u.dot(s.delta) / s.den;
  s.point = pz.center + s.depth * s.ray_z;
  return s;
}

inline Eigen::Vector2d slot_residual(const CameraPose& pose_i, const TrackState& s,
                                     const NormalizedImagePoint& observed) {
  const Vec3 y = pose_i.rotation * (s.point - pose_i.center);
  return {y.x() / y.z() - observed.x, y.y() / y.z() - observed.y};
}

inline SlotLinearization linearize_slot(std::span<const CameraPose> poses, const Track& track,
                                        const BaseViewPair& base, const TrackState& s,
                                        const TrackObservation& obs, bool with_rotations) {
  SlotLinearization lin;
  const CameraPose& pi = poses[obs.view_id];
  const Vec3 y = pi.rotation * (s.point - pi.center);
  const double iz = 1.0 / y.z();
  lin.residual = {y.x() * iz - obs.point.x, y.y() * iz - obs.point.y};

  Eigen::Matrix<double, 2, 3> dproj;
  dproj << iz, 0.0, -y.x() * iz * iz,  //
      0.0, iz, -y.y() * iz * iz;
  const Eigen::Matrix<double, 2, 3> j_point = dproj * pi.rotation;

  // Depth derivatives with respect to the two world bearings and centers.
  const Eigen::RowVector3d dd_dc = s.u.transpose() / s.den;
  const Mat3 skew_e = skew(s.ray_e);
  const Mat3 skew_z = skew(s.ray_z);
  const Mat3 du_dz = skew_e * skew_e;
  const Mat3 du_de = -skew_e * skew_z + skew(s.w);
  const Eigen::RowVector3d dd_drz =
      (s.delta.transpose() * du_dz) / s.den -
      s.depth * (2.0 * s.w.transpose() * (-skew_e)) / s.den;
  const Eigen::RowVector3d dd_dre =
      (s.delta.transpose() * du_de) / s.den - s.depth * (2.0 * s.w.transpose() * skew_z) / s.den;

  auto& vz = lin.view_entry(base.left);
  vz.d_center += j_point * (Mat3::Identity() + s.ray_z * dd_dc);
  auto& ve = lin.view_entry(base.right);
  ve.d_center += j_point * (-s.ray_z * dd_dc);
  auto& vi = lin.view_entry(obs.view_id);
  vi.d_center += -dproj * pi.rotation;

  if (with_rotations) {
    const Vec3 xz = track.find(base.left)->point.homogeneous();
    const Vec3 xe = track.find(base.right)->point.homogeneous();
    // r_v = R_v^T X_v with R_v <- exp(w) R_v gives dr_v/dw = R_v^T [X_v]x.
    const Mat3 drz = poses[base.left].rotation.transpose() * skew(xz);
    const Mat3 dre = poses[base.right].rotation.transpose() * skew(xe);
    const Mat3 dp_drz = s.depth * Mat3::Identity() + s.ray_z * dd_drz;
    const Mat3 dp_dre = s.ray_z * dd_dre;
    lin.view_entry(base.left).d_rotation += j_point * dp_drz * drz;
    lin.view_entry(base.right).d_rotation += j_point * dp_dre * dre;
    lin.view_entry(obs.view_id).d_rotation += dproj * (-skew(y));
  }
  return lin;
}

// Compact row pair of the Jacobian: parameter columns and their values.
struct SlotRows {
  std::array<Eigen::Index, 18> cols{};
  Eigen::Matrix<double, 2, 18> values = Eigen::Matrix<double, 2, 18>::Zero();
  int count = 0;
};

inline SlotRows map_to_parameters(const SlotLinearization& lin,
                                  std::span<const CameraPose> poses,
                                  const PoseParameterization& param) {
  SlotRows rows;
  for (std::size_t k = 0; k < lin.view_count; ++k) {
    const auto& sv = lin.views[k];
    if (sv.view == param.reference()) continue;
    if (!param.rotations_frozen()) {
      const auto c0 = param.rotation_column(sv.view);
      for (int c = 0; c < 3; ++c) {
        rows.cols[rows.count] = c0 + c;
        rows.values.col(rows.count++) = sv.d_rotation.col(c);
      }
    }
    const auto basis = param.center_basis(poses, sv.view);
    const Eigen::Matrix<double, 2, Eigen::Dynamic> dc = sv.d_center * basis;
    const auto c0 = param.center_column(sv.view);
    for (Eigen::Index c = 0; c < dc.cols(); ++c) {
      rows.cols[rows.count] = c0 + c;
      rows.values.col(rows.count++) = dc.col(c);
    }
  }
  return rows;
}

// Slot start offsets so tracks can be evaluated independently.
inline std::vector<std::size_t> slot_offsets(const PaProblem& problem) {
  std::vector<std::size_t> offsets(problem.tracks.size() + 1, 0);
  for (std::size_t k = 0; k < problem.tracks.size(); ++k) {
    offsets[k + 1] = offsets[k] + 2 * (problem.tracks[k].size() - 1);
  }
  return offsets;
}

}  // namespace detail

struct ResidualEvaluation {
  Eigen::VectorXd values;
  std::size_t dropped_tracks = 0;  // base parallax collapsed; rows left at zero

  double cost() const { return values.squaredNorm(); }
};

/// Residual vector laid out per track (in problem order), per observing view
/// i != zeta (in track order), as (x, y) pairs.
inline ResidualEvaluation pa_residuals(std::span<const CameraPose> poses,
                                       const PaProblem& problem, double theta_min = 0.0) {
  ResidualEvaluation eval;
  eval.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(problem.residual_count()));
  Eigen::Index row = 0;
  for (std::size_t k = 0; k < problem.tracks.size(); ++k) {
    const Track& track = problem.tracks[k];
    const BaseViewPair& base = problem.bases[k];
    const auto s = detail::track_state(poses, track, base, theta_min);
    for (const auto& obs : track.observations) {
      if (obs.view_id == base.left) continue;
      if (!s.degenerate) {
        eval.values.segment<2>(row) = detail::slot_residual(poses[obs.view_id], s, obs.point);
      }
      row += 2;
    }
    if (s.degenerate) ++eval.dropped_tracks;
  }
  return eval;
}

/// Analytic Jacobian of pa_residuals with respect to `param` at `poses`.
inline Eigen::SparseMatrix<double> pa_jacobian(std::span<const CameraPose> poses,
                                               const PaProblem& problem,
                                               const PoseParameterization& param,
                                               double theta_min = 0.0) {
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::Index row = 0;
  for (std::size_t k = 0; k < problem.tracks.size(); ++k) {
    const Track& track = problem.tracks[k];
    const BaseViewPair& base = problem.bases[k];
    const auto s = detail::track_state(poses, track, base, theta_min);
    for (const auto& obs : track.observations) {
      if (obs.view_id == base.left) continue;
      if (!s.degenerate) {
        const auto lin = detail::linearize_slot(poses, track, base, s, obs,
                                                !param.rotations_frozen());
        const auto rows = detail::map_to_parameters(lin, poses, param);
        for (int c = 0; c < rows.count; ++c) {
          triplets.emplace_back(row, rows.cols[c], rows.values(0, c));
          triplets.emplace_back(row + 1, rows.cols[c], rows.values(1, c));
        }
      }
      row += 2;
    }
  }
  Eigen::SparseMatrix<double> j(static_cast<Eigen::Index>(problem.residual_count()),
                                static_cast<Eigen::Index>(param.num_parameters()));
  j.setFromTriplets(triplets.begin(), triplets.end());
  return j;
}

struct PaConfig {
  int max_iter = 100;
  double gradient_tol = 1e-10;
  double step_tol = 1e-12;
  double lm_lambda0 = 1e-3;
  double lm_up = 10.0;
  double lm_down = 10.0;
  bool freeze_rotations = false;
  double theta_min = 0.0;
  /// Rejected trial steps allowed within one iteration before giving up.
  int max_rejections = 40;
  unsigned threads = configured_threads();
};

enum class Termination { gradient, step, max_iter };

constexpr std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::gradient: return "gradient";
    case Termination::step: return "step";
    case Termination::max_iter: return "max_iter";
  }
  return "unknown";
}

struct OptimizeReport {
  int iterations = 0;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  std::vector<double> cost_history;
  bool converged = false;
  Termination termination = Termination::max_iter;
  std::size_t dropped_tracks = 0;
  std::size_t num_parameters = 0;
  ViewId anchor_view = 0;
};

namespace detail {

struct NormalEquations {
  Eigen::MatrixXd jtj;
  Eigen::VectorXd gradient;
  double cost = 0.0;
  std::size_t dropped = 0;
};

inline NormalEquations linearize(std::span<const CameraPose> poses, const PaProblem& problem,
                                 const PoseParameterization& param, const PaConfig& config) {
  const auto np = static_cast<Eigen::Index>(param.num_parameters());
  const std::size_t chunks = chunk_count(problem.tracks.size(), config.threads);
  std::vector<NormalEquations> partial(chunks);
  parallel_chunks(problem.tracks.size(), config.threads,
                  [&](std::size_t w, std::size_t b, std::size_t e) {
    NormalEquations ne;
    ne.jtj = Eigen::MatrixXd::Zero(np, np);
    ne.gradient = Eigen::VectorXd::Zero(np);
    for (std::size_t k = b; k < e; ++k) {
      const Track& track = problem.tracks[k];
      const BaseViewPair& base = problem.bases[k];
      const auto s = track_state(poses, track, base, config.theta_min);
      if (s.degenerate) {
        ++ne.dropped;
        continue;
      }
      for (const auto& obs : track.observations) {
        if (obs.view_id == base.left) continue;
        const auto lin = linearize_slot(poses, track, base, s, obs, !param.rotations_frozen());
        const auto rows = map_to_parameters(lin, poses, param);
        ne.cost += lin.residual.squaredNorm();
        for (int p = 0; p < rows.count; ++p) {
          ne.gradient(rows.cols[p]) += rows.values.col(p).dot(lin.residual);
          for (int q = 0; q < rows.count; ++q) {
            ne.jtj(rows.cols[p], rows.cols[q]) += rows.values.col(p).dot(rows.values.col(q));
          }
        }
      }
    }
    partial[w] = std::move(ne);
  });
  NormalEquations total;
  total.jtj = Eigen::MatrixXd::Zero(np, np);
  total.gradient = Eigen::VectorXd::Zero(np);
  for (auto& p : partial) {
    if (p.jtj.size() == 0) continue;
    total.jtj += p.jtj;
    total.gradient += p.gradient;
    total.cost += p.cost;
    total.dropped += p.dropped;
  }
  return total;
}

inline double evaluate_cost(std::span<const CameraPose> poses, const PaProblem& problem,
                            const PaConfig& config) {
  const std::size_t chunks = chunk_count(problem.tracks.size(), config.threads);
  std::vector<double> partial(chunks, 0.0);
  parallel_chunks(problem.tracks.size(), config.threads,
                  [&](std::size_t w, std::size_t b, std::size_t e) {
    double cost = 0.0;
    for (std::size_t k = b; k < e; ++k) {
      const Track& track = problem.tracks[k];
      const BaseViewPair& base = problem.bases[k];
      const auto s = track_state(poses, track, base, config.theta_min);
      if (s.degenerate) continue;
      for (const auto& obs : track.observations) {
        if (obs.view_id == base.left) continue;
        cost += slot_residual(poses[obs.view_id], s, obs.point).squaredNorm();
      }
    }
    partial[w] = cost;
  });
  double total = 0.0;
  for (double c : partial) total += c;
  return total;
}

}  // namespace detail

struct PaResult {
  std::vector<CameraPose> poses;
  OptimizeReport report;
};

/// Levenberg-Marquardt with Marquardt (diagonal) damping. The reference pose
/// is held fixed and the anchor view keeps its distance to the reference.
inline PaResult pa_optimize(std::span<const CameraPose> initial_poses, const PaProblem& problem,
                            ViewId reference_view, const PaConfig& config = {}) {
  const ViewId anchor =
      PoseParameterization::choose_anchor(initial_poses, problem.tracks, reference_view);
  const PoseParameterization param(initial_poses.size(), reference_view, anchor,
                                   config.freeze_rotations);
  PaResult result;
  result.poses.assign(initial_poses.begin(), initial_poses.end());
  auto& report = result.report;
  report.num_parameters = param.num_parameters();
  report.anchor_view = anchor;

  double cost = detail::evaluate_cost(result.poses, problem, config);
  if (!std::isfinite(cost)) {
    throw Error(ErrorCode::DivergedNumerically, "initial cost is not finite");
  }
  report.initial_cost = cost;
  report.cost_history.push_back(cost);
  double lambda = config.lm_lambda0;
  report.termination = Termination::max_iter;

  while (report.iterations < config.max_iter) {
    const auto ne = detail::linearize(result.poses, problem, param, config);
    report.dropped_tracks = ne.dropped;
    if (!std::isfinite(ne.cost) || !ne.jtj.allFinite()) {
      throw Error(ErrorCode::DivergedNumerically, "non-finite linearization");
    }
    if (ne.gradient.lpNorm<Eigen::Infinity>() <= config.gradient_tol) {
      report.termination = Termination::gradient;
      report.converged = true;
      break;
    }
    ++report.iterations;

    double center_norm = 0.0;
    for (const auto& p : result.poses) center_norm += p.center.squaredNorm();
    center_norm = std::sqrt(center_norm);
    const Eigen::VectorXd diag = ne.jtj.diagonal();
    const double diag_floor = 1e-12 * std::max(diag.maxCoeff(), 1e-300);

    bool accepted = false;
    for (int attempt = 0; attempt <= config.max_rejections; ++attempt) {
      Eigen::MatrixXd damped = ne.jtj;
      for (Eigen::Index k = 0; k < damped.rows(); ++k) {
        damped(k, k) += lambda * std::max(diag(k), diag_floor);
      }
      const Eigen::VectorXd step = damped.ldlt().solve(-ne.gradient);
      if (step.norm() <= config.step_tol * (center_norm + config.step_tol)) break;
      auto candidate = param.apply(result.poses, step);
      const double next = detail::evaluate_cost(candidate, problem, config);
      if (std::isfinite(next) && next < cost) {
        result.poses = std::move(candidate);
        cost = next;
        lambda = std::max(lambda / config.lm_down, 1e-16);
        accepted = true;
        break;
      }
      lambda *= config.lm_up;
    }
    report.cost_history.push_back(cost);
    // No acceptable step at any damping: the step has shrunk below tolerance.
    if (!accepted) {
      report.termination = Termination::step;
      report.converged = true;
      break;
    }
  }
  report.final_cost = cost;
  return result;
}

// ---------------------------------------------------------------------------
// Reprojection error with explicit 3D points, shared by every method so that
// their scores are comparable.

struct ReprojectionStats {
  double rms = 0.0;                     // sqrt(mean over observations of |V|^2)
  std::size_t used = 0;                 // observations contributing
  std::size_t cheirality_violations = 0;
  std::size_t missing_points = 0;       // observations whose track has no point
};

inline ReprojectionStats reprojection_rms(std::span<const CameraPose> poses,
                                          const std::map<TrackId, Vec3>& points_w,
                                          std::span<const Observation> observations) {
  ReprojectionStats stats;
  double sum = 0.0;
  for (const auto& obs : observations) {
    auto it = points_w.find(obs.track_id);
    if (it == points_w.end()) {
      ++stats.missing_points;
      continue;
    }
    const Vec3 y = poses[obs.view_id].to_camera(it->second);
    if (!(y.z() > 0.0)) {
      ++stats.cheirality_violations;
      continue;
    }
    const double dx = y.x() / y.z() - obs.point.x;
    const double dy = y.y() / y.z() - obs.point.y;
    sum += dx * dx + dy * dy;
    ++stats.used;
  }
  stats.rms = stats.used == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(stats.used));
  return stats;
}

}  // namespace poseonly
