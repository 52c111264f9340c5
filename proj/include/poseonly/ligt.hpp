#pragma once

// Linear global translation (LiGT) solver.
//
// For every track with base views (zeta, eta) and every other observing view
// i, the global translations satisfy
//
//   B t_eta + C t_i + D t_zeta = 0,
//   B = [X_i]x R_zi X_z a_ze^T R_eta,  C = theta_ze^2 [X_i]x R_i,  D = -(B + C).
//
// Stacking all blocks gives L t = 0 with rank 3n - 4; fixing the reference
// view's translation to zero leaves a one-dimensional null space whose sign is
// chosen by the cheirality vote a_ze^T t_ze >= 0.

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "poseonly/geometry.hpp"
#include "poseonly/parallel.hpp"
#include "poseonly/types.hpp"

namespace poseonly {

enum class NullSpaceBackend { automatic, dense_svd, normal_matrix };

/// Image noise alone keeps sigma_2 / sigma_1 near the inverse relative
/// translation error (roughly 15 to 50 at 1e-3 noise); a two-dimensional
/// null space gives ratios of order one.
inline constexpr double kDefaultRankGapRatio = 5.0;

struct LigtOptions {
  /// Parallax at or below which pairs and rows are treated as degenerate.
  double theta_min = 0.0;
  /// Divide every row block by theta_ze^2 (off by default).
  bool normalize_rows = false;
  NullSpaceBackend backend = NullSpaceBackend::automatic;
  /// The dense SVD path is used up to this many reduced columns...
  std::size_t dense_column_limit = 1500;
  /// ...and while the dense reduced matrix stays below this many entries.
  std::size_t dense_entry_limit = std::size_t{1} << 24;
  /// The normal-matrix path factors a sparse LDL^T above this many columns.
  std::size_t sparse_normal_threshold = 3000;
  /// Solutions with sigma_2 / sigma_1 not above this are rejected.
  double rank_gap_ratio = kDefaultRankGapRatio;
  std::size_t spectrum_size = 4;
  unsigned threads = configured_threads();
};

struct BaseViewPair {
  ViewId left = 0;   // zeta
  ViewId right = 0;  // eta
  double theta = 0.0;
};

struct LigtRowBlock {
  TrackId track_id = 0;
  ViewId row_view = 0;  // i
  ViewId left = 0;      // zeta, carries D
  ViewId right = 0;     // eta, carries B
  Mat3 B = Mat3::Zero();
  Mat3 C = Mat3::Zero();
  Mat3 D = Mat3::Zero();
  bool degenerate = false;
};

/// Base pair of a track plus a_ze expressed in the world frame (R_eta^T a_ze),
/// so that a_ze^T t_ze = a_world^T (t_zeta - t_eta).
struct TrackBase {
  TrackId track_id = 0;
  BaseViewPair base;
  Vec3 a_world = Vec3::Zero();
};

struct LigtSystem {
  std::size_t n_views = 0;
  ViewId reference_view = 0;
  std::vector<LigtRowBlock> rows;  // sorted by (track_id, row_view)
  std::vector<TrackBase> bases;    // sorted by track_id
  std::vector<TrackId> excluded_tracks;

  std::size_t reduced_columns() const { return n_views == 0 ? 0 : 3 * (n_views - 1); }
  std::size_t row_count() const { return 3 * rows.size(); }

  /// First column of `view` in the reduced system, or -1 for the reference.
  std::ptrdiff_t column_of(ViewId view) const {
    if (view == reference_view) return -1;
    return 3 * static_cast<std::ptrdiff_t>(view < reference_view ? view : view - 1);
  }

  Eigen::MatrixXd dense_matrix(bool reduced = true) const {
    const auto cols = static_cast<Eigen::Index>(reduced ? reduced_columns() : 3 * n_views);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(row_count()), cols);
    auto col = [&](ViewId v) -> std::ptrdiff_t {
      return reduced ? column_of(v) : 3 * static_cast<std::ptrdiff_t>(v);
    };
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto& blk = rows[k];
      const auto r = static_cast<Eigen::Index>(3 * k);
      if (auto c = col(blk.right); c >= 0) m.block<3, 3>(r, c) += blk.B;
      if (auto c = col(blk.row_view); c >= 0) m.block<3, 3>(r, c) += blk.C;
      if (auto c = col(blk.left); c >= 0) m.block<3, 3>(r, c) += blk.D;
    }
    return m;
  }
};

struct SignVotes {
  std::size_t positive = 0;
  std::size_t negative = 0;
};

/// sigma_2 / sigma_1, taken as 1 when both vanish.
inline double gap_ratio(double sigma_1, double sigma_2) {
  return sigma_1 == 0.0 && sigma_2 == 0.0 ? 1.0 : sigma_2 / sigma_1;
}

struct TranslationSolution {
  std::vector<Vec3> translations;
  SignVotes sign_votes;
  std::vector<double> spectrum;  // smallest singular values, ascending
  double scale_norm = 1.0;
  NullSpaceBackend backend = NullSpaceBackend::dense_svd;

  double singular_gap() const {
    if (spectrum.size() < 2) return std::numeric_limits<double>::infinity();
    return gap_ratio(spectrum[0], spectrum[1]);
  }
};

/// Picks the observation pair with maximal parallax; ties go to the
/// lexicographically smallest (view_i, view_j). Throws AllPairsDegenerate when
/// the best theta does not exceed max(theta_min, 1e-12).
inline BaseViewPair select_base_views(const Track& track,
                                      std::span<const RotationMatrix> rotations,
                                      double theta_min = 0.0) {
  if (track.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "track needs at least two observations");
  }
  std::vector<Vec3> rays;
  rays.reserve(track.size());
  for (const auto& o : track.observations) {
    rays.push_back(rotations[o.view_id].transpose() * o.point.homogeneous());
  }
  BaseViewPair best;
  best.theta = -1.0;
  for (std::size_t a = 0; a < rays.size(); ++a) {
    for (std::size_t b = a + 1; b < rays.size(); ++b) {
      const double theta = world_theta(rays[a], rays[b]);
      if (theta > best.theta) {
        best = {track.observations[a].view_id, track.observations[b].view_id, theta};
      }
    }
  }
  // The depth floor also applies here: rounding leaves theta near 1e-16 for
  // pairs that are exactly pure rotations.
  if (!(best.theta > std::max(theta_min, kDepthThetaFloor))) {
    throw Error(ErrorCode::AllPairsDegenerate,
                "track " + std::to_string(track.track_id) + " has no parallax");
  }
  return best;
}

namespace detail {

inline Vec3 base_a_world(const Track& track, const BaseViewPair& base,
                         std::span<const RotationMatrix> rotations) {
  const auto* oz = track.find(base.left);
  const auto* oe = track.find(base.right);
  const Mat3& rz = rotations[base.left];
  const Mat3& re = rotations[base.right];
  const Vec3 rot_ray = re * (rz.transpose() * oz->point.homogeneous());
  const Vec3 xe = oe->point.homogeneous();
  const Vec3 a = rot_ray.cross(xe).cross(xe);
  return re.transpose() * a;
}

}  // namespace detail

/// One row block per observing view i != zeta, in track order.
inline std::vector<LigtRowBlock> build_row_blocks(const Track& track,
                                                  const BaseViewPair& base,
                                                  std::span<const RotationMatrix> rotations,
                                                  double theta_min = 0.0,
                                                  bool normalize_rows = false) {
  if (!(base.theta > theta_min)) {
    throw Error(ErrorCode::AllPairsDegenerate, "base pair has no parallax");
  }
  const auto* oz = track.find(base.left);
  if (oz == nullptr || track.find(base.right) == nullptr) {
    throw Error(ErrorCode::InvalidArgument, "base views are not observed by the track");
  }
  const Vec3 a_world = detail::base_a_world(track, base, rotations);
  const Vec3 ray_z_world = rotations[base.left].transpose() * oz->point.homogeneous();
  const double theta2 = base.theta * base.theta;
  const double scale = normalize_rows ? 1.0 / theta2 : 1.0;

  std::vector<LigtRowBlock> blocks;
  blocks.reserve(track.size() - 1);
  for (const auto& obs : track.observations) {
    if (obs.view_id == base.left) continue;
    LigtRowBlock blk;
    blk.track_id = track.track_id;
    blk.row_view = obs.view_id;
    blk.left = base.left;
    blk.right = base.right;
    const Mat3& ri = rotations[obs.view_id];
    const Vec3 xi = obs.point.homogeneous();
    const Vec3 s = xi.cross(ri * ray_z_world);  // [X_i]x R_zi X_z
    if (!(s.norm() > theta_min)) {
      blk.degenerate = true;
      blocks.push_back(blk);
      continue;
    }
    blk.B = scale * s * a_world.transpose();
    for (int c = 0; c < 3; ++c) blk.C.col(c) = (scale * theta2) * xi.cross(ri.col(c));
    blk.D = -(blk.B + blk.C);
    blocks.push_back(blk);
  }
  return blocks;
}

/// Builds L for all tracks. Tracks without parallax are excluded and listed.
/// Throws InsufficientParallax when fewer than two tracks remain.
inline LigtSystem assemble_system(std::span<const Track> tracks,
                                  std::span<const RotationMatrix> rotations,
                                  ViewId reference_view, const LigtOptions& options = {}) {
  const std::size_t n_views = rotations.size();
  if (n_views < 2) throw Error(ErrorCode::InvalidArgument, "need at least two views");
  if (reference_view >= n_views) {
    throw Error(ErrorCode::InvalidArgument, "reference view out of range");
  }
  for (const auto& t : tracks) {
    for (const auto& o : t.observations) {
      if (o.view_id >= n_views) {
        throw Error(ErrorCode::InvalidArgument,
                    "track " + std::to_string(t.track_id) + " references unknown view");
      }
    }
  }

  std::vector<std::size_t> order(tracks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return tracks[a].track_id < tracks[b].track_id;
  });

  struct PerTrack {
    std::optional<TrackBase> base;
    std::vector<LigtRowBlock> blocks;
  };
  std::vector<PerTrack> per_track(order.size());
  parallel_chunks(order.size(), options.threads, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const Track& track = tracks[order[k]];
      try {
        const BaseViewPair base = select_base_views(track, rotations, options.theta_min);
        per_track[k].base =
            TrackBase{track.track_id, base, detail::base_a_world(track, base, rotations)};
        per_track[k].blocks = build_row_blocks(track, base, rotations, options.theta_min,
                                               options.normalize_rows);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::AllPairsDegenerate) throw;
      }
    }
  });

  LigtSystem system;
  system.n_views = n_views;
  system.reference_view = reference_view;
  std::size_t total = 0;
  for (const auto& pt : per_track) total += pt.blocks.size();
  system.rows.reserve(total);
  for (std::size_t k = 0; k < per_track.size(); ++k) {
    auto& pt = per_track[k];
    if (!pt.base) {
      system.excluded_tracks.push_back(tracks[order[k]].track_id);
      continue;
    }
    system.bases.push_back(*pt.base);
    for (auto& blk : pt.blocks) {
      if (!blk.degenerate) system.rows.push_back(blk);
    }
  }
  if (system.bases.size() < 2) {
    throw Error(ErrorCode::InsufficientParallax,
                std::to_string(system.bases.size()) +
                    " track(s) with nonzero parallax; at least 2 are required");
  }
  return system;
}

namespace detail {

struct NullSpace {
  Eigen::VectorXd vector;       // unit null vector of the reduced system
  std::vector<double> smallest; // ascending singular values
};

inline NullSpace dense_null_space(const Eigen::MatrixXd& m, std::size_t k) {
  Eigen::JacobiSVD<Eigen::MatrixXd, Eigen::ColPivHouseholderQRPreconditioner> svd(
      m, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const Eigen::Index cols = m.cols();
  NullSpace out;
  out.vector = svd.matrixV().col(cols - 1);
  // Rows < cols leaves extra exact zeros that JacobiSVD does not report.
  std::vector<double> all(static_cast<std::size_t>(cols), 0.0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) all[static_cast<std::size_t>(i)] = sv(i);
  std::sort(all.begin(), all.end());
  all.resize(std::min(k, all.size()));
  out.smallest = std::move(all);
  return out;
}

// Accumulates L^T L of the reduced system. The block row of a row block is
// [D at zeta | C at i | B at eta], with coincident views merged.
template <typename Emit>
inline void for_each_reduced_block_row(const LigtSystem& system, const LigtRowBlock& blk,
                                       Emit&& emit) {
  std::array<std::pair<std::ptrdiff_t, Mat3>, 3> parts{};
  std::size_t count = 0;
  auto add = [&](ViewId v, const Mat3& m) {
    const auto c = system.column_of(v);
    if (c < 0) return;
    for (std::size_t p = 0; p < count; ++p) {
      if (parts[p].first == c) {
        parts[p].second += m;
        return;
      }
    }
    parts[count++] = {c, m};
  };
  add(blk.left, blk.D);
  add(blk.row_view, blk.C);
  add(blk.right, blk.B);
  emit(parts, count);
}

inline Eigen::MatrixXd dense_normal_matrix(const LigtSystem& system, unsigned threads) {
  const auto n = static_cast<Eigen::Index>(system.reduced_columns());
  const std::size_t chunks = chunk_count(system.rows.size(), threads);
  std::vector<Eigen::MatrixXd> partial(chunks);
  parallel_chunks(system.rows.size(), threads, [&](std::size_t w, std::size_t b, std::size_t e) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = b; k < e; ++k) {
      for_each_reduced_block_row(system, system.rows[k], [&](const auto& parts, std::size_t cnt) {
        for (std::size_t p = 0; p < cnt; ++p) {
          for (std::size_t q = 0; q < cnt; ++q) {
            acc.block<3, 3>(parts[p].first, parts[q].first).noalias() +=
                parts[p].second.transpose() * parts[q].second;
          }
        }
      });
    }
    partial[w] = std::move(acc);
  });
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(n, n);
  for (auto& p : partial) {
    if (p.size() != 0) normal += p;
  }
  return normal;
}

inline Eigen::SparseMatrix<double> sparse_normal_matrix(const LigtSystem& system) {
  const auto n = static_cast<Eigen::Index>(system.reduced_columns());
  std::unordered_map<std::uint64_t, Mat3> blocks;
  for (const auto& blk : system.rows) {
    for_each_reduced_block_row(system, blk, [&](const auto& parts, std::size_t cnt) {
      for (std::size_t p = 0; p < cnt; ++p) {
        for (std::size_t q = 0; q < cnt; ++q) {
          const auto key = (static_cast<std::uint64_t>(parts[p].first) << 32) |
                           static_cast<std::uint64_t>(parts[q].first);
          auto [it, inserted] = blocks.try_emplace(key, Mat3::Zero());
          it->second.noalias() += parts[p].second.transpose() * parts[q].second;
        }
      }
    });
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(blocks.size() * 9);
  for (const auto& [key, m] : blocks) {
    const auto r0 = static_cast<Eigen::Index>(key >> 32);
    const auto c0 = static_cast<Eigen::Index>(key & 0xffffffffu);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) triplets.emplace_back(r0 + r, c0 + c, m(r, c));
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

// Smallest eigenpairs of a symmetric positive semi-definite matrix by
// shift-invert subspace iteration with Rayleigh-Ritz extraction.
template <typename Multiply, typename Solve>
inline NullSpace shift_invert_smallest(Eigen::Index n, std::size_t k, double trace,
                                       Multiply&& multiply, Solve&& solve) {
  const Eigen::Index want = std::max<Eigen::Index>(1, std::min<Eigen::Index>(k, n));
  const Eigen::Index block = std::min<Eigen::Index>(n, want + 2);
  std::mt19937_64 rng(0x5eedf00dULL);
  Eigen::MatrixXd x(n, block);
  for (Eigen::Index j = 0; j < block; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      x(i, j) = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;

  Eigen::VectorXd ritz = Eigen::VectorXd::Constant(block, std::numeric_limits<double>::max());
  const double tol = 1e-15 * std::max(trace, 1e-300);
  for (int iter = 0; iter < 500; ++iter) {
    const Eigen::MatrixXd y = solve(x);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, block);
    const Eigen::MatrixXd aq = multiply(q);
    Eigen::MatrixXd h = q.transpose() * aq;
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    x = q * eig.eigenvectors();
    const Eigen::VectorXd next = eig.eigenvalues();
    const double change = (next.head(want) - ritz.head(want)).cwiseAbs().maxCoeff();
    ritz = next;
    if (iter >= 2 && change <= tol) break;
  }
  NullSpace out;
  out.vector = x.col(0).normalized();
  for (Eigen::Index j = 0; j < want; ++j) {
    out.smallest.push_back(std::sqrt(std::max(ritz(j), 0.0)));
  }
  return out;
}

inline NullSpace normal_null_space(const LigtSystem& system, std::size_t k, unsigned threads,
                                   std::size_t sparse_threshold = 3000) {
  const auto n = static_cast<Eigen::Index>(system.reduced_columns());
  if (system.reduced_columns() <= sparse_threshold) {
    const Eigen::MatrixXd a = dense_normal_matrix(system, threads);
    const double trace = a.trace();
    double shift = 1e-10 * trace / static_cast<double>(n);
    Eigen::LLT<Eigen::MatrixXd> llt;
    for (int attempt = 0; attempt < 20; ++attempt) {
      llt.compute(a + shift * Eigen::MatrixXd::Identity(n, n));
      if (llt.info() == Eigen::Success) break;
      shift *= 10.0;
    }
    return shift_invert_smallest(
        n, k, trace, [&](const Eigen::MatrixXd& v) -> Eigen::MatrixXd { return a * v; },
        [&](const Eigen::MatrixXd& v) -> Eigen::MatrixXd { return llt.solve(v); });
  }
  Eigen::SparseMatrix<double> a = sparse_normal_matrix(system);
  double trace = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) trace += a.coeff(i, i);
  double shift = 1e-10 * trace / static_cast<double>(n);
  Eigen::SparseMatrix<double> identity(n, n);
  identity.setIdentity();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  for (int attempt = 0; attempt < 20; ++attempt) {
    ldlt.compute(a + shift * identity);
    if (ldlt.info() == Eigen::Success) break;
    shift *= 10.0;
  }
  return shift_invert_smallest(
      n, k, trace, [&](const Eigen::MatrixXd& v) -> Eigen::MatrixXd { return a * v; },
      [&](const Eigen::MatrixXd& v) -> Eigen::MatrixXd { return ldlt.solve(v); });
}

inline NullSpaceBackend resolve_backend(const LigtSystem& system, const LigtOptions& options) {
  if (options.backend != NullSpaceBackend::automatic) return options.backend;
  const std::size_t cols = system.reduced_columns();
  const bool dense_ok = cols <= options.dense_column_limit &&
                        system.row_count() * cols <= options.dense_entry_limit;
  return dense_ok ? NullSpaceBackend::dense_svd : NullSpaceBackend::normal_matrix;
}

inline NullSpace reduced_null_space(const LigtSystem& system, const LigtOptions& options,
                                    std::size_t k, NullSpaceBackend backend) {
  if (backend == NullSpaceBackend::dense_svd) {
    return dense_null_space(system.dense_matrix(true), k);
  }
  return normal_null_space(system, k, options.threads, options.sparse_normal_threshold);
}

}  // namespace detail

/// Counts a_ze^T t_ze over the track bases and negates `translations` when
/// the negative votes win.
inline SignVotes orient_translations(const LigtSystem& system, std::vector<Vec3>& translations) {
  SignVotes votes;
  for (const auto& tb : system.bases) {
    const double s =
        tb.a_world.dot(translations[tb.base.left] - translations[tb.base.right]);
    if (s > 0.0) ++votes.positive;
    else if (s < 0.0) ++votes.negative;
  }
  if (votes.negative > votes.positive) {
    for (auto& t : translations) t = -t;
    std::swap(votes.positive, votes.negative);
  }
  return votes;
}

/// Re-inflates a reduced null vector, fixes its sign and normalizes it.
inline TranslationSolution finalize_null_vector(const LigtSystem& system,
                                                const Eigen::VectorXd& reduced) {
  TranslationSolution sol;
  sol.translations.assign(system.n_views, Vec3::Zero());
  for (ViewId v = 0; v < system.n_views; ++v) {
    const auto c = system.column_of(v);
    if (c >= 0) sol.translations[v] = reduced.segment<3>(c);
  }
  sol.sign_votes = orient_translations(system, sol.translations);
  sol.scale_norm = reduced.norm();
  if (sol.scale_norm > 0.0) {
    for (auto& t : sol.translations) t /= sol.scale_norm;
  }
  return sol;
}

/// Null vector of the reduced system with t_ref = 0, sign-voted and
/// unit-normalized. Throws RankDeficient when sigma_2 / sigma_1 does not
/// exceed options.rank_gap_ratio.
inline TranslationSolution solve_translations(const LigtSystem& system,
                                              const LigtOptions& options = {}) {
  const NullSpaceBackend backend = detail::resolve_backend(system, options);
  const std::size_t k = std::max<std::size_t>(options.spectrum_size, 2);
  detail::NullSpace ns = detail::reduced_null_space(system, options, k, backend);
  if (ns.smallest.size() >= 2 && !(ns.smallest[1] > options.rank_gap_ratio * ns.smallest[0])) {
    throw Error(ErrorCode::RankDeficient,
                "singular gap " + std::to_string(ns.smallest[1]) + " / " +
                    std::to_string(ns.smallest[0]) + " is ambiguous");
  }
  TranslationSolution sol = finalize_null_vector(system, ns.vector);
  ns.smallest.resize(std::min(ns.smallest.size(), options.spectrum_size));
  sol.spectrum = std::move(ns.smallest);
  sol.backend = backend;
  return sol;
}

enum class SpectrumColumns { reduced, full };

/// k smallest singular values of L (reduced: reference columns dropped), ascending.
inline std::vector<double> singular_spectrum(const LigtSystem& system, std::size_t k,
                                             SpectrumColumns columns = SpectrumColumns::reduced,
                                             const LigtOptions& options = {}) {
  if (columns == SpectrumColumns::full) {
    return detail::dense_null_space(system.dense_matrix(false), k).smallest;
  }
  if (k > system.reduced_columns()) {
    throw Error(ErrorCode::InvalidArgument, "spectrum size exceeds column count");
  }
  return detail::reduced_null_space(system, options, k, detail::resolve_backend(system, options))
      .smallest;
}

/// Poses from solved translations (camera centers) and the input rotations.
inline std::vector<CameraPose> poses_from_translations(std::span<const RotationMatrix> rotations,
                                                       std::span<const Vec3> translations) {
  std::vector<CameraPose> poses(rotations.size());
  for (std::size_t v = 0; v < rotations.size(); ++v) {
    poses[v].rotation = rotations[v];
    poses[v].center = translations[v];
  }
  return poses;
}

}  // namespace poseonly
