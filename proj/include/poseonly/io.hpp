#pragma once

// Text formats.
//
// Problem file (POSEONLY 1). One record per line, '#' starts a comment:
//
//   POSEONLY 1
//   <n_views> <n_tracks> <n_obs>
//   V <view> <qw> <qx> <qy> <qz>                    n_views lines, solver rotations
//   G <view> <cx> <cy> <cz> <qw> <qx> <qy> <qz>     optional, 0 or n_views lines
//   P <track> <x> <y> <z>                           optional, 0 or n_tracks lines
//   O <track> <view> <x> <y>                        n_obs lines
//   R <reference_view>
//
// Quaternions are scalar-first, world-to-camera, and must have unit norm
// within 1e-9. Track ids are 0 .. n_tracks-1. Numbers are written in the
// shortest form that reads back to the same double.
//
// Poses file (POSES 1):
//
//   POSES 1
//   <n_views> <reference_view>
//   C <view> <qw> <qx> <qy> <qz> <cx> <cy> <cz>     n_views lines
//   S <sigma_1> <sigma_2> ...                       optional solver spectrum

#include <Eigen/Geometry>

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "poseonly/reconstruct.hpp"
#include "poseonly/scene_sim.hpp"
#include "poseonly/types.hpp"

namespace poseonly {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline Eigen::Quaterniond quaternion_of(const RotationMatrix& r) {
  Eigen::Quaterniond q(r);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  return q;
}

namespace detail {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next non-empty, non-comment line split into tokens. False at end of input.
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream ss(line);
      tokens.clear();
      for (std::string tok; ss >> tok;) tokens.push_back(tok);
      if (!tokens.empty()) return true;
    }
    ++line_no_;
    eof_ = true;
    return false;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line_no_) + (eof_ ? " (end of file)" : "") + ": " + why);
  }

  double number(const std::string& tok) const {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      fail("bad number '" + tok + "'");
    }
    return v;
  }

  std::uint64_t integer(const std::string& tok) const {
    std::uint64_t v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      fail("bad integer '" + tok + "'");
    }
    return v;
  }

  void expect_size(const std::vector<std::string>& tokens, std::size_t n) const {
    if (tokens.size() != n) {
      fail("'" + tokens[0] + "' record needs " + std::to_string(n - 1) + " fields, got " +
           std::to_string(tokens.size() - 1));
    }
  }

  RotationMatrix rotation(const std::vector<std::string>& tokens, std::size_t first) const {
    const Eigen::Quaterniond q(number(tokens[first]), number(tokens[first + 1]),
                               number(tokens[first + 2]), number(tokens[first + 3]));
    const double norm = q.norm();
    if (!(std::abs(norm - 1.0) <= 1e-9)) {
      fail("quaternion norm " + format_double(norm) + " is not 1");
    }
    return q.toRotationMatrix();
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
  bool eof_ = false;
};

inline void write_quaternion(std::ostream& out, const RotationMatrix& r) {
  const auto q = quaternion_of(r);
  out << ' ' << format_double(q.w()) << ' ' << format_double(q.x()) << ' '
      << format_double(q.y()) << ' ' << format_double(q.z());
}

inline void write_vec(std::ostream& out, const Vec3& v) {
  out << ' ' << format_double(v.x()) << ' ' << format_double(v.y()) << ' '
      << format_double(v.z());
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  return out;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return in;
}

inline std::size_t count_tracks(std::span<const Observation> observations) {
  std::vector<TrackId> ids;
  ids.reserve(observations.size());
  for (const auto& o : observations) ids.push_back(o.track_id);
  std::sort(ids.begin(), ids.end());
  return static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
}

}  // namespace detail

inline void write_problem(std::ostream& out, const SceneProblem& problem) {
  const std::size_t n_tracks = std::max(detail::count_tracks(problem.observations),
                                        problem.gt_points.size());
  out << "POSEONLY 1\n";
  out << problem.n_views() << ' ' << n_tracks << ' ' << problem.observations.size() << '\n';
  for (std::size_t v = 0; v < problem.n_views(); ++v) {
    out << "V " << v;
    detail::write_quaternion(out, problem.rotations[v]);
    out << '\n';
  }
  for (std::size_t v = 0; v < problem.gt_poses.size(); ++v) {
    out << "G " << v;
    detail::write_vec(out, problem.gt_poses[v].center);
    detail::write_quaternion(out, problem.gt_poses[v].rotation);
    out << '\n';
  }
  for (std::size_t t = 0; t < problem.gt_points.size(); ++t) {
    out << "P " << t;
    detail::write_vec(out, problem.gt_points[t]);
    out << '\n';
  }
  for (const auto& o : problem.observations) {
    out << "O " << o.track_id << ' ' << o.view_id << ' ' << format_double(o.point.x) << ' '
        << format_double(o.point.y) << '\n';
  }
  out << "R " << problem.reference_view << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed");
}

inline void write_problem(const std::string& path, const SceneProblem& problem) {
  auto out = detail::open_out(path);
  write_problem(out, problem);
}

inline SceneProblem read_problem(std::istream& in) {
  detail::LineReader reader(in);
  std::vector<std::string> tok;
  if (!reader.next(tok)) reader.fail("missing POSEONLY header");
  if (tok[0] != "POSEONLY" || tok.size() != 2) reader.fail("expected 'POSEONLY <version>'");
  if (tok[1] != "1") {
    throw Error(ErrorCode::VersionUnsupported, "POSEONLY version " + tok[1] + " is not supported");
  }
  if (!reader.next(tok)) reader.fail("missing counts line");
  if (tok.size() != 3) reader.fail("counts line needs n_views n_tracks n_obs");
  const std::size_t n_views = reader.integer(tok[0]);
  const std::size_t n_tracks = reader.integer(tok[1]);
  const std::size_t n_obs = reader.integer(tok[2]);
  if (n_views < 2) reader.fail("need at least two views");

  SceneProblem problem;
  std::vector<std::optional<RotationMatrix>> rotations(n_views);
  std::vector<std::optional<CameraPose>> gt(n_views);
  std::vector<std::optional<Vec3>> points(n_tracks);
  std::size_t n_v = 0, n_g = 0, n_p = 0;
  bool have_ref = false;
  auto view_index = [&](const std::string& s) {
    const auto v = reader.integer(s);
    if (v >= n_views) reader.fail("view id " + s + " out of range");
    return static_cast<ViewId>(v);
  };
  auto track_index = [&](const std::string& s) {
    const auto t = reader.integer(s);
    if (t >= n_tracks) reader.fail("track id " + s + " out of range");
    return static_cast<TrackId>(t);
  };

  while (!have_ref) {
    if (!reader.next(tok)) {
      if (n_v < n_views) reader.fail("expected " + std::to_string(n_views) + " V records");
      if (problem.observations.size() < n_obs) {
        reader.fail("expected " + std::to_string(n_obs) + " O records, found " +
                    std::to_string(problem.observations.size()));
      }
      reader.fail("missing R record");
    }
    const std::string& kind = tok[0];
    if (kind == "V") {
      reader.expect_size(tok, 6);
      const ViewId v = view_index(tok[1]);
      if (rotations[v]) reader.fail("duplicate V record for view " + tok[1]);
      rotations[v] = reader.rotation(tok, 2);
      ++n_v;
    } else if (kind == "G") {
      reader.expect_size(tok, 9);
      const ViewId v = view_index(tok[1]);
      if (gt[v]) reader.fail("duplicate G record for view " + tok[1]);
      CameraPose pose;
      pose.center = Vec3(reader.number(tok[2]), reader.number(tok[3]), reader.number(tok[4]));
      pose.rotation = reader.rotation(tok, 5);
      gt[v] = pose;
      ++n_g;
    } else if (kind == "P") {
      reader.expect_size(tok, 5);
      const TrackId t = track_index(tok[1]);
      if (points[t]) reader.fail("duplicate P record for track " + tok[1]);
      points[t] = Vec3(reader.number(tok[2]), reader.number(tok[3]), reader.number(tok[4]));
      ++n_p;
    } else if (kind == "O") {
      reader.expect_size(tok, 5);
      if (problem.observations.size() == n_obs) reader.fail("more O records than declared");
      Observation o;
      o.track_id = track_index(tok[1]);
      o.view_id = view_index(tok[2]);
      o.point = {reader.number(tok[3]), reader.number(tok[4])};
      problem.observations.push_back(o);
    } else if (kind == "R") {
      reader.expect_size(tok, 2);
      if (n_v != n_views) reader.fail("R record before all V records");
      if (problem.observations.size() != n_obs) {
        reader.fail("expected " + std::to_string(n_obs) + " O records, found " +
                    std::to_string(problem.observations.size()));
      }
      if (n_g != 0 && n_g != n_views) reader.fail("G records must cover every view or none");
      if (n_p != 0 && n_p != n_tracks) reader.fail("P records must cover every track or none");
      problem.reference_view = view_index(tok[1]);
      have_ref = true;
    } else {
      reader.fail("unknown record '" + kind + "'");
    }
  }
  if (reader.next(tok)) reader.fail("unexpected content after R record");
  if (detail::count_tracks(problem.observations) != n_tracks && n_p == 0) {
    throw Error(ErrorCode::ParseError, "observations reference " +
                                           std::to_string(detail::count_tracks(problem.observations)) +
                                           " tracks, header declares " + std::to_string(n_tracks));
  }

  for (std::size_t v = 0; v < n_views; ++v) problem.rotations.push_back(*rotations[v]);
  if (n_g == n_views) {
    for (std::size_t v = 0; v < n_views; ++v) problem.gt_poses.push_back(*gt[v]);
  }
  if (n_p == n_tracks && n_tracks > 0) {
    for (std::size_t t = 0; t < n_tracks; ++t) problem.gt_points.push_back(*points[t]);
  }
  return problem;
}

inline SceneProblem read_problem(const std::string& path) {
  auto in = detail::open_in(path);
  return read_problem(in);
}

struct PoseFile {
  std::vector<CameraPose> poses;
  ViewId reference_view = 0;
  std::vector<double> spectrum;  // empty when not recorded
};

inline void write_poses(std::ostream& out, const PoseFile& file) {
  out << "POSES 1\n" << file.poses.size() << ' ' << file.reference_view << '\n';
  for (std::size_t v = 0; v < file.poses.size(); ++v) {
    out << "C " << v;
    detail::write_quaternion(out, file.poses[v].rotation);
    detail::write_vec(out, file.poses[v].center);
    out << '\n';
  }
  if (!file.spectrum.empty()) {
    out << 'S';
    for (double s : file.spectrum) out << ' ' << format_double(s);
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed");
}

inline void write_poses(const std::string& path, const PoseFile& file) {
  auto out = detail::open_out(path);
  write_poses(out, file);
}

inline PoseFile read_poses(std::istream& in) {
  detail::LineReader reader(in);
  std::vector<std::string> tok;
  if (!reader.next(tok)) reader.fail("missing POSES header");
  if (tok[0] != "POSES" || tok.size() != 2) reader.fail("expected 'POSES <version>'");
  if (tok[1] != "1") {
    throw Error(ErrorCode::VersionUnsupported, "POSES version " + tok[1] + " is not supported");
  }
  if (!reader.next(tok) || tok.size() != 2) reader.fail("expected '<n_views> <reference_view>'");
  const std::size_t n = reader.integer(tok[0]);
  PoseFile file;
  file.reference_view = static_cast<ViewId>(reader.integer(tok[1]));
  if (file.reference_view >= n) reader.fail("reference view out of range");
  std::vector<std::optional<CameraPose>> poses(n);
  std::size_t seen = 0;
  while (reader.next(tok)) {
    if (tok[0] == "C") {
      reader.expect_size(tok, 9);
      const auto v = reader.integer(tok[1]);
      if (v >= n) reader.fail("view id out of range");
      if (poses[v]) reader.fail("duplicate C record");
      CameraPose p;
      p.rotation = reader.rotation(tok, 2);
      p.center = Vec3(reader.number(tok[6]), reader.number(tok[7]), reader.number(tok[8]));
      poses[v] = p;
      ++seen;
    } else if (tok[0] == "S") {
      for (std::size_t k = 1; k < tok.size(); ++k) file.spectrum.push_back(reader.number(tok[k]));
    } else {
      reader.fail("unknown record '" + tok[0] + "'");
    }
  }
  if (seen != n) reader.fail("expected " + std::to_string(n) + " C records, found " + std::to_string(seen));
  for (auto& p : poses) file.poses.push_back(*p);
  return file;
}

inline PoseFile read_poses(const std::string& path) {
  auto in = detail::open_in(path);
  return read_poses(in);
}

/// ASCII PLY: reconstructed points in white, then camera centers in red.
inline void export_ply(std::ostream& out, std::span<const ReconstructedPoint> points,
                       std::span<const Vec3> camera_centers) {
  out << "ply\n"
      << "format ascii 1.0\n"
      << "element vertex " << points.size() + camera_centers.size() << '\n'
      << "property float x\nproperty float y\nproperty float z\n"
      << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
      << "end_header\n";
  auto vertex = [&](const Vec3& p, const char* color) {
    out << format_double(static_cast<float>(p.x())) << ' '
        << format_double(static_cast<float>(p.y())) << ' '
        << format_double(static_cast<float>(p.z())) << ' ' << color << '\n';
  };
  for (const auto& p : points) vertex(p.position_w, "255 255 255");
  for (const auto& c : camera_centers) vertex(c, "255 0 0");
  if (!out) throw Error(ErrorCode::IoError, "PLY write failed");
}

inline void export_ply(const std::string& path, std::span<const ReconstructedPoint> points,
                       std::span<const Vec3> camera_centers) {
  auto out = detail::open_out(path);
  export_ply(out, points, camera_centers);
}

}  // namespace poseonly
