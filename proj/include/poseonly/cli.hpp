#pragma once

// Command-line driver. Exit codes: 0 success, 1 usage or input error,
// 2 numerical failure (the error name is printed on the error stream).

#include <chrono>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "poseonly/baseline.hpp"
#include "poseonly/evaluation.hpp"
#include "poseonly/io.hpp"
#include "poseonly/ligt.hpp"
#include "poseonly/pose_adjust.hpp"
#include "poseonly/reconstruct.hpp"
#include "poseonly/scene_sim.hpp"

namespace poseonly {

namespace detail {

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

struct SolveFlags {
  double theta_min = 0.0;
  bool normalize_rows = false;
  NullSpaceBackend backend = NullSpaceBackend::automatic;
  std::size_t min_track_len = 2;
  double rank_gap = kDefaultRankGapRatio;
};

inline void add_solve_flags(CLI::App& cmd, SolveFlags& f) {
  cmd.add_option("--theta-min", f.theta_min, "Parallax threshold for degenerate pairs")
      ->check(CLI::NonNegativeNumber);
  cmd.add_flag("--normalize-rows", f.normalize_rows, "Divide LiGT row blocks by theta^2");
  const std::map<std::string, NullSpaceBackend> backends{
      {"auto", NullSpaceBackend::automatic},
      {"dense", NullSpaceBackend::dense_svd},
      {"normal", NullSpaceBackend::normal_matrix}};
  cmd.add_option("--backend", f.backend, "Null-space backend: auto, dense, normal")
      ->transform(CLI::CheckedTransformer(backends, CLI::ignore_case));
  cmd.add_option("--min-track-len", f.min_track_len, "Drop tracks shorter than this")
      ->check(CLI::Range(2, 1 << 30));
  cmd.add_option("--rank-gap", f.rank_gap, "Required s2/s1 ratio of the LiGT system")
      ->check(CLI::PositiveNumber);
}

inline LigtOptions ligt_options(const SolveFlags& f) {
  LigtOptions o;
  o.theta_min = f.theta_min;
  o.normalize_rows = f.normalize_rows;
  o.backend = f.backend;
  o.rank_gap_ratio = f.rank_gap;
  return o;
}

inline TranslationSolution run_ligt(const SceneProblem& problem, const SolveFlags& f) {
  const auto tracks = build_tracks(problem.observations, f.min_track_len);
  const auto options = ligt_options(f);
  const LigtSystem system =
      assemble_system(tracks, problem.rotations, problem.reference_view, options);
  return solve_translations(system, options);
}

struct PaFlags {
  int max_iter = 100;
  bool freeze_rotations = false;
};

inline PaResult run_pa(const SceneProblem& problem, std::span<const CameraPose> initial,
                       ViewId reference, const SolveFlags& f, const PaFlags& p) {
  const auto tracks = build_tracks(problem.observations, f.min_track_len);
  const PaProblem pa = prepare_pa_problem(tracks, rotations_of(initial), f.theta_min);
  PaConfig config;
  config.max_iter = p.max_iter;
  config.freeze_rotations = p.freeze_rotations;
  config.theta_min = f.theta_min;
  return pa_optimize(initial, pa, reference, config);
}

inline void emit_poses(const std::string& path, const PoseFile& file, std::ostream& out) {
  if (path.empty() || path == "-") write_poses(out, file);
  else write_poses(path, file);
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pose-only structure from motion: LiGT translations, pose adjustment, "
               "analytic reconstruction"};
  app.name("poseonly");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  // simulate
  SceneConfig scene;
  std::string motion = "generic_ring", cloud = "box", sim_out;
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic problem file");
  sim->add_option("--motion", motion, "generic_ring, collinear, local_pure_rotation, loop_closure")
      ->check(CLI::IsMember({"generic_ring", "collinear", "local_pure_rotation", "loop_closure"}));
  sim->add_option("--cloud", cloud, "Point cloud shape: box or shell")
      ->check(CLI::IsMember({"box", "shell"}));
  sim->add_option("--views", scene.n_views, "Number of views");
  sim->add_option("--points", scene.n_points, "Number of points");
  sim->add_option("--extent", scene.box_extent, "Box side length");
  sim->add_option("--radius", scene.shell_radius, "Shell radius");
  sim->add_option("--distance", scene.camera_distance, "Camera distance from the cloud center");
  sim->add_option("--sigma", scene.obs_noise_sigma, "Observation noise, normalized units");
  sim->add_option("--rotation-noise", scene.rotation_noise_deg, "Rotation perturbation, degrees");
  sim->add_option("--min-track-len", scene.min_track_len, "Minimum views per point");
  sim->add_option("--shared-center", scene.shared_center_views,
                  "Views sharing one center (local_pure_rotation)");
  sim->add_option("--seed", scene.seed, "PRNG seed");
  sim->add_option("-o,--output", sim_out, "Output problem file")->required();

  // solve
  detail::SolveFlags solve_flags;
  std::string solve_in, solve_out;
  auto* solve = app.add_subcommand("solve", "LiGT global translations");
  solve->add_option("problem", solve_in, "Problem file")->required();
  solve->add_option("-o,--output", solve_out, "Poses file (default: stdout)");
  detail::add_solve_flags(*solve, solve_flags);

  // pa
  detail::SolveFlags pa_solve_flags;
  detail::PaFlags pa_flags;
  std::string pa_in, pa_poses, pa_out;
  auto* pa = app.add_subcommand("pa", "Pose adjustment from an initial poses file");
  pa->add_option("problem", pa_in, "Problem file")->required();
  pa->add_option("poses", pa_poses, "Initial poses file")->required();
  pa->add_option("-o,--output", pa_out, "Refined poses file (default: stdout)");
  pa->add_option("--max-iter", pa_flags.max_iter, "Iteration cap")->check(CLI::Range(0, 1 << 20));
  pa->add_flag("--freeze-rotations", pa_flags.freeze_rotations, "Optimize centers only");
  detail::add_solve_flags(*pa, pa_solve_flags);

  // reconstruct
  detail::SolveFlags rec_flags;
  std::string rec_in, rec_poses, rec_out;
  auto* rec = app.add_subcommand("reconstruct", "Analytic points from poses, written as PLY");
  rec->add_option("problem", rec_in, "Problem file")->required();
  rec->add_option("poses", rec_poses, "Poses file")->required();
  rec->add_option("-o,--output", rec_out, "PLY file")->required();
  detail::add_solve_flags(*rec, rec_flags);

  // baseline
  std::string base_in, base_out;
  double base_gap = kDefaultRankGapRatio;
  auto* base = app.add_subcommand(
      "baseline", "Cross-product least-squares translations from ground-truth directions");
  base->add_option("problem", base_in, "Problem file with G records")->required();
  base->add_option("-o,--output", base_out, "Poses file (default: stdout)");
  base->add_option("--rank-gap", base_gap, "Required s2/s1 ratio");

  // eval
  detail::SolveFlags eval_flags;
  detail::PaFlags eval_pa_flags;
  std::string eval_in, eval_poses, eval_format = "both";
  bool eval_timing = false, eval_with_pa = false;
  auto* ev = app.add_subcommand(
      "eval", "Score a poses file, or run the LiGT pipeline when no poses file is given");
  ev->add_option("problem", eval_in, "Problem file")->required();
  ev->add_option("poses", eval_poses, "Poses file");
  ev->add_option("--format", eval_format, "table, kv or both")
      ->check(CLI::IsMember({"table", "kv", "both"}));
  ev->add_flag("--pa", eval_with_pa, "Refine with pose adjustment when running the pipeline");
  ev->add_flag("--timing", eval_timing, "Report per-stage runtime");
  ev->add_option("--max-iter", eval_pa_flags.max_iter, "PA iteration cap");
  detail::add_solve_flags(*ev, eval_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sim) {
      static const std::map<std::string, MotionKind> motions{
          {"generic_ring", MotionKind::generic_ring},
          {"collinear", MotionKind::collinear},
          {"local_pure_rotation", MotionKind::local_pure_rotation},
          {"loop_closure", MotionKind::loop_closure}};
      scene.motion = motions.at(motion);
      scene.point_cloud = cloud == "shell" ? CloudKind::shell : CloudKind::box;
      const SceneProblem problem = generate_scene(scene);
      write_problem(sim_out, problem);
      err << "wrote " << problem.n_views() << " views, " << problem.gt_points.size()
          << " points, " << problem.observations.size() << " observations to " << sim_out << '\n';
    } else if (*solve) {
      const SceneProblem problem = read_problem(solve_in);
      const TranslationSolution sol = detail::run_ligt(problem, solve_flags);
      detail::emit_poses(solve_out,
                         {poses_from_translations(problem.rotations, sol.translations),
                          problem.reference_view, sol.spectrum},
                         out);
    } else if (*pa) {
      const SceneProblem problem = read_problem(pa_in);
      const PoseFile initial = read_poses(pa_poses);
      if (initial.poses.size() != problem.n_views()) {
        throw Error(ErrorCode::InvalidArgument, "poses file does not match the problem");
      }
      const PaResult res =
          detail::run_pa(problem, initial.poses, initial.reference_view, pa_solve_flags, pa_flags);
      err << "pa: " << res.report.iterations << " iterations, cost "
          << format_double(res.report.initial_cost) << " -> "
          << format_double(res.report.final_cost) << ", termination "
          << termination_name(res.report.termination) << '\n';
      detail::emit_poses(pa_out, {res.poses, initial.reference_view, initial.spectrum}, out);
    } else if (*rec) {
      const SceneProblem problem = read_problem(rec_in);
      const PoseFile poses = read_poses(rec_poses);
      if (poses.poses.size() != problem.n_views()) {
        throw Error(ErrorCode::InvalidArgument, "poses file does not match the problem");
      }
      ReconstructOptions options;
      options.theta_min = rec_flags.theta_min;
      options.min_track_length = rec_flags.min_track_len;
      const auto tracks = build_tracks(problem.observations, 2);
      const Reconstruction r = reconstruct_all(tracks, poses.poses, options);
      export_ply(rec_out, r.points, centers_of(poses.poses));
      err << "reconstructed " << r.points.size() << " points, rejected " << r.rejected.total()
          << '\n';
    } else if (*base) {
      const SceneProblem problem = read_problem(base_in);
      if (!problem.has_ground_truth()) {
        throw Error(ErrorCode::InvalidArgument, "baseline needs G records for directions");
      }
      const auto tracks = build_tracks(problem.observations, 2);
      const auto dirs = directions_from_poses(problem.gt_poses, tracks);
      const BaselineSolution sol =
          govindu_translations(dirs, problem.rotations, problem.reference_view, base_gap);
      detail::emit_poses(base_out,
                         {poses_from_translations(problem.rotations, sol.translations),
                          problem.reference_view, sol.spectrum},
                         out);
    } else if (*ev) {
      const SceneProblem problem = read_problem(eval_in);
      std::vector<std::pair<std::string, double>> timing;
      PoseFile poses;
      if (!eval_poses.empty()) {
        poses = read_poses(eval_poses);
        if (poses.poses.size() != problem.n_views()) {
          throw Error(ErrorCode::InvalidArgument, "poses file does not match the problem");
        }
      } else {
        detail::Stopwatch sw;
        const TranslationSolution sol = detail::run_ligt(problem, eval_flags);
        timing.emplace_back("ligt", sw.ms());
        poses = {poses_from_translations(problem.rotations, sol.translations),
                 problem.reference_view, sol.spectrum};
        if (eval_with_pa) {
          detail::Stopwatch pw;
          poses.poses = detail::run_pa(problem, poses.poses, poses.reference_view, eval_flags,
                                       eval_pa_flags)
                            .poses;
          timing.emplace_back("pa", pw.ms());
        }
      }
      ReconstructOptions options;
      options.theta_min = eval_flags.theta_min;
      options.min_track_length = eval_flags.min_track_len;
      detail::Stopwatch rw;
      EvalReport report = evaluate(problem, poses.poses, poses.spectrum, options);
      timing.emplace_back("reconstruct", rw.ms());
      if (eval_timing) report.runtime_ms = timing;
      if (eval_format != "kv") print_eval_table(out, report);
      if (eval_format != "table") print_eval_kv(out, report);
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return is_numerical_failure(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace poseonly
