#include "pcgrasp/cli.hpp"

#include "pcgrasp/ik.hpp"
#include "pcgrasp/robot_model.hpp"
#include "pcgrasp/scene_io.hpp"
#include "pcgrasp/synthetic.hpp"
#include "pcgrasp/trajectory.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace pcgrasp {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setw(2) << doc << "\n";
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + " is not valid JSON: " + e.what());
  }
}

json to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

struct RobotArgs {
  std::string urdf;
  std::string base;
  std::string tool;
  int points_per_link = 100;
  std::uint64_t sample_seed = 0;

  void add_to(CLI::App& app, bool sampling) {
    app.add_option("--urdf", urdf, "robot description")->required()->check(CLI::ExistingFile);
    app.add_option("--base", base, "base link (default: URDF root)");
    app.add_option("--tool", tool, "tool link (default: the unique leaf link)");
    if (sampling) {
      app.add_option("--points-per-link", points_per_link, "surface points per link");
      app.add_option("--sample-seed", sample_seed, "surface sampling seed");
    }
  }
};

KinematicChain load_robot(const RobotArgs& a) {
  std::string base = a.base, tool = a.tool;
  if (base.empty() || tool.empty()) {
    const UrdfEndpoints ends = urdf_endpoints(read_text(a.urdf));
    if (base.empty()) base = ends.root;
    if (tool.empty()) {
      if (!ends.unique_leaf) throw UsageError("URDF has several leaf links; pass --tool");
      tool = *ends.unique_leaf;
    }
  }
  return load_urdf(a.urdf, base, tool);
}

struct Robot {
  KinematicChain chain;
  SurfacePointSet surface;
  GripperPointSet gripper;
};

Robot load_robot_points(const RobotArgs& a, int points_per_link, std::uint64_t sample_seed) {
  if (points_per_link < 3) throw UsageError("points per link must be at least 3");
  Robot r{load_robot(a), {}, {}};
  r.surface = sample_surface_points(r.chain, static_cast<std::size_t>(points_per_link), sample_seed);
  r.gripper = gripper_points(r.chain, r.surface);
  return r;
}

std::filesystem::path default_camera_path(const std::filesystem::path& depth) {
  std::filesystem::path p = depth;
  return p.replace_extension(".cam");
}

// ---------------------------------------------------------------- sdf

int cmd_sdf(const std::string& cloud_path, const std::string& depth_path, std::string camera_path,
            double resolution, double margin, const std::string& out_path, std::ostream& out, std::ostream& err) {
  PointCloud cloud;
  std::shared_ptr<const DepthImage> depth;
  if (!depth_path.empty()) {
    if (camera_path.empty()) camera_path = default_camera_path(depth_path).string();
    depth = std::make_shared<const DepthImage>(read_depth_image(depth_path, camera_path));
  }
  if (!cloud_path.empty()) {
    cloud.points = read_point_cloud(cloud_path);
    cloud.source = depth;
  } else if (depth) {
    cloud = backproject(*depth);
  } else {
    throw UsageError("sdf needs --cloud or --depth");
  }
  if (!depth) err << "note: no depth image given, every distance is unsigned\n";
  const SignedDistanceGrid grid = build_sdf(cloud, resolution, margin);
  save_sdf(grid, out_path);
  const auto [lo, hi] = std::minmax_element(grid.values().begin(), grid.values().end());
  const auto& d = grid.dims();
  out << "points " << cloud.points.size() << "\n";
  out << "dims " << d[0] << " " << d[1] << " " << d[2] << "\n";
  out << "origin " << grid.origin().transpose() << "\n";
  out << "resolution " << grid.resolution() << "\n";
  out << "min " << *lo << " max " << *hi << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- ik

json ik_record(int goal, const IkResult& r) {
  return {{"goal", goal},
          {"success", r.success},
          {"translation_error", r.translation_error},
          {"rotation_error", r.rotation_error},
          {"objective", r.objective_value},
          {"iterations", r.iterations},
          {"restart", r.restart},
          {"q_star", to_json(r.q_star)}};
}

int cmd_ik(const RobotArgs& robot_args, const std::string& goals_path, std::vector<std::string> costs,
           const std::string& q0_text, const std::string& inits, std::uint64_t seed, int max_iter,
           const std::string& report_path, std::ostream& out) {
  if (std::find(costs.begin(), costs.end(), "all") != costs.end()) costs = {"pm", "quat", "euler"};
  std::vector<GoalCostKind> kinds;
  for (const auto& c : costs) kinds.push_back(parse_goal_cost_kind(c));
  const Robot robot = load_robot_points(robot_args, robot_args.points_per_link, robot_args.sample_seed);
  const GoalSet goals = read_goal_set(goals_path);
  const JointConfig current = q0_text.empty() ? robot.chain.mid_configuration() : parse_joint_vector(q0_text);
  if (current.size() != robot.chain.dof()) throw UsageError("--q0 has the wrong number of joints");
  std::vector<JointConfig> q_inits;
  if (inits == "mid")
    q_inits = {robot.chain.mid_configuration()};
  else
    q_inits = default_ik_seeds(robot.chain, current, seed);
  IkOptions options;
  options.max_iterations = max_iter;

  json report = {{"count", goals.size()}, {"inits", inits}, {"max_iterations", max_iter}, {"costs", json::object()}};
  out << "cost   successes / count\n";
  for (GoalCostKind kind : kinds) {
    const auto results = batch_ik(robot.chain, robot.gripper, goals, q_inits, kind, options);
    json records = json::array();
    int successes = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
      records.push_back(ik_record(static_cast<int>(i), results[i]));
      successes += results[i].success;
    }
    const std::string name(goal_cost_name(kind));
    report["costs"][name] = {{"successes", successes}, {"results", records}};
    out << std::left << std::setw(6) << name << " " << successes << " / " << goals.size() << "\n";
  }
  if (!report_path.empty()) write_json(report_path, report);
  return kExitOk;
}

// ---------------------------------------------------------------- plan

json breakdown_json(const ObjectiveBreakdown& b) {
  return {{"goal", b.goal}, {"standoff", b.standoff}, {"collision", b.collision}, {"velocity", b.velocity},
          {"total", b.total}};
}

json pose_error_json(const IkResult& r) {
  return {{"translation_error", r.translation_error}, {"rotation_error", r.rotation_error}, {"success", r.success}};
}

struct PlanFlags {
  std::optional<double> lambda1, lambda2, standoff_offset;
  std::optional<int> top_n;
  bool reduced = false;
};

int cmd_plan(const RobotArgs& robot_args, const std::string& sdf_path, const std::string& goals_path,
             const std::string& q0_text, const std::string& config_path, const PlanFlags& flags,
             const std::string& traj_path, const std::string& report_path, std::ostream& out, std::ostream& err) {
  CliPlanSettings settings;
  settings.points_per_link = robot_args.points_per_link;
  settings.sample_seed = robot_args.sample_seed;
  if (!config_path.empty()) apply_config_json(read_json(config_path), settings);
  PlannerConfig& cfg = settings.planner;
  if (flags.lambda1) cfg.lambda1 = *flags.lambda1;
  if (flags.lambda2) cfg.lambda2 = *flags.lambda2;
  if (flags.standoff_offset) cfg.standoff_offset = *flags.standoff_offset;
  if (flags.top_n) cfg.top_n_goals = *flags.top_n;
  if (flags.reduced) cfg.reduced = true;
  cfg.validate();

  const Robot robot = load_robot_points(robot_args, settings.points_per_link, settings.sample_seed);
  const SignedDistanceGrid grid = load_sdf(sdf_path);
  const GoalSet goals = read_goal_set(goals_path);
  const JointConfig q0 = q0_text.empty() ? robot.chain.mid_configuration() : parse_joint_vector(q0_text);
  if (q0.size() != robot.chain.dof()) throw UsageError("--q0 has the wrong number of joints");

  json report = {{"config", config_to_json(settings)}, {"goals_total", goals.size()}};
  PlanResult r;
  try {
    r = plan(robot.chain, robot.surface, robot.gripper, grid, q0, goals, cfg);
  } catch (const NoFeasibleGoal& e) {
    report["status"] = "no_feasible_goal";
    report["message"] = e.what();
    if (!report_path.empty()) write_json(report_path, report);
    err << e.what() << "\n";
    return kExitInfeasible;
  }
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  const CollisionVerdict verdict = check_trajectory_collision(grid, robot.chain, robot.surface, r.plan);

  json per_goal = json::array();
  for (const auto& g : r.per_goal) {
    per_goal.push_back({{"goal", g.goal_index},
                        {"initial_objective", g.initial_objective},
                        {"interpolation_cost", g.interpolation_cost},
                        {"objective", breakdown_json(g.objective)},
                        {"max_equality_residual", g.max_equality_residual},
                        {"projected_gradient_norm", g.projected_gradient_norm},
                        {"iterations", g.iterations},
                        {"converged", g.converged},
                        {"wall_time", g.wall_time}});
  }
  report["status"] = r.report.converged ? "converged" : "not_converged";
  report["selected_goal_index"] = r.plan.selected_goal_index;
  report["goals_after_collision_filter"] = r.goals_after_collision_filter;
  report["goals_after_ik_filter"] = r.goals_after_ik_filter;
  report["objective"] = breakdown_json(r.objective);
  report["initial_objective"] = r.initial_objective;
  report["final_pose"] = pose_error_json(r.final_pose);
  report["standoff_pose"] = pose_error_json(r.standoff_pose);
  report["standoff_index"] = r.plan.standoff_index;
  report["dynamics_residual"] = r.plan.dynamics_residual();
  report["solver"] = {{"converged", r.report.converged},
                      {"iterations", r.report.iterations},
                      {"outer_iterations", r.report.outer_iterations},
                      {"max_equality_residual", r.report.max_equality_residual},
                      {"projected_gradient_norm", r.report.projected_gradient_norm},
                      {"wall_time", r.report.wall_time}};
  report["per_goal"] = per_goal;
  report["collision"] = {{"in_collision", verdict.in_collision},
                         {"worst_config_negative_count", verdict.worst_config_negative_count},
                         {"worst_config_index", verdict.worst_config_index}};
  report["warnings"] = r.warnings;
  report["wall_time"] = r.wall_time;

  if (!traj_path.empty()) export_plan(r.plan, traj_path);
  if (!report_path.empty()) write_json(report_path, report);

  out << "goal " << r.plan.selected_goal_index << " objective " << r.objective.total << " translation_error "
      << r.final_pose.translation_error << " rotation_error " << r.final_pose.rotation_error << " "
      << (verdict.in_collision ? "COLLISION" : "collision-free") << " " << report["status"].get<std::string>()
      << "\n";
  return r.report.converged ? kExitOk : kExitNotConverged;
}

// ---------------------------------------------------------------- check

int cmd_check(const RobotArgs& robot_args, const std::string& sdf_path, const std::string& traj_path,
              std::ostream& out) {
  const TrajectoryPlan traj = import_plan(traj_path);
  const Robot robot = load_robot_points(robot_args, robot_args.points_per_link, robot_args.sample_seed);
  if (traj.dof() != robot.chain.dof()) throw UsageError("trajectory joint count does not match the robot");
  const SignedDistanceGrid grid = load_sdf(sdf_path);
  const CollisionVerdict v = check_trajectory_collision(grid, robot.chain, robot.surface, traj);
  if (v.in_collision)
    out << "COLLISION " << v.worst_config_negative_count << " step " << v.worst_config_index << "\n";
  else
    out << "OK " << v.worst_config_negative_count << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- gen-scene

int cmd_gen_scene(const std::string& kind_name, const std::string& spec_path, std::uint64_t seed,
                  const std::string& cloud_path, const std::string& goals_path, const std::string& depth_path,
                  std::string camera_path, const std::string& config_path, std::ostream& out) {
  SceneSpec spec;
  if (!spec_path.empty()) {
    spec = read_scene_spec(spec_path);
  } else {
    if (kind_name.empty()) throw UsageError("gen-scene needs --kind or --spec");
    const SceneKind kind = parse_scene_kind(kind_name);
    if (kind == SceneKind::custom) throw UsageError("custom scenes need --spec");
    spec = make_scene_spec(kind, seed);
  }
  const SyntheticScene scene = generate_scene(spec, seed);
  write_xyz(cloud_path, scene.cloud.points);
  write_goal_set(goals_path, spec.goals);
  if (!depth_path.empty()) {
    if (camera_path.empty()) camera_path = default_camera_path(depth_path).string();
    write_depth_image(scene.depth, depth_path, camera_path);
  }
  if (!config_path.empty()) write_json(config_path, {{"standoff_offset", spec.standoff_offset}});
  out << "kind " << scene_kind_name(spec.kind) << " seed " << seed << "\n";
  out << "points " << scene.cloud.points.size() << "\n";
  out << "goals " << spec.goals.size() << " intended";
  for (int g : spec.intended_feasible) out << " " << g;
  out << "\n";
  return kExitOk;
}

}  // namespace

// ---------------------------------------------------------------- config

void apply_config_json(const json& doc, CliPlanSettings& s) {
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  PlannerConfig& c = s.planner;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "T") c.T = value.get<int>();
      else if (key == "horizon") c.horizon = value.get<double>();
      else if (key == "lambda1") c.lambda1 = value.get<double>();
      else if (key == "lambda2") c.lambda2 = value.get<double>();
      else if (key == "delta") c.delta = value.get<int>();
      else if (key == "eps") c.eps = value.get<double>();
      else if (key == "standoff_offset") c.standoff_offset = value.get<double>();
      else if (key == "top_n_goals") c.top_n_goals = value.get<int>();
      else if (key == "reduced") c.reduced = value.get<bool>();
      else if (key == "ik_seed") c.ik_seed = value.get<std::uint64_t>();
      else if (key == "points_per_link") s.points_per_link = value.get<int>();
      else if (key == "sample_seed") s.sample_seed = value.get<std::uint64_t>();
      else if (key == "approach_axis") {
        const auto a = value.get<std::vector<double>>();
        if (a.size() != 3) throw std::invalid_argument("approach_axis needs three values");
        c.approach_axis = Vec3(a[0], a[1], a[2]);
      } else if (key == "solver") {
        if (!value.is_object()) throw std::invalid_argument("solver must be an object");
        SolveOptions& o = c.solver;
        for (const auto& [k, v] : value.items()) {
          if (k == "max_outer") o.max_outer = v.get<int>();
          else if (k == "max_inner") o.max_inner = v.get<int>();
          else if (k == "eq_tol") o.eq_tol = v.get<double>();
          else if (k == "grad_tol") o.grad_tol = v.get<double>();
          else if (k == "initial_penalty") o.initial_penalty = v.get<double>();
          else if (k == "penalty_growth") o.penalty_growth = v.get<double>();
          else if (k == "max_penalty") o.max_penalty = v.get<double>();
          else if (k == "lbfgs_memory") o.lbfgs_memory = v.get<int>();
          else if (k == "least_squares_multipliers") o.least_squares_multipliers = v.get<bool>();
          else throw std::invalid_argument("unknown solver key '" + k + "'");
        }
      } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config value has the wrong type: ") + e.what());
  }
}

json config_to_json(const CliPlanSettings& s) {
  const PlannerConfig& c = s.planner;
  const SolveOptions& o = c.solver;
  return {{"T", c.T},
          {"horizon", c.horizon},
          {"dt", c.dt()},
          {"lambda1", c.lambda1},
          {"lambda2", c.lambda2},
          {"delta", c.delta},
          {"eps", c.eps},
          {"standoff_offset", c.standoff_offset},
          {"approach_axis", {c.approach_axis.x(), c.approach_axis.y(), c.approach_axis.z()}},
          {"top_n_goals", c.top_n_goals},
          {"reduced", c.reduced},
          {"ik_seed", c.ik_seed},
          {"points_per_link", s.points_per_link},
          {"sample_seed", s.sample_seed},
          {"solver",
           {{"max_outer", o.max_outer},
            {"max_inner", o.max_inner},
            {"eq_tol", o.eq_tol},
            {"grad_tol", o.grad_tol},
            {"initial_penalty", o.initial_penalty},
            {"penalty_growth", o.penalty_growth},
            {"max_penalty", o.max_penalty},
            {"lbfgs_memory", o.lbfgs_memory},
            {"least_squares_multipliers", o.least_squares_multipliers}}}};
}

JointConfig parse_joint_vector(const std::string& text) {
  std::string body = text;
  std::error_code ec;
  if (std::filesystem::is_regular_file(text, ec)) body = read_text(text);
  std::replace(body.begin(), body.end(), ',', ' ');
  std::istringstream in(body);
  std::vector<double> v;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || !std::isfinite(x)) throw std::invalid_argument("bad joint value '" + tok + "'");
    v.push_back(x);
  }
  if (v.empty()) throw std::invalid_argument("empty joint vector");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// ---------------------------------------------------------------- entry

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Point-cloud joint motion and grasp trajectory optimizer", "pcgrasp"};
  app.require_subcommand(1);

  std::string cloud, depth, camera, sdf_out;
  double resolution = 0.05, margin = 0.3;
  auto* sdf = app.add_subcommand("sdf", "build a signed distance field from a cloud or depth image");
  sdf->add_option("--cloud", cloud, "XYZ or PLY point cloud")->check(CLI::ExistingFile);
  sdf->add_option("--depth", depth, "16-bit PGM depth image (millimeters); also sets the sign viewpoint")
      ->check(CLI::ExistingFile);
  sdf->add_option("--camera", camera, "camera file for --depth (default: depth path with .cam)");
  sdf->add_option("--resolution", resolution, "grid spacing in meters")->check(CLI::PositiveNumber);
  sdf->add_option("--margin", margin, "padding around the cloud in meters")->check(CLI::NonNegativeNumber);
  sdf->add_option("--out", sdf_out, "output SDF file")->required();

  RobotArgs ik_robot;
  std::string ik_goals, ik_report, ik_q0, ik_inits = "default";
  std::vector<std::string> ik_costs{"pm"};
  std::uint64_t ik_seed = 0;
  int ik_max_iter = 200;
  auto* ik = app.add_subcommand("ik", "solve IK for every goal and count successes per cost");
  ik_robot.add_to(*ik, true);
  ik->add_option("--goals", ik_goals, "goal set JSON")->required()->check(CLI::ExistingFile);
  ik->add_option("--cost", ik_costs, "pm, quat, euler or all (repeatable)")
      ->check(CLI::IsMember({"pm", "quat", "euler", "all"}));
  ik->add_option("--report", ik_report, "JSON report path");
  ik->add_option("--q0", ik_q0, "current configuration used as a restart");
  ik->add_option("--inits", ik_inits, "default (mid, current, random) or mid")
      ->check(CLI::IsMember({"default", "mid"}));
  ik->add_option("--seed", ik_seed, "seed of the random restart");
  ik->add_option("--max-iter", ik_max_iter, "iteration budget per restart")->check(CLI::PositiveNumber);

  RobotArgs plan_robot;
  std::string plan_sdf, plan_goals, plan_q0, plan_config, plan_traj, plan_report;
  PlanFlags plan_flags;
  auto* pl = app.add_subcommand("plan", "optimize a grasp trajectory");
  plan_robot.add_to(*pl, true);
  pl->add_option("--sdf", plan_sdf, "SDF file")->required()->check(CLI::ExistingFile);
  pl->add_option("--goals", plan_goals, "goal set JSON")->required()->check(CLI::ExistingFile);
  pl->add_option("--q0", plan_q0, "start configuration (list or file; default mid-range)");
  pl->add_option("--config", plan_config, "planner config JSON")->check(CLI::ExistingFile);
  pl->add_option("--out-traj", plan_traj, "trajectory CSV");
  pl->add_option("--out-report", plan_report, "report JSON");
  pl->add_option("--lambda1", plan_flags.lambda1, "collision weight");
  pl->add_option("--lambda2", plan_flags.lambda2, "velocity weight");
  pl->add_option("--standoff-offset", plan_flags.standoff_offset, "standoff distance in meters");
  pl->add_option("--top-n", plan_flags.top_n, "goals to optimize");
  pl->add_flag("--reduced", plan_flags.reduced, "velocity-only solve");

  RobotArgs check_robot;
  std::string check_sdf, check_traj;
  auto* ck = app.add_subcommand("check", "collision verdict for a trajectory");
  check_robot.add_to(*ck, true);
  ck->add_option("--sdf", check_sdf, "SDF file")->required()->check(CLI::ExistingFile);
  ck->add_option("--traj", check_traj, "trajectory CSV")->required()->check(CLI::ExistingFile);

  std::string gen_kind, gen_spec, gen_cloud, gen_goals, gen_depth, gen_camera, gen_config;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen-scene", "generate a synthetic scene");
  gen->add_option("--kind", gen_kind, "tabletop or shelf");
  gen->add_option("--spec", gen_spec, "custom scene JSON")->check(CLI::ExistingFile);
  gen->add_option("--seed", gen_seed, "scene seed");
  gen->add_option("--out-cloud", gen_cloud, "XYZ cloud")->required();
  gen->add_option("--out-goals", gen_goals, "goal set JSON")->required();
  gen->add_option("--out-depth", gen_depth, "rendered depth PGM");
  gen->add_option("--out-camera", gen_camera, "camera file (default: depth path with .cam)");
  gen->add_option("--out-config", gen_config, "planner config JSON with the scene's standoff");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (sdf->parsed()) return cmd_sdf(cloud, depth, camera, resolution, margin, sdf_out, out, err);
    if (ik->parsed())
      return cmd_ik(ik_robot, ik_goals, ik_costs, ik_q0, ik_inits, ik_seed, ik_max_iter, ik_report, out);
    if (pl->parsed())
      return cmd_plan(plan_robot, plan_sdf, plan_goals, plan_q0, plan_config, plan_flags, plan_traj, plan_report,
                      out, err);
    if (ck->parsed()) return cmd_check(check_robot, check_sdf, check_traj, out);
    if (gen->parsed())
      return cmd_gen_scene(gen_kind, gen_spec, gen_seed, gen_cloud, gen_goals, gen_depth, gen_camera, gen_config,
                           out);
  } catch (const NoFeasibleGoal& e) {
    err << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace pcgrasp
