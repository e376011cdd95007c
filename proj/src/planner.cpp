#include "pcgrasp/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace pcgrasp {

SolveOptions PlannerConfig::default_solver_options() {
  SolveOptions o;
  o.max_evaluations = 8000;
  return o;
}

void PlannerConfig::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument("planner config: " + m); };
  if (T < 3) fail("T must be at least 3");
  if (!(horizon > 0.0)) fail("horizon must be positive");
  if (!(delta > 0 && delta < T - 1)) fail("delta must satisfy 0 < delta < T - 1");
  if (!(eps > 0.0)) fail("eps must be positive");
  if (!(standoff_offset > 0.0)) fail("standoff_offset must be positive");
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) fail("weights must be non-negative");
  if (top_n_goals < 1) fail("top_n_goals must be at least 1");
  if (!(approach_axis.norm() > 0.0)) fail("approach axis must be nonzero");
}

std::vector<int> filter_goals_collision(const DistanceField& field, const GripperPointSet& gripper,
                                        const GoalSet& goals, const std::vector<int>& indices) {
  std::vector<int> keep;
  std::vector<Vec3> world(gripper.size());
  for (int i : indices) {
    for (std::size_t k = 0; k < gripper.size(); ++k) world[k] = goals[i].apply(gripper.points[k]);
    if (count_negative_points(field, world) < kCollisionPointThreshold) keep.push_back(i);
  }
  return keep;
}

std::vector<int> filter_goals_collision(const DistanceField& field, const GripperPointSet& gripper,
                                        const GoalSet& goals) {
  std::vector<int> all(goals.size());
  std::iota(all.begin(), all.end(), 0);
  return filter_goals_collision(field, gripper, goals, all);
}

std::vector<IkCandidate> filter_goals_ik(const KinematicChain& chain, const GripperPointSet& gripper,
                                         const GoalSet& goals, const std::vector<int>& indices,
                                         const std::vector<JointConfig>& q_inits) {
  GoalSet subset;
  for (int i : indices) subset.push_back(goals[i]);
  const auto results = batch_ik(chain, gripper, subset, q_inits, GoalCostKind::point_matching);
  std::vector<IkCandidate> out;
  for (std::size_t k = 0; k < results.size(); ++k)
    if (results[k].success) out.push_back({indices[k], results[k].q_star, 0.0});
  return out;
}

Eigen::MatrixXd interpolate(const JointConfig& q0, const JointConfig& q1, int T) {
  Eigen::MatrixXd out(T, q0.size());
  for (int t = 0; t < T; ++t) {
    const double s = T > 1 ? static_cast<double>(t) / (T - 1) : 1.0;
    out.row(t) = (q0 + s * (q1 - q0)).transpose();
  }
  return out;
}

std::vector<IkCandidate> rank_initializations(const DistanceField& field, const KinematicChain& chain,
                                              const SurfacePointSet& points, const JointConfig& q0,
                                              std::vector<IkCandidate> candidates, const PlannerConfig& config) {
  CollisionWorkspace ws;
  Eigen::VectorXd none;
  for (auto& c : candidates) {
    const Eigen::MatrixXd path = interpolate(q0, c.q_ik, config.T);
    double sum = 0.0;
    for (int t = 0; t < config.T; ++t)
      sum += config_collision_cost(field, chain, chain.compute_state(path.row(t).transpose()), points, config.eps,
                                   ws, none);
    c.interpolation_cost = sum;
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](const IkCandidate& a, const IkCandidate& b) {
    if (std::abs(a.interpolation_cost - b.interpolation_cost) >= 1e-9)
      return a.interpolation_cost < b.interpolation_cost;
    return (a.q_ik - q0).norm() < (b.q_ik - q0).norm();
  });
  return candidates;
}

TrajectoryObjective::TrajectoryObjective(const KinematicChain& chain, const SurfacePointSet& points,
                                         const GripperPointSet& gripper, const DistanceField& field,
                                         const RigidTransform& goal, const PlannerConfig& config)
    : chain_(chain),
      points_(points),
      gripper_(gripper),
      field_(field),
      goal_(goal),
      standoff_(standoff_pose(goal, config.standoff_offset, config.approach_axis)),
      config_(config) {
  config_.validate();
}

double TrajectoryObjective::operator()(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const {
  grad.setZero(x.size());
  return evaluate(x, &grad, nullptr);
}

ObjectiveBreakdown TrajectoryObjective::breakdown(const Eigen::VectorXd& x) const {
  ObjectiveBreakdown parts;
  evaluate(x, nullptr, &parts);
  return parts;
}

double TrajectoryObjective::evaluate(const Eigen::VectorXd& x, Eigen::VectorXd* grad,
                                     ObjectiveBreakdown* parts) const {
  const int T = config_.T;
  const int n = chain_.dof();
  if (x.size() != 2 * T * n) throw DimensionError("trajectory vector has the wrong length");
  const int last = T - 1;
  const int standoff = config_.standoff_index();
  CollisionWorkspace ws;
  Eigen::VectorXd none;
  ObjectiveBreakdown b;
  for (int t = 0; t < T; ++t) {
    const JointConfig q = x.segment(t * n, n);
    const FkState state = chain_.compute_state(q);
    if (grad) {
      auto g = grad->segment(t * n, n);
      b.collision += config_collision_cost(field_, chain_, state, points_, config_.eps, ws, g, config_.lambda1);
      if (t == last) b.goal = tool_goal_cost(GoalCostKind::point_matching, chain_, state, goal_, gripper_, g);
      if (t == standoff)
        b.standoff = tool_goal_cost(GoalCostKind::point_matching, chain_, state, standoff_, gripper_, g);
    } else {
      b.collision += config_collision_cost(field_, chain_, state, points_, config_.eps, ws, none);
      if (t == last) b.goal = tool_goal_cost(GoalCostKind::point_matching, chain_, state, goal_, gripper_, none);
      if (t == standoff)
        b.standoff = tool_goal_cost(GoalCostKind::point_matching, chain_, state, standoff_, gripper_, none);
    }
  }
  const auto v = x.segment(T * n, T * n);
  b.velocity = v.squaredNorm();
  if (grad) grad->segment(T * n, T * n) += (2.0 * config_.lambda2) * v;
  b.total = b.goal + b.standoff + config_.lambda1 * b.collision + config_.lambda2 * b.velocity;
  if (parts) *parts = b;
  return b.total;
}

Eigen::VectorXd pack_trajectory(const Eigen::MatrixXd& positions, const Eigen::MatrixXd& velocities) {
  const Eigen::Index T = positions.rows(), n = positions.cols();
  Eigen::VectorXd x(2 * T * n);
  for (Eigen::Index t = 0; t < T; ++t) {
    x.segment(t * n, n) = positions.row(t).transpose();
    x.segment((T + t) * n, n) = velocities.row(t).transpose();
  }
  return x;
}

void unpack_trajectory(const Eigen::VectorXd& x, int T, int n, Eigen::MatrixXd& positions,
                       Eigen::MatrixXd& velocities) {
  positions.resize(T, n);
  velocities.resize(T, n);
  for (int t = 0; t < T; ++t) {
    positions.row(t) = x.segment(t * n, n).transpose();
    velocities.row(t) = x.segment((T + t) * n, n).transpose();
  }
}

TrajectoryPlan initial_trajectory(const JointConfig& q0, const JointConfig& q_goal, const PlannerConfig& config) {
  const int T = config.T;
  const double dt = config.dt();
  TrajectoryPlan p;
  p.dt = dt;
  p.standoff_index = config.standoff_index();
  p.positions.resize(T, q0.size());
  p.positions.row(0) = q0.transpose();
  const Eigen::MatrixXd ramp = interpolate(q0, q_goal, T - 1);
  p.positions.bottomRows(T - 1) = ramp;
  p.velocities = Eigen::MatrixXd::Zero(T, q0.size());
  for (int t = 0; t + 1 < T; ++t) p.velocities.row(t) = (p.positions.row(t + 1) - p.positions.row(t)) / dt;
  // The ramp's first step repeats q0, so the first velocity is exactly zero.
  p.velocities.row(0).setZero();
  p.velocities.row(T - 1).setZero();
  return p;
}

namespace {

double velocity_bound(const KinematicChain& chain, int j) {
  const double v = chain.velocity_limits()[j];
  return v > 0.0 ? v : kUnbounded;
}

}  // namespace

NlpProblem build_trajectory_problem(const KinematicChain& chain, const TrajectoryObjective& objective,
                                    const JointConfig& q0, const TrajectoryPlan& init, const PlannerConfig& config) {
  const int T = config.T;
  const int n = chain.dof();
  const double dt = config.dt();
  NlpProblem p;
  p.dim = 2 * T * n;
  p.lower.resize(p.dim);
  p.upper.resize(p.dim);
  const Eigen::VectorXd ql = chain.lower_limits(), qu = chain.upper_limits();
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < n; ++j) {
      const int ip = t * n + j, iv = (T + t) * n + j;
      if (t == 0) {
        p.lower[ip] = p.upper[ip] = q0[j];
      } else {
        p.lower[ip] = ql[j];
        p.upper[ip] = qu[j];
      }
      if (t == 0 || t == T - 1) {
        p.lower[iv] = p.upper[iv] = 0.0;
      } else {
        const double vb = velocity_bound(chain, j);
        p.lower[iv] = -vb;
        p.upper[iv] = vb;
      }
    }
  }
  for (int t = 0; t + 1 < T; ++t) {
    for (int j = 0; j < n; ++j) {
      LinearEquality e;
      e.coeffs = {{(t + 1) * n + j, 1.0}, {t * n + j, -1.0}, {(T + t) * n + j, -dt}};
      p.equalities.push_back(std::move(e));
    }
  }
  p.x0 = pack_trajectory(init.positions, init.velocities);
  p.objective = [&objective](const Eigen::VectorXd& x, Eigen::VectorXd& g) { return objective(x, g); };
  return p;
}

namespace {

/// Velocity-only variables: positions follow from q0 by summing dq dt, and
/// position bounds become a quadratic penalty.
struct ReducedProblem {
  static constexpr double kBoundWeight = 1.0e4;

  const TrajectoryObjective& full;
  JointConfig q0;
  Eigen::VectorXd ql, qu;
  int T, n;
  double dt;

  Eigen::VectorXd expand(const Eigen::VectorXd& v) const {
    Eigen::VectorXd x(2 * T * n);
    Eigen::VectorXd q = q0;
    for (int t = 0; t < T; ++t) {
      x.segment(t * n, n) = q;
      x.segment((T + t) * n, n) = v.segment(t * n, n);
      q += dt * v.segment(t * n, n);
    }
    return x;
  }

  double operator()(const Eigen::VectorXd& v, Eigen::VectorXd& g) const {
    const Eigen::VectorXd x = expand(v);
    Eigen::VectorXd gx(x.size());
    double f = full(x, gx);
    for (int t = 1; t < T; ++t) {
      for (int j = 0; j < n; ++j) {
        const double q = x[t * n + j];
        const double over = q > qu[j] ? q - qu[j] : (q < ql[j] ? q - ql[j] : 0.0);
        f += kBoundWeight * over * over;
        gx[t * n + j] += 2.0 * kBoundWeight * over;
      }
    }
    // Position t depends on velocities 0..t-1.
    g.setZero(T * n);
    Eigen::VectorXd tail = Eigen::VectorXd::Zero(n);
    for (int t = T - 1; t >= 0; --t) {
      g.segment(t * n, n) = gx.segment((T + t) * n, n) + dt * tail;
      tail += gx.segment(t * n, n);
    }
    return f;
  }
};

GoalSolveSummary summarize(int goal_index, const SolveReport& rep, const ObjectiveBreakdown& parts,
                           double initial) {
  GoalSolveSummary s;
  s.goal_index = goal_index;
  s.initial_objective = initial;
  s.objective = parts;
  s.max_equality_residual = rep.max_equality_residual;
  s.projected_gradient_norm = rep.projected_gradient_norm;
  s.iterations = rep.iterations;
  s.converged = rep.converged;
  s.wall_time = rep.wall_time;
  return s;
}

struct GoalSolve {
  TrajectoryPlan plan;
  SolveReport report;
  ObjectiveBreakdown parts;
  double initial = 0.0;
};

GoalSolve solve_goal(const KinematicChain& chain, const SurfacePointSet& points, const GripperPointSet& gripper,
                     const DistanceField& field, const JointConfig& q0, const RigidTransform& goal,
                     const JointConfig& q_ik, const PlannerConfig& config) {
  const int T = config.T;
  const int n = chain.dof();
  const TrajectoryObjective objective(chain, points, gripper, field, goal, config);
  const TrajectoryPlan init = initial_trajectory(q0, q_ik, config);
  const Eigen::VectorXd x_init = pack_trajectory(init.positions, init.velocities);
  GoalSolve out;
  out.initial = objective.breakdown(x_init).total;

  // Phase one: velocity-only variables, well conditioned because the velocity
  // penalty is diagonal there.
  ReducedProblem reduced{objective, q0, chain.lower_limits(), chain.upper_limits(), T, n, config.dt()};
  NlpProblem velocity_problem;
  velocity_problem.dim = T * n;
  velocity_problem.lower.resize(velocity_problem.dim);
  velocity_problem.upper.resize(velocity_problem.dim);
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < n; ++j) {
      const double vb = (t == 0 || t == T - 1) ? 0.0 : velocity_bound(chain, j);
      velocity_problem.lower[t * n + j] = -vb;
      velocity_problem.upper[t * n + j] = vb;
    }
  }
  velocity_problem.x0 = x_init.segment(T * n, T * n);
  velocity_problem.objective = [&reduced](const Eigen::VectorXd& v, Eigen::VectorXd& g) { return reduced(v, g); };
  out.report = solve(velocity_problem, config.solver);
  const Eigen::VectorXd ql = chain.lower_limits(), qu = chain.upper_limits();
  // Exact dynamics and bounds, or not a candidate at all.
  auto feasible = [&](const Eigen::VectorXd& x) {
    for (int t = 1; t < T; ++t)
      for (int j = 0; j < n; ++j)
        if (x[t * n + j] < ql[j] || x[t * n + j] > qu[j]) return false;
    return true;
  };

  Eigen::VectorXd x_star = x_init;
  out.parts = objective.breakdown(x_init);
  bool from_converged = false;
  auto consider = [&](const Eigen::VectorXd& x, bool converged, bool exact = true) {
    if (exact && !feasible(x)) return;
    const ObjectiveBreakdown parts = objective.breakdown(x);
    if (parts.total < out.parts.total) {
      x_star = x;
      out.parts = parts;
      from_converged = converged;
    }
  };
  consider(reduced.expand(out.report.x_star), out.report.converged);

  if (!config.reduced) {
    // Phase two: the full position and velocity NLP with the dynamics as
    // equalities, started from the phase-one trajectory.
    TrajectoryPlan warm;
    unpack_trajectory(reduced.expand(out.report.x_star), T, n, warm.positions, warm.velocities);
    for (int t = 1; t < T; ++t) warm.positions.row(t) = chain.clamp(warm.positions.row(t).transpose()).transpose();
    const NlpProblem problem = build_trajectory_problem(chain, objective, q0, warm, config);
    const SolveReport phase_one = out.report;
    out.report = solve(problem, config.solver);
    out.report.iterations += phase_one.iterations;
    out.report.wall_time += phase_one.wall_time;
    // An unfinished solve leaves a dynamics residual; integrating its
    // velocities from q0 removes it.
    consider(reduced.expand(out.report.x_star.segment(T * n, T * n)), out.report.converged);
  } else if (x_star == x_init) {
    // The penalty keeps bound violations small but not exactly zero.
    Eigen::VectorXd x = reduced.expand(out.report.x_star);
    for (int t = 1; t < T; ++t) x.segment(t * n, n) = chain.clamp(x.segment(t * n, n));
    consider(x, out.report.converged, false);
  }
  out.report.converged = from_converged;

  unpack_trajectory(x_star, T, n, out.plan.positions, out.plan.velocities);
  out.plan.dt = config.dt();
  out.plan.standoff_index = config.standoff_index();
  out.report.x_star = x_star;
  out.report.objective_value = out.parts.total;
  out.report.max_equality_residual = out.plan.dynamics_residual();
  return out;
}

void finish(PlanResult& r, const KinematicChain& chain, const GoalSet& goals_or_single, int goal_slot,
            const PlannerConfig& config) {
  const RigidTransform& goal = goals_or_single[goal_slot];
  r.final_pose = evaluate_ik(chain, r.plan.positions.row(r.plan.steps() - 1).transpose(), goal);
  r.standoff_pose = evaluate_ik(chain, r.plan.positions.row(r.plan.standoff_index).transpose(),
                                standoff_pose(goal, config.standoff_offset, config.approach_axis));
}

JointConfig clamp_start(const KinematicChain& chain, const JointConfig& q0, std::vector<std::string>& warnings) {
  if (q0.size() != chain.dof()) throw DimensionError("q0 has the wrong length");
  if (!q0.allFinite()) throw std::invalid_argument("q0 is not finite");
  if (chain.within_limits(q0)) return q0;
  const JointConfig c = chain.clamp(q0);
  std::ostringstream msg;
  msg << "q0 outside joint limits, clamped (max change " << (c - q0).lpNorm<Eigen::Infinity>() << ")";
  warnings.push_back(msg.str());
  return c;
}

}  // namespace

PlanResult plan_to_goal(const KinematicChain& chain, const SurfacePointSet& points, const GripperPointSet& gripper,
                        const DistanceField& field, const JointConfig& q0_in, const RigidTransform& goal,
                        const JointConfig& q_ik, const PlannerConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  config.validate();
  PlanResult r;
  const JointConfig q0 = clamp_start(chain, q0_in, r.warnings);
  GoalSolve s = solve_goal(chain, points, gripper, field, q0, goal, chain.clamp(q_ik), config);
  r.plan = std::move(s.plan);
  r.plan.selected_goal_index = 0;
  r.report = std::move(s.report);
  r.objective = s.parts;
  r.initial_objective = s.initial;
  r.per_goal.push_back(summarize(0, r.report, s.parts, s.initial));
  r.goals_total = r.goals_after_collision_filter = r.goals_after_ik_filter = 1;
  finish(r, chain, GoalSet{goal}, 0, config);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

PlanResult plan(const KinematicChain& chain, const SurfacePointSet& points, const GripperPointSet& gripper,
                const DistanceField& field, const JointConfig& q0_in, const GoalSet& goals,
                const PlannerConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  config.validate();
  PlanResult r;
  const JointConfig q0 = clamp_start(chain, q0_in, r.warnings);
  r.goals_total = static_cast<int>(goals.size());

  const std::vector<int> free_goals = filter_goals_collision(field, gripper, goals);
  r.goals_after_collision_filter = static_cast<int>(free_goals.size());
  std::vector<IkCandidate> candidates =
      filter_goals_ik(chain, gripper, goals, free_goals, default_ik_seeds(chain, q0, config.ik_seed));
  r.goals_after_ik_filter = static_cast<int>(candidates.size());
  if (candidates.empty()) {
    std::ostringstream msg;
    msg << "no feasible goal: " << goals.size() << " goals, " << free_goals.size() << " collision-free, 0 with IK";
    throw NoFeasibleGoal(msg.str());
  }
  candidates = rank_initializations(field, chain, points, q0, std::move(candidates), config);
  if (static_cast<int>(candidates.size()) > config.top_n_goals) candidates.resize(config.top_n_goals);

  bool have = false;
  for (const auto& c : candidates) {
    GoalSolve s = solve_goal(chain, points, gripper, field, q0, goals[c.goal_index], c.q_ik, config);
    GoalSolveSummary summary = summarize(c.goal_index, s.report, s.parts, s.initial);
    summary.interpolation_cost = c.interpolation_cost;
    r.per_goal.push_back(summary);
    if (!have || s.parts.total < r.objective.total) {
      have = true;
      r.plan = std::move(s.plan);
      r.plan.selected_goal_index = c.goal_index;
      r.report = std::move(s.report);
      r.objective = s.parts;
      r.initial_objective = s.initial;
    }
  }
  finish(r, chain, goals, r.plan.selected_goal_index, config);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace pcgrasp
