#include "pcgrasp/ik.hpp"

#include "pcgrasp/solver.hpp"

#include <random>

namespace pcgrasp {

IkResult evaluate_ik(const KinematicChain& chain, const JointConfig& q, const RigidTransform& goal) {
  IkResult r;
  r.q_star = q;
  const RigidTransform pose = chain.compute_state(q).link_poses[chain.tool_index()];
  r.translation_error = (pose.translation - goal.translation).norm();
  r.rotation_error = rotation_angle_between(pose.rotation, goal.rotation);
  r.success = r.translation_error < kIkTranslationTolerance && r.rotation_error < kIkRotationTolerance;
  return r;
}

IkResult solve_ik(const KinematicChain& chain, const GripperPointSet& gripper, const RigidTransform& goal,
                  const JointConfig& q_init, GoalCostKind kind, const IkOptions& options) {
  if (q_init.size() != chain.dof()) throw DimensionError("q_init has the wrong length");
  NlpProblem p;
  p.dim = chain.dof();
  p.lower = chain.lower_limits();
  p.upper = chain.upper_limits();
  p.x0 = chain.clamp(q_init);
  p.objective = [&](const Eigen::VectorXd& q, Eigen::VectorXd& g) {
    return tool_goal_cost(kind, chain, chain.compute_state(q), goal, gripper, g);
  };
  SolveOptions so;
  so.max_outer = 1;
  so.max_inner = options.max_iterations;
  so.grad_tol = options.grad_tol;
  const SolveReport rep = solve(p, so);
  IkResult r = evaluate_ik(chain, rep.x_star, goal);
  r.objective_value = rep.objective_value;
  r.iterations = rep.iterations;
  return r;
}

std::vector<IkResult> batch_ik(const KinematicChain& chain, const GripperPointSet& gripper, const GoalSet& goals,
                               const std::vector<JointConfig>& q_inits, GoalCostKind kind,
                               const IkOptions& options) {
  if (q_inits.empty() && !goals.empty()) throw std::invalid_argument("batch_ik needs at least one initial configuration");
  std::vector<IkResult> out;
  out.reserve(goals.size());
  for (const auto& goal : goals) {
    IkResult best;
    bool have = false;
    for (std::size_t k = 0; k < q_inits.size(); ++k) {
      IkResult r = solve_ik(chain, gripper, goal, q_inits[k], kind, options);
      r.restart = static_cast<int>(k);
      if (r.success) {
        best = std::move(r);
        break;
      }
      if (!have || r.objective_value < best.objective_value) {
        best = std::move(r);
        have = true;
      }
    }
    out.push_back(std::move(best));
  }
  return out;
}

JointConfig random_configuration(const KinematicChain& chain, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::VectorXd lo = chain.lower_limits(), hi = chain.upper_limits();
  JointConfig q(chain.dof());
  for (int i = 0; i < chain.dof(); ++i) q[i] = lo[i] + unit(rng) * (hi[i] - lo[i]);
  return q;
}

std::vector<JointConfig> default_ik_seeds(const KinematicChain& chain, const JointConfig& current,
                                          std::uint64_t seed) {
  return {chain.mid_configuration(), chain.clamp(current), random_configuration(chain, seed)};
}

}  // namespace pcgrasp
