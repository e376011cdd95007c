#pragma once

#include "pcgrasp/costs.hpp"
#include "pcgrasp/ik.hpp"
#include "pcgrasp/scene.hpp"
#include "pcgrasp/solver.hpp"
#include "pcgrasp/trajectory.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcgrasp {

struct PlannerConfig {
  int T = 50;
  double horizon = 10.0;  // seconds
  double lambda1 = 10.0;  // collision weight
  double lambda2 = 0.01;  // velocity weight
  int delta = 10;         // standoff steps before the end
  double eps = 0.02;      // collision margin, meters
  double standoff_offset = 0.10;
  Vec3 approach_axis = Vec3::UnitZ();  // tool frame
  int top_n_goals = 3;
  bool reduced = false;  // velocity-only variables
  std::uint64_t ik_seed = 0;
  SolveOptions solver = default_solver_options();

  double dt() const { return horizon / T; }
  int standoff_index() const { return T - 1 - delta; }  // zero-based
  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;

  static SolveOptions default_solver_options();
};

class NoFeasibleGoal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Goals for which fewer than kCollisionPointThreshold gripper points land on
/// negative signed distance.
std::vector<int> filter_goals_collision(const DistanceField& field, const GripperPointSet& gripper,
                                        const GoalSet& goals, const std::vector<int>& indices);
std::vector<int> filter_goals_collision(const DistanceField& field, const GripperPointSet& gripper,
                                        const GoalSet& goals);

struct IkCandidate {
  int goal_index = -1;
  JointConfig q_ik;
  double interpolation_cost = 0.0;  // filled by rank_initializations
};

/// Goals among `indices` with a successful IK solution, in input order.
std::vector<IkCandidate> filter_goals_ik(const KinematicChain& chain, const GripperPointSet& gripper,
                                         const GoalSet& goals, const std::vector<int>& indices,
                                         const std::vector<JointConfig>& q_inits);

/// q0 + (t / (T - 1)) (q1 - q0), t = 0..T-1.
Eigen::MatrixXd interpolate(const JointConfig& q0, const JointConfig& q1, int T);

/// Sorts by summed collision cost of the straight joint-space interpolation;
/// costs within 1e-9 are ordered by |q_ik - q0|.
std::vector<IkCandidate> rank_initializations(const DistanceField& field, const KinematicChain& chain,
                                              const SurfacePointSet& points, const JointConfig& q0,
                                              std::vector<IkCandidate> candidates, const PlannerConfig& config);

struct ObjectiveBreakdown {
  double goal = 0.0;
  double standoff = 0.0;
  double collision = 0.0;  // unweighted sum over steps
  double velocity = 0.0;   // unweighted sum of squared velocities
  double total = 0.0;      // goal + standoff + lambda1 collision + lambda2 velocity
};

/// The fixed-goal trajectory objective over the full variable vector
/// [positions (T x n, row per step), velocities (T x n)].
class TrajectoryObjective {
 public:
  TrajectoryObjective(const KinematicChain& chain, const SurfacePointSet& points,
                      const GripperPointSet& gripper, const DistanceField& field, const RigidTransform& goal,
                      const PlannerConfig& config);

  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const;
  ObjectiveBreakdown breakdown(const Eigen::VectorXd& x) const;
  const RigidTransform& standoff_goal() const { return standoff_; }

 private:
  double evaluate(const Eigen::VectorXd& x, Eigen::VectorXd* grad, ObjectiveBreakdown* parts) const;

  const KinematicChain& chain_;
  const SurfacePointSet& points_;
  const GripperPointSet& gripper_;
  const DistanceField& field_;
  RigidTransform goal_;
  RigidTransform standoff_;
  PlannerConfig config_;
};

Eigen::VectorXd pack_trajectory(const Eigen::MatrixXd& positions, const Eigen::MatrixXd& velocities);
void unpack_trajectory(const Eigen::VectorXd& x, int T, int n, Eigen::MatrixXd& positions,
                       Eigen::MatrixXd& velocities);

/// Feasible start: rest at q0 for one step, then uniform motion to q_goal.
TrajectoryPlan initial_trajectory(const JointConfig& q0, const JointConfig& q_goal, const PlannerConfig& config);

/// The trajectory NLP for one goal: bounds fix q_1 = q0 and the boundary
/// velocities, equalities enforce q_{t+1} = q_t + dq_t dt.
NlpProblem build_trajectory_problem(const KinematicChain& chain, const TrajectoryObjective& objective,
                                    const JointConfig& q0, const TrajectoryPlan& init, const PlannerConfig& config);

struct GoalSolveSummary {
  int goal_index = -1;
  double initial_objective = 0.0;
  double interpolation_cost = 0.0;
  ObjectiveBreakdown objective;
  double max_equality_residual = 0.0;
  double projected_gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  double wall_time = 0.0;
};

struct PlanResult {
  TrajectoryPlan plan;
  SolveReport report;
  ObjectiveBreakdown objective;
  double initial_objective = 0.0;
  IkResult final_pose;         // tool pose errors at the last step
  IkResult standoff_pose;      // tool pose errors at the standoff step
  std::vector<GoalSolveSummary> per_goal;
  int goals_total = 0;
  int goals_after_collision_filter = 0;
  int goals_after_ik_filter = 0;
  std::vector<std::string> warnings;
  double wall_time = 0.0;
};

/// Filters the goals, ranks the IK candidates and solves the trajectory NLP
/// for the top candidates, keeping the smallest final objective.
PlanResult plan(const KinematicChain& chain, const SurfacePointSet& points, const GripperPointSet& gripper,
                const DistanceField& field, const JointConfig& q0, const GoalSet& goals,
                const PlannerConfig& config = {});

/// Solves the NLP for a single goal from a given IK configuration.
PlanResult plan_to_goal(const KinematicChain& chain, const SurfacePointSet& points, const GripperPointSet& gripper,
                        const DistanceField& field, const JointConfig& q0, const RigidTransform& goal,
                        const JointConfig& q_ik, const PlannerConfig& config = {});

}  // namespace pcgrasp
