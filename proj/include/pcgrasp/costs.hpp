#pragma once

#include "pcgrasp/kinematics.hpp"
#include "pcgrasp/robot_model.hpp"
#include "pcgrasp/scene.hpp"
#include "pcgrasp/trajectory.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <string_view>
#include <vector>

namespace pcgrasp {

/// Candidate gripper poses (tool link pose in the base frame).
using GoalSet = std::vector<RigidTransform>;

/// JSON array of {"pose": [16 row-major values]}.
GoalSet read_goal_set(const std::filesystem::path& path);
void write_goal_set(const std::filesystem::path& path, const GoalSet& goals);

enum class GoalCostKind { point_matching, quaternion, euler };
std::string_view goal_cost_name(GoalCostKind kind);
GoalCostKind parse_goal_cost_kind(std::string_view name);  // "pm" | "quat" | "euler"

/// Pre-grasp pose: goal displaced by -offset along the tool approach axis.
RigidTransform standoff_pose(const RigidTransform& goal, double offset,
                             const Vec3& approach_axis = Vec3::UnitZ());

/// sum_i |(R_T x_i + t_T) - (R_g x_i + t_g)|^2 over the gripper points.
double goal_cost(const RigidTransform& pose, const RigidTransform& goal, const GripperPointSet& gripper);
/// |t_T - t_g|^2 + 1 - (q_T . q_g)^2 with unit quaternions.
double goal_cost_quaternion(const RigidTransform& pose, const RigidTransform& goal);
/// |t_T - t_g|^2 + |e_T - e_g|^2 with intrinsic XYZ Euler angles.
double goal_cost_euler(const RigidTransform& pose, const RigidTransform& goal);
double goal_cost(GoalCostKind kind, const RigidTransform& pose, const RigidTransform& goal,
                 const GripperPointSet& gripper);

/// Intrinsic XYZ angles (a, b, c) with R = Rx(a) Ry(b) Rz(c); b in [-pi/2, pi/2].
Vec3 euler_xyz(const Mat3& rotation);

/// Cost of the tool pose at `state` plus its joint-space gradient added to grad.
double tool_goal_cost(GoalCostKind kind, const KinematicChain& chain, const FkState& state,
                      const RigidTransform& goal, const GripperPointSet& gripper,
                      Eigen::Ref<Eigen::VectorXd> grad, double weight = 1.0);

Eigen::VectorXd goal_cost_gradient(const KinematicChain& chain, const JointConfig& q,
                                   const RigidTransform& goal, const GripperPointSet& gripper,
                                   GoalCostKind kind = GoalCostKind::point_matching);

/// Scratch buffers reused across collision cost evaluations.
struct CollisionWorkspace {
  WorldPoints world;
  std::vector<double> distance, value, slope;
  std::vector<LinkWrench> wrenches;
};

/// sum over all robot surface points of collision_penalty(d(x_i(q)), eps).
/// When grad is non-empty, adds weight * d(cost)/dq using field.gradient().
double config_collision_cost(const DistanceField& field, const KinematicChain& chain,
                             const FkState& state, const SurfacePointSet& points, double eps,
                             CollisionWorkspace& ws, Eigen::Ref<Eigen::VectorXd> grad, double weight = 1.0);

double config_collision_cost(const DistanceField& field, const KinematicChain& chain,
                             const SurfacePointSet& points, const JointConfig& q, double eps);
Eigen::VectorXd config_collision_gradient(const DistanceField& field, const KinematicChain& chain,
                                          const SurfacePointSet& points, const JointConfig& q, double eps);

/// sum_t |dq_t|^2
double velocity_cost(const Eigen::MatrixXd& velocities);
inline double velocity_cost(const TrajectoryPlan& plan) { return velocity_cost(plan.velocities); }

}  // namespace pcgrasp
