#pragma once

#include "pcgrasp/costs.hpp"
#include "pcgrasp/kinematics.hpp"
#include "pcgrasp/robot_model.hpp"

#include <cstdint>
#include <vector>

namespace pcgrasp {

inline constexpr double kIkTranslationTolerance = 0.01;           // meters
inline constexpr double kIkRotationTolerance = 5.0 * M_PI / 180.0;  // radians

struct IkResult {
  JointConfig q_star;
  double translation_error = 0.0;  // meters
  double rotation_error = 0.0;     // radians, geodesic
  bool success = false;
  double objective_value = 0.0;
  int iterations = 0;
  int restart = 0;  // which initial configuration produced q_star
};

struct IkOptions {
  int max_iterations = 200;
  double grad_tol = 1e-10;
};

/// Tool pose errors of q against goal, and the success verdict.
IkResult evaluate_ik(const KinematicChain& chain, const JointConfig& q, const RigidTransform& goal);

/// Minimizes the chosen goal cost over the joint box starting from q_init.
IkResult solve_ik(const KinematicChain& chain, const GripperPointSet& gripper, const RigidTransform& goal,
                  const JointConfig& q_init, GoalCostKind kind = GoalCostKind::point_matching,
                  const IkOptions& options = {});

/// One result per goal. Each goal tries q_inits in order and keeps the first
/// success, otherwise the attempt with the smallest objective.
std::vector<IkResult> batch_ik(const KinematicChain& chain, const GripperPointSet& gripper,
                               const GoalSet& goals, const std::vector<JointConfig>& q_inits,
                               GoalCostKind kind = GoalCostKind::point_matching, const IkOptions& options = {});

/// Mid-range configuration, the current one (clamped), and one seeded random
/// in-limits sample.
std::vector<JointConfig> default_ik_seeds(const KinematicChain& chain, const JointConfig& current,
                                          std::uint64_t seed = 0);

/// Uniform in-limits configuration.
JointConfig random_configuration(const KinematicChain& chain, std::uint64_t seed);

}  // namespace pcgrasp
