#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <stdexcept>

namespace pcgrasp {

/// Discretized joint trajectory: T positions and T velocities (rows are steps).
struct TrajectoryPlan {
  Eigen::MatrixXd positions;   // T x n
  Eigen::MatrixXd velocities;  // T x n
  double dt = 0.0;
  int selected_goal_index = -1;
  int standoff_index = -1;  // zero-based row of the standoff step

  int steps() const { return static_cast<int>(positions.rows()); }
  int dof() const { return static_cast<int>(positions.cols()); }
  /// max_t |q_{t+1} - q_t - dq_t dt|_inf
  double dynamics_residual() const;
};

class PlanFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CSV with header "t,dt,q_1..q_n,dq_1..dq_n"; t is the zero-based step index.
/// Values are written with round-trip precision.
void export_plan(const TrajectoryPlan& plan, const std::filesystem::path& path);
TrajectoryPlan import_plan(const std::filesystem::path& path);

}  // namespace pcgrasp
