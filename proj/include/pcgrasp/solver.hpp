#pragma once

#include <Eigen/Core>

#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pcgrasp {

/// a^T x = rhs with a stored as (index, coefficient) pairs.
struct LinearEquality {
  std::vector<std::pair<int, double>> coeffs;
  double rhs = 0.0;

  double residual(const Eigen::VectorXd& x) const;
};

/// Returns f(x) and writes grad f(x) into the second argument (already sized).
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

inline constexpr double kUnbounded = 1.0e20;

struct NlpProblem {
  int dim = 0;
  Objective objective;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::vector<LinearEquality> equalities;
  Eigen::VectorXd x0;

  /// Throws std::invalid_argument on inconsistent sizes, crossed bounds or
  /// empty equality rows.
  void validate() const;
};

struct SolveOptions {
  int max_outer = 30;
  int max_inner = 200;
  double eq_tol = 1e-6;
  double grad_tol = 1e-6;
  double initial_penalty = 10.0;
  double penalty_growth = 5.0;
  double max_penalty = 1e8;
  int lbfgs_memory = 10;
  /// Start the multipliers at the least-squares fit of grad f + A^T lambda = 0
  /// on the free variables instead of zero.
  bool least_squares_multipliers = true;
  /// Cap on objective evaluations over the whole solve; 0 means none.
  int max_evaluations = 0;
};

struct OuterIterate {
  double merit_start = 0.0;  // merit at the start of the inner solve
  double merit_end = 0.0;    // merit at its end, same multipliers and penalty
  double residual = 0.0;
  double penalty = 0.0;
  int inner_iterations = 0;
};

struct SolveReport {
  Eigen::VectorXd x_star;
  double objective_value = 0.0;
  double max_equality_residual = 0.0;
  double projected_gradient_norm = 0.0;  // of the Lagrangian, infinity norm
  int iterations = 0;                    // total accepted inner steps
  int evaluations = 0;                   // objective calls
  int outer_iterations = 0;
  bool converged = false;
  double wall_time = 0.0;  // seconds
  std::vector<OuterIterate> history;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Augmented Lagrangian on the equalities, projected L-BFGS on the box.
SolveReport solve(const NlpProblem& problem, const SolveOptions& options = {});

/// Max over coordinates of |g - g_fd| divided by max(|g_fd|_inf, 1e-6),
/// with central differences of the given step.
double check_gradient(const NlpProblem& problem, const Eigen::VectorXd& x, double step = 1e-6);
double check_gradient(const Objective& objective, const Eigen::VectorXd& x, double step = 1e-6);

}  // namespace pcgrasp
