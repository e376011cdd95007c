#include "pcgrasp/solver.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <string>

namespace pcgrasp {

double LinearEquality::residual(const Eigen::VectorXd& x) const {
  double s = 0.0;
  for (const auto& [i, a] : coeffs) s += a * x[i];
  return s - rhs;
}

void NlpProblem::validate() const {
  if (dim <= 0) throw std::invalid_argument("problem dimension must be positive");
  if (!objective) throw std::invalid_argument("problem has no objective");
  if (lower.size() != dim || upper.size() != dim || x0.size() != dim)
    throw std::invalid_argument("bounds and x0 must have the problem dimension");
  for (int i = 0; i < dim; ++i)
    if (!(lower[i] <= upper[i])) throw std::invalid_argument("lower bound exceeds upper at " + std::to_string(i));
  for (const auto& e : equalities) {
    bool nonzero = false;
    for (const auto& [i, a] : e.coeffs) {
      if (i < 0 || i >= dim) throw std::invalid_argument("equality index out of range");
      nonzero = nonzero || a != 0.0;
    }
    if (!nonzero) throw std::invalid_argument("equality row has no nonzero coefficient");
  }
}

namespace {

class AugmentedLagrangian {
 public:
  AugmentedLagrangian(const NlpProblem& p) : p_(p), lambda_(Eigen::VectorXd::Zero(p.equalities.size())) {}

  double penalty = 10.0;
  int max_evaluations = 0;
  mutable int evaluations = 0;
  Eigen::VectorXd& multipliers() { return lambda_; }
  bool exhausted() const { return max_evaluations > 0 && evaluations >= max_evaluations; }

  Eigen::VectorXd residuals(const Eigen::VectorXd& x) const {
    Eigen::VectorXd c(p_.equalities.size());
    for (std::size_t k = 0; k < p_.equalities.size(); ++k) c[k] = p_.equalities[k].residual(x);
    return c;
  }

  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd& g, double* f_out = nullptr) const {
    g.setZero(p_.dim);
    ++evaluations;
    const double f = p_.objective(x, g);
    if (f_out) *f_out = f;
    double merit = f;
    for (std::size_t k = 0; k < p_.equalities.size(); ++k) {
      const auto& e = p_.equalities[k];
      const double c = e.residual(x);
      merit += lambda_[k] * c + 0.5 * penalty * c * c;
      const double w = lambda_[k] + penalty * c;
      for (const auto& [i, a] : e.coeffs) g[i] += w * a;
    }
    return merit;
  }

 private:
  const NlpProblem& p_;
  Eigen::VectorXd lambda_;
};

Eigen::VectorXd project(const Eigen::VectorXd& x, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

/// Gradient with components removed where a bound blocks descent.
Eigen::VectorXd projected_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                                   const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  Eigen::VectorXd pg = g;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (lo[i] == hi[i] || (x[i] <= lo[i] && g[i] > 0.0) || (x[i] >= hi[i] && g[i] < 0.0)) pg[i] = 0.0;
  }
  return pg;
}

/// argmin_lambda |P (g + A^T lambda)| where P drops variables held by a bound.
Eigen::VectorXd least_squares_multipliers(const NlpProblem& p, const Eigen::VectorXd& x, const Eigen::VectorXd& g) {
  const int m = static_cast<int>(p.equalities.size());
  std::vector<char> free(p.dim, 1);
  for (int i = 0; i < p.dim; ++i) {
    if (p.lower[i] == p.upper[i] || x[i] <= p.lower[i] || x[i] >= p.upper[i]) free[i] = 0;
  }
  std::vector<Eigen::Triplet<double>> entries;
  for (int k = 0; k < m; ++k)
    for (const auto& [i, a] : p.equalities[k].coeffs)
      if (free[i]) entries.emplace_back(k, i, a);
  Eigen::SparseMatrix<double> a(m, p.dim);
  a.setFromTriplets(entries.begin(), entries.end());
  Eigen::VectorXd gf = g;
  for (int i = 0; i < p.dim; ++i)
    if (!free[i]) gf[i] = 0.0;
  Eigen::SparseMatrix<double> aat = a * a.transpose();
  Eigen::SparseMatrix<double> reg(m, m);
  reg.setIdentity();
  aat += 1e-10 * reg;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(aat);
  if (ldlt.info() != Eigen::Success) return Eigen::VectorXd::Zero(m);
  Eigen::VectorXd lambda = ldlt.solve(-(a * gf));
  if (ldlt.info() != Eigen::Success || !lambda.allFinite()) return Eigen::VectorXd::Zero(m);
  return lambda;
}

struct InnerResult {
  double merit;
  double pg_norm;
  int iterations;  // accepted steps
};

InnerResult minimize_box(const AugmentedLagrangian& merit_fn, Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                         const Eigen::VectorXd& hi, const SolveOptions& opt) {
  Eigen::VectorXd g(x.size()), g_new(x.size());
  double m = merit_fn(x, g);
  Eigen::VectorXd pg = projected_gradient(x, g, lo, hi);
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> memory;
  std::deque<double> rho;
  int it = 0, accepted_steps = 0;
  bool just_reset = true;
  while (it < opt.max_inner && !merit_fn.exhausted()) {
    if (pg.lpNorm<Eigen::Infinity>() <= opt.grad_tol) break;

    // Two-loop recursion on the free-variable gradient.
    Eigen::VectorXd d = pg;
    std::vector<double> alpha(memory.size());
    for (int k = static_cast<int>(memory.size()) - 1; k >= 0; --k) {
      alpha[k] = rho[k] * memory[k].first.dot(d);
      d -= alpha[k] * memory[k].second;
    }
    if (!memory.empty()) {
      const auto& [s, y] = memory.back();
      d *= s.dot(y) / y.squaredNorm();
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
      const double beta = rho[k] * memory[k].second.dot(d);
      d += (alpha[k] - beta) * memory[k].first;
    }
    d = -d;
    for (Eigen::Index i = 0; i < d.size(); ++i)
      if (pg[i] == 0.0) d[i] = 0.0;
    if (d.dot(pg) >= 0.0) {
      d = -pg;
      memory.clear();
      rho.clear();
    }
    double step = 1.0;
    if (memory.empty()) step = std::min(1.0, 1.0 / std::max(pg.lpNorm<Eigen::Infinity>(), 1e-12));

    // Backtracking along the projected path.
    bool accepted = false;
    Eigen::VectorXd x_new;
    double m_new = m;
    for (int ls = 0; ls < 50 && !merit_fn.exhausted(); ++ls) {
      x_new = project(x + step * d, lo, hi);
      const double decrease = g.dot(x_new - x);
      if (decrease < 0.0) {
        m_new = merit_fn(x_new, g_new);
        if (std::isfinite(m_new) && m_new <= m + 1e-4 * decrease) {
          accepted = true;
          break;
        }
      } else if (ls > 0 || (x_new - x).lpNorm<Eigen::Infinity>() == 0.0) {
        break;
      }
      step *= 0.5;
    }
    ++it;
    if (!accepted) {
      if (just_reset) break;
      memory.clear();
      rho.clear();
      just_reset = true;
      continue;
    }
    just_reset = false;
    ++accepted_steps;
    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
      if (static_cast<int>(memory.size()) == opt.lbfgs_memory) {
        memory.pop_front();
        rho.pop_front();
      }
      memory.emplace_back(std::move(s), std::move(y));
      rho.push_back(1.0 / sy);
    }
    x = std::move(x_new);
    g = g_new;
    m = m_new;
    pg = projected_gradient(x, g, lo, hi);
  }
  return {m, pg.lpNorm<Eigen::Infinity>(), accepted_steps};
}

}  // namespace

SolveReport solve(const NlpProblem& problem, const SolveOptions& options) {
  problem.validate();
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport report;
  Eigen::VectorXd x = project(problem.x0, problem.lower, problem.upper);
  AugmentedLagrangian al(problem);
  al.penalty = options.initial_penalty;
  al.max_evaluations = options.max_evaluations;
  const bool has_eq = !problem.equalities.empty();
  {
    Eigen::VectorXd g(problem.dim);
    g.setZero();
    const double f0 = problem.objective(x, g);
    if (!std::isfinite(f0) || !g.allFinite()) throw SolverError("objective is not finite at the initial point");
    if (has_eq && options.least_squares_multipliers) al.multipliers() = least_squares_multipliers(problem, x, g);
  }
  double prev_residual = has_eq ? al.residuals(x).lpNorm<Eigen::Infinity>() : 0.0;

  double pg_norm = 0.0;
  for (int outer = 0; outer < options.max_outer; ++outer) {
    OuterIterate rec;
    rec.penalty = al.penalty;
    Eigen::VectorXd g(problem.dim);
    rec.merit_start = al(x, g);
    const InnerResult inner = minimize_box(al, x, problem.lower, problem.upper, options);
    rec.merit_end = inner.merit;
    rec.inner_iterations = inner.iterations;
    report.iterations += inner.iterations;
    pg_norm = inner.pg_norm;
    const Eigen::VectorXd c = has_eq ? al.residuals(x) : Eigen::VectorXd();
    rec.residual = has_eq ? c.lpNorm<Eigen::Infinity>() : 0.0;
    report.history.push_back(rec);
    report.outer_iterations = outer + 1;

    if (rec.residual <= options.eq_tol && pg_norm <= options.grad_tol) {
      report.converged = true;
      break;
    }
    if (has_eq) {
      // The inner gradient already used lambda + mu c, so the updated
      // multipliers keep pg_norm as the Lagrangian stationarity measure.
      al.multipliers() += al.penalty * c;
      if (rec.residual > 0.25 * prev_residual) al.penalty = std::min(al.penalty * options.penalty_growth, options.max_penalty);
      prev_residual = rec.residual;
    } else if (inner.iterations == 0) {
      break;  // no step accepted, a restart would repeat it
    }
    if (al.exhausted()) break;
  }

  Eigen::VectorXd g(problem.dim);
  g.setZero();
  report.objective_value = problem.objective(x, g);
  report.max_equality_residual = has_eq ? al.residuals(x).lpNorm<Eigen::Infinity>() : 0.0;
  report.projected_gradient_norm = pg_norm;
  report.evaluations = al.evaluations;
  report.x_star = std::move(x);
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

double check_gradient(const Objective& objective, const Eigen::VectorXd& x, double step) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd g(n), scratch(n), fd(n);
  g.setZero();
  objective(x, g);
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    xp[i] = x[i] + step;
    scratch.setZero();
    const double fp = objective(xp, scratch);
    xp[i] = x[i] - step;
    scratch.setZero();
    const double fm = objective(xp, scratch);
    xp[i] = x[i];
    fd[i] = (fp - fm) / (2.0 * step);
  }
  const double scale = std::max(fd.lpNorm<Eigen::Infinity>(), 1e-6);
  return (g - fd).lpNorm<Eigen::Infinity>() / scale;
}

double check_gradient(const NlpProblem& problem, const Eigen::VectorXd& x, double step) {
  return check_gradient(problem.objective, x, step);
}

}  // namespace pcgrasp
