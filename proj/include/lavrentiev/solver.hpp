#ifndef LAVRENTIEV_SOLVER_HPP
#define LAVRENTIEV_SOLVER_HPP

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "lavrentiev/assembly.hpp"

namespace lavrentiev {

enum class SolverMethod { Newton, Kacanov };

std::string_view to_string(SolverMethod method);
SolverMethod solver_method_from_string(std::string_view name);

struct SolverConfig {
  SolverMethod method = SolverMethod::Newton;
  double grad_tol = 1e-9;
  int max_iters = 200;
  double armijo = 1e-4;
  double backtrack = 0.5;
  double min_step = 1e-12;
  double weight_min = 1e-8;
  double weight_max = 1e8;
  double linear_tol = 1e-12;

  /// Throws std::invalid_argument on inconsistent values.
  void validate() const;
};

enum class Termination { Converged, MaxIters, LineSearchFailure };

std::string_view to_string(Termination termination);

struct IterationRecord {
  double energy;
  double residual;  ///< max-norm of the gradient
  double step;      ///< accepted step length (0 for the initial state)
};

struct SolveReport {
  Eigen::VectorXd coefficients;
  double energy = 0.0;
  int iterations = 0;
  std::vector<IterationRecord> trace;
  Termination termination = Termination::MaxIters;
  /// Diagonal shifts applied over the solve.
  int shifts = 0;
  /// Largest per-iteration clamp count (Hessian radius or Kacanov weight).
  int clamped = 0;

  bool converged() const { return termination == Termination::Converged; }
};

/// u0 with the prescribed boundary values and the free values from the
/// p = 2 problem with the same data.
Eigen::VectorXd harmonic_initial_guess(const EnergyProblem& problem);

/// Damped Newton with Armijo backtracking. The initial guess must carry the
/// boundary values.
SolveReport newton_solve(const EnergyProblem& problem, const SolverConfig& config, Eigen::VectorXd initial);

/// Relinearised weighted-quadratic iteration: the direction solves
/// A(u^k) d = -grad F(u^k) with the Kacanov matrix, followed by the same
/// backtracking as newton_solve.
SolveReport kacanov_solve(const EnergyProblem& problem, const SolverConfig& config, Eigen::VectorXd initial);

/// Dispatches on config.method.
SolveReport solve(const EnergyProblem& problem, const SolverConfig& config, Eigen::VectorXd initial);
SolveReport solve(const EnergyProblem& problem, const SolverConfig& config);

/// F(v) - F(u), summed per triangle with compensation so that differences
/// far below the rounding level of F itself are resolved.
double energy_change(const EnergyProblem& problem, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

}  // namespace lavrentiev

#endif  // LAVRENTIEV_SOLVER_HPP
