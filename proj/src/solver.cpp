#include "lavrentiev/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/SparseCholesky>

namespace lavrentiev {

std::string_view to_string(SolverMethod method) {
  return method == SolverMethod::Newton ? "newton" : "kacanov";
}

SolverMethod solver_method_from_string(std::string_view name) {
  if (name == "newton") return SolverMethod::Newton;
  if (name == "kacanov") return SolverMethod::Kacanov;
  throw std::invalid_argument("unknown solver '" + std::string(name) + "' (expected newton|kacanov)");
}

std::string_view to_string(Termination termination) {
  switch (termination) {
    case Termination::Converged: return "converged";
    case Termination::MaxIters: return "max-iters";
    case Termination::LineSearchFailure: return "line-search-failure";
  }
  return "?";
}

void SolverConfig::validate() const {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(grad_tol) || !positive(armijo) || !positive(min_step) || !positive(linear_tol)) {
    throw std::invalid_argument("SolverConfig: tolerances must be positive");
  }
  if (armijo >= 1.0) throw std::invalid_argument("SolverConfig: armijo slope must be < 1");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw std::invalid_argument("SolverConfig: backtrack factor must lie in (0,1)");
  if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  if (!positive(weight_min) || !(weight_min < weight_max)) {
    throw std::invalid_argument("SolverConfig: weight clamp needs 0 < lower < upper");
  }
}

double energy_change(const EnergyProblem& problem, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  // Neumaier summation of the per-triangle differences.
  double sum = 0.0;
  double carry = 0.0;
  const auto add = [&](double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) carry += (sum - t) + x;
    else carry += (x - t) + sum;
    sum = t;
  };
  for (int t = 0; t < problem.mesh().num_triangles(); ++t) {
    add(problem.element_energy(v, t) - problem.element_energy(u, t));
  }
  const Eigen::VectorXd& b = problem.load();
  for (int i = 0; i < b.size(); ++i) {
    if (b[i] != 0.0) add(-b[i] * (v[i] - u[i]));
  }
  return sum + carry;
}

namespace {

class DirectionSolver {
 public:
  explicit DirectionSolver(const EnergyProblem& problem) : problem_(problem) {}

  /// Solves A d = rhs; escalates a diagonal shift on the free DOFs while the
  /// factorisation fails, reports a non-positive pivot, or (when require_descent)
  /// d is no descent direction for -rhs.
  std::optional<Eigen::VectorXd> solve(SparseMatrix matrix, const Eigen::VectorXd& rhs, bool require_descent,
                                       int& shifts) {
    if (!analyzed_) {
      ldlt_.analyzePattern(matrix);
      analyzed_ = true;
    }
    double max_diag = 0.0;
    for (int i = 0; i < matrix.rows(); ++i) {
      if (!problem_.is_fixed(i)) max_diag = std::max(max_diag, std::abs(matrix.coeff(i, i)));
    }
    if (max_diag == 0.0) max_diag = 1.0;
    double shift = 0.0;
    double applied = 0.0;
    for (int attempt = 0; attempt < 24; ++attempt) {
      if (shift != applied) {
        for (int i = 0; i < matrix.rows(); ++i) {
          if (!problem_.is_fixed(i)) matrix.coeffRef(i, i) += shift - applied;
        }
        applied = shift;
      }
      ldlt_.factorize(matrix);
      if (ldlt_.info() == Eigen::Success && ldlt_.vectorD().minCoeff() > 0.0) {
        Eigen::VectorXd d = ldlt_.solve(rhs);
        if (d.allFinite() && (!require_descent || rhs.dot(d) > 0.0 || rhs.isZero(0.0))) {
          if (shift > 0.0) ++shifts;
          return d;
        }
      }
      shift = shift == 0.0 ? 1e-12 * max_diag : 10.0 * shift;
    }
    return std::nullopt;
  }

 private:
  const EnergyProblem& problem_;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  bool analyzed_ = false;
};

/// Relative size below which energy decreases are treated as rounding noise.
constexpr double kResolution = 1e-14;

double max_norm(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

SolveReport descend(const EnergyProblem& problem, const SolverConfig& config, Eigen::VectorXd u, bool newton) {
  config.validate();
  if (u.size() != problem.num_dofs()) throw std::invalid_argument("solve: initial guess has the wrong size");
  problem.impose(u);

  SolveReport report;
  DirectionSolver linear(problem);
  double energy = problem.energy(u);
  Eigen::VectorXd g = problem.gradient(u);
  double residual = max_norm(g);
  report.trace.push_back({energy, residual, 0.0});

  for (;;) {
    if (residual <= config.grad_tol) {
      report.termination = Termination::Converged;
      break;
    }
    if (report.iterations >= config.max_iters) {
      report.termination = Termination::MaxIters;
      break;
    }
    Linearization lin = newton ? problem.hessian(u) : problem.weighted_laplacian(u, config.weight_min, config.weight_max);
    report.clamped = std::max(report.clamped, lin.clamped);
    const Eigen::VectorXd rhs = -g;
    const auto d = linear.solve(std::move(lin.matrix), rhs, true, report.shifts);
    if (!d) {
      report.termination = Termination::LineSearchFailure;
      break;
    }
    const double slope = g.dot(*d);
    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd v;
    std::optional<Eigen::VectorXd> gv;
    double change = 0.0;
    if (-slope > kResolution * (1.0 + std::abs(energy))) {
      while (step >= config.min_step) {
        v = u + step * *d;
        change = energy_change(problem, u, v);
        if (change <= config.armijo * step * slope) {
          accepted = true;
          break;
        }
        step *= config.backtrack;
      }
    } else {
      // The predicted decrease is below the resolution of F; minimise along d
      // through the directional derivative, which stays resolvable.
      const auto derivative = [&](double t) { return problem.gradient(u + t * *d).dot(*d); };
      double lo = 0.0;
      double hi = 1.0;
      if (derivative(hi) > 0.0) {
        for (int k = 0; k < 60 && hi - lo > config.min_step; ++k) {
          const double mid = 0.5 * (lo + hi);
          (derivative(mid) > 0.0 ? hi : lo) = mid;
        }
        step = lo > 0.0 ? lo : hi;
      }
      v = u + step * *d;
      change = energy_change(problem, u, v);
      gv = problem.gradient(v);
      accepted = change <= kResolution * (1.0 + std::abs(energy)) && max_norm(*gv) < residual;
      if (!accepted) gv.reset();
    }
    if (!accepted) {
      report.termination = Termination::LineSearchFailure;
      break;
    }
    u = std::move(v);
    energy = problem.energy(u);
    g = gv ? std::move(*gv) : problem.gradient(u);
    residual = max_norm(g);
    ++report.iterations;
    report.trace.push_back({energy, residual, step});
  }
  report.energy = problem.energy(u);
  report.coefficients = std::move(u);
  return report;
}

}  // namespace

Eigen::VectorXd harmonic_initial_guess(const EnergyProblem& problem) {
  const Mesh& mesh = problem.mesh();
  EnergyProblem quadratic(problem.handler(), DensityField::one_point(mesh, Integrand::power(2.0), {}),
                          [&problem](const Vec2& x) { return problem.boundary_data(x); }, problem.load_function());
  Eigen::VectorXd u = quadratic.boundary_lift();
  const Eigen::VectorXd g = quadratic.gradient(u);
  DirectionSolver linear(quadratic);
  int shifts = 0;
  const auto d = linear.solve(quadratic.stiffness().matrix, -g, false, shifts);
  if (!d) throw std::runtime_error("harmonic_initial_guess: stiffness factorisation failed");
  u += *d;
  problem.impose(u);
  return u;
}

SolveReport newton_solve(const EnergyProblem& problem, const SolverConfig& config, Eigen::VectorXd initial) {
  return descend(problem, config, std::move(initial), true);
}

SolveReport kacanov_solve(const EnergyProblem& problem, const SolverConfig& config, Eigen::VectorXd initial) {
  return descend(problem, config, std::move(initial), false);
}

SolveReport solve(const EnergyProblem& problem, const SolverConfig& config, Eigen::VectorXd initial) {
  return config.method == SolverMethod::Newton ? newton_solve(problem, config, std::move(initial))
                                               : kacanov_solve(problem, config, std::move(initial));
}

SolveReport solve(const EnergyProblem& problem, const SolverConfig& config) {
  return solve(problem, config, harmonic_initial_guess(problem));
}

}  // namespace lavrentiev
