#ifndef LAVRENTIEV_EXPERIMENTS_HPP
#define LAVRENTIEV_EXPERIMENTS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lavrentiev/adapt.hpp"

namespace lavrentiev {

/// Checkerboard boundary function: 1 on |x1| < x2, -1 on |x1| < -x2,
/// x2/|x1| elsewhere (0 at the origin).
double checkerboard(const Vec2& x);

/// Fixed data of an experiment family.
struct ExperimentPreset {
  std::string name;
  Integrand integrand;
  Mesh initial;
  /// Unscaled boundary function.
  ScalarFunction psi;
  PointRule quadrature;
  SolverMethod solver;
  double lambda;
  int max_ndof;
};

const std::vector<std::string>& experiment_names();
/// Throws std::invalid_argument for unknown names.
ExperimentPreset experiment_preset(std::string_view name);

struct ExperimentSpec {
  std::string name = "exp1";
  std::optional<double> lambda;
  double theta = 0.3;
  std::optional<int> max_ndof;
  Scheme scheme = Scheme::Both;
  std::optional<PointRule> quadrature;
  std::optional<SolverMethod> solver;
  bool cr_exact = false;
  bool warm_start = true;
};

/// Resolves the preset defaults and validates; throws std::invalid_argument.
AdaptiveConfig make_config(const ExperimentSpec& spec, Mesh* initial = nullptr);

struct RunResult {
  ExperimentSpec spec;
  AdaptiveResult adaptive;
};

RunResult run(const ExperimentSpec& spec, const std::function<void(const LevelState&)>& observer = {});

struct ScanRow {
  double t;
  std::optional<double> energy_cr;
  std::optional<double> energy_c;
  std::optional<std::string> failure;
};

std::vector<ScanRow> scan(const ExperimentSpec& spec, const std::vector<double>& lambdas);

/// Header, records, and a trailing status comment.
void write_convergence_csv(std::ostream& out, const RunResult& result);
void write_scan_csv(std::ostream& out, const ExperimentSpec& spec, const std::vector<ScanRow>& rows);

/// Condition checks and conjugate probes for every integrand; returns false if
/// any expected property failed.
bool check_report(std::ostream& out);

/// Full-precision number formatting used by the CSV writers.
std::string format_number(double v);

}  // namespace lavrentiev

#endif  // LAVRENTIEV_EXPERIMENTS_HPP
