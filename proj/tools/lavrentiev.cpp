#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lavrentiev/experiments.hpp"

namespace {

constexpr int kInvalidConfig = 2;
constexpr int kSolverFailure = 3;

struct Options {
  std::string experiment = "exp1";
  double lambda = 0.0;
  double bulk = 0.3;
  double max_ndof = 0.0;
  std::string quadrature;
  std::string solver;
  std::string scheme = "both";
  std::string out;
  std::string lambdas;
  bool cr_exact = false;
  bool cold_start = false;
  int refine = 0;
};

lavrentiev::ExperimentSpec to_spec(const Options& o, bool lambda_given, bool ndof_given) {
  lavrentiev::ExperimentSpec spec;
  lavrentiev::experiment_preset(o.experiment);
  spec.name = o.experiment;
  if (lambda_given) spec.lambda = o.lambda;
  spec.theta = o.bulk;
  if (ndof_given) spec.max_ndof = static_cast<int>(o.max_ndof);
  spec.scheme = lavrentiev::scheme_from_string(o.scheme);
  if (!o.quadrature.empty()) spec.quadrature = lavrentiev::point_rule_from_string(o.quadrature);
  if (!o.solver.empty()) spec.solver = lavrentiev::solver_method_from_string(o.solver);
  spec.cr_exact = o.cr_exact;
  spec.warm_start = !o.cold_start;
  lavrentiev::make_config(spec);
  return spec;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad lambda entry '" + item + "'");
    values.push_back(v);
  }
  if (values.empty()) throw std::invalid_argument("--lambdas needs at least one value");
  return values;
}

/// Writes to the file named by path, or stdout when the path is empty.
template <typename Writer>
void emit(const std::string& path, Writer&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
  write(file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonconforming and conforming FEM for Lavrentiev-gap energies"};
  app.require_subcommand(1);
  Options o;

  const auto add_common = [&o](CLI::App* cmd) {
    cmd->add_option("--experiment", o.experiment, "exp1|exp2|exp3|exp4|bad_quadrature|multi_saddle");
    cmd->add_option("--bulk", o.bulk, "Doerfler bulk parameter");
    cmd->add_option("--max-ndof", o.max_ndof, "stop once the CR dimension exceeds this");
    cmd->add_option("--quadrature", o.quadrature, "barycenter|min|patch-max|patch-min");
    cmd->add_option("--solver", o.solver, "newton|kacanov");
    cmd->add_option("--scheme", o.scheme, "cr|p1|both");
    cmd->add_option("--out", o.out, "output CSV (stdout if omitted)");
    cmd->add_flag("--cold-start", o.cold_start, "start every level from the p=2 solution");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "adaptive run, CSV convergence history");
  add_common(run_cmd);
  CLI::Option* lambda_opt = run_cmd->add_option("--lambda", o.lambda, "boundary scaling");
  run_cmd->add_flag("--cr-exact", o.cr_exact, "add EnergyCRexact: CR minimiser under the order-5 rule");

  CLI::App* scan_cmd = app.add_subcommand("scan", "final energies over a list of lambdas");
  add_common(scan_cmd);
  scan_cmd->add_option("--lambdas", o.lambdas, "comma separated list")->required();

  CLI::App* check_cmd = app.add_subcommand("check", "condition checks for all integrands");
  CLI::App* dump_cmd = app.add_subcommand("mesh-dump", "write the initial mesh of an experiment");
  dump_cmd->add_option("--experiment", o.experiment);
  dump_cmd->add_option("--refine", o.refine, "uniform refinements")->check(CLI::NonNegativeNumber);
  dump_cmd->add_option("--out", o.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalidConfig;
  }

  try {
    if (*run_cmd || *scan_cmd) {
      const bool ndof_given = (*run_cmd ? run_cmd : scan_cmd)->count("--max-ndof") > 0;
      if (ndof_given && !(o.max_ndof >= 1.0 && o.max_ndof < 2.0e9)) {
        throw std::invalid_argument("--max-ndof out of range");
      }
      const auto spec = to_spec(o, *run_cmd && lambda_opt->count() > 0, ndof_given);
      if (*run_cmd) {
        const auto result = lavrentiev::run(spec);
        emit(o.out, [&](std::ostream& s) { lavrentiev::write_convergence_csv(s, result); });
        if (result.adaptive.failure) {
          std::cerr << "solver failure: " << *result.adaptive.failure << "\n";
          return kSolverFailure;
        }
      } else {
        const auto rows = lavrentiev::scan(spec, parse_list(o.lambdas));
        emit(o.out, [&](std::ostream& s) { lavrentiev::write_scan_csv(s, spec, rows); });
        for (const auto& row : rows) {
          if (row.failure) return kSolverFailure;
        }
      }
      return 0;
    }
    if (*check_cmd) {
      lavrentiev::check_report(std::cout);
      return 0;
    }
    if (*dump_cmd) {
      lavrentiev::Mesh mesh = lavrentiev::experiment_preset(o.experiment).initial;
      for (int k = 0; k < o.refine; ++k) mesh = mesh.refine_uniform();
      emit(o.out, [&](std::ostream& s) { mesh.write(s); });
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverFailure;
  }
  return 0;
}
