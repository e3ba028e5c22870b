#include "lavrentiev/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "lavrentiev/conditions.hpp"

namespace lavrentiev {

double checkerboard(const Vec2& x) {
  const double ax = std::abs(x.x);
  if (ax < x.y) return 1.0;
  if (ax < -x.y) return -1.0;
  return ax == 0.0 ? 0.0 : x.y / ax;
}

namespace {

const Rectangle kSquare{{-1.0, -1.0}, {1.0, 1.0}};

/// Fan around the origin through the boundary points (+-1/2, +-1) and
/// (+-1, +-1/2); resolves the sectors of the continuous exponent.
Mesh sector_mesh() {
  std::vector<Vec2> v{{0.0, 0.0},  {1.0, -0.5}, {1.0, 0.5},  {1.0, 1.0},   {0.5, 1.0},   {-0.5, 1.0}, {-1.0, 1.0},
                      {-1.0, 0.5}, {-1.0, -0.5}, {-1.0, -1.0}, {-0.5, -1.0}, {0.5, -1.0}, {1.0, -1.0}};
  std::vector<Mesh::Triangle> t;
  for (int k = 1; k <= 12; ++k) t.push_back({0, k, k % 12 + 1});
  return Mesh(std::move(v), std::move(t));
}

double x2(const Vec2& x) { return x.y; }

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"exp1", "exp2", "exp3", "exp4", "bad_quadrature", "multi_saddle"};
  return names;
}

ExperimentPreset experiment_preset(std::string_view name) {
  const Mesh square = Mesh::structured(kSquare, 1, 1);
  if (name == "exp1") {
    return {"exp1", Integrand::piecewise_exponent(1.5, 3.0), square, checkerboard, PointRule::Barycenter,
            SolverMethod::Newton, 1.0, 100000};
  }
  if (name == "exp2") {
    return {"exp2", Integrand::continuous_exponent(), sector_mesh(), checkerboard, PointRule::MinExponent,
            SolverMethod::Newton, 5.0, 100000};
  }
  if (name == "exp3") {
    return {"exp3", Integrand::double_phase(1.5, 3.0, 0.0), square, checkerboard, PointRule::Barycenter,
            SolverMethod::Newton, 0.3, 100000};
  }
  if (name == "exp4") {
    return {"exp4", Integrand::borderline(2.0, 2.0), square, checkerboard, PointRule::Barycenter, SolverMethod::Kacanov,
            0.3, 100000};
  }
  if (name == "bad_quadrature") {
    return {"bad_quadrature", Integrand::piecewise_exponent(1.5, 3.0), square, checkerboard, PointRule::PatchMax,
            SolverMethod::Newton, 5.0, 10000};
  }
  if (name == "multi_saddle") {
    const Integrand integrand = Integrand::multi_saddle(1.5, 3.0);
    return {"multi_saddle", integrand, Mesh::structured(integrand.domain(), 3, 1), x2, PointRule::Barycenter,
            SolverMethod::Newton, 1.0, 100000};
  }
  throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

AdaptiveConfig make_config(const ExperimentSpec& spec, Mesh* initial) {
  ExperimentPreset preset = experiment_preset(spec.name);
  const double lambda = spec.lambda.value_or(preset.lambda);
  if (!(std::isfinite(lambda) && lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(spec.theta >= 0.0 && spec.theta <= 1.0)) throw std::invalid_argument("bulk parameter must lie in [0,1]");
  AdaptiveConfig config;
  config.integrand = preset.integrand;
  config.boundary = [psi = preset.psi, lambda](const Vec2& x) { return lambda * psi(x); };
  config.strategy.rule = spec.quadrature.value_or(preset.quadrature);
  if (config.strategy.rule != PointRule::Barycenter && !config.integrand.has_exponent_field()) {
    throw std::invalid_argument("quadrature '" + std::string(to_string(config.strategy.rule)) + "' needs an exponent field");
  }
  config.solver.method = spec.solver.value_or(preset.solver);
  config.theta = spec.theta;
  config.max_ndof = spec.max_ndof.value_or(preset.max_ndof);
  if (config.max_ndof <= preset.initial.num_facets()) {
    throw std::invalid_argument("max-ndof must exceed the initial dimension " + std::to_string(preset.initial.num_facets()));
  }
  config.scheme = spec.scheme;
  config.warm_start = spec.warm_start;
  config.evaluate_cr_exact = spec.cr_exact;
  if (initial) *initial = std::move(preset.initial);
  return config;
}

RunResult run(const ExperimentSpec& spec, const std::function<void(const LevelState&)>& observer) {
  Mesh initial;
  const AdaptiveConfig config = make_config(spec, &initial);
  return {spec, adaptive_loop(initial, config, observer)};
}

std::vector<ScanRow> scan(const ExperimentSpec& spec, const std::vector<double>& lambdas) {
  if (lambdas.empty()) throw std::invalid_argument("scan: empty lambda list");
  std::vector<ScanRow> rows;
  for (double t : lambdas) {
    ExperimentSpec s = spec;
    s.lambda = t;
    s.cr_exact = false;
    const RunResult r = run(s);
    ScanRow row{t, std::nullopt, std::nullopt, r.adaptive.failure};
    if (!r.adaptive.failure && !r.adaptive.records.empty()) {
      row.energy_cr = r.adaptive.records.back().energy_cr;
      row.energy_c = r.adaptive.records.back().energy_c;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string field(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

void write_spec_comment(std::ostream& out, const ExperimentSpec& spec) {
  const ExperimentPreset preset = experiment_preset(spec.name);
  out << "# experiment=" << spec.name << " bulk=" << format_number(spec.theta)
      << " max_ndof=" << spec.max_ndof.value_or(preset.max_ndof) << " scheme=" << to_string(spec.scheme)
      << " quadrature=" << to_string(spec.quadrature.value_or(preset.quadrature))
      << " solver=" << to_string(spec.solver.value_or(preset.solver)) << "\n";
}

}  // namespace

void write_convergence_csv(std::ostream& out, const RunResult& result) {
  const ExperimentPreset preset = experiment_preset(result.spec.name);
  write_spec_comment(out, result.spec);
  out << "# lambda=" << format_number(result.spec.lambda.value_or(preset.lambda)) << "\n";
  out << "ndof,EnergyCR,EnergyC,DistVal,eta_total";
  if (result.spec.cr_exact) out << ",EnergyCRexact";
  out << "\n";
  for (const auto& r : result.adaptive.records) {
    out << r.ndof << "," << field(r.energy_cr) << "," << field(r.energy_c) << "," << field(r.dist_val) << ","
        << field(r.eta_total);
    if (result.spec.cr_exact) out << "," << field(r.energy_cr_exact);
    out << "\n";
  }
  if (result.adaptive.failure) out << "# status: solver failure: " << *result.adaptive.failure << "\n";
  else out << "# status: ok\n";
}

void write_scan_csv(std::ostream& out, const ExperimentSpec& spec, const std::vector<ScanRow>& rows) {
  write_spec_comment(out, spec);
  out << "t,EnergyCR,EnergyC\n";
  bool ok = true;
  for (const auto& row : rows) {
    out << format_number(row.t) << "," << field(row.energy_cr) << "," << field(row.energy_c) << "\n";
    if (row.failure) {
      out << "# t=" << format_number(row.t) << " failed: " << *row.failure << "\n";
      ok = false;
    }
  }
  out << (ok ? "# status: ok\n" : "# status: partial\n");
}

bool check_report(std::ostream& out) {
  struct Case {
    std::string label;
    Integrand integrand;
    Mesh mesh;
    PointStrategy strategy;
    Vec2 probe;
  };
  const Mesh square = Mesh::structured(kSquare, 1, 1);
  std::vector<Case> cases{
      {"power-3", Integrand::power(3.0), square, {}, {0.3, 0.2}},
      {"exp1 piecewise-exponent", Integrand::piecewise_exponent(1.5, 3.0), square, {}, {0.1, 0.5}},
      {"exp2 continuous-exponent", Integrand::continuous_exponent(), sector_mesh(), {PointRule::MinExponent}, {0.3, 0.45}},
      {"exp3 double-phase", Integrand::double_phase(1.5, 3.0, 0.0), square, {}, {0.1, 0.5}},
      {"exp4 borderline", Integrand::borderline(2.0, 2.0), square, {}, {0.1, 0.5}},
      {"multi-saddle", Integrand::multi_saddle(1.5, 3.0), Mesh::structured(Integrand::multi_saddle(1.5, 3.0).domain(), 3, 1),
       {}, {2.1, 0.5}},
  };
  bool all = true;
  const auto line = [&](const std::string& label, const std::string& what, bool pass, const std::string& detail) {
    out << (pass ? "PASS " : "FAIL ") << label << " " << what << " " << detail << "\n";
    all = all && pass;
  };
  for (const auto& c : cases) {
    const auto d2 = check_delta2(c.integrand);
    line(c.label, "delta2", d2.holds, "C=" + format_number(d2.constant) + " C0=" + format_number(d2.offset));
    const auto n2 = check_nabla2(c.integrand);
    line(c.label, "nabla2", n2.holds, "K=" + format_number(n2.constant) + " K0=" + format_number(n2.offset));
    const double a1 = check_A1(c.integrand, c.mesh, c.strategy);
    line(c.label, "A1", a1 > 0.0, "c=" + format_number(a1));
    const auto b = check_B(c.integrand, c.mesh, c.strategy);
    line(c.label, "B", b.holds,
         "c_phi=" + format_number(b.threshold) + " violations=" + std::to_string(b.violations));
    std::vector<Mesh> meshes{c.mesh};
    for (int k = 0; k < 4; ++k) meshes.push_back(meshes.back().refine_uniform());
    const auto dev = conjugate_convergence_probe(c.integrand, meshes, c.strategy, c.probe, {0.7, -0.4});
    line(c.label, "conjugate-probe", dev.back() <= dev.front() + 1e-12,
         "first=" + format_number(dev.front()) + " last=" + format_number(dev.back()));
  }
  return all;
}

}  // namespace lavrentiev
