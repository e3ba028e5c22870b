#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <sstream>
#include <string>

#include "lavrentiev/experiments.hpp"

using namespace lavrentiev;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::string convergence_csv(const ExperimentSpec& spec) {
  std::stringstream ss;
  write_convergence_csv(ss, run(spec));
  return ss.str();
}

}  // namespace

TEST_CASE("checkerboard boundary function") {
  CHECK(checkerboard({0.2, 0.5}) == 1.0);
  CHECK(checkerboard({-0.2, -0.5}) == -1.0);
  CHECK(checkerboard({0.8, 0.4}) == doctest::Approx(0.5));
  CHECK(checkerboard({-0.8, -0.4}) == doctest::Approx(-0.5));
  CHECK(checkerboard({0, 0}) == 0.0);
  // Equal to x2 on the boundary of the square.
  for (double s = -1; s <= 1; s += 0.125) {
    CHECK(checkerboard({s, 1}) == doctest::Approx(1.0));
    CHECK(checkerboard({1, s}) == doctest::Approx(s));
    CHECK(checkerboard({-1, s}) == doctest::Approx(s));
    CHECK(checkerboard({s, -1}) == doctest::Approx(-1.0));
  }
}

TEST_CASE("experiment presets") {
  CHECK(experiment_names().size() == 6);
  for (const auto& name : experiment_names()) {
    const ExperimentPreset p = experiment_preset(name);
    CHECK(p.name == name);
    CHECK(p.initial.check_invariants());
    CHECK(p.lambda > 0.0);
    const Rectangle box = p.integrand.domain();
    CHECK(p.initial.total_area() == doctest::Approx(box.area()).epsilon(1e-14));
  }
  CHECK(experiment_preset("exp1").integrand.kind() == IntegrandKind::PiecewiseExponent);
  CHECK(experiment_preset("exp2").integrand.kind() == IntegrandKind::ContinuousExponent);
  CHECK(experiment_preset("exp2").quadrature == PointRule::MinExponent);
  CHECK(experiment_preset("exp3").integrand.kind() == IntegrandKind::DoublePhase);
  CHECK(experiment_preset("exp3").integrand.params().alpha == 0.0);
  CHECK(experiment_preset("exp4").integrand.kind() == IntegrandKind::BorderlineDoublePhase);
  CHECK(experiment_preset("exp4").solver == SolverMethod::Kacanov);
  CHECK(experiment_preset("bad_quadrature").lambda == 5.0);
  CHECK(experiment_preset("bad_quadrature").max_ndof == 10000);
  const ExperimentPreset ms = experiment_preset("multi_saddle");
  CHECK(ms.integrand.kind() == IntegrandKind::MultiSaddleExponent);
  CHECK(ms.psi({3.0, 0.25}) == 0.25);
  CHECK_THROWS_AS(experiment_preset("exp9"), std::invalid_argument);
}

TEST_CASE("configuration validation") {
  ExperimentSpec spec;
  CHECK_NOTHROW(make_config(spec));
  spec.lambda = 0.0;
  CHECK_THROWS_AS(make_config(spec), std::invalid_argument);
  spec.lambda = -1.0;
  CHECK_THROWS_AS(make_config(spec), std::invalid_argument);
  spec = {};
  spec.theta = 1.5;
  CHECK_THROWS_AS(make_config(spec), std::invalid_argument);
  spec = {};
  spec.name = "exp3";
  spec.quadrature = PointRule::MinExponent;
  CHECK_THROWS_AS(make_config(spec), std::invalid_argument);
  spec = {};
  spec.max_ndof = 4;
  CHECK_THROWS_AS(make_config(spec), std::invalid_argument);

  spec = {};
  spec.name = "bad_quadrature";
  spec.quadrature = PointRule::PatchMin;
  Mesh initial;
  const AdaptiveConfig c = make_config(spec, &initial);
  CHECK(c.strategy.rule == PointRule::PatchMin);
  CHECK(c.boundary({1.0, 0.5}) == doctest::Approx(2.5));
  CHECK(initial.num_facets() == 8);
}

TEST_CASE("convergence CSV layout") {
  ExperimentSpec spec;
  spec.name = "exp1";
  spec.lambda = 0.99;
  spec.max_ndof = 300;
  const auto lines = lines_of(convergence_csv(spec));
  REQUIRE(lines.size() >= 5);
  CHECK(lines[0].rfind("# experiment=exp1", 0) == 0);
  std::size_t header = 0;
  while (header < lines.size() && lines[header].front() == '#') ++header;
  REQUIRE(header < lines.size());
  CHECK(lines[header] == "ndof,EnergyCR,EnergyC,DistVal,eta_total");
  CHECK(lines.back() == "# status: ok");
  for (std::size_t k = header + 1; k + 1 < lines.size(); ++k) {
    std::stringstream row(lines[k]);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 5);
    const double cr = std::stod(cells[1]), c = std::stod(cells[2]), d = std::stod(cells[3]);
    CHECK(d == c - cr);
    // 17 significant digits round-trip.
    CHECK(format_number(std::stod(cells[1])) == cells[1]);
  }
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("reruns are byte-identical") {
  ExperimentSpec spec;
  spec.name = "exp2";
  spec.lambda = 3.0;
  spec.max_ndof = 250;
  spec.cr_exact = true;
  const std::string a = convergence_csv(spec);
  CHECK(a == convergence_csv(spec));
  CHECK(a.find("ndof,EnergyCR,EnergyC,DistVal,eta_total,EnergyCRexact") != std::string::npos);
}

TEST_CASE("scan table") {
  ExperimentSpec spec;
  spec.name = "exp1";
  spec.max_ndof = 100;
  const auto rows = scan(spec, {1.0, 0.5});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].t == 1.0);
  CHECK(*rows[0].energy_cr == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(*rows[0].energy_c == doctest::Approx(2.0).epsilon(1e-10));
  std::stringstream ss;
  write_scan_csv(ss, spec, rows);
  const auto lines = lines_of(ss.str());
  std::size_t header = 0;
  while (lines[header].front() == '#') ++header;
  CHECK(lines[header] == "t,EnergyCR,EnergyC");
  CHECK(lines[header + 1].rfind("1,2", 0) == 0);
  CHECK(lines.back() == "# status: ok");
  CHECK_THROWS_AS(scan(spec, {}), std::invalid_argument);
}

TEST_CASE("scheme-restricted CSV leaves missing fields empty") {
  ExperimentSpec spec;
  spec.name = "exp3";
  spec.scheme = Scheme::CR;
  spec.max_ndof = 100;
  const auto lines = lines_of(convergence_csv(spec));
  std::size_t header = 0;
  while (lines[header].front() == '#') ++header;
  const std::string& row = lines[header + 1];
  CHECK(row.find(",,,") != std::string::npos);
}

TEST_CASE("condition report") {
  std::stringstream ss;
  CHECK(check_report(ss));
  const std::string text = ss.str();
  CHECK(text.find("FAIL") == std::string::npos);
  CHECK(text.find("PASS") != std::string::npos);
}

TEST_CASE("failed runs keep the partial history") {
  RunResult r;
  r.spec.name = "exp1";
  r.spec.lambda = 2.0;
  ConvergenceRecord rec;
  rec.ndof = 8;
  rec.energy_cr = 1.5;
  rec.eta_total = 0.25;
  r.adaptive.records.push_back(rec);
  r.adaptive.failure = "P1 solve at ndof 8: max-iters";
  std::stringstream ss;
  write_convergence_csv(ss, r);
  const auto lines = lines_of(ss.str());
  CHECK(lines.back() == "# status: solver failure: P1 solve at ndof 8: max-iters");
  CHECK(lines[lines.size() - 2] == "8,1.5,,,0.25");
}
