#include "lavrentiev/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace lavrentiev {

namespace {

constexpr std::array<double, 3> kGaussNodes{0.1127016653792583, 0.5, 0.8872983346207417};
constexpr std::array<double, 3> kGaussWeights{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

}  // namespace

IndicatorField estimate(const EnergyProblem& problem, const DiscreteFunction& u, double p) {
  if (u.handler->kind() != SpaceKind::CrouzeixRaviart) throw std::invalid_argument("estimate: expects a CR function");
  if (!(p > 1.0)) throw std::invalid_argument("estimate: exponent must exceed 1");
  const Mesh& mesh = problem.mesh();
  IndicatorField eta;
  eta.values.assign(mesh.num_triangles(), 0.0);

  for (int e = 0; e < mesh.num_facets(); ++e) {
    const auto [i, j] = mesh.facet(e);
    const Vec2 a = mesh.vertex(i);
    const Vec2 b = mesh.vertex(j);
    const auto [t1, t2] = mesh.facet_triangles(e);
    const double h = mesh.facet_length(e);
    double integral = 0.0;
    for (int q = 0; q < 3; ++q) {
      const double s = kGaussNodes[q];
      const Vec2 x = (1.0 - s) * a + s * b;
      const double other = t2 == Mesh::kNone
                               ? (1.0 - s) * problem.boundary_data(a) + s * problem.boundary_data(b)
                               : u.value(t2, x);
      integral += kGaussWeights[q] * std::pow(std::abs(u.value(t1, x) - other), p);
    }
    const double contribution = std::pow(h, 1.0 - p) * h * integral;
    eta.values[t1] += contribution;
    if (t2 != Mesh::kNone) eta.values[t2] += contribution;
  }

  if (problem.load_function()) {
    const TriangleRule rule = triangle_rule(5);
    const double dual = p / (p - 1.0);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      double integral = 0.0;
      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        integral += rule.weights[q] * std::pow(std::abs(problem.load_function()(map_point(mesh, t, rule.nodes[q]))), dual);
      }
      eta.values[t] += std::pow(mesh.diameter(t), p) * mesh.area(t) * integral;
    }
  }
  for (double v : eta.values) eta.total += v;
  return eta;
}

std::vector<int> doerfler_mark(const IndicatorField& eta, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("doerfler_mark: theta must lie in [0,1]");
  std::vector<int> order(eta.values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return eta.values[a] > eta.values[b]; });
  std::vector<int> marked;
  if (theta == 0.0) return marked;
  // Total in sorted order, so theta = 1 ends exactly at the last positive entry.
  double total = 0.0;
  for (int t : order) total += eta.values[t];
  const double goal = theta * total;
  double sum = 0.0;
  for (int t : order) {
    if (sum >= goal || eta.values[t] <= 0.0) break;
    marked.push_back(t);
    sum += eta.values[t];
  }
  return marked;
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::CR: return "cr";
    case Scheme::P1: return "p1";
    case Scheme::Both: return "both";
  }
  return "?";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "cr") return Scheme::CR;
  if (name == "p1") return Scheme::P1;
  if (name == "both") return Scheme::Both;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "' (expected cr|p1|both)");
}

AdaptiveResult adaptive_loop(const Mesh& initial, const AdaptiveConfig& config,
                             const std::function<void(const LevelState&)>& observer) {
  config.solver.validate();
  if (!(config.theta >= 0.0 && config.theta <= 1.0)) throw std::invalid_argument("adaptive_loop: theta must lie in [0,1]");
  if (config.max_ndof <= initial.num_facets()) {
    throw std::invalid_argument("adaptive_loop: max_ndof must exceed the initial dimension");
  }
  const bool conforming = config.scheme != Scheme::CR;
  const TriangleRule exact_rule = triangle_rule(config.conforming_order);

  AdaptiveResult result;
  auto mesh = std::make_unique<Mesh>(initial);
  std::unique_ptr<DofHandler> cr_prev;
  std::unique_ptr<DofHandler> p1_prev;
  Eigen::VectorXd cr_coarse;
  Eigen::VectorXd p1_coarse;
  std::unique_ptr<Mesh> mesh_prev;

  while (mesh->num_facets() <= config.max_ndof) {
    auto cr = std::make_unique<DofHandler>(*mesh, SpaceKind::CrouzeixRaviart);
    auto p1 = std::make_unique<DofHandler>(*mesh, SpaceKind::Lagrange1);
    const EnergyProblem cr_problem(*cr, DensityField::one_point(*mesh, config.integrand, config.strategy),
                                   config.boundary, config.load);

    const auto start = [&](const EnergyProblem& problem, const std::unique_ptr<DofHandler>& prev,
                           const Eigen::VectorXd& coarse) {
      if (!config.warm_start || !prev) return harmonic_initial_guess(problem);
      Eigen::VectorXd u = prolongate(DiscreteFunction(*prev, coarse), problem.handler()).coefficients;
      problem.impose(u);
      return u;
    };

    ConvergenceRecord record;
    record.ndof = cr->num_dofs();
    const SolveReport cr_report = solve(cr_problem, config.solver, start(cr_problem, cr_prev, cr_coarse));
    if (!cr_report.converged()) {
      result.failure = "CR solve at ndof " + std::to_string(record.ndof) + ": " + std::string(to_string(cr_report.termination));
      break;
    }
    if (config.scheme != Scheme::P1) record.energy_cr = cr_report.energy;

    std::optional<SolveReport> p1_report;
    if (conforming) {
      const EnergyProblem p1_problem(*p1, DensityField::rule(*mesh, config.integrand, exact_rule, config.strategy),
                                     config.boundary, config.load);
      p1_report = solve(p1_problem, config.solver, start(p1_problem, p1_prev, p1_coarse));
      if (!p1_report->converged()) {
        result.failure = "P1 solve at ndof " + std::to_string(record.ndof) + ": " +
                         std::string(to_string(p1_report->termination));
        break;
      }
      record.energy_c = p1_report->energy;
    }
    if (record.energy_cr && record.energy_c) record.dist_val = *record.energy_c - *record.energy_cr;
    if (config.evaluate_cr_exact) {
      const EnergyProblem exact(*cr, DensityField::rule(*mesh, config.integrand, exact_rule, config.strategy),
                                config.boundary, config.load);
      record.energy_cr_exact = exact.energy(cr_report.coefficients);
    }

    const DiscreteFunction u_nc(*cr, cr_report.coefficients);
    const IndicatorField eta = estimate(cr_problem, u_nc, config.integrand.lower_exponent());
    record.eta_total = eta.total;
    result.records.push_back(record);
    result.final_mesh = *mesh;
    if (observer) observer({*mesh, *cr, cr_report, *p1, p1_report ? &*p1_report : nullptr, eta});

    if (eta.total == 0.0) break;
    const auto marked = doerfler_mark(eta, config.theta);
    if (marked.empty()) break;
    auto fine = std::make_unique<Mesh>(mesh->refine(marked));

    cr_coarse = cr_report.coefficients;
    if (p1_report) p1_coarse = p1_report->coefficients;
    // Handlers refer to their mesh, so keep the coarse mesh alive for one level.
    mesh_prev = std::move(mesh);
    cr_prev = std::move(cr);
    p1_prev = p1_report ? std::move(p1) : nullptr;
    mesh = std::move(fine);
  }
  return result;
}

}  // namespace lavrentiev
