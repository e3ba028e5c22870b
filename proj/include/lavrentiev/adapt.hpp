#ifndef LAVRENTIEV_ADAPT_HPP
#define LAVRENTIEV_ADAPT_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lavrentiev/assembly.hpp"
#include "lavrentiev/integrand.hpp"
#include "lavrentiev/mesh.hpp"
#include "lavrentiev/quadrature.hpp"
#include "lavrentiev/solver.hpp"

namespace lavrentiev {

struct IndicatorField {
  std::vector<double> values;
  double total = 0.0;
};

/// Jump-based indicator of a CR function with exponent p:
///   eta_T = sum_{e in T} h_e^(1-p) int_e |[u]|^p + h_T^p int_T |f|^(p/(p-1)).
/// On boundary facets the jump is taken against the affine interpolant of the
/// boundary data between the facet endpoints.
IndicatorField estimate(const EnergyProblem& problem, const DiscreteFunction& u, double p);

/// Smallest prefix of the triangles sorted by descending eta (ties by index)
/// whose sum reaches theta * total. Returned indices are in that order.
std::vector<int> doerfler_mark(const IndicatorField& eta, double theta);

struct ConvergenceRecord {
  int ndof = 0;
  std::optional<double> energy_cr;
  std::optional<double> energy_c;
  std::optional<double> dist_val;
  std::optional<double> eta_total;
  /// F(u_nc) evaluated with the order-5 rule (diagnostic).
  std::optional<double> energy_cr_exact;
};

/// What the loop computes on each mesh.
enum class Scheme { CR, P1, Both };

std::string_view to_string(Scheme scheme);
Scheme scheme_from_string(std::string_view name);

struct AdaptiveConfig {
  Integrand integrand = Integrand::power(2.0);
  /// Boundary data, already scaled.
  ScalarFunction boundary;
  ScalarFunction load;
  PointStrategy strategy;
  /// Rule of the conforming energy.
  int conforming_order = 5;
  SolverConfig solver;
  double theta = 0.3;
  int max_ndof = 10000;
  Scheme scheme = Scheme::Both;
  /// Start each level from the prolongated previous solution.
  bool warm_start = true;
  bool evaluate_cr_exact = false;
};

/// Read-only view on one level, handed to the observer after the solves.
struct LevelState {
  const Mesh& mesh;
  const DofHandler& cr;
  const SolveReport& cr_report;
  const DofHandler& p1;
  const SolveReport* p1_report;  ///< null when the conforming solve is off
  const IndicatorField& eta;
};

struct AdaptiveResult {
  std::vector<ConvergenceRecord> records;
  /// Set when a solve failed; records hold the completed levels.
  std::optional<std::string> failure;
  Mesh final_mesh;
};

/// solve -> estimate -> mark -> refine while the CR dimension does not exceed
/// max_ndof. The CR solve always runs since it steers the mesh; the scheme
/// only selects the reported energies.
AdaptiveResult adaptive_loop(const Mesh& initial, const AdaptiveConfig& config,
                             const std::function<void(const LevelState&)>& observer = {});

}  // namespace lavrentiev

#endif  // LAVRENTIEV_ADAPT_HPP
