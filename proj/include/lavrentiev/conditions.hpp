#ifndef LAVRENTIEV_CONDITIONS_HPP
#define LAVRENTIEV_CONDITIONS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "lavrentiev/integrand.hpp"
#include "lavrentiev/mesh.hpp"
#include "lavrentiev/quadrature.hpp"

namespace lavrentiev {

// Sampled diagnostics for the structural assumptions on an integrand and its
// one-point quadrature. Samples use log-uniform radii in [1e-6, 1e6], uniform
// angles and uniform spatial points; all checkers are deterministic for a
// given seed.

struct SampleOptions {
  int samples = 10000;
  std::uint64_t seed = 20240601;
};

/// Constants of a doubling-type inequality estimated from samples.
struct DoublingEstimate {
  bool holds = false;
  double constant = 0.0;  ///< C (Delta2) resp. K (nabla2)
  double offset = 0.0;    ///< C0 resp. K0
};

inline constexpr double kConstantCap = 1e8;

/// phi(x, 2 xi) <= C phi(x, xi) + C0. C is the largest ratio over samples
/// with phi(x, xi) >= 1, C0 the largest remaining excess.
DoublingEstimate check_delta2(const Integrand& integrand, SampleOptions options = {});

/// K phi(x, 2 xi) <= phi(x, K xi) + K0. K is the smallest value (log-scale
/// bisection on [1, cap]) that satisfies the inequality with K0 = 0 on all
/// samples with phi(x, xi) >= 1; K0 the largest excess over all samples.
DoublingEstimate check_nabla2(const Integrand& integrand, SampleOptions options = {});

/// Largest c <= 1 with c phi(x_T, xi) <= phi(x, xi) + 1 over sampled x in T.
double check_A1(const Integrand& integrand, const Mesh& mesh, const PointStrategy& strategy, SampleOptions options = {});

struct ConditionBReport {
  bool holds = true;    ///< true if violations only occur below the threshold
  double threshold = 0.0;  ///< c_phi: largest |xi| of a violating sample (0 if none)
  int violations = 0;
};

/// phi(x_T, xi) <= phi(x, xi) for all sampled |xi| > c_phi.
ConditionBReport check_B(const Integrand& integrand, const Mesh& mesh, const PointStrategy& strategy,
                         SampleOptions options = {});

/// |phi_h^*(x, zeta) - phi^*(x, zeta)| on each mesh, where phi_h freezes the
/// density at x_T of the triangle containing x.
std::vector<double> conjugate_convergence_probe(const Integrand& integrand, std::span<const Mesh> meshes,
                                                const PointStrategy& strategy, const Vec2& x, const Vec2& zeta);

}  // namespace lavrentiev

#endif  // LAVRENTIEV_CONDITIONS_HPP
