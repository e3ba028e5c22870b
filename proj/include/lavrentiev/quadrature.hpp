#ifndef LAVRENTIEV_QUADRATURE_HPP
#define LAVRENTIEV_QUADRATURE_HPP

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "lavrentiev/geometry.hpp"
#include "lavrentiev/integrand.hpp"
#include "lavrentiev/mesh.hpp"

namespace lavrentiev {

enum class PointRule {
  Barycenter,
  MinExponent,  ///< argmin of p over {centroid, vertices, edge midpoints}
  PatchMax,     ///< centroid; exponent p_plus on the nodal patch of patch_center
  PatchMin,     ///< centroid; exponent p_minus on the nodal patch of patch_center
};

std::string_view to_string(PointRule rule);
/// Accepts the CLI spellings barycenter|min|patch-max|patch-min.
PointRule point_rule_from_string(std::string_view name);

struct PointStrategy {
  PointRule rule = PointRule::Barycenter;
  Vec2 patch_center{0.0, 0.0};
};

/// Evaluation point x_T of the one-point quadrature. Throws for MinExponent
/// on integrands without an exponent field.
Vec2 select_point(const PointStrategy& strategy, const Mesh& mesh, int t, const Integrand& integrand);

/// True if the closed triangle contains the point.
bool touches(const Mesh& mesh, int t, const Vec2& point);

/// Symmetric triangle rule with positive weights summing to one.
struct TriangleRule {
  int order = 1;
  std::vector<std::array<double, 3>> nodes;  ///< barycentric coordinates
  std::vector<double> weights;
};

/// Orders 1 (centroid), 2 (edge midpoints) and 5 (7-point).
TriangleRule triangle_rule(int order);

/// Physical coordinates of a barycentric point of t.
Vec2 map_point(const Mesh& mesh, int t, const std::array<double, 3>& bary);

/// Per-triangle frozen densities: on triangle t the energy density is
/// sum_k weight_k g_k(|grad u|) with weights summing to one. Gradients are
/// constant per triangle, so this covers both the one-point and the
/// higher-order rules.
class DensityField {
 public:
  struct Sample {
    double weight;
    RadialProfile profile;
  };

  DensityField() = default;

  int num_triangles() const { return static_cast<int>(offsets_.size()) - 1; }
  std::span<const Sample> samples(int t) const {
    return {samples_.data() + offsets_[t], static_cast<std::size_t>(offsets_[t + 1] - offsets_[t])};
  }

  double value(int t, double r) const;
  double slope(int t, double r) const;

  /// phi_h(x, .) = phi(x_T, .) with x_T from the strategy; Patch rules
  /// override the exponent on the patch triangles.
  static DensityField one_point(const Mesh& mesh, const Integrand& integrand, const PointStrategy& strategy);
  /// Quadrature rule evaluation of phi(x, .); a Patch strategy again
  /// overrides the exponent on the patch triangles.
  static DensityField rule(const Mesh& mesh, const Integrand& integrand, const TriangleRule& rule,
                           const PointStrategy& overrides = {});

 private:
  void push_triangle();

  std::vector<Sample> samples_;
  std::vector<int> offsets_{0};
};

}  // namespace lavrentiev

#endif  // LAVRENTIEV_QUADRATURE_HPP
