#include "lavrentiev/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lavrentiev {

std::string_view to_string(PointRule rule) {
  switch (rule) {
    case PointRule::Barycenter:
      return "barycenter";
    case PointRule::MinExponent:
      return "min";
    case PointRule::PatchMax:
      return "patch-max";
    case PointRule::PatchMin:
      return "patch-min";
  }
  return "unknown";
}

PointRule point_rule_from_string(std::string_view name) {
  for (auto r : {PointRule::Barycenter, PointRule::MinExponent, PointRule::PatchMax, PointRule::PatchMin}) {
    if (to_string(r) == name) return r;
  }
  throw std::invalid_argument("unknown quadrature point rule: " + std::string(name));
}

bool touches(const Mesh& mesh, int t, const Vec2& point) {
  constexpr double tol = 1e-12;
  const auto l = barycentric(mesh, t, point);
  return l[0] >= -tol && l[1] >= -tol && l[2] >= -tol;
}

Vec2 map_point(const Mesh& mesh, int t, const std::array<double, 3>& bary) {
  const auto [a, b, c] = mesh.corners(t);
  return bary[0] * a + bary[1] * b + bary[2] * c;
}

Vec2 select_point(const PointStrategy& strategy, const Mesh& mesh, int t, const Integrand& integrand) {
  switch (strategy.rule) {
    case PointRule::Barycenter:
      return mesh.barycenter(t);
    case PointRule::PatchMax:
    case PointRule::PatchMin:
      if (!integrand.has_exponent_field()) {
        throw std::invalid_argument("patch quadrature requires an integrand with exponent field");
      }
      return mesh.barycenter(t);
    case PointRule::MinExponent: {
      if (!integrand.has_exponent_field()) {
        throw std::invalid_argument("min-exponent quadrature requires an integrand with exponent field");
      }
      const auto [a, b, c] = mesh.corners(t);
      const std::array<Vec2, 7> candidates = {
          mesh.barycenter(t), a, b, c, 0.5 * (b + c), 0.5 * (c + a), 0.5 * (a + b),
      };
      Vec2 best = candidates[0];
      double best_p = *integrand.exponent(best);
      for (std::size_t k = 1; k < candidates.size(); ++k) {
        const double p = *integrand.exponent(candidates[k]);
        if (p < best_p) {
          best_p = p;
          best = candidates[k];
        }
      }
      return best;
    }
  }
  return mesh.barycenter(t);
}

TriangleRule triangle_rule(int order) {
  TriangleRule rule;
  rule.order = order;
  switch (order) {
    case 1:
      rule.nodes = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
      rule.weights = {1.0};
      break;
    case 2:
      rule.nodes = {{0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}};
      rule.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
      break;
    case 5: {
      const double s15 = std::sqrt(15.0);
      const double a1 = (6.0 - s15) / 21.0;
      const double a2 = (6.0 + s15) / 21.0;
      const double w1 = (155.0 - s15) / 1200.0;
      const double w2 = (155.0 + s15) / 1200.0;
      rule.nodes = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
                    {1.0 - 2.0 * a1, a1, a1}, {a1, 1.0 - 2.0 * a1, a1}, {a1, a1, 1.0 - 2.0 * a1},
                    {1.0 - 2.0 * a2, a2, a2}, {a2, 1.0 - 2.0 * a2, a2}, {a2, a2, 1.0 - 2.0 * a2}};
      rule.weights = {9.0 / 40.0, w1, w1, w1, w2, w2, w2};
      break;
    }
    default:
      throw std::invalid_argument("triangle_rule: unsupported order " + std::to_string(order));
  }
  return rule;
}

double DensityField::value(int t, double r) const {
  double v = 0.0;
  for (const auto& s : samples(t)) v += s.weight * s.profile.value(r);
  return v;
}

double DensityField::slope(int t, double r) const {
  double v = 0.0;
  for (const auto& s : samples(t)) v += s.weight * s.profile.slope(r);
  return v;
}

void DensityField::push_triangle() { offsets_.push_back(static_cast<int>(samples_.size())); }

namespace {

// Exponent forced on the patch triangles, if the strategy overrides any.
std::optional<double> patch_exponent(const PointStrategy& strategy, const Mesh& mesh, int t,
                                     const Integrand& integrand) {
  if (strategy.rule != PointRule::PatchMax && strategy.rule != PointRule::PatchMin) return std::nullopt;
  if (!integrand.has_exponent_field()) {
    throw std::invalid_argument("patch quadrature requires an integrand with exponent field");
  }
  if (!touches(mesh, t, strategy.patch_center)) return std::nullopt;
  return strategy.rule == PointRule::PatchMax ? integrand.params().p_plus : integrand.params().p_minus;
}

}  // namespace

DensityField DensityField::one_point(const Mesh& mesh, const Integrand& integrand, const PointStrategy& strategy) {
  DensityField field;
  field.samples_.reserve(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Vec2 x = select_point(strategy, mesh, t, integrand);
    const auto forced = patch_exponent(strategy, mesh, t, integrand);
    field.samples_.push_back({1.0, forced ? integrand.profile_with_exponent(x, *forced) : integrand.profile(x)});
    field.push_triangle();
  }
  return field;
}

DensityField DensityField::rule(const Mesh& mesh, const Integrand& integrand, const TriangleRule& rule,
                                const PointStrategy& overrides) {
  DensityField field;
  field.samples_.reserve(mesh.num_triangles() * rule.weights.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto forced = patch_exponent(overrides, mesh, t, integrand);
    const std::size_t first = field.samples_.size();
    bool uniform = true;
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const Vec2 x = map_point(mesh, t, rule.nodes[q]);
      field.samples_.push_back(
          {rule.weights[q], forced ? integrand.profile_with_exponent(x, *forced) : integrand.profile(x)});
      uniform = uniform && field.samples_.back().profile == field.samples_[first].profile;
    }
    // Density constant on t: the rule is exact with a single sample.
    if (uniform) {
      field.samples_.resize(first + 1);
      field.samples_[first].weight = 1.0;
    }
    field.push_triangle();
  }
  return field;
}

}  // namespace lavrentiev
