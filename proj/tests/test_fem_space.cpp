#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "lavrentiev/fem_space.hpp"
#include "lavrentiev/quadrature.hpp"

using namespace lavrentiev;

namespace {

const Rectangle kSquare{{-1, -1}, {1, 1}};

Mesh unit_right_triangle() { return Mesh({{0, 0}, {1, 0}, {0, 1}}, {{{0, 1, 2}}}); }

Mesh test_mesh() {
  Mesh m = Mesh::structured(kSquare, 2, 2).refine_uniform();
  const std::vector<int> some{0, 3, 7, 11};
  return m.refine(some);
}

/// Mean of a vector field over t with the order-5 rule.
Vec2 mean_over(const Mesh& mesh, int t, const std::function<Vec2(const Vec2&)>& f) {
  const TriangleRule rule = triangle_rule(5);
  Vec2 s;
  for (std::size_t q = 0; q < rule.weights.size(); ++q) s += rule.weights[q] * f(map_point(mesh, t, rule.nodes[q]));
  return s;
}

}  // namespace

TEST_CASE("dof counts") {
  const Mesh m = test_mesh();
  const DofHandler cr(m, SpaceKind::CrouzeixRaviart);
  const DofHandler p1(m, SpaceKind::Lagrange1);
  CHECK(cr.num_dofs() == m.num_facets());
  CHECK(p1.num_dofs() == m.num_vertices());
  CHECK(cr.boundary_dofs().size() == m.boundary_facets().size());
}

TEST_CASE("broken gradient examples") {
  const Mesh m = test_mesh();
  const DofHandler cr(m, SpaceKind::CrouzeixRaviart);
  const auto u = interpolate_nc(cr, [](const Vec2& x) { return x.y; });
  for (int t = 0; t < m.num_triangles(); ++t) {
    const Vec2 g = broken_gradient(u, t);
    CHECK(g.x == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    CHECK(g.y == doctest::Approx(1.0).epsilon(1e-12));
  }
  const DiscreteFunction zero(cr);
  CHECK(broken_gradient(zero, 0) == Vec2{0, 0});
}

TEST_CASE("CR basis gradient against finite differences of the local affine") {
  const Mesh m = unit_right_triangle();
  const DofHandler cr(m, SpaceKind::CrouzeixRaviart);
  for (int i = 0; i < 3; ++i) {
    DiscreteFunction u(cr);
    u.coefficients[cr.dofs(0)[i]] = 1.0;
    const Vec2 g = broken_gradient(u, 0);
    const Vec2 x{0.3, 0.2};
    const double h = 1e-6;
    const double dx = (u.value(0, x + Vec2{h, 0}) - u.value(0, x - Vec2{h, 0})) / (2 * h);
    const double dy = (u.value(0, x + Vec2{0, h}) - u.value(0, x - Vec2{0, h})) / (2 * h);
    CHECK(g.x == doctest::Approx(dx).epsilon(1e-8));
    CHECK(g.y == doctest::Approx(dy).epsilon(1e-8));
    // Value 1 on the own facet, -1 at the opposite vertex.
    CHECK(u.value(0, m.facet_midpoint(cr.dofs(0)[i])) == doctest::Approx(1.0));
    CHECK(u.value(0, m.vertex(m.triangle(0)[i])) == doctest::Approx(-1.0));
    const auto hat = hat_gradients(m, 0);
    CHECK(g.x == doctest::Approx(-2 * hat[i].x));
    CHECK(g.y == doctest::Approx(-2 * hat[i].y));
  }
}

TEST_CASE("nonconforming interpolation examples") {
  const Mesh m = test_mesh();
  const DofHandler cr(m, SpaceKind::CrouzeixRaviart);
  const auto affine = [](const Vec2& x) { return 0.3 - 2.0 * x.x + 0.7 * x.y; };
  const auto ua = interpolate_nc(cr, affine);
  for (int e = 0; e < m.num_facets(); ++e) {
    CHECK(ua.coefficients[e] == doctest::Approx(affine(m.facet_midpoint(e))).epsilon(1e-14));
  }
  const auto sq = interpolate_nc(cr, [](const Vec2& x) { return x.x * x.x; });
  for (int t = 0; t < m.num_triangles(); ++t) {
    const Vec2 g = broken_gradient(sq, t);
    CHECK(g.x == doctest::Approx(2 * m.barycenter(t).x).epsilon(1e-12));
    CHECK(std::abs(g.y) < 1e-12);
  }
  const Mesh tri = unit_right_triangle();
  const DofHandler cr1(tri, SpaceKind::CrouzeixRaviart);
  const Vec2 g = broken_gradient(interpolate_nc(cr1, [](const Vec2& x) { return x.x * x.y; }), 0);
  CHECK(g.x == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(g.y == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("mean-gradient identity exact for quadratics") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> c(-2, 2);
  const Mesh m = test_mesh();
  const DofHandler cr(m, SpaceKind::CrouzeixRaviart);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = c(rng), b = c(rng), d = c(rng), e = c(rng), f = c(rng);
    const auto v = [=](const Vec2& x) { return a * x.x * x.x + b * x.x * x.y + d * x.y * x.y + e * x.x + f * x.y; };
    const auto grad = [=](const Vec2& x) { return Vec2{2 * a * x.x + b * x.y + e, b * x.x + 2 * d * x.y + f}; };
    const auto u = interpolate_nc(cr, v);
    for (int t = 0; t < m.num_triangles(); ++t) {
      const Vec2 mean = mean_over(m, t, grad);
      const Vec2 g = broken_gradient(u, t);
      CHECK(std::abs(g.x - mean.x) < 1e-12);
      CHECK(std::abs(g.y - mean.y) < 1e-12);
    }
  }
}

TEST_CASE("CR midpoint continuity") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> c(-1, 1);
  const Mesh m = test_mesh();
  const DofHandler cr(m, SpaceKind::CrouzeixRaviart);
  DiscreteFunction u(cr);
  for (int i = 0; i < u.coefficients.size(); ++i) u.coefficients[i] = c(rng);
  for (int e = 0; e < m.num_facets(); ++e) {
    const auto [t1, t2] = m.facet_triangles(e);
    if (t2 == Mesh::kNone) continue;
    const Vec2 mid = m.facet_midpoint(e);
    CHECK(std::abs(u.value(t1, mid) - u.value(t2, mid)) < 1e-12);
  }
}

TEST_CASE("affine reproduction has no jumps") {
  const Mesh m = test_mesh();
  const DofHandler cr(m, SpaceKind::CrouzeixRaviart);
  const auto u = interpolate_nc(cr, [](const Vec2& x) { return 1.0 + x.x - 3.0 * x.y; });
  for (int e = 0; e < m.num_facets(); ++e) {
    const auto [t1, t2] = m.facet_triangles(e);
    if (t2 == Mesh::kNone) continue;
    const Vec2 a = m.vertex(m.facet(e)[0]);
    CHECK(std::abs(u.value(t1, a) - u.value(t2, a)) < 1e-12);
    const Vec2 g1 = broken_gradient(u, t1), g2 = broken_gradient(u, t2);
    CHECK(norm(g1 - g2) < 1e-12);
  }
}

TEST_CASE("interpolation error bound with C_apx = 2") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> c(-2, 2);
  const Mesh m = test_mesh();
  const DofHandler cr(m, SpaceKind::CrouzeixRaviart);
  const TriangleRule rule = triangle_rule(5);
  const double p = 1.5;
  for (int trial = 0; trial < 10; ++trial) {
    const double a = c(rng), b = c(rng), d = c(rng), e = c(rng);
    const auto v = [=](const Vec2& x) { return a * x.x * x.x + b * x.x * x.y + d * x.y * x.y + e * x.x; };
    const auto grad = [=](const Vec2& x) { return Vec2{2 * a * x.x + b * x.y + e, b * x.x + 2 * d * x.y}; };
    const auto u = interpolate_nc(cr, v);
    for (int t = 0; t < m.num_triangles(); ++t) {
      double err = 0.0, gnorm = 0.0;
      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const Vec2 x = map_point(m, t, rule.nodes[q]);
        err += rule.weights[q] * std::pow(std::abs(v(x) - u.value(t, rule.nodes[q])), p);
        gnorm += rule.weights[q] * std::pow(norm(grad(x)), p);
      }
      CHECK(std::pow(err, 1 / p) <= 2.0 * m.diameter(t) * std::pow(gnorm, 1 / p) + 1e-13);
    }
  }
}

TEST_CASE("boundary imposition examples") {
  const Mesh m = Mesh::structured(kSquare, 1, 1);
  const DofHandler cr(m, SpaceKind::CrouzeixRaviart);
  const auto checker = [](const Vec2& x) {
    const double ax = std::abs(x.x);
    if (ax < x.y) return 1.0;
    if (ax < -x.y) return -1.0;
    return ax == 0 ? 0.0 : x.y / ax;
  };
  const BoundaryValues bc = impose_boundary(cr, checker, 1.0);
  for (std::size_t k = 0; k < bc.dofs.size(); ++k) {
    const Vec2 mid = m.facet_midpoint(bc.dofs[k]);
    if (mid.y == 1.0) CHECK(bc.values[k] == doctest::Approx(1.0).epsilon(1e-15));
  }

  const Mesh right({{0, 0}, {1, 0}, {1, 1}}, {{{0, 1, 2}}});
  const DofHandler cr_right(right, SpaceKind::CrouzeixRaviart);
  const BoundaryValues b2 = impose_boundary(cr_right, [](const Vec2& x) { return x.y; });
  for (std::size_t k = 0; k < b2.dofs.size(); ++k) {
    if (right.facet(b2.dofs[k]) == Mesh::Facet{1, 2}) CHECK(b2.values[k] == doctest::Approx(0.5).epsilon(1e-15));
  }

  const BoundaryValues zero = impose_boundary(cr, checker, 0.0);
  for (double v : zero.values) CHECK(v == 0.0);

  const DofHandler p1(m, SpaceKind::Lagrange1);
  const BoundaryValues bp = impose_boundary(p1, [](const Vec2& x) { return x.x + 2 * x.y; }, 2.0);
  for (std::size_t k = 0; k < bp.dofs.size(); ++k) {
    const Vec2 v = m.vertex(bp.dofs[k]);
    CHECK(bp.values[k] == doctest::Approx(2 * (v.x + 2 * v.y)));
  }
}

TEST_CASE("prolongation reproduces coarse functions") {
  const Mesh coarse = Mesh::structured(kSquare, 1, 1).refine_uniform();
  const std::vector<int> marked{0, 2};
  const Mesh fine = coarse.refine(marked);
  for (SpaceKind kind : {SpaceKind::CrouzeixRaviart, SpaceKind::Lagrange1}) {
    const DofHandler hc(coarse, kind), hf(fine, kind);
    const auto affine = [](const Vec2& x) { return 2.0 + x.x - x.y; };
    const auto uc = interpolate(hc, affine);
    const auto uf = prolongate(uc, hf);
    const auto expected = interpolate(hf, affine);
    CHECK((uf.coefficients - expected.coefficients).lpNorm<Eigen::Infinity>() < 1e-13);
  }
}
