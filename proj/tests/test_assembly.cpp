#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include <Eigen/Dense>

#include "lavrentiev/assembly.hpp"

using namespace lavrentiev;

namespace {

const Rectangle kSquare{{-1, -1}, {1, 1}};

Mesh graded_mesh() {
  Mesh m = Mesh::structured(kSquare, 1, 1).refine_uniform().refine_uniform();
  const std::vector<int> marked{0, 5, 9};
  return m.refine(marked);
}

double x2(const Vec2& x) { return x.y; }

Eigen::VectorXd random_state(const EnergyProblem& problem, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd v(problem.num_dofs());
  for (int i = 0; i < v.size(); ++i) v[i] = u(rng);
  problem.impose(v);
  return v;
}

Eigen::VectorXd random_direction(const EnergyProblem& problem, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd d(problem.num_dofs());
  for (int i = 0; i < d.size(); ++i) d[i] = problem.is_fixed(i) ? 0.0 : u(rng);
  return d;
}

}  // namespace

TEST_CASE("quadratic energy matches the stiffness matrix") {
  const Mesh m = graded_mesh();
  for (SpaceKind kind : {SpaceKind::CrouzeixRaviart, SpaceKind::Lagrange1}) {
    const DofHandler h(m, kind);
    const EnergyProblem problem(h, DensityField::one_point(m, Integrand::power(2.0), {}), x2,
                                [](const Vec2& x) { return 1.0 + x.x; });
    const Eigen::VectorXd u = random_state(problem, 1);
    const SparseMatrix H = problem.hessian(u).matrix;
    const SparseMatrix K = problem.stiffness().matrix;
    CHECK((H - K).norm() <= 1e-13 * K.norm());
    // Quadratic energy: gradient differences are exactly H d.
    std::mt19937 rng(2);
    const Eigen::VectorXd d = random_direction(problem, rng);
    const Eigen::VectorXd diff = problem.gradient(u + d) - problem.gradient(u);
    CHECK((diff - H * d).lpNorm<Eigen::Infinity>() <= 1e-12);
    // and central differences of the energy are exact up to rounding.
    const Eigen::VectorXd g = problem.gradient(u);
    for (int i = 0; i < problem.num_dofs(); ++i) {
      if (problem.is_fixed(i)) {
        CHECK(g[i] == 0.0);
        continue;
      }
      Eigen::VectorXd e = Eigen::VectorXd::Zero(problem.num_dofs());
      e[i] = 1e-3;
      const double fd = (problem.energy(u + e) - problem.energy(u - e)) / 2e-3;
      CHECK(std::abs(fd - g[i]) <= 1e-9);
    }
  }
}

TEST_CASE("load vector sums to the integral of the load") {
  const Mesh m = graded_mesh();
  for (SpaceKind kind : {SpaceKind::CrouzeixRaviart, SpaceKind::Lagrange1}) {
    const DofHandler h(m, kind);
    const EnergyProblem problem(h, DensityField::one_point(m, Integrand::power(2.0), {}), {},
                                [](const Vec2& x) { return 2.0 + x.x * x.y; });
    // Basis functions sum to one; x1 x2 integrates to zero on the square.
    CHECK(problem.load().sum() == doctest::Approx(8.0).epsilon(1e-13));
  }
}

TEST_CASE("energy of the affine minimiser candidates") {
  // |grad x2| = 1: density 1/p, area 2 in each exponent region.
  const Mesh m = graded_mesh();
  const auto pe = Integrand::piecewise_exponent(1.5, 3.0);
  for (SpaceKind kind : {SpaceKind::CrouzeixRaviart, SpaceKind::Lagrange1}) {
    const DofHandler h(m, kind);
    const EnergyProblem one(h, DensityField::one_point(m, pe, {}), x2);
    const EnergyProblem ref(h, DensityField::rule(m, pe, triangle_rule(5)), x2);
    const DiscreteFunction u = interpolate(h, x2);
    CHECK(energy(one, u) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(energy(ref, u) == doctest::Approx(2.0).epsilon(1e-14));
  }
  // Saddle strip: three p_- cones of total area 6.
  const Mesh strip = Mesh::structured({{-1, -1}, {5, 1}}, 3, 1);
  const DofHandler h(strip, SpaceKind::CrouzeixRaviart);
  const EnergyProblem ms(h, DensityField::one_point(strip, Integrand::multi_saddle(1.5, 3.0), {}), x2);
  CHECK(energy(ms, interpolate(h, x2)) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("derivatives match finite differences") {
  const Mesh m = graded_mesh();
  const std::vector<Integrand> kinds{Integrand::piecewise_exponent(1.5, 3), Integrand::double_phase(1.5, 3, 0),
                                     Integrand::borderline(2, 2), Integrand::continuous_exponent()};
  for (const auto& f : kinds) {
    for (SpaceKind kind : {SpaceKind::CrouzeixRaviart, SpaceKind::Lagrange1}) {
      const DofHandler h(m, kind);
      const EnergyProblem problem(h, DensityField::rule(m, f, triangle_rule(2)), x2);
      const Eigen::VectorXd u = random_state(problem, 3);
      const Eigen::VectorXd g = problem.gradient(u);
      const SparseMatrix H = problem.hessian(u).matrix;
      std::mt19937 rng(4);
      for (int k = 0; k < 20; ++k) {
        const Eigen::VectorXd d = random_direction(problem, rng);
        const double eps = 1e-5;
        const double fd = (problem.energy(u + eps * d) - problem.energy(u - eps * d)) / (2 * eps);
        CHECK(std::abs(fd - g.dot(d)) <= 1e-6 * std::abs(g.dot(d)));
        const Eigen::VectorXd hd = (problem.gradient(u + eps * d) - problem.gradient(u - eps * d)) / (2 * eps);
        const Eigen::VectorXd hx = H * d;
        CHECK((hd - hx).norm() <= 1e-6 * hx.norm());
      }
    }
  }
}

TEST_CASE("Hessian symmetric and positive semidefinite") {
  const Mesh m = graded_mesh();
  const DofHandler h(m, SpaceKind::CrouzeixRaviart);
  for (const auto& f : {Integrand::piecewise_exponent(1.5, 3), Integrand::borderline(2, 2)}) {
    const EnergyProblem problem(h, DensityField::one_point(m, f, {}), x2);
    for (unsigned seed = 0; seed < 5; ++seed) {
      const Eigen::MatrixXd H(problem.hessian(random_state(problem, seed)).matrix);
      CHECK((H - H.transpose()).cwiseAbs().maxCoeff() == 0.0);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
      CHECK(eig.eigenvalues().minCoeff() >= -1e-9);
    }
  }
}

TEST_CASE("Jensen bound for the nonconforming interpolation") {
  // With f = 0, F_h(I_nc v) <= sum_T int_T phi(x_T, grad v) dx.
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> c(-1.5, 1.5);
  const Mesh m = graded_mesh();
  const DofHandler h(m, SpaceKind::CrouzeixRaviart);
  const TriangleRule rule = triangle_rule(5);
  for (const auto& f : {Integrand::piecewise_exponent(1.5, 3), Integrand::double_phase(1.5, 3, 0)}) {
    const DensityField d = DensityField::one_point(m, f, {});
    const EnergyProblem problem(h, d, {});
    for (int trial = 0; trial < 5; ++trial) {
      const double a = c(rng), b = c(rng), e = c(rng);
      const auto v = [=](const Vec2& x) { return a * x.x * x.x + b * x.x * x.y + e * x.y; };
      const auto grad = [=](const Vec2& x) { return Vec2{2 * a * x.x + b * x.y, b * x.x + e}; };
      double frozen = 0.0;
      for (int t = 0; t < m.num_triangles(); ++t) {
        double s = 0.0;
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
          s += rule.weights[q] * d.value(t, norm(grad(map_point(m, t, rule.nodes[q]))));
        }
        frozen += m.area(t) * s;
      }
      CHECK(problem.energy(interpolate_nc(h, v).coefficients) <= frozen + 1e-10);
    }
  }
}

TEST_CASE("translation invariance without load") {
  const Mesh m = graded_mesh();
  for (SpaceKind kind : {SpaceKind::CrouzeixRaviart, SpaceKind::Lagrange1}) {
    const DofHandler h(m, kind);
    const EnergyProblem problem(h, DensityField::one_point(m, Integrand::continuous_exponent(), {}), x2);
    const Eigen::VectorXd u = random_state(problem, 8);
    const Eigen::VectorXd shifted = u + Eigen::VectorXd::Constant(u.size(), 0.37);
    CHECK(problem.energy(shifted) == doctest::Approx(problem.energy(u)).epsilon(1e-13));
  }
}

TEST_CASE("Dirichlet energy converges from both sides") {
  // u = x1 x2 is harmonic with energy 4/3; its trace is affine on every
  // side, so both discrete traces are exact.
  const auto exact = [](const Vec2& x) { return x.x * x.y; };
  const double target = 4.0 / 3.0;
  Mesh m = Mesh::structured(kSquare, 2, 2);
  double prev_cr = 0.0, prev_p1 = 0.0;
  for (int level = 0; level < 4; ++level) {
    const DofHandler cr(m, SpaceKind::CrouzeixRaviart), p1(m, SpaceKind::Lagrange1);
    const auto density = DensityField::one_point(m, Integrand::power(2.0), {});
    const EnergyProblem pc(cr, density, exact), pp(p1, density, exact);
    // Linear problems: one solve with the stiffness matrix.
    const auto minimum = [](const EnergyProblem& p) {
      Eigen::VectorXd u = p.boundary_lift();
      const Eigen::MatrixXd K(p.stiffness().matrix);
      u -= K.ldlt().solve(p.gradient(u));
      return p.energy(u);
    };
    const double ecr = minimum(pc), ep1 = minimum(pp);
    CHECK(ecr <= target + 1e-12);
    CHECK(ep1 >= target - 1e-12);
    const double err_cr = target - ecr, err_p1 = ep1 - target;
    if (level > 0) {
      CHECK(err_cr < prev_cr / 3.0);
      CHECK(err_p1 < prev_p1 / 3.0);
    }
    prev_cr = err_cr;
    prev_p1 = err_p1;
    // Two bisection rounds halve the mesh size.
    m = m.refine_uniform().refine_uniform();
  }
}

TEST_CASE("weighted Laplacian") {
  const Mesh m = graded_mesh();
  const DofHandler h(m, SpaceKind::CrouzeixRaviart);
  const EnergyProblem quad(h, DensityField::one_point(m, Integrand::power(2.0), {}), x2);
  const Eigen::VectorXd u = random_state(quad, 10);
  CHECK((quad.weighted_laplacian(u, 1e-8, 1e8).matrix - quad.stiffness().matrix).norm() <= 1e-13);
  // A flat state under p < 2 saturates the weights at the upper clamp.
  const EnergyProblem low(h, DensityField::one_point(m, Integrand::power(1.5), {}), {});
  const Linearization w = low.weighted_laplacian(Eigen::VectorXd::Zero(h.num_dofs()), 1e-8, 1e3);
  CHECK(w.clamped == m.num_triangles());
  std::mt19937 rng(11);
  const Eigen::VectorXd d = random_direction(low, rng);
  const Eigen::VectorXd expected = 1e3 * (low.stiffness().matrix * d);
  CHECK((w.matrix * d - expected).norm() <= 1e-13 * expected.norm());
}
