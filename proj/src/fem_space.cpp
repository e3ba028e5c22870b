#include "lavrentiev/fem_space.hpp"

#include <cmath>
#include <stdexcept>

namespace lavrentiev {

namespace {

// 3-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 3> kGaussNodes = {0.11270166537925831, 0.5, 0.88729833462074169};
constexpr std::array<double, 3> kGaussWeights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

}  // namespace

DofHandler::DofHandler(const Mesh& mesh, SpaceKind kind) : mesh_(&mesh), kind_(kind) {
  if (kind_ == SpaceKind::CrouzeixRaviart) {
    num_dofs_ = mesh.num_facets();
    is_boundary_.assign(num_dofs_, 0);
    boundary_dofs_ = mesh.boundary_facets();
  } else {
    num_dofs_ = mesh.num_vertices();
    is_boundary_.assign(num_dofs_, 0);
    for (int e : mesh.boundary_facets()) {
      for (int v : mesh.facet(e)) is_boundary_[v] = 1;
    }
    for (int v = 0; v < num_dofs_; ++v) {
      if (is_boundary_[v]) boundary_dofs_.push_back(v);
    }
  }
  for (int d : boundary_dofs_) is_boundary_[d] = 1;
}

std::array<int, 3> DofHandler::dofs(int t) const {
  return kind_ == SpaceKind::CrouzeixRaviart ? mesh_->triangle_facets(t) : mesh_->triangle(t);
}

Vec2 DofHandler::dof_point(int dof) const {
  return kind_ == SpaceKind::CrouzeixRaviart ? mesh_->facet_midpoint(dof) : mesh_->vertex(dof);
}

std::array<Vec2, 3> hat_gradients(const Mesh& mesh, int t) {
  const auto p = mesh.corners(t);
  const double inv = 1.0 / (2.0 * mesh.area(t));
  std::array<Vec2, 3> g;
  for (int i = 0; i < 3; ++i) {
    const Vec2 e = p[(i + 2) % 3] - p[(i + 1) % 3];
    g[i] = inv * Vec2{-e.y, e.x};
  }
  return g;
}

std::array<Vec2, 3> DofHandler::basis_gradients(int t) const {
  auto g = hat_gradients(*mesh_, t);
  // CR basis of the facet opposite vertex i is 1 - 2 lambda_i.
  if (kind_ == SpaceKind::CrouzeixRaviart) {
    for (auto& gi : g) gi *= -2.0;
  }
  return g;
}

std::array<double, 3> DofHandler::basis_values(const std::array<double, 3>& bary) const {
  if (kind_ == SpaceKind::Lagrange1) return bary;
  return {1.0 - 2.0 * bary[0], 1.0 - 2.0 * bary[1], 1.0 - 2.0 * bary[2]};
}

double DiscreteFunction::value(int t, const std::array<double, 3>& bary) const {
  const auto d = handler->dofs(t);
  const auto b = handler->basis_values(bary);
  return coefficients[d[0]] * b[0] + coefficients[d[1]] * b[1] + coefficients[d[2]] * b[2];
}

double DiscreteFunction::value(int t, const Vec2& point) const {
  return value(t, barycentric(handler->mesh(), t, point));
}

Vec2 broken_gradient(const DiscreteFunction& u, int t) {
  const auto d = u.handler->dofs(t);
  const auto g = u.handler->basis_gradients(t);
  Vec2 grad;
  for (int i = 0; i < 3; ++i) grad += u.coefficients[d[i]] * g[i];
  return grad;
}

double facet_mean(const Mesh& mesh, int e, const ScalarFunction& v) {
  const Vec2 a = mesh.vertex(mesh.facet(e)[0]);
  const Vec2 b = mesh.vertex(mesh.facet(e)[1]);
  double mean = 0.0;
  for (int q = 0; q < 3; ++q) mean += kGaussWeights[q] * v(a + kGaussNodes[q] * (b - a));
  return mean;
}

DiscreteFunction interpolate_nc(const DofHandler& cr, const ScalarFunction& v) {
  if (cr.kind() != SpaceKind::CrouzeixRaviart) throw std::invalid_argument("interpolate_nc: CR handler required");
  DiscreteFunction u(cr);
  for (int e = 0; e < cr.num_dofs(); ++e) u.coefficients[e] = facet_mean(cr.mesh(), e, v);
  return u;
}

DiscreteFunction interpolate_nodal(const DofHandler& p1, const ScalarFunction& v) {
  if (p1.kind() != SpaceKind::Lagrange1) throw std::invalid_argument("interpolate_nodal: P1 handler required");
  DiscreteFunction u(p1);
  for (int i = 0; i < p1.num_dofs(); ++i) u.coefficients[i] = v(p1.mesh().vertex(i));
  return u;
}

DiscreteFunction interpolate(const DofHandler& handler, const ScalarFunction& v) {
  return handler.kind() == SpaceKind::CrouzeixRaviart ? interpolate_nc(handler, v) : interpolate_nodal(handler, v);
}

DiscreteFunction prolongate(const DiscreteFunction& coarse, const DofHandler& fine) {
  if (coarse.handler->kind() != fine.kind()) throw std::invalid_argument("prolongate: space kinds differ");
  const Mesh& fm = fine.mesh();
  DiscreteFunction u(fine);
  Eigen::VectorXd hits = Eigen::VectorXd::Zero(fine.num_dofs());
  for (int t = 0; t < fm.num_triangles(); ++t) {
    const int parent = fm.parent(t);
    if (parent == Mesh::kNone) throw std::invalid_argument("prolongate: fine mesh has no parent map");
    const auto d = fine.dofs(t);
    for (int i = 0; i < 3; ++i) {
      u.coefficients[d[i]] += coarse.value(parent, fine.dof_point(d[i]));
      hits[d[i]] += 1.0;
    }
  }
  u.coefficients.array() /= hits.array();
  return u;
}

void BoundaryValues::apply(Eigen::VectorXd& coefficients) const {
  for (std::size_t k = 0; k < dofs.size(); ++k) coefficients[dofs[k]] = values[k];
}

BoundaryValues impose_boundary(const DofHandler& handler, const ScalarFunction& psi, double lambda) {
  BoundaryValues bc;
  bc.dofs = handler.boundary_dofs();
  bc.values.reserve(bc.dofs.size());
  for (int d : bc.dofs) {
    const double value = handler.kind() == SpaceKind::CrouzeixRaviart ? facet_mean(handler.mesh(), d, psi)
                                                                        : psi(handler.mesh().vertex(d));
    bc.values.push_back(lambda * value);
  }
  return bc;
}

}  // namespace lavrentiev
