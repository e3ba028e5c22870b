#ifndef LAVRENTIEV_FEM_SPACE_HPP
#define LAVRENTIEV_FEM_SPACE_HPP

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "lavrentiev/geometry.hpp"
#include "lavrentiev/mesh.hpp"

namespace lavrentiev {

using ScalarFunction = std::function<double(const Vec2&)>;

enum class SpaceKind {
  CrouzeixRaviart,  ///< one DOF per facet, continuous in facet midpoints
  Lagrange1,        ///< one DOF per vertex, globally continuous
};

/// DOF layout of a piecewise affine space on a mesh. The handler refers to the
/// mesh, which must outlive it.
///
/// Local DOF i of a triangle is the facet opposite local vertex i (CR) or the
/// local vertex i itself (P1).
class DofHandler {
 public:
  DofHandler(const Mesh& mesh, SpaceKind kind);

  SpaceKind kind() const { return kind_; }
  const Mesh& mesh() const { return *mesh_; }
  int num_dofs() const { return num_dofs_; }

  std::array<int, 3> dofs(int t) const;
  /// Nodal point of a DOF: facet midpoint (CR) or vertex (P1).
  Vec2 dof_point(int dof) const;

  /// Sorted boundary DOFs.
  const std::vector<int>& boundary_dofs() const { return boundary_dofs_; }
  bool is_boundary(int dof) const { return is_boundary_[dof] != 0; }

  /// Gradients of the three local basis functions on t.
  std::array<Vec2, 3> basis_gradients(int t) const;
  /// Local basis values at a point given in barycentric coordinates of t.
  std::array<double, 3> basis_values(const std::array<double, 3>& bary) const;

 private:
  const Mesh* mesh_;
  SpaceKind kind_;
  int num_dofs_ = 0;
  std::vector<int> boundary_dofs_;
  std::vector<char> is_boundary_;
};

/// Gradients of the barycentric coordinates (P1 hat functions) on t.
std::array<Vec2, 3> hat_gradients(const Mesh& mesh, int t);

/// Coefficient vector over a DOF handler.
struct DiscreteFunction {
  const DofHandler* handler = nullptr;
  Eigen::VectorXd coefficients;

  explicit DiscreteFunction(const DofHandler& h) : handler(&h), coefficients(Eigen::VectorXd::Zero(h.num_dofs())) {}
  DiscreteFunction(const DofHandler& h, Eigen::VectorXd c) : handler(&h), coefficients(std::move(c)) {}

  /// Value of the affine restriction to t at a point in barycentric coordinates.
  double value(int t, const std::array<double, 3>& bary) const;
  /// Value of the restriction to t at a point of its closure.
  double value(int t, const Vec2& point) const;
};

/// Gradient of the affine restriction u|_T.
Vec2 broken_gradient(const DiscreteFunction& u, int t);

/// Mean of v over facet e by 3-point Gauss-Legendre.
double facet_mean(const Mesh& mesh, int e, const ScalarFunction& v);

/// Nonconforming interpolation: DOF at mid(e) equals the facet mean of v.
DiscreteFunction interpolate_nc(const DofHandler& cr, const ScalarFunction& v);

/// Nodal interpolation into P1.
DiscreteFunction interpolate_nodal(const DofHandler& p1, const ScalarFunction& v);

/// interpolate_nc for CR handlers, interpolate_nodal for P1 handlers.
DiscreteFunction interpolate(const DofHandler& handler, const ScalarFunction& v);

/// Transfers a function from a mesh to its refinement (the fine mesh's parent
/// map must point into the coarse mesh). Facet values are averaged over the
/// adjacent fine triangles, so nodal values on coarse facets take the mean
/// of both coarse traces.
DiscreteFunction prolongate(const DiscreteFunction& coarse, const DofHandler& fine);

/// Prescribed values on the boundary DOFs.
struct BoundaryValues {
  std::vector<int> dofs;
  std::vector<double> values;

  /// Overwrites the prescribed entries of a coefficient vector.
  void apply(Eigen::VectorXd& coefficients) const;
};

/// Boundary data lambda * psi: facet means (CR) or nodal values (P1).
BoundaryValues impose_boundary(const DofHandler& handler, const ScalarFunction& psi, double lambda = 1.0);

}  // namespace lavrentiev

#endif  // LAVRENTIEV_FEM_SPACE_HPP
