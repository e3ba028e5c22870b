#ifndef LAVRENTIEV_ASSEMBLY_HPP
#define LAVRENTIEV_ASSEMBLY_HPP

#include <array>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "lavrentiev/fem_space.hpp"
#include "lavrentiev/quadrature.hpp"

namespace lavrentiev {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Symmetric matrix with eliminated boundary rows and columns (identity on
/// the prescribed DOFs).
struct Linearization {
  SparseMatrix matrix;
  /// Triangles on which a clamp (Hessian radius or Kacanov weight) was active.
  int clamped = 0;
};

/// Discrete energy
///   F_h(v) = sum_T |T| sum_k w_k g_k(|grad v|_T|) - int f v
/// over a CR or P1 space with prescribed boundary DOFs. The load is
/// integrated with the edge-midpoint rule. All element loops run in
/// ascending triangle order, so results are bit-reproducible.
///
/// The problem refers to the handler (and through it the mesh), which must
/// outlive it.
class EnergyProblem {
 public:
  EnergyProblem(const DofHandler& handler, DensityField density, ScalarFunction boundary_data = {},
                ScalarFunction load = {});

  const DofHandler& handler() const { return *handler_; }
  const Mesh& mesh() const { return handler_->mesh(); }
  const DensityField& density() const { return density_; }
  const BoundaryValues& boundary() const { return boundary_; }
  /// The boundary function (already scaled); zero when none was given.
  double boundary_data(const Vec2& x) const { return boundary_data_ ? boundary_data_(x) : 0.0; }
  const ScalarFunction& load_function() const { return load_function_; }
  const Eigen::VectorXd& load() const { return load_; }
  bool is_fixed(int dof) const { return fixed_[dof] != 0; }
  int num_dofs() const { return handler_->num_dofs(); }

  /// Zero vector with the boundary values imposed.
  Eigen::VectorXd boundary_lift() const;
  /// Replaces the prescribed entries of u by the boundary values.
  void impose(Eigen::VectorXd& u) const { boundary_.apply(u); }

  Vec2 gradient_on(const Eigen::VectorXd& u, int t) const;

  double energy(const Eigen::VectorXd& u) const;
  /// Energy without the load term, restricted to one triangle.
  double element_energy(const Eigen::VectorXd& u, int t) const;
  /// Derivative of the energy; prescribed rows are zero.
  Eigen::VectorXd gradient(const Eigen::VectorXd& u) const;
  Linearization hessian(const Eigen::VectorXd& u) const;
  /// Kacanov matrix sum_T |T| w_T grad B_i . grad B_j with
  /// w_T = clamp(g'(r_T)/r_T, w_min, w_max).
  Linearization weighted_laplacian(const Eigen::VectorXd& u, double w_min, double w_max) const;
  /// Stiffness matrix of the Dirichlet energy (w = 1).
  Linearization stiffness() const;

 private:
  struct Element {
    std::array<int, 3> dofs;
    std::array<Vec2, 3> grads;
    double area;
  };

  template <typename LocalMatrix>
  Linearization assemble(LocalMatrix&& local) const;

  const DofHandler* handler_;
  DensityField density_;
  ScalarFunction boundary_data_;
  ScalarFunction load_function_;
  BoundaryValues boundary_;
  std::vector<char> fixed_;
  std::vector<Element> elements_;
  Eigen::VectorXd load_;
  SparseMatrix pattern_;
  /// Per element, the value offsets of its 9 local entries (-1 if eliminated).
  std::vector<std::array<int, 9>> positions_;
};

double energy(const EnergyProblem& problem, const DiscreteFunction& u);

}  // namespace lavrentiev

#endif  // LAVRENTIEV_ASSEMBLY_HPP
