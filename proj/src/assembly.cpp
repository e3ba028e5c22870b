#include "lavrentiev/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lavrentiev {

EnergyProblem::EnergyProblem(const DofHandler& handler, DensityField density, ScalarFunction boundary_data,
                             ScalarFunction load)
    : handler_(&handler),
      density_(std::move(density)),
      boundary_data_(std::move(boundary_data)),
      load_function_(std::move(load)) {
  const Mesh& mesh = handler.mesh();
  if (density_.num_triangles() != mesh.num_triangles()) {
    throw std::invalid_argument("EnergyProblem: density field does not match the mesh");
  }
  boundary_ = impose_boundary(handler, boundary_data_ ? boundary_data_ : ScalarFunction([](const Vec2&) { return 0.0; }));
  fixed_.assign(handler.num_dofs(), 0);
  for (int d : boundary_.dofs) fixed_[d] = 1;

  elements_.reserve(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    elements_.push_back({handler.dofs(t), handler.basis_gradients(t), mesh.area(t)});
  }

  load_ = Eigen::VectorXd::Zero(handler.num_dofs());
  if (load_function_) {
    const TriangleRule rule = triangle_rule(2);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const auto& el = elements_[t];
      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const double fq = load_function_(map_point(mesh, t, rule.nodes[q]));
        const auto b = handler.basis_values(rule.nodes[q]);
        for (int a = 0; a < 3; ++a) load_[el.dofs[a]] += el.area * rule.weights[q] * fq * b[a];
      }
    }
  }

  // Sparsity pattern: free-free couplings plus the full diagonal.
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(9 * elements_.size() + handler.num_dofs());
  for (const auto& el : elements_) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (!fixed_[el.dofs[a]] && !fixed_[el.dofs[b]]) entries.emplace_back(el.dofs[a], el.dofs[b], 1.0);
      }
    }
  }
  for (int i = 0; i < handler.num_dofs(); ++i) entries.emplace_back(i, i, 1.0);
  pattern_.resize(handler.num_dofs(), handler.num_dofs());
  pattern_.setFromTriplets(entries.begin(), entries.end());
  pattern_.makeCompressed();

  const auto offset = [this](int row, int col) {
    const int* begin = pattern_.innerIndexPtr() + pattern_.outerIndexPtr()[col];
    const int* end = pattern_.innerIndexPtr() + pattern_.outerIndexPtr()[col + 1];
    const int* it = std::lower_bound(begin, end, row);
    return static_cast<int>(it - pattern_.innerIndexPtr());
  };
  positions_.resize(elements_.size());
  for (std::size_t t = 0; t < elements_.size(); ++t) {
    const auto& el = elements_[t];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const bool free = !fixed_[el.dofs[a]] && !fixed_[el.dofs[b]];
        positions_[t][3 * a + b] = free ? offset(el.dofs[a], el.dofs[b]) : -1;
      }
    }
  }
}

Eigen::VectorXd EnergyProblem::boundary_lift() const {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(num_dofs());
  boundary_.apply(u);
  return u;
}

Vec2 EnergyProblem::gradient_on(const Eigen::VectorXd& u, int t) const {
  const auto& el = elements_[t];
  Vec2 g;
  for (int a = 0; a < 3; ++a) g += u[el.dofs[a]] * el.grads[a];
  return g;
}

double EnergyProblem::element_energy(const Eigen::VectorXd& u, int t) const {
  return elements_[t].area * density_.value(t, norm(gradient_on(u, t)));
}

double EnergyProblem::energy(const Eigen::VectorXd& u) const {
  double sum = 0.0;
  for (int t = 0; t < static_cast<int>(elements_.size()); ++t) sum += element_energy(u, t);
  return sum - load_.dot(u);
}

Eigen::VectorXd EnergyProblem::gradient(const Eigen::VectorXd& u) const {
  Eigen::VectorXd g = -load_;
  for (int t = 0; t < static_cast<int>(elements_.size()); ++t) {
    const auto& el = elements_[t];
    const Vec2 xi = gradient_on(u, t);
    const double r = norm(xi);
    if (r == 0.0) continue;
    const Vec2 flux = (el.area * density_.slope(t, r) / r) * xi;
    for (int a = 0; a < 3; ++a) g[el.dofs[a]] += dot(flux, el.grads[a]);
  }
  for (int d : boundary_.dofs) g[d] = 0.0;
  return g;
}

template <typename LocalMatrix>
Linearization EnergyProblem::assemble(LocalMatrix&& local) const {
  Linearization lin;
  lin.matrix = pattern_;
  double* values = lin.matrix.valuePtr();
  std::fill(values, values + lin.matrix.nonZeros(), 0.0);
  for (int t = 0; t < static_cast<int>(elements_.size()); ++t) {
    const auto& el = elements_[t];
    // Symmetric 2x2 coefficient (xx, xy, yy) for this triangle.
    std::array<double, 3> m{};
    if (local(t, m)) ++lin.clamped;
    for (int a = 0; a < 3; ++a) {
      const Vec2 ga = el.grads[a];
      const Vec2 mga{m[0] * ga.x + m[1] * ga.y, m[1] * ga.x + m[2] * ga.y};
      for (int b = a; b < 3; ++b) {
        // Mirrored so that every global entry equals its transpose bitwise.
        const double v = el.area * dot(mga, el.grads[b]);
        const int pos = positions_[t][3 * a + b];
        if (pos >= 0) values[pos] += v;
        const int mirror = positions_[t][3 * b + a];
        if (b != a && mirror >= 0) values[mirror] += v;
      }
    }
  }
  for (int d : boundary_.dofs) lin.matrix.coeffRef(d, d) = 1.0;
  return lin;
}

Linearization EnergyProblem::hessian(const Eigen::VectorXd& u) const {
  return assemble([&](int t, std::array<double, 3>& m) {
    const Vec2 xi = gradient_on(u, t);
    bool clamped = false;
    m = {0.0, 0.0, 0.0};
    for (const auto& s : density_.samples(t)) {
      const HessianValue h = radial_hessian(s.profile, xi);
      clamped = clamped || h.clamped;
      for (int k = 0; k < 3; ++k) m[k] += s.weight * h.entries[k];
    }
    return clamped;
  });
}

Linearization EnergyProblem::weighted_laplacian(const Eigen::VectorXd& u, double w_min, double w_max) const {
  return assemble([&](int t, std::array<double, 3>& m) {
    const double r = norm(gradient_on(u, t));
    double w = 0.0;
    bool singular = false;
    for (const auto& s : density_.samples(t)) {
      const double sec = s.profile.secant(r);
      singular = singular || !std::isfinite(sec);
      w += s.weight * (std::isfinite(sec) ? sec : w_max);
    }
    const double clamped = std::clamp(w, w_min, w_max);
    m = {clamped, 0.0, clamped};
    return singular || clamped != w;
  });
}

Linearization EnergyProblem::stiffness() const {
  return assemble([](int, std::array<double, 3>& m) {
    m = {1.0, 0.0, 1.0};
    return false;
  });
}

double energy(const EnergyProblem& problem, const DiscreteFunction& u) {
  if (u.handler != &problem.handler()) throw std::invalid_argument("energy: function belongs to another handler");
  return problem.energy(u.coefficients);
}

}  // namespace lavrentiev
