#ifndef LAVRENTIEV_MESH_HPP
#define LAVRENTIEV_MESH_HPP

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "lavrentiev/geometry.hpp"

namespace lavrentiev {

/******************************************************************************
Conforming triangulation of a planar polygonal domain, refined by newest-vertex
bisection.

Triangles are stored counter-clockwise in bisection normal form: local vertex 0
is the newest vertex and the refinement edge is the local edge 0, i.e. the edge
(v1, v2). In general local edge i is the edge opposite local vertex i.

Facets are the deduplicated edges, ordered lexicographically by their sorted
vertex pair. Each facet knows its one (boundary) or two (interior) adjacent
triangles.
******************************************************************************/
class Mesh {
 public:
  using Triangle = std::array<int, 3>;
  using Facet = std::array<int, 2>;

  static constexpr int kNone = -1;

  Mesh() = default;

  /// Takes ownership of raw vertex and triangle arrays (triangles in bisection
  /// normal form) and builds the facet topology. Clockwise triangles are
  /// rejected.
  Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles);

  /// Criss-cross mesh: every grid cell is split into four triangles by both
  /// diagonals. The refinement edge of each triangle is the cell edge, so the
  /// two triangles sharing a cell edge form a compatible bisection pair.
  static Mesh structured(const Rectangle& domain, int cells_x, int cells_y);

  /// Newest-vertex bisection of the marked triangles plus the closure needed
  /// for conformity. Children replace their parent in place, midpoints are
  /// appended after the existing vertices in facet order.
  Mesh refine(std::span<const int> marked) const;

  /// Bisects every triangle once.
  Mesh refine_uniform() const;

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_facets() const { return static_cast<int>(facets_.size()); }

  const Vec2& vertex(int v) const { return vertices_[v]; }
  const Triangle& triangle(int t) const { return triangles_[t]; }
  const Facet& facet(int e) const { return facets_[e]; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }

  /// Adjacent triangles of a facet; the second entry is kNone on the boundary.
  const std::array<int, 2>& facet_triangles(int e) const { return facet_triangles_[e]; }
  /// Facet index of local edge i (opposite local vertex i).
  const std::array<int, 3>& triangle_facets(int t) const { return triangle_facets_[t]; }

  bool is_boundary_facet(int e) const { return facet_triangles_[e][1] == kNone; }
  const std::vector<int>& boundary_facets() const { return boundary_facets_; }

  /// Facet index of the refinement edge of t.
  int refinement_edge(int t) const { return triangle_facets_[t][0]; }
  int generation(int t) const { return generation_[t]; }
  /// Triangle of the previous mesh that contains t, kNone for initial meshes.
  int parent(int t) const { return parent_[t]; }

  std::array<Vec2, 3> corners(int t) const;
  double area(int t) const;
  double diameter(int t) const;
  Vec2 barycenter(int t) const;
  Vec2 facet_midpoint(int e) const;
  double facet_length(int e) const;
  /// Unit outward normal of local edge i of triangle t.
  Vec2 outward_normal(int t, int local_edge) const;

  double total_area() const;
  /// Maximal triangle diameter.
  double mesh_size() const;
  /// Bounding box of the vertex set.
  Rectangle bounding_box() const;

  /// First triangle whose closure contains the point.
  std::optional<int> locate(const Vec2& point) const;

  /// Checks positive areas, facet adjacency counts, the Euler relation for a
  /// simply connected domain, and absence of hanging vertices.
  bool check_invariants() const;

  /// Plain-text dump: header "V T E", vertex coordinates, then 0-based
  /// triangle index triples.
  void write(std::ostream& out) const;

 private:
  void build_topology();

  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<int> generation_;
  std::vector<int> parent_;

  std::vector<Facet> facets_;
  std::vector<std::array<int, 2>> facet_triangles_;
  std::vector<std::array<int, 3>> triangle_facets_;
  std::vector<int> boundary_facets_;
};

/// Barycentric coordinates of a point with respect to triangle t.
std::array<double, 3> barycentric(const Mesh& mesh, int t, const Vec2& point);

}  // namespace lavrentiev

#endif  // LAVRENTIEV_MESH_HPP
