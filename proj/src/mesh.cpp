#include "lavrentiev/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <tuple>

namespace lavrentiev {

namespace {

constexpr double kGeomTol = 1e-12;

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  generation_.assign(triangles_.size(), 0);
  parent_.assign(triangles_.size(), kNone);
  for (const auto& tri : triangles_) {
    for (int v : tri) {
      if (v < 0 || v >= num_vertices()) throw std::invalid_argument("Mesh: vertex index out of range");
    }
    const Vec2 a = vertices_[tri[0]];
    if (cross(vertices_[tri[1]] - a, vertices_[tri[2]] - a) <= 0.0) {
      throw std::invalid_argument("Mesh: triangle with non-positive signed area");
    }
  }
  build_topology();
}

Mesh Mesh::structured(const Rectangle& domain, int cells_x, int cells_y) {
  if (cells_x < 1 || cells_y < 1) throw std::invalid_argument("Mesh::structured: need at least one cell per direction");
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
    throw std::invalid_argument("Mesh::structured: degenerate rectangle");
  }
  const double dx = domain.width() / cells_x;
  const double dy = domain.height() / cells_y;
  std::vector<Vec2> vertices;
  vertices.reserve((cells_x + 1) * (cells_y + 1) + cells_x * cells_y);
  for (int j = 0; j <= cells_y; ++j) {
    for (int i = 0; i <= cells_x; ++i) {
      // Pin the outer coordinates so the domain is reproduced exactly.
      const double x = i == cells_x ? domain.upper.x : domain.lower.x + i * dx;
      const double y = j == cells_y ? domain.upper.y : domain.lower.y + j * dy;
      vertices.push_back({x, y});
    }
  }
  const auto corner = [cells_x](int i, int j) { return j * (cells_x + 1) + i; };
  const int center_offset = static_cast<int>(vertices.size());
  for (int j = 0; j < cells_y; ++j) {
    for (int i = 0; i < cells_x; ++i) {
      vertices.push_back({domain.lower.x + (i + 0.5) * dx, domain.lower.y + (j + 0.5) * dy});
    }
  }

  std::vector<Triangle> triangles;
  triangles.reserve(4 * cells_x * cells_y);
  for (int j = 0; j < cells_y; ++j) {
    for (int i = 0; i < cells_x; ++i) {
      const int c = center_offset + j * cells_x + i;
      const int sw = corner(i, j);
      const int se = corner(i + 1, j);
      const int ne = corner(i + 1, j + 1);
      const int nw = corner(i, j + 1);
      triangles.push_back({c, sw, se});
      triangles.push_back({c, se, ne});
      triangles.push_back({c, ne, nw});
      triangles.push_back({c, nw, sw});
    }
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

void Mesh::build_topology() {
  struct LocalEdge {
    int a, b, tri, local;
  };
  std::vector<LocalEdge> edges;
  edges.reserve(3 * triangles_.size());
  for (int t = 0; t < num_triangles(); ++t) {
    const auto& tri = triangles_[t];
    for (int i = 0; i < 3; ++i) {
      int a = tri[(i + 1) % 3];
      int b = tri[(i + 2) % 3];
      if (a > b) std::swap(a, b);
      edges.push_back({a, b, t, i});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const LocalEdge& l, const LocalEdge& r) {
    return std::tie(l.a, l.b, l.tri) < std::tie(r.a, r.b, r.tri);
  });

  facets_.clear();
  facet_triangles_.clear();
  boundary_facets_.clear();
  triangle_facets_.assign(triangles_.size(), {kNone, kNone, kNone});
  for (std::size_t k = 0; k < edges.size();) {
    std::size_t end = k + 1;
    while (end < edges.size() && edges[end].a == edges[k].a && edges[end].b == edges[k].b) ++end;
    if (end - k > 2) throw std::invalid_argument("Mesh: non-manifold edge shared by more than two triangles");
    const int e = static_cast<int>(facets_.size());
    facets_.push_back({edges[k].a, edges[k].b});
    std::array<int, 2> adj{edges[k].tri, kNone};
    triangle_facets_[edges[k].tri][edges[k].local] = e;
    if (end - k == 2) {
      adj[1] = edges[k + 1].tri;
      triangle_facets_[edges[k + 1].tri][edges[k + 1].local] = e;
    } else {
      boundary_facets_.push_back(e);
    }
    facet_triangles_.push_back(adj);
    k = end;
  }
}

Mesh Mesh::refine(std::span<const int> marked) const {
  std::vector<char> bisect(facets_.size(), 0);
  std::vector<int> work;
  for (int t : marked) {
    if (t < 0 || t >= num_triangles()) throw std::out_of_range("Mesh::refine: marked triangle out of range");
    const int e = refinement_edge(t);
    if (!bisect[e]) {
      bisect[e] = 1;
      work.push_back(e);
    }
  }
  if (work.empty()) return *this;

  // Closure: every triangle with a bisected edge bisects its refinement edge.
  while (!work.empty()) {
    const int e = work.back();
    work.pop_back();
    for (int t : facet_triangles_[e]) {
      if (t == kNone) continue;
      const int r = refinement_edge(t);
      if (!bisect[r]) {
        bisect[r] = 1;
        work.push_back(r);
      }
    }
  }

  Mesh fine;
  fine.vertices_ = vertices_;
  std::vector<int> midpoint(facets_.size(), kNone);
  for (int e = 0; e < num_facets(); ++e) {
    if (!bisect[e]) continue;
    midpoint[e] = fine.num_vertices();
    fine.vertices_.push_back(0.5 * (vertices_[facets_[e][0]] + vertices_[facets_[e][1]]));
  }

  fine.triangles_.reserve(2 * triangles_.size());
  for (int t = 0; t < num_triangles(); ++t) {
    const auto& [v0, v1, v2] = triangles_[t];
    const auto& tf = triangle_facets_[t];
    const int gen = generation_[t];
    const auto emit = [&](const Triangle& tri, int g) {
      fine.triangles_.push_back(tri);
      fine.generation_.push_back(g);
      fine.parent_.push_back(t);
    };
    if (!bisect[tf[0]]) {
      emit(triangles_[t], gen);
      continue;
    }
    const int m = midpoint[tf[0]];
    // Child (m, v0, v1) has refinement edge (v0, v1) = local edge 2 of t;
    // child (m, v2, v0) has refinement edge (v2, v0) = local edge 1 of t.
    if (bisect[tf[2]]) {
      const int m2 = midpoint[tf[2]];
      emit({m2, v1, m}, gen + 2);
      emit({m2, m, v0}, gen + 2);
    } else {
      emit({m, v0, v1}, gen + 1);
    }
    if (bisect[tf[1]]) {
      const int m1 = midpoint[tf[1]];
      emit({m1, m, v2}, gen + 2);
      emit({m1, v0, m}, gen + 2);
    } else {
      emit({m, v2, v0}, gen + 1);
    }
  }
  fine.build_topology();
  return fine;
}

Mesh Mesh::refine_uniform() const {
  std::vector<int> all(triangles_.size());
  for (int t = 0; t < num_triangles(); ++t) all[t] = t;
  return refine(all);
}

std::array<Vec2, 3> Mesh::corners(int t) const {
  const auto& tri = triangles_[t];
  return {vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]};
}

double Mesh::area(int t) const {
  const auto [a, b, c] = corners(t);
  return 0.5 * cross(b - a, c - a);
}

double Mesh::diameter(int t) const {
  const auto [a, b, c] = corners(t);
  return std::max({norm(b - a), norm(c - b), norm(a - c)});
}

Vec2 Mesh::barycenter(int t) const {
  const auto [a, b, c] = corners(t);
  return (1.0 / 3.0) * (a + b + c);
}

Vec2 Mesh::facet_midpoint(int e) const { return 0.5 * (vertices_[facets_[e][0]] + vertices_[facets_[e][1]]); }

double Mesh::facet_length(int e) const { return norm(vertices_[facets_[e][1]] - vertices_[facets_[e][0]]); }

Vec2 Mesh::outward_normal(int t, int local_edge) const {
  const auto& tri = triangles_[t];
  const Vec2 a = vertices_[tri[(local_edge + 1) % 3]];
  const Vec2 b = vertices_[tri[(local_edge + 2) % 3]];
  const Vec2 d = b - a;
  // Counter-clockwise orientation puts the interior on the left of a -> b.
  return (1.0 / norm(d)) * Vec2{d.y, -d.x};
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (int t = 0; t < num_triangles(); ++t) sum += area(t);
  return sum;
}

double Mesh::mesh_size() const {
  double h = 0.0;
  for (int t = 0; t < num_triangles(); ++t) h = std::max(h, diameter(t));
  return h;
}

Rectangle Mesh::bounding_box() const {
  Rectangle box{vertices_.front(), vertices_.front()};
  for (const auto& v : vertices_) {
    box.lower.x = std::min(box.lower.x, v.x);
    box.lower.y = std::min(box.lower.y, v.y);
    box.upper.x = std::max(box.upper.x, v.x);
    box.upper.y = std::max(box.upper.y, v.y);
  }
  return box;
}

std::array<double, 3> barycentric(const Mesh& mesh, int t, const Vec2& point) {
  const auto [a, b, c] = mesh.corners(t);
  const double twice_area = cross(b - a, c - a);
  const double l1 = cross(point - a, c - a) / twice_area;
  const double l2 = cross(b - a, point - a) / twice_area;
  return {1.0 - l1 - l2, l1, l2};
}

std::optional<int> Mesh::locate(const Vec2& point) const {
  for (int t = 0; t < num_triangles(); ++t) {
    const auto l = barycentric(*this, t, point);
    if (l[0] >= -kGeomTol && l[1] >= -kGeomTol && l[2] >= -kGeomTol) return t;
  }
  return std::nullopt;
}

bool Mesh::check_invariants() const {
  if (triangles_.empty()) return false;
  for (int t = 0; t < num_triangles(); ++t) {
    if (!(area(t) > 0.0)) return false;
    for (int e : triangle_facets_[t]) {
      if (e == kNone) return false;
    }
  }
  for (const auto& adj : facet_triangles_) {
    if (adj[0] == kNone) return false;
  }
  if (num_vertices() - num_facets() + num_triangles() != 1) return false;

  // Hanging vertices: no vertex may lie in the relative interior of a facet.
  // Vertices are bucketed on a uniform grid so each facet only inspects the
  // buckets its bounding box overlaps.
  const Rectangle box = bounding_box();
  const int n = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(num_vertices()))));
  const double cw = box.width() / n;
  const double ch = box.height() / n;
  const auto cell_of = [&](double v, double lo, double w) {
    return std::clamp(static_cast<int>((v - lo) / w), 0, n - 1);
  };
  std::vector<std::vector<int>> buckets(static_cast<std::size_t>(n) * n);
  for (int v = 0; v < num_vertices(); ++v) {
    buckets[cell_of(vertices_[v].y, box.lower.y, ch) * n + cell_of(vertices_[v].x, box.lower.x, cw)].push_back(v);
  }
  for (const auto& f : facets_) {
    const Vec2 a = vertices_[f[0]];
    const Vec2 b = vertices_[f[1]];
    const Vec2 d = b - a;
    const double len2 = dot(d, d);
    const int i0 = cell_of(std::min(a.x, b.x), box.lower.x, cw);
    const int i1 = cell_of(std::max(a.x, b.x), box.lower.x, cw);
    const int j0 = cell_of(std::min(a.y, b.y), box.lower.y, ch);
    const int j1 = cell_of(std::max(a.y, b.y), box.lower.y, ch);
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        for (int v : buckets[j * n + i]) {
          if (v == f[0] || v == f[1]) continue;
          const Vec2 p = vertices_[v] - a;
          const double s = dot(p, d) / len2;
          if (s <= kGeomTol || s >= 1.0 - kGeomTol) continue;
          if (std::abs(cross(d, p)) <= kGeomTol * len2) return false;
        }
      }
    }
  }
  return true;
}

void Mesh::write(std::ostream& out) const {
  out << num_vertices() << ' ' << num_triangles() << ' ' << num_facets() << '\n';
  const auto old_precision = out.precision(17);
  for (const auto& v : vertices_) out << v.x << ' ' << v.y << '\n';
  out.precision(old_precision);
  for (const auto& t : triangles_) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace lavrentiev
