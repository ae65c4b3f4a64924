#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "emfd/errors.hpp"

namespace emfd {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
/// Rotate by +90 degrees; maps a primal tangent to its dual direction.
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

/// Circumcenter of a non-degenerate triangle. Throws CollinearPoints when the
/// points (nearly) fail to span a triangle.
Vec2 circumcenter(Vec2 a, Vec2 b, Vec2 c);

/// Primal simplicial complex. Triangles are CCW; edges are stored once with
/// vertex indices (lo, hi), lo < hi, and the edge tangent runs lo -> hi.
struct PrimalMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 2>> edges;      // (lo, hi), lexicographically sorted
  std::vector<std::array<int, 3>> triangles;  // CCW vertex ids

  std::vector<std::array<int, 3>> triangle_edges;  // edge ids, local order (v0v1, v1v2, v2v0)
  std::vector<std::array<int, 2>> edge_triangles;  // {left of lo->hi, right}, -1 when absent
  std::vector<char> vertex_on_boundary;
  std::vector<char> edge_on_boundary;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
};

/// Entity measures of the primal/dual pair.
struct MeshMetrics {
  std::vector<double> primal_edge_length;  // |e|
  std::vector<double> dual_edge_length;    // |dual face of e| (clipped on the boundary)
  std::vector<double> triangle_area;       // |D_k|
  std::vector<double> dual_cell_area;      // |V_i| (clipped Voronoi cell)
};

/// Delaunay primal mesh together with its Voronoi (circumcentric) dual.
struct DualMesh {
  PrimalMesh primal;
  std::vector<Vec2> dual_vertices;              // circumcenter per triangle
  std::vector<std::array<Vec2, 2>> dual_edges;  // segment per primal edge, direction perp(t)
  std::vector<std::vector<Vec2>> dual_cells;    // CCW polygon per primal vertex
  MeshMetrics metrics;
};

/// Regular hexagon of circumradius 1 centered at the origin, six equilateral
/// triangles at level 0, refined `levels` times by midpoint subdivision.
DualMesh build_hexagon_mesh(int levels);

/// Unit square with a fixed 12-vertex acute base triangulation (nominal
/// spacing 1), refined `levels` times. Nominal spacing halves per level.
DualMesh build_square_mesh(int levels);

/// Builds the dual pair from raw vertices and triangles. Verifies strict
/// Delaunay-ness and non-degeneracy; throws NotDelaunay / DegenerateDual /
/// InvalidMesh / CollinearPoints.
DualMesh import_mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles);

/// One 4-way midpoint refinement. Re-verifies all dual-mesh invariants.
DualMesh refine(const DualMesh& mesh);

/// Maximum primal edge length.
double mesh_spacing(const DualMesh& mesh);

/// Sum of triangle areas (= sum of dual cell areas).
double mesh_area(const DualMesh& mesh);

}  // namespace emfd
