#include "emfd/dualmesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

namespace emfd {

namespace {

constexpr double kBarycentricFloor = 1e-10;  // non-degeneracy: circumcenter strictly inside
constexpr double kCollinearTol = 1e-14;
constexpr double kInCircleTol = 1e-10;

double shoelace(const std::vector<Vec2>& poly) {
  double twice = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    twice += cross(a, b);
  }
  return 0.5 * twice;
}

// > 0 when p lies strictly inside the circumcircle of the CCW triangle (a,b,c).
double incircle_det(Vec2 a, Vec2 b, Vec2 c, Vec2 p) {
  const double ax = a.x - p.x, ay = a.y - p.y;
  const double bx = b.x - p.x, by = b.y - p.y;
  const double cx = c.x - p.x, cy = c.y - p.y;
  const double a2 = ax * ax + ay * ay;
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
}

PrimalMesh build_primal(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles) {
  PrimalMesh m;
  m.vertices = std::move(vertices);
  m.triangles = std::move(triangles);
  const int nv = m.n_vertices();

  for (auto& tri : m.triangles) {
    for (int v : tri) {
      if (v < 0 || v >= nv) throw InvalidMesh("triangle references vertex " + std::to_string(v));
    }
    const Vec2 a = m.vertices[tri[0]];
    const Vec2 u = m.vertices[tri[1]] - a;
    const Vec2 w = m.vertices[tri[2]] - a;
    const double twice_area = cross(u, w);
    if (std::abs(twice_area) <= kCollinearTol * (norm(u) + norm(w)) * (norm(u) + norm(w)))
      throw InvalidMesh("triangle with (nearly) collinear vertices");
    if (twice_area < 0.0) std::swap(tri[1], tri[2]);  // normalize to CCW
  }

  // Deterministic edge ids: lexicographic order of the (lo, hi) pairs.
  std::vector<std::array<int, 2>> pairs;
  pairs.reserve(m.triangles.size() * 3);
  for (const auto& tri : m.triangles)
    for (int l = 0; l < 3; ++l) {
      int u = tri[l], w = tri[(l + 1) % 3];
      pairs.push_back({std::min(u, w), std::max(u, w)});
    }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  m.edges = std::move(pairs);

  std::map<std::array<int, 2>, int> edge_id;
  for (int e = 0; e < m.n_edges(); ++e) edge_id[m.edges[e]] = e;

  m.triangle_edges.assign(m.triangles.size(), {-1, -1, -1});
  m.edge_triangles.assign(m.edges.size(), {-1, -1});
  for (int t = 0; t < m.n_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    for (int l = 0; l < 3; ++l) {
      const int u = tri[l], w = tri[(l + 1) % 3];
      const int e = edge_id.at({std::min(u, w), std::max(u, w)});
      m.triangle_edges[t][l] = e;
      const int side = (u < w) ? 0 : 1;  // CCW traversal agrees with lo->hi => left
      if (m.edge_triangles[e][side] != -1)
        throw InvalidMesh("non-manifold edge (" + std::to_string(u) + "," + std::to_string(w) + ")");
      m.edge_triangles[e][side] = t;
    }
  }

  m.vertex_on_boundary.assign(nv, 0);
  m.edge_on_boundary.assign(m.edges.size(), 0);
  for (int e = 0; e < m.n_edges(); ++e) {
    const auto [left, right] = m.edge_triangles[e];
    if (left == -1 && right == -1) throw InvalidMesh("dangling edge");
    if (left == -1 || right == -1) {
      m.edge_on_boundary[e] = 1;
      m.vertex_on_boundary[m.edges[e][0]] = 1;
      m.vertex_on_boundary[m.edges[e][1]] = 1;
    }
  }
  return m;
}

void check_delaunay(const PrimalMesh& m) {
  // Local Delaunay test on interior edges is equivalent to global Delaunay-ness.
  for (int e = 0; e < m.n_edges(); ++e) {
    const auto [left, right] = m.edge_triangles[e];
    if (left == -1 || right == -1) continue;
    const auto& tri = m.triangles[left];
    int opp = -1;
    for (int v : m.triangles[right])
      if (v != m.edges[e][0] && v != m.edges[e][1]) opp = v;
    const Vec2 a = m.vertices[tri[0]], b = m.vertices[tri[1]], c = m.vertices[tri[2]];
    const Vec2 p = m.vertices[opp];
    const double scale = norm(a - p) * norm(b - p) * norm(c - p);
    if (incircle_det(a, b, c, p) > kInCircleTol * scale * std::cbrt(scale))
      throw NotDelaunay("vertex " + std::to_string(opp) + " lies inside the circumcircle of triangle " +
                            std::to_string(left),
                        left, opp);
  }
}

// Incident triangles of v in CCW angular order, fan-walked through edge adjacency.
// For boundary vertices the walk starts at the triangle whose leading edge is on the boundary.
std::vector<int> triangle_fan(const PrimalMesh& m, int v, const std::vector<std::vector<int>>& vertex_tris) {
  const auto& incident = vertex_tris[v];
  if (incident.empty()) return {};

  auto local_of = [&](int t) {
    const auto& tri = m.triangles[t];
    for (int l = 0; l < 3; ++l)
      if (tri[l] == v) return l;
    return -1;
  };
  auto next_across = [&](int t) {
    // Leaving edge of the CCW walk is (v, q) with q two steps after v.
    const int l = local_of(t);
    const int e = m.triangle_edges[t][(l + 2) % 3];
    const auto [a, b] = m.edge_triangles[e];
    return a == t ? b : a;
  };
  auto prev_across = [&](int t) {
    const int l = local_of(t);
    const int e = m.triangle_edges[t][l];
    const auto [a, b] = m.edge_triangles[e];
    return a == t ? b : a;
  };

  int start = incident[0];
  if (m.vertex_on_boundary[v]) {
    while (prev_across(start) != -1) start = prev_across(start);
  }
  std::vector<int> fan;
  int t = start;
  while (t != -1) {
    fan.push_back(t);
    t = next_across(t);
    if (t == start) break;  // interior vertex: closed the loop
  }
  if (fan.size() != incident.size())
    throw InvalidMesh("vertex " + std::to_string(v) + " has a disconnected triangle fan");
  return fan;
}

DualMesh build_dual(PrimalMesh primal) {
  DualMesh mesh;
  mesh.primal = std::move(primal);
  const PrimalMesh& m = mesh.primal;

  check_delaunay(m);

  mesh.dual_vertices.resize(m.n_triangles());
  mesh.metrics.triangle_area.resize(m.n_triangles());
  for (int t = 0; t < m.n_triangles(); ++t) {
    const Vec2 a = m.vertices[m.triangles[t][0]];
    const Vec2 b = m.vertices[m.triangles[t][1]];
    const Vec2 c = m.vertices[m.triangles[t][2]];
    const Vec2 cc = circumcenter(a, b, c);
    const double twice_area = cross(b - a, c - a);
    mesh.metrics.triangle_area[t] = 0.5 * twice_area;
    // Barycentric coordinates of the circumcenter; all must clear the floor.
    const double l0 = cross(b - cc, c - cc) / twice_area;
    const double l1 = cross(c - cc, a - cc) / twice_area;
    const double l2 = cross(a - cc, b - cc) / twice_area;
    if (std::min({l0, l1, l2}) < kBarycentricFloor)
      throw DegenerateDual("circumcenter of triangle " + std::to_string(t) +
                               " is not strictly interior (min barycentric " +
                               std::to_string(std::min({l0, l1, l2})) + ")",
                           t);
    mesh.dual_vertices[t] = cc;
  }

  mesh.dual_edges.resize(m.n_edges());
  mesh.metrics.primal_edge_length.resize(m.n_edges());
  mesh.metrics.dual_edge_length.resize(m.n_edges());
  for (int e = 0; e < m.n_edges(); ++e) {
    const Vec2 lo = m.vertices[m.edges[e][0]];
    const Vec2 hi = m.vertices[m.edges[e][1]];
    mesh.metrics.primal_edge_length[e] = norm(hi - lo);
    const Vec2 mid = 0.5 * (lo + hi);
    const auto [left, right] = m.edge_triangles[e];
    const Vec2 from = (right != -1) ? mesh.dual_vertices[right] : mid;
    const Vec2 to = (left != -1) ? mesh.dual_vertices[left] : mid;
    mesh.dual_edges[e] = {from, to};
    mesh.metrics.dual_edge_length[e] = norm(to - from);
  }

  std::vector<std::vector<int>> vertex_tris(m.n_vertices());
  for (int t = 0; t < m.n_triangles(); ++t)
    for (int v : m.triangles[t]) vertex_tris[v].push_back(t);

  mesh.dual_cells.resize(m.n_vertices());
  mesh.metrics.dual_cell_area.assign(m.n_vertices(), 0.0);
  for (int v = 0; v < m.n_vertices(); ++v) {
    const std::vector<int> fan = triangle_fan(m, v, vertex_tris);
    std::vector<Vec2>& cell = mesh.dual_cells[v];
    if (m.vertex_on_boundary[v]) {
      // Clipped cell: vertex, midpoint of the leading boundary edge, the
      // circumcenters CCW, midpoint of the trailing boundary edge.
      const auto& first = m.triangles[fan.front()];
      const auto& last = m.triangles[fan.back()];
      int lf = 0, ll = 0;
      while (first[lf] != v) ++lf;
      while (last[ll] != v) ++ll;
      const Vec2 p = m.vertices[first[(lf + 1) % 3]];
      const Vec2 q = m.vertices[last[(ll + 2) % 3]];
      cell.push_back(m.vertices[v]);
      cell.push_back(0.5 * (m.vertices[v] + p));
      for (int t : fan) cell.push_back(mesh.dual_vertices[t]);
      cell.push_back(0.5 * (m.vertices[v] + q));
    } else {
      for (int t : fan) cell.push_back(mesh.dual_vertices[t]);
    }
    // Area from the per-triangle quad decomposition: the three corner quads
    // (v, edge midpoint, circumcenter, edge midpoint) tile each triangle, so
    // dual cell areas sum to the domain area by construction.
    double area = 0.0;
    for (int t : fan) {
      const auto& tri = m.triangles[t];
      int l = 0;
      while (tri[l] != v) ++l;
      const Vec2 pv = m.vertices[v];
      const Vec2 m1 = 0.5 * (pv + m.vertices[tri[(l + 1) % 3]]);
      const Vec2 m2 = 0.5 * (pv + m.vertices[tri[(l + 2) % 3]]);
      area += shoelace({pv, m1, mesh.dual_vertices[t], m2});
    }
    mesh.metrics.dual_cell_area[v] = area;
    if (area <= 0.0) throw DegenerateDual("non-positive dual cell area at vertex " + std::to_string(v), -1);
  }
  return mesh;
}

}  // namespace

Vec2 circumcenter(Vec2 a, Vec2 b, Vec2 c) {
  const Vec2 u = b - a;
  const Vec2 w = c - a;
  const double d = 2.0 * cross(u, w);
  if (std::abs(d) <= kCollinearTol * norm(u) * norm(w))
    throw CollinearPoints("circumcenter of collinear points");
  const double u2 = dot(u, u), w2 = dot(w, w);
  const Vec2 q{(u2 * w.y - w2 * u.y) / d, (w2 * u.x - u2 * w.x) / d};
  return a + q;
}

DualMesh import_mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles) {
  return build_dual(build_primal(std::move(vertices), std::move(triangles)));
}

DualMesh refine(const DualMesh& mesh) {
  const PrimalMesh& m = mesh.primal;
  std::vector<Vec2> vertices = m.vertices;
  vertices.reserve(m.n_vertices() + m.n_edges());
  for (int e = 0; e < m.n_edges(); ++e)
    vertices.push_back(0.5 * (m.vertices[m.edges[e][0]] + m.vertices[m.edges[e][1]]));

  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(4 * m.n_triangles());
  const int off = m.n_vertices();
  for (int t = 0; t < m.n_triangles(); ++t) {
    const auto [a, b, c] = m.triangles[t];
    const int mab = off + m.triangle_edges[t][0];
    const int mbc = off + m.triangle_edges[t][1];
    const int mca = off + m.triangle_edges[t][2];
    triangles.push_back({a, mab, mca});
    triangles.push_back({mab, b, mbc});
    triangles.push_back({mca, mbc, c});
    triangles.push_back({mab, mbc, mca});
  }
  return import_mesh(std::move(vertices), std::move(triangles));
}

DualMesh build_hexagon_mesh(int levels) {
  const double s = std::sqrt(3.0) / 2.0;
  std::vector<Vec2> vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.5, -s}, {-0.5, -s},
                                {-1.0, 0.0}, {-0.5, s}, {0.5, s}};
  std::vector<std::array<int, 3>> triangles = {{0, 1, 6}, {0, 6, 5}, {0, 5, 4},
                                               {0, 4, 3}, {0, 3, 2}, {0, 2, 1}};
  DualMesh mesh = import_mesh(std::move(vertices), std::move(triangles));
  for (int l = 0; l < levels; ++l) mesh = refine(mesh);
  return mesh;
}

DualMesh build_square_mesh(int levels) {
  std::vector<Vec2> vertices = {{0.0, 0.0},  {1.0, 0.0},  {0.0, 1.0},  {1.0, 1.0},
                                {0.55, 0.0}, {0.0, 0.55}, {1.0, 0.45}, {0.45, 1.0},
                                {0.3, 0.7},  {0.7, 0.3},  {0.6, 0.6},  {0.4, 0.4}};
  std::vector<std::array<int, 3>> triangles = {
      {0, 4, 11}, {0, 11, 5}, {1, 9, 4},  {1, 6, 9},   {2, 5, 8},   {2, 8, 7},  {3, 7, 10},
      {3, 10, 6}, {4, 9, 11}, {5, 11, 8}, {6, 10, 9},  {7, 8, 10},  {8, 11, 10}, {9, 10, 11}};
  DualMesh mesh = import_mesh(std::move(vertices), std::move(triangles));
  for (int l = 0; l < levels; ++l) mesh = refine(mesh);
  return mesh;
}

double mesh_spacing(const DualMesh& mesh) {
  double h = 0.0;
  for (double len : mesh.metrics.primal_edge_length) h = std::max(h, len);
  return h;
}

double mesh_area(const DualMesh& mesh) {
  double a = 0.0;
  for (double t : mesh.metrics.triangle_area) a += t;
  return a;
}

}  // namespace emfd
