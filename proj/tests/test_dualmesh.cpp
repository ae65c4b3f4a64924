#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "emfd/dualmesh.hpp"
#include "emfd/errors.hpp"
#include "emfd/mesh_io.hpp"

using namespace emfd;

namespace {

// Midpoint refinement: V' = V + E, E' = 2E + 3T, T' = 4T.
struct Counts {
  int v, e, t;
  Counts next() const { return {v + e, 2 * e + 3 * t, 4 * t}; }
};

void check_counts(const DualMesh& m, Counts c) {
  CHECK(m.primal.n_vertices() == c.v);
  CHECK(m.primal.n_edges() == c.e);
  CHECK(m.primal.n_triangles() == c.t);
}

void check_geometry_invariants(const DualMesh& mesh) {
  const PrimalMesh& m = mesh.primal;
  // Dual edges are perpendicular to their primal edges and pass through the
  // primal midpoints.
  for (int e = 0; e < m.n_edges(); ++e) {
    const Vec2 a = m.vertices[m.edges[e][0]];
    const Vec2 b = m.vertices[m.edges[e][1]];
    const Vec2 t = b - a;
    const Vec2 d = mesh.dual_edges[e][1] - mesh.dual_edges[e][0];
    CHECK(std::abs(dot(t, d)) <= 1e-12 * norm(t) * std::max(norm(d), 1e-30));
    const Vec2 mid = (a + b) * 0.5;
    CHECK(std::abs(cross(d, mid - mesh.dual_edges[e][0])) <= 1e-12 * std::max(norm(d), 1e-30));
    CHECK(mesh.metrics.dual_edge_length[e] == doctest::Approx(norm(d)).epsilon(1e-13));
    // Boundary dual edges are clipped at the primal edge midpoint (on the
    // side whose triangle is missing).
    if (m.edge_on_boundary[e]) {
      const double to_mid = std::min(norm(mesh.dual_edges[e][0] - mid), norm(mesh.dual_edges[e][1] - mid));
      CHECK(to_mid <= 1e-14);
    }
  }
  // Dual cells tile the domain.
  double dual_total = 0.0;
  for (int v = 0; v < m.n_vertices(); ++v) {
    CHECK(mesh.metrics.dual_cell_area[v] > 0.0);
    dual_total += mesh.metrics.dual_cell_area[v];
  }
  CHECK(dual_total == doctest::Approx(mesh_area(mesh)).epsilon(1e-12));
  // Triangle areas are positive (CCW orientation enforced).
  for (int k = 0; k < m.n_triangles(); ++k) CHECK(mesh.metrics.triangle_area[k] > 0.0);
}

}  // namespace

TEST_CASE("hexagon family counts and spacing") {
  Counts c{7, 12, 6};
  for (int level = 0; level <= 3; ++level) {
    const DualMesh mesh = build_hexagon_mesh(level);
    check_counts(mesh, c);
    c = c.next();
    CHECK(mesh_spacing(mesh) == doctest::Approx(std::ldexp(1.0, -level)).epsilon(1e-14));
    CHECK(mesh_area(mesh) == doctest::Approx(3.0 * std::sqrt(3.0) / 2.0).epsilon(1e-13));
    check_geometry_invariants(mesh);
  }
  CHECK(build_hexagon_mesh(1).primal.n_vertices() == 19);
  CHECK(build_hexagon_mesh(1).primal.n_edges() == 42);
  CHECK(build_hexagon_mesh(1).primal.n_triangles() == 24);
}

TEST_CASE("square family counts and spacing") {
  Counts c{12, 25, 14};
  for (int level = 0; level <= 3; ++level) {
    const DualMesh mesh = build_square_mesh(level);
    check_counts(mesh, c);
    c = c.next();
    CHECK(mesh_spacing(mesh) ==
          doctest::Approx(std::sqrt(0.32) * std::ldexp(1.0, -level)).epsilon(1e-13));
    CHECK(mesh_area(mesh) == doctest::Approx(1.0).epsilon(1e-13));
    check_geometry_invariants(mesh);
  }
  CHECK(build_square_mesh(1).primal.n_vertices() == 37);
  CHECK(build_square_mesh(1).primal.n_edges() == 92);
  CHECK(build_square_mesh(1).primal.n_triangles() == 56);
}

TEST_CASE("deep refinement stays non-degenerate") {
  // Midpoint refinement of an acute triangulation stays acute, so the dual
  // stays valid at every level.
  CHECK_NOTHROW(build_hexagon_mesh(6));
  CHECK_NOTHROW(build_square_mesh(6));
}

TEST_CASE("refine halves the spacing") {
  const DualMesh base = build_square_mesh(2);
  const DualMesh fine = refine(base);
  CHECK(fine.primal.n_triangles() == 4 * base.primal.n_triangles());
  CHECK(mesh_spacing(fine) == doctest::Approx(0.5 * mesh_spacing(base)).epsilon(1e-13));
}

TEST_CASE("circumcenter") {
  SUBCASE("right triangle: hypotenuse midpoint") {
    const Vec2 c = circumcenter({0, 0}, {1, 0}, {0, 1});
    CHECK(c.x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c.y == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("equilateral triangle: centroid") {
    const Vec2 c = circumcenter({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2.0});
    CHECK(c.x == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c.y == doctest::Approx(std::sqrt(3.0) / 6.0).epsilon(1e-13));
  }
  SUBCASE("isoceles") {
    const Vec2 c = circumcenter({0, 0}, {2, 0}, {1, 1.2});
    CHECK(c.x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.y == doctest::Approx(11.0 / 60.0).epsilon(1e-13));
  }
  SUBCASE("equidistance") {
    const Vec2 a{0.3, -0.2}, b{1.7, 0.4}, d{0.9, 1.5};
    const Vec2 c = circumcenter(a, b, d);
    const double r = norm(c - a);
    CHECK(norm(c - b) == doctest::Approx(r).epsilon(1e-13));
    CHECK(norm(c - d) == doctest::Approx(r).epsilon(1e-13));
  }
  SUBCASE("collinear points are rejected") {
    CHECK_THROWS_AS(circumcenter({0, 0}, {1, 1}, {2, 2}), CollinearPoints);
  }
}

TEST_CASE("import rejects invalid structure") {
  SUBCASE("vertex index out of range") {
    CHECK_THROWS_AS(import_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 5}}), InvalidMesh);
  }
  SUBCASE("collinear triangle") {
    CHECK_THROWS_AS(import_mesh({{0, 0}, {1, 1}, {2, 2}}, {{0, 1, 2}}), InvalidMesh);
  }
  SUBCASE("non-manifold edge") {
    CHECK_THROWS_AS(import_mesh({{0, 0}, {1, 0}, {0.5, 1}, {0.5, -1}, {1.5, 1}},
                                {{0, 1, 2}, {0, 3, 1}, {0, 1, 4}}),
                    InvalidMesh);
  }
}

TEST_CASE("non-Delaunay input is rejected") {
  // Tall quadrilateral triangulated along the long diagonal: each apex lies
  // strictly inside the other triangle's circumcircle.
  const std::vector<Vec2> pts = {{0, 0}, {1, -1.2}, {1, 1.2}, {2, 0}};
  CHECK_THROWS_AS(import_mesh(pts, {{0, 1, 2}, {3, 2, 1}}), NotDelaunay);
  try {
    import_mesh(pts, {{0, 1, 2}, {3, 2, 1}});
  } catch (const NotDelaunay& e) {
    CHECK(e.triangle >= 0);
    CHECK(e.vertex >= 0);
  }
  // The short-diagonal triangulation of the same points is fine.
  CHECK_NOTHROW(import_mesh(pts, {{0, 1, 3}, {0, 3, 2}}));
}

TEST_CASE("flat circumcenter placement is rejected") {
  // A single right triangle has its circumcenter on the hypotenuse, not
  // strictly inside.
  CHECK_THROWS_AS(import_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}), DegenerateDual);
}

TEST_CASE("triangle orientation is normalized") {
  // Same triangle in CW order: accepted and flipped to CCW.
  const DualMesh mesh = import_mesh({{0, 0}, {1, 0}, {0.5, 0.8}}, {{0, 2, 1}});
  CHECK(mesh.metrics.triangle_area[0] > 0.0);
}

TEST_CASE("mesh json round trip") {
  const DualMesh mesh = build_square_mesh(1);
  std::stringstream buffer;
  write_mesh_json(mesh, buffer);
  const DualMesh back = read_mesh_json(buffer);
  REQUIRE(back.primal.n_vertices() == mesh.primal.n_vertices());
  REQUIRE(back.primal.n_triangles() == mesh.primal.n_triangles());
  for (int v = 0; v < mesh.primal.n_vertices(); ++v) {
    CHECK(back.primal.vertices[v].x == mesh.primal.vertices[v].x);
    CHECK(back.primal.vertices[v].y == mesh.primal.vertices[v].y);
  }
  for (int k = 0; k < mesh.primal.n_triangles(); ++k)
    CHECK(back.primal.triangles[k] == mesh.primal.triangles[k]);
}

TEST_CASE("mesh json rejects unknown keys") {
  std::stringstream in(R"({"vertices": [[0,0],[1,0],[0.5,0.8]], "triangles": [[0,1,2]], "color": 3})");
  CHECK_THROWS_AS(read_mesh_json(in), InvalidMesh);
}

TEST_CASE("vtk export") {
  const DualMesh mesh = build_hexagon_mesh(0);
  std::stringstream out;
  write_vtk(mesh, out, {{"u", std::vector<double>(7, 1.0)}});
  const std::string text = out.str();
  CHECK(text.find("# vtk DataFile Version 3.0") == 0);
  CHECK(text.find("POINTS 7 double") != std::string::npos);
  CHECK(text.find("CELL_TYPES 6") != std::string::npos);
  CHECK(text.find("SCALARS u double 1") != std::string::npos);
}
