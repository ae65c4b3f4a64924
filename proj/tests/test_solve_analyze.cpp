#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "emfd/analysis.hpp"
#include "emfd/assembly.hpp"
#include "emfd/dualmesh.hpp"
#include "emfd/errors.hpp"
#include "emfd/fem.hpp"
#include "emfd/presets.hpp"
#include "emfd/solve.hpp"

using namespace emfd;

namespace {

DiscreteSystem assemble_preset(const DualMesh& mesh, const std::string& name, double alpha) {
  const ProblemSpec spec = find_preset(name).make_spec(alpha);
  const MimeticOperators ops = build_mimetic_operators(mesh);
  const FluxOperators flux = build_flux_operators(mesh, ops, build_exp_averages(mesh, spec.potential));
  const CoefficientSamples coeffs = sample_coefficients(mesh, spec);
  return spec.kind == ProblemKind::scalar ? assemble_scalar(mesh, ops, flux, coeffs, spec)
                                          : assemble_vector_curl(mesh, ops, flux, coeffs, spec);
}

DiscreteSystem tiny_system(std::vector<Triplet> trips, std::vector<double> rhs) {
  DiscreteSystem sys;
  const int n = static_cast<int>(rhs.size());
  sys.L = SparseMatrix::from_triplets(n, n, trips);
  sys.rhs = std::move(rhs);
  sys.lift.assign(static_cast<std::size_t>(n), 0.0);
  sys.boundary_values.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) sys.interior_to_global.push_back(i);
  sys.global_to_interior = sys.interior_to_global;
  return sys;
}

}  // namespace

TEST_CASE("the three solver methods agree on a moderate problem") {
  const DualMesh mesh = build_hexagon_mesh(3);
  const DiscreteSystem sys = assemble_preset(mesh, "hex-scalar", 1.0);

  SolveOptions direct;
  const Solution a = solve(sys, direct);
  CHECK(a.report.residual <= 1e-10);
  CHECK(a.report.iterations == 0);

  SolveOptions cg;
  cg.method = SolverMethod::cg;
  cg.tolerance = 1e-12;
  const Solution b = solve(sys, cg);
  CHECK(b.report.iterations > 0);

  SolveOptions bicg;
  bicg.method = SolverMethod::bicgstab;
  bicg.tolerance = 1e-12;
  const Solution c = solve(sys, bicg);

  double scale = 0.0;
  for (double v : a.interior) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < a.interior.size(); ++i) {
    CHECK(std::abs(a.interior[i] - b.interior[i]) <= 1e-7 * scale);
    CHECK(std::abs(a.interior[i] - c.interior[i]) <= 1e-7 * scale);
  }
}

TEST_CASE("cg refuses systems without a symmetrizing scale") {
  const DualMesh mesh = build_square_mesh(1);
  DiscreteSystem sys = assemble_preset(mesh, "square-curl-layer", 1.0);
  SolveOptions cg;
  cg.method = SolverMethod::cg;
  CHECK_THROWS_AS(solve(sys, cg), Error);
}

TEST_CASE("iteration caps surface as NoConvergence with the residual attached") {
  const DualMesh mesh = build_hexagon_mesh(3);
  const DiscreteSystem sys = assemble_preset(mesh, "hex-scalar", 1.0);
  SolveOptions opts;
  opts.method = SolverMethod::cg;
  opts.tolerance = 1e-14;
  opts.max_iterations = 1;
  try {
    solve(sys, opts);
    FAIL("expected NoConvergence");
  } catch (const NoConvergence& err) {
    CHECK(err.iterations <= 1);
    CHECK(err.residual > 1e-14);
  }
}

TEST_CASE("singular systems surface as SingularMatrix") {
  DiscreteSystem sys = tiny_system({{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}},
                                   {1.0, 2.0});
  CHECK_THROWS_AS(solve(sys), SingularMatrix);
}

TEST_CASE("error norms vanish on exactly representable solutions") {
  const DualMesh mesh = build_hexagon_mesh(2);
  // Linear scalar solutions are reproduced by the piecewise-linear reconstruction.
  auto exact = [](Vec2 p) { return 0.3 * p.x + p.y; };
  auto exact_grad = [](Vec2) { return Vec2{0.3, 1.0}; };
  std::vector<double> full(static_cast<std::size_t>(mesh.primal.n_vertices()));
  for (int v = 0; v < mesh.primal.n_vertices(); ++v)
    full[static_cast<std::size_t>(v)] = exact(mesh.primal.vertices[v]);
  const ErrorNorms n = error_norms_scalar(mesh, exact, exact_grad, full);
  CHECK(n.energy <= 1e-14);
  CHECK(n.l2 <= 1e-14);

  // (y, -x) lies in the lowest-order edge space (constant plus rotation), so
  // the reconstruction from exact tangential averages reproduces it.
  auto exact_v = [](Vec2 p) { return Vec2{p.y, -p.x}; };
  auto exact_curl = [](Vec2) { return -2.0; };
  std::vector<double> dof(static_cast<std::size_t>(mesh.primal.n_edges()));
  for (int e = 0; e < mesh.primal.n_edges(); ++e)
    dof[static_cast<std::size_t>(e)] = edge_tangential_average(mesh, e, exact_v);
  const ErrorNorms nv = error_norms_vector(mesh, exact_v, exact_curl, dof);
  CHECK(nv.energy <= 1e-14);
  CHECK(nv.l2 <= 1e-14);
}

TEST_CASE("scalar error norms match hand values for a unit spike at the hexagon center") {
  const DualMesh mesh = build_hexagon_mesh(0);
  int center = -1;
  for (int v = 0; v < mesh.primal.n_vertices(); ++v)
    if (norm(mesh.primal.vertices[v]) < 1e-12) center = v;
  REQUIRE(center >= 0);
  std::vector<double> full(static_cast<std::size_t>(mesh.primal.n_vertices()), 0.0);
  full[static_cast<std::size_t>(center)] = 1.0;
  const ErrorNorms n = error_norms_scalar(
      mesh, [](Vec2) { return 0.0; }, [](Vec2) { return Vec2{0.0, 0.0}; }, full);
  // The hat function on six unit equilateral triangles: |grad hat| = 2/sqrt(3)
  // per triangle, so |hat|_1^2 = 6 (sqrt(3)/4)(4/3) = 2 sqrt(3).
  CHECK(n.energy == doctest::Approx(std::sqrt(2.0 * std::sqrt(3.0))).epsilon(1e-13));
  // int hat^2 = area/6 per triangle: ||hat||^2 = 6 (sqrt(3)/4)/6 = sqrt(3)/4.
  CHECK(n.l2 == doctest::Approx(0.5 * std::pow(3.0, 0.25)).epsilon(1e-13));
}

TEST_CASE("convergence study produces ordered rows with sensible rates") {
  const StudyProblem problem = to_study(find_preset("hex-scalar"));
  const std::vector<StudyRow> rows = convergence_study(problem, {1, 2, 3}, {1.0});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].level == 1);
  CHECK(rows[2].level == 3);
  CHECK(std::isnan(rows[0].rate_energy));
  CHECK(std::isnan(rows[0].rate_l2));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].h == doctest::Approx(0.5 * rows[i - 1].h));
    CHECK(rows[i].err_energy < rows[i - 1].err_energy);
  }
  CHECK(rows[2].rate_energy > 0.7);
  CHECK(rows[2].rate_energy < 1.3);
  CHECK(rows[2].rate_l2 > 1.5);
  CHECK(rows[2].rate_l2 < 2.5);
}

TEST_CASE("the study is deterministic under the thread budget") {
  const StudyProblem problem = to_study(find_preset("hex-scalar"));
  const std::vector<StudyRow> serial = convergence_study(problem, {1, 2}, {1.0, 0.1});
  setenv("MFD_THREADS", "4", 1);
  const std::vector<StudyRow> parallel = convergence_study(problem, {1, 2}, {1.0, 0.1});
  unsetenv("MFD_THREADS");
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].err_energy == parallel[i].err_energy);
    CHECK(serial[i].err_l2 == parallel[i].err_l2);
  }
}

TEST_CASE("study csv uses the pinned header and one line per row") {
  const StudyProblem problem = to_study(find_preset("hex-scalar"));
  const std::vector<StudyRow> rows = convergence_study(problem, {1, 2}, {1.0});
  std::ostringstream out;
  write_study_csv(rows, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "h,alpha,err_energy,err_l2,rate_energy,rate_l2");
  int data_lines = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++data_lines;
  CHECK(data_lines == 2);
}

TEST_CASE("certification inverts small systems densely") {
  const DualMesh mesh = build_square_mesh(2);
  const DiscreteSystem sys = assemble_preset(mesh, "square-boundary-layer", 1e-6);
  const MonotonicityReport rep = certify_monotone(sys);
  CHECK(rep.method == "dense-inverse");
  CHECK(rep.is_z_matrix);
  REQUIRE(rep.inverse_nonnegative.has_value());
  CHECK(*rep.inverse_nonnegative);
  CHECK(rep.min_inverse_entry >= -1e-10);
}

TEST_CASE("certification flags positive off-diagonals and negative inverse entries") {
  const DiscreteSystem bad =
      tiny_system({{0, 0, 2.0}, {0, 1, 0.5}, {1, 0, -1.0}, {1, 1, 2.0}}, {0.0, 0.0});
  const MonotonicityReport rep = certify_monotone(bad);
  CHECK(!rep.is_z_matrix);
  CHECK(rep.max_offdiag == doctest::Approx(0.5));
  REQUIRE(rep.inverse_nonnegative.has_value());
  CHECK(!*rep.inverse_nonnegative);

  const DiscreteSystem good =
      tiny_system({{0, 0, 2.0}, {0, 1, -1.0}, {1, 0, -1.0}, {1, 1, 2.0}}, {0.0, 0.0});
  const MonotonicityReport rep2 = certify_monotone(good);
  CHECK(rep2.is_z_matrix);
  CHECK(*rep2.inverse_nonnegative);
  CHECK(rep2.min_inverse_entry == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("certification proves monotonicity via the symmetrized form on large systems") {
  const DualMesh mesh = build_hexagon_mesh(5);
  const DiscreteSystem sys = assemble_preset(mesh, "hex-scalar", 1.0);
  REQUIRE(sys.L.rows() > 1200);
  const MonotonicityReport rep = certify_monotone(sys);
  CHECK(rep.method == "symmetrized-spd");
  CHECK(rep.is_z_matrix);
  REQUIRE(rep.inverse_nonnegative.has_value());
  CHECK(*rep.inverse_nonnegative);
}

TEST_CASE("oscillation metric measures bound violations") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(oscillation_metric({0.2, 0.9}, 0.0, 1.0) == 0.0);
  CHECK(oscillation_metric({-0.1, 0.5}, 0.0, 1.0) == doctest::Approx(0.1));
  CHECK(oscillation_metric({0.5, 1.2}, 0.0, 1.0) == doctest::Approx(0.2));
  CHECK(oscillation_metric({-0.3, 1.2}, 0.0, 1.0) == doctest::Approx(0.3));
  CHECK(oscillation_metric({-5.0, 7.0}, -inf, inf) == 0.0);
}

TEST_CASE("the reference FEM reproduces linear solutions exactly") {
  const DualMesh mesh = build_square_mesh(2);
  auto linear = [](Vec2 p) { return 1.0 - 2.0 * p.x + 0.5 * p.y; };
  ProblemSpec spec;
  spec.kind = ProblemKind::scalar;
  spec.alpha = [](Vec2, Vec2) { return 1.0; };
  spec.beta = [](Vec2) { return Vec2{0.0, 0.0}; };
  spec.gamma = [](Vec2) { return 0.0; };
  spec.f_scalar = [](Vec2) { return 0.0; };
  spec.potential = PotentialField::zero();
  spec.dirichlet_scalar = linear;
  const std::vector<double> u = fem_scalar_solve(mesh, spec);
  for (int v = 0; v < mesh.primal.n_vertices(); ++v)
    CHECK(u[static_cast<std::size_t>(v)] ==
          doctest::Approx(linear(mesh.primal.vertices[v])).epsilon(1e-12));
}

TEST_CASE("the reference FEM converges at second order in L2 for smooth diffusion") {
  constexpr double kPi = 3.14159265358979323846;
  auto exact = [](Vec2 p) { return std::sin(kPi * p.x) * std::sin(kPi * p.y); };
  ProblemSpec spec;
  spec.kind = ProblemKind::scalar;
  spec.alpha = [](Vec2, Vec2) { return 1.0; };
  spec.beta = [](Vec2) { return Vec2{0.0, 0.0}; };
  spec.gamma = [](Vec2) { return 0.0; };
  spec.f_scalar = [exact](Vec2 p) { return 2.0 * kPi * kPi * exact(p); };
  spec.potential = PotentialField::zero();
  spec.dirichlet_scalar = exact;

  std::vector<double> errs;
  for (int level : {2, 3, 4}) {
    const DualMesh mesh = build_square_mesh(level);
    const std::vector<double> u = fem_scalar_solve(mesh, spec);
    errs.push_back(error_norms_scalar(mesh, exact, nullptr, u).l2);
  }
  const double rate = std::log(errs[1] / errs[2]) / std::log(2.0);
  CHECK(rate > 1.6);
  CHECK(rate < 2.4);
}

TEST_CASE("the reference FEM oscillates on the boundary layer while the fitted scheme stays in bounds") {
  const DualMesh mesh = build_square_mesh(4);
  const ProblemSpec spec = find_preset("square-boundary-layer").make_spec(1e-6);

  const std::vector<double> fem = fem_scalar_solve(mesh, spec);
  CHECK(oscillation_metric(fem, 0.0, std::numeric_limits<double>::infinity()) > 1e-6);

  const DiscreteSystem sys = assemble_preset(mesh, "square-boundary-layer", 1e-6);
  const Solution sol = solve(sys);
  CHECK(oscillation_metric(sol.full, 0.0, std::numeric_limits<double>::infinity()) <= 1e-10);
}
