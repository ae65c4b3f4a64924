#include "emfd/analysis.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <thread>

namespace emfd {

namespace {

// Degree-5 7-point triangle rule (barycentric points, weights sum to 1).
struct TriQuadPoint {
  double l0, l1, l2, w;
};
constexpr double kQa = 0.059715871789770, kQb = 0.470142064105115, kWab = 0.132394152788506;
constexpr double kQc = 0.797426985353087, kQd = 0.101286507323456, kWcd = 0.125939180544827;
constexpr TriQuadPoint kTriQuad[7] = {
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
    {kQa, kQb, kQb, kWab}, {kQb, kQa, kQb, kWab}, {kQb, kQb, kQa, kWab},
    {kQc, kQd, kQd, kWcd}, {kQd, kQc, kQd, kWcd}, {kQd, kQd, kQc, kWcd},
};

}  // namespace

ErrorNorms error_norms_scalar(const DualMesh& mesh, const std::function<double(Vec2)>& exact,
                              const std::function<Vec2(Vec2)>& exact_grad,
                              const std::vector<double>& full) {
  const PrimalMesh& m = mesh.primal;
  ErrorNorms n;
  for (const std::array<int, 3>& tri : m.triangles) {
    const Vec2 a = m.vertices[tri[0]], b = m.vertices[tri[1]], c = m.vertices[tri[2]];
    const double fa = full[static_cast<std::size_t>(tri[0])],
                 fb = full[static_cast<std::size_t>(tri[1])],
                 fc = full[static_cast<std::size_t>(tri[2])];
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    const double area = 0.5 * std::abs(det);
    const Vec2 gh = {(fa * (b.y - c.y) + fb * (c.y - a.y) + fc * (a.y - b.y)) / det,
                     (fa * (c.x - b.x) + fb * (a.x - c.x) + fc * (b.x - a.x)) / det};
    for (const TriQuadPoint& q : kTriQuad) {
      const Vec2 x = {q.l0 * a.x + q.l1 * b.x + q.l2 * c.x, q.l0 * a.y + q.l1 * b.y + q.l2 * c.y};
      const double du = exact(x) - (q.l0 * fa + q.l1 * fb + q.l2 * fc);
      n.l2 += q.w * area * du * du;
      if (exact_grad) {
        const Vec2 g = exact_grad(x);
        n.energy += q.w * area * ((g.x - gh.x) * (g.x - gh.x) + (g.y - gh.y) * (g.y - gh.y));
      }
    }
  }
  n.energy = exact_grad ? std::sqrt(n.energy) : std::numeric_limits<double>::quiet_NaN();
  n.l2 = std::sqrt(n.l2);
  return n;
}

ErrorNorms error_norms_vector(const DualMesh& mesh, const std::function<Vec2(Vec2)>& exact,
                              const std::function<double(Vec2)>& exact_curl,
                              const std::vector<double>& full) {
  const PrimalMesh& m = mesh.primal;
  const MeshMetrics& metrics = mesh.metrics;
  ErrorNorms n;
  for (int k = 0; k < m.n_triangles(); ++k) {
    const std::array<int, 3>& tri = m.triangles[k];
    const Vec2 a = m.vertices[tri[0]], b = m.vertices[tri[1]], c = m.vertices[tri[2]];
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    const double area = 0.5 * std::abs(det);
    const Vec2 gl[3] = {{(b.y - c.y) / det, (c.x - b.x) / det},
                        {(c.y - a.y) / det, (a.x - c.x) / det},
                        {(a.y - b.y) / det, (b.x - a.x) / det}};
    // Circulation coefficients of the Whitney basis: local edge l runs from
    // local vertex l to l+1; the stored tangential average is oriented from
    // the lower to the higher global vertex index.
    double circ[3];
    double curl_h = 0.0;
    for (int l = 0; l < 3; ++l) {
      const int e = m.triangle_edges[k][l];
      const int u = l, v = (l + 1) % 3;
      const double sign = tri[u] < tri[v] ? 1.0 : -1.0;
      circ[l] = sign * metrics.primal_edge_length[e] * full[static_cast<std::size_t>(e)];
      curl_h += circ[l] * 2.0 * (gl[u].x * gl[v].y - gl[u].y * gl[v].x);
    }
    for (const TriQuadPoint& q : kTriQuad) {
      const double lam[3] = {q.l0, q.l1, q.l2};
      const Vec2 x = {q.l0 * a.x + q.l1 * b.x + q.l2 * c.x, q.l0 * a.y + q.l1 * b.y + q.l2 * c.y};
      Vec2 uh = {0.0, 0.0};
      for (int l = 0; l < 3; ++l) {
        const int u = l, v = (l + 1) % 3;
        uh.x += circ[l] * (lam[u] * gl[v].x - lam[v] * gl[u].x);
        uh.y += circ[l] * (lam[u] * gl[v].y - lam[v] * gl[u].y);
      }
      const Vec2 ue = exact(x);
      n.l2 += q.w * area * ((ue.x - uh.x) * (ue.x - uh.x) + (ue.y - uh.y) * (ue.y - uh.y));
      if (exact_curl) {
        const double dc = exact_curl(x) - curl_h;
        n.energy += q.w * area * dc * dc;
      }
    }
  }
  n.energy = exact_curl ? std::sqrt(n.energy) : std::numeric_limits<double>::quiet_NaN();
  n.l2 = std::sqrt(n.l2);
  return n;
}

namespace {

int thread_budget() {
  const char* env = std::getenv("MFD_THREADS");
  if (!env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || v < 1) return 1;
  return static_cast<int>(std::min(v, 256L));
}

}  // namespace

std::vector<StudyRow> convergence_study(const StudyProblem& problem, const std::vector<int>& levels,
                                        const std::vector<double>& alphas, const SolveOptions& opts) {
  std::vector<DualMesh> meshes;
  meshes.reserve(levels.size());
  for (int level : levels) meshes.push_back(problem.make_mesh(level));
  std::vector<MimeticOperators> ops;
  ops.reserve(levels.size());
  for (const DualMesh& mesh : meshes) ops.push_back(build_mimetic_operators(mesh));

  const std::size_t n_tasks = alphas.size() * levels.size();
  std::vector<StudyRow> rows(n_tasks);
  std::vector<std::exception_ptr> failures(n_tasks);

  auto run_task = [&](std::size_t task) {
    const std::size_t ia = task / levels.size();
    const std::size_t il = task % levels.size();
    try {
      const DualMesh& mesh = meshes[il];
      const ProblemSpec spec = problem.make_spec(alphas[ia]);
      const ExpAverages averages = build_exp_averages(mesh, spec.potential);
      const FluxOperators flux = build_flux_operators(mesh, ops[il], averages);
      const CoefficientSamples coeffs = sample_coefficients(mesh, spec);
      const DiscreteSystem sys = problem.kind == ProblemKind::scalar
                                     ? assemble_scalar(mesh, ops[il], flux, coeffs, spec)
                                     : assemble_vector_curl(mesh, ops[il], flux, coeffs, spec);
      const Solution sol = solve(sys, opts);
      StudyRow row;
      row.level = levels[il];
      row.h = problem.spacing ? problem.spacing(levels[il]) : mesh_spacing(mesh);
      row.alpha = alphas[ia];
      if (problem.kind == ProblemKind::scalar && problem.exact_scalar) {
        const ErrorNorms n =
            error_norms_scalar(mesh, problem.exact_scalar, problem.exact_scalar_grad, sol.full);
        row.err_energy = n.energy;
        row.err_l2 = n.l2;
      } else if (problem.kind == ProblemKind::vector && problem.exact_vector) {
        const ErrorNorms n =
            error_norms_vector(mesh, problem.exact_vector, problem.exact_vector_curl, sol.full);
        row.err_energy = n.energy;
        row.err_l2 = n.l2;
      } else {
        row.err_energy = row.err_l2 = std::numeric_limits<double>::quiet_NaN();
      }
      rows[task] = row;
    } catch (...) {
      failures[task] = std::current_exception();
    }
  };

  const int budget = std::min<int>(thread_budget(), static_cast<int>(n_tasks));
  if (budget <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(budget));
    for (int w = 0; w < budget; ++w)
      workers.emplace_back([&] {
        for (std::size_t t = next.fetch_add(1); t < n_tasks; t = next.fetch_add(1)) run_task(t);
      });
    for (std::thread& w : workers) w.join();
  }
  for (const std::exception_ptr& failure : failures)
    if (failure) std::rethrow_exception(failure);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t ia = 0; ia < alphas.size(); ++ia) {
    for (std::size_t il = 0; il < levels.size(); ++il) {
      StudyRow& row = rows[ia * levels.size() + il];
      if (il == 0) {
        row.rate_energy = row.rate_l2 = nan;
        continue;
      }
      const StudyRow& prev = rows[ia * levels.size() + il - 1];
      const double hr = std::log(prev.h / row.h);
      row.rate_energy = std::log(prev.err_energy / row.err_energy) / hr;
      row.rate_l2 = std::log(prev.err_l2 / row.err_l2) / hr;
    }
  }
  return rows;
}

void write_study_csv(const std::vector<StudyRow>& rows, std::ostream& out) {
  out << "h,alpha,err_energy,err_l2,rate_energy,rate_l2\n";
  char buf[192];
  for (const StudyRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.h, r.alpha, r.err_energy,
                  r.err_l2, r.rate_energy, r.rate_l2);
    out << buf;
  }
}

MonotonicityReport certify_monotone(const DiscreteSystem& sys, int dense_limit) {
  MonotonicityReport rep;
  const int n = sys.L.rows();

  rep.max_offdiag = -std::numeric_limits<double>::infinity();
  sys.L.for_each([&](int r, int c, double v) {
    if (r != c) rep.max_offdiag = std::max(rep.max_offdiag, v);
  });
  if (!std::isfinite(rep.max_offdiag)) rep.max_offdiag = 0.0;  // diagonal-only matrix
  rep.is_z_matrix = rep.max_offdiag <= 1e-14;

  if (n <= dense_limit) {
    rep.method = "dense-inverse";
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(sys.L.eigen());
    if (lu.info() != Eigen::Success) {
      rep.method = "none";
      return rep;
    }
    double min_entry = std::numeric_limits<double>::infinity();
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
      unit[j] = 1.0;
      const Eigen::VectorXd col = lu.solve(unit);
      unit[j] = 0.0;
      min_entry = std::min(min_entry, col.minCoeff());
    }
    rep.min_inverse_entry = min_entry;
    rep.inverse_nonnegative = min_entry >= -1e-10;
    return rep;
  }

  // Proof route: a Z-matrix whose symmetrization is positive definite is an
  // M-matrix, so its inverse is entrywise nonnegative.
  if (sys.sym_log_scale.size() != static_cast<std::size_t>(n)) {
    rep.method = "none";
    return rep;
  }
  const double smax = *std::max_element(sys.sym_log_scale.begin(), sys.sym_log_scale.end());
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) {
    d[i] = std::exp(sys.sym_log_scale[static_cast<std::size_t>(i)] - smax);
    if (!(d[i] > 0.0)) {
      rep.method = "none";  // scale underflows; the sign question stays open
      return rep;
    }
  }
  Eigen::SparseMatrix<double> S = d.asDiagonal() * sys.L.eigen();
  Eigen::SparseMatrix<double> St = S.transpose();
  const double asym = SparseMatrix(Eigen::SparseMatrix<double>(S - St)).max_abs();
  const double scale = SparseMatrix(Eigen::SparseMatrix<double>(S)).max_abs();
  if (!(asym <= 1e-8 * scale)) {
    rep.method = "none";
    return rep;
  }
  Eigen::SparseMatrix<double> sym = 0.5 * (S + St);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  ldlt.compute(sym);
  const bool spd = ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 0.0;
  rep.method = "symmetrized-spd";
  rep.inverse_nonnegative = rep.is_z_matrix && spd;
  return rep;
}

double oscillation_metric(const std::vector<double>& values, double lower, double upper) {
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
  for (double v : values) {
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  return std::max({0.0, lower - vmin, vmax - upper});
}

}  // namespace emfd
