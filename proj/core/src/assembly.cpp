#include "emfd/assembly.hpp"

#include <cmath>
#include <string>

#include "emfd/errors.hpp"
#include "emfd/expfit.hpp"

namespace emfd {

namespace {

Vec2 edge_midpoint(const PrimalMesh& m, int e) {
  return (m.vertices[m.edges[e][0]] + m.vertices[m.edges[e][1]]) * 0.5;
}

}  // namespace

CoefficientSamples sample_coefficients(const DualMesh& mesh, const ProblemSpec& spec) {
  const PrimalMesh& m = mesh.primal;
  CoefficientSamples c;
  c.alpha_edge.resize(m.n_edges());
  c.alpha_tri.resize(m.n_triangles());
  c.gamma_node.resize(m.n_vertices());
  c.gamma_edge.resize(m.n_edges());

  for (int e = 0; e < m.n_edges(); ++e) {
    const Vec2 mid = edge_midpoint(m, e);
    c.alpha_edge[e] = spec.alpha_at(mid, mid);
    if (!(c.alpha_edge[e] > 0.0) || !std::isfinite(c.alpha_edge[e]))
      throw NonpositiveDiffusion("diffusion coefficient is not strictly positive at edge " +
                                 std::to_string(e));
    c.gamma_edge[e] = spec.gamma ? spec.gamma(mid) : 0.0;
    if (c.gamma_edge[e] < 0.0) c.gamma_negative = true;
  }
  for (int k = 0; k < m.n_triangles(); ++k) {
    const auto& t = m.triangles[k];
    const Vec2 cen = (m.vertices[t[0]] + m.vertices[t[1]] + m.vertices[t[2]]) * (1.0 / 3.0);
    c.alpha_tri[k] = spec.alpha_at(cen, cen);
    if (!(c.alpha_tri[k] > 0.0) || !std::isfinite(c.alpha_tri[k]))
      throw NonpositiveDiffusion("diffusion coefficient is not strictly positive in triangle " +
                                 std::to_string(k));
  }
  for (int v = 0; v < m.n_vertices(); ++v) {
    c.gamma_node[v] = spec.gamma ? spec.gamma(m.vertices[v]) : 0.0;
    if (c.gamma_node[v] < 0.0) c.gamma_negative = true;
  }
  return c;
}

DiscreteSystem assemble_scalar(const DualMesh& mesh, const MimeticOperators&,
                               const FluxOperators& flux, const CoefficientSamples& coeffs,
                               const ProblemSpec& spec) {
  const PrimalMesh& m = mesh.primal;
  const MeshMetrics& metrics = mesh.metrics;
  const ExpAverages& E = flux.averages;
  const int nv = m.n_vertices();
  const int ne = m.n_edges();

  DiscreteSystem sys;
  sys.kind = ProblemKind::scalar;
  sys.global_to_interior.assign(nv, -1);
  sys.boundary_values.assign(nv, 0.0);
  for (int v = 0; v < nv; ++v) {
    if (m.vertex_on_boundary[v]) {
      sys.boundary_values[v] = spec.dirichlet_scalar ? spec.dirichlet_scalar(m.vertices[v]) : 0.0;
    } else {
      sys.global_to_interior[v] = static_cast<int>(sys.interior_to_global.size());
      sys.interior_to_global.push_back(v);
    }
  }
  const int n = static_cast<int>(sys.interior_to_global.size());

  sys.W.resize(ne);
  std::vector<Triplet> trips;
  trips.reserve(4 * static_cast<std::size_t>(ne));
  std::vector<double> diag(n, 0.0), lift(n, 0.0);

  for (int e = 0; e < ne; ++e) {
    const int lo = m.edges[e][0], hi = m.edges[e][1];
    const double c = metrics.dual_edge_length[e] * coeffs.alpha_edge[e] / metrics.primal_edge_length[e];
    // Two-point fit per edge: endpoint-to-average ratios of the exponential
    // rule applied to the local pair (0, s_e), where s_e is the drift integral
    // along the edge. For potential drift s_e equals the potential gap and
    // this reproduces the global ratios exp(phi - log E_e) exactly; when the
    // drift carries a rotational part the local pair is still consistent by
    // construction, so the weights stay positive and the stencil stays an
    // M-matrix. The ratios are representable even when the averages are not.
    const double drift = E.edge_drift[e];
    const ScaledValue local = edge_exp_average_scaled(0.0, drift, drift);
    const double r_lo = std::exp(-local.log_value());
    const double r_hi = std::exp(drift - local.log_value());
    sys.W[e] = c * std::max(r_lo, r_hi);
    const int ilo = sys.global_to_interior[lo];
    const int ihi = sys.global_to_interior[hi];
    if (ilo >= 0) {
      const double inv_area = 1.0 / metrics.dual_cell_area[lo];
      diag[ilo] += c * r_lo * inv_area;
      if (ihi >= 0)
        trips.emplace_back(ilo, ihi, -c * r_hi * inv_area);
      else
        lift[ilo] += c * r_hi * inv_area * sys.boundary_values[hi];
    }
    if (ihi >= 0) {
      const double inv_area = 1.0 / metrics.dual_cell_area[hi];
      diag[ihi] += c * r_hi * inv_area;
      if (ilo >= 0)
        trips.emplace_back(ihi, ilo, -c * r_lo * inv_area);
      else
        lift[ihi] += c * r_lo * inv_area * sys.boundary_values[lo];
    }
  }

  sys.rhs.resize(n);
  sys.sym_log_scale.resize(n);
  for (int i = 0; i < n; ++i) {
    const int g = sys.interior_to_global[i];
    trips.emplace_back(i, i, diag[i] + coeffs.gamma_node[g]);
    sys.rhs[i] = (spec.f_scalar ? spec.f_scalar(m.vertices[g]) : 0.0) + lift[i];
    sys.sym_log_scale[i] = E.log_node[g] + std::log(metrics.dual_cell_area[g]);
  }
  sys.lift = std::move(lift);
  sys.L = SparseMatrix::from_triplets(n, n, trips);
  return sys;
}

DiscreteSystem assemble_vector_curl(const DualMesh& mesh, const MimeticOperators& ops,
                                    const FluxOperators& flux, const CoefficientSamples& coeffs,
                                    const ProblemSpec& spec) {
  const PrimalMesh& m = mesh.primal;
  const MeshMetrics& metrics = mesh.metrics;
  const ExpAverages& E = flux.averages;
  const int ne = m.n_edges();
  const int nt = m.n_triangles();

  DiscreteSystem sys;
  sys.kind = ProblemKind::vector;
  sys.global_to_interior.assign(ne, -1);
  sys.boundary_values.assign(ne, 0.0);
  for (int e = 0; e < ne; ++e) {
    if (m.edge_on_boundary[e]) {
      sys.boundary_values[e] =
          spec.dirichlet_vector ? edge_tangential_average(mesh, e, spec.dirichlet_vector) : 0.0;
    } else {
      sys.global_to_interior[e] = static_cast<int>(sys.interior_to_global.size());
      sys.interior_to_global.push_back(e);
    }
  }
  const int n = static_cast<int>(sys.interior_to_global.size());

  bool has_reaction = false;
  for (int e = 0; e < ne; ++e)
    if (sys.global_to_interior[e] >= 0 && coeffs.gamma_edge[e] != 0.0) has_reaction = true;
  if (!has_reaction)
    throw SingularReaction("vector curl-curl problem without reaction is singular on the fitted complex");

  std::vector<Triplet> trips;
  trips.reserve(9 * static_cast<std::size_t>(nt));
  std::vector<double> lift(n, 0.0);

  // L = curl_V D_alpha J1 + D_gamma, assembled triangle by triangle:
  //   (e,f) += K[k,e]/|e*_e| * alpha_k * K[k,f] |e_f| exp(log E_f - log E_k) / |D_k|
  for (int k = 0; k < nt; ++k) {
    const double a_k = coeffs.alpha_tri[k] / metrics.triangle_area[k];
    for (int le = 0; le < 3; ++le) {
      const int e = m.triangle_edges[k][le];
      const int row = sys.global_to_interior[e];
      if (row < 0) continue;
      const int u = m.triangles[k][le];
      const int w = m.triangles[k][(le + 1) % 3];
      const double sign_e = (u < w) ? 1.0 : -1.0;
      const double row_factor = sign_e / metrics.dual_edge_length[e] * a_k;
      for (int lf = 0; lf < 3; ++lf) {
        const int f = m.triangle_edges[k][lf];
        const int uu = m.triangles[k][lf];
        const int ww = m.triangles[k][(lf + 1) % 3];
        const double sign_f = (uu < ww) ? 1.0 : -1.0;
        const double v = row_factor * sign_f * metrics.primal_edge_length[f] *
                         std::exp(E.log_edge[f] - E.log_tri[k]);
        const int col = sys.global_to_interior[f];
        if (col >= 0)
          trips.emplace_back(row, col, v);
        else
          lift[row] -= v * sys.boundary_values[f];
      }
    }
  }

  sys.rhs.resize(n);
  for (int i = 0; i < n; ++i) {
    const int e = sys.interior_to_global[i];
    trips.emplace_back(i, i, coeffs.gamma_edge[e]);
    sys.rhs[i] = (spec.f_vector ? edge_tangential_average(mesh, e, spec.f_vector) : 0.0) + lift[i];
  }
  sys.lift = std::move(lift);
  sys.L = SparseMatrix::from_triplets(n, n, trips);
  return sys;
}

std::vector<double> expand_solution(const DiscreteSystem& sys, const std::vector<double>& interior) {
  std::vector<double> full = sys.boundary_values;
  for (std::size_t i = 0; i < sys.interior_to_global.size(); ++i)
    full[static_cast<std::size_t>(sys.interior_to_global[i])] = interior[i];
  return full;
}

double edge_tangential_average(const DualMesh& mesh, int e, const std::function<Vec2(Vec2)>& F) {
  const PrimalMesh& m = mesh.primal;
  const Vec2 a = m.vertices[m.edges[e][0]];
  const Vec2 b = m.vertices[m.edges[e][1]];
  const Vec2 t = (b - a) * (1.0 / mesh.metrics.primal_edge_length[e]);
  const Vec2 mid = (a + b) * 0.5;
  const Vec2 off = (b - a) * (0.5 / std::sqrt(3.0));
  return 0.5 * (dot(F(mid + off), t) + dot(F(mid - off), t));
}

LumpingReport lumping_identity_check(const DualMesh& mesh, const MimeticOperators& ops,
                                     const FluxOperators& flux, const CoefficientSamples& coeffs) {
  const PrimalMesh& m = mesh.primal;
  const MeshMetrics& metrics = mesh.metrics;
  const ExpAverages& E = flux.averages;
  const int nv = m.n_vertices();
  const int ne = m.n_edges();

  // Route one: entrywise conductance assembly over all vertices, scaled by
  // the dual cell areas (i.e. D_V L with the reaction off).
  std::vector<Triplet> trips;
  trips.reserve(4 * static_cast<std::size_t>(ne));
  for (int e = 0; e < ne; ++e) {
    const int lo = m.edges[e][0], hi = m.edges[e][1];
    const double c = metrics.dual_edge_length[e] * coeffs.alpha_edge[e] / metrics.primal_edge_length[e];
    const double r_lo = std::exp(E.edge_phi_lo[e] - E.log_edge[e]);
    const double r_hi = std::exp(E.edge_phi_hi[e] - E.log_edge[e]);
    trips.emplace_back(lo, lo, c * r_lo);
    trips.emplace_back(lo, hi, -c * r_hi);
    trips.emplace_back(hi, hi, c * r_hi);
    trips.emplace_back(hi, lo, -c * r_lo);
  }
  SparseMatrix route_pairs = SparseMatrix::from_triplets(nv, nv, trips);

  // Route two: the operator product G^T (D_dual D_alpha) J0.
  std::vector<Triplet> dt;
  dt.reserve(static_cast<std::size_t>(ne));
  for (int e = 0; e < ne; ++e)
    dt.emplace_back(e, e, metrics.dual_edge_length[e] * coeffs.alpha_edge[e]);
  SparseMatrix weights = SparseMatrix::from_triplets(ne, ne, dt);
  SparseMatrix route_product = ops.incidence.G().transposed() * weights * flux.J0;

  LumpingReport rep;
  rep.scale = route_product.max_abs();
  Eigen::SparseMatrix<double> diff = route_pairs.eigen() - route_product.eigen();
  rep.max_abs_deviation = SparseMatrix(std::move(diff)).max_abs();
  rep.relative = rep.scale > 0.0 ? rep.max_abs_deviation / rep.scale : rep.max_abs_deviation;
  return rep;
}

}  // namespace emfd
