#include "emfd/mimetic_ops.hpp"

#include <cstdlib>
#include <map>
#include <utility>

namespace emfd {

SparseMatrix IncidenceSet::G() const {
  std::vector<Triplet> t;
  t.reserve(g_entries.size());
  for (const auto& e : g_entries) t.emplace_back(e.row, e.col, static_cast<double>(e.value));
  return SparseMatrix::from_triplets(n_edges, n_vertices, t);
}

SparseMatrix IncidenceSet::K() const {
  std::vector<Triplet> t;
  t.reserve(k_entries.size());
  for (const auto& e : k_entries) t.emplace_back(e.row, e.col, static_cast<double>(e.value));
  return SparseMatrix::from_triplets(n_triangles, n_edges, t);
}

IncidenceSet build_incidence(const DualMesh& mesh) {
  const PrimalMesh& m = mesh.primal;
  IncidenceSet inc;
  inc.n_vertices = m.n_vertices();
  inc.n_edges = m.n_edges();
  inc.n_triangles = m.n_triangles();

  inc.g_entries.reserve(2 * static_cast<std::size_t>(inc.n_edges));
  for (int e = 0; e < inc.n_edges; ++e) {
    inc.g_entries.push_back({e, m.edges[e][0], -1});
    inc.g_entries.push_back({e, m.edges[e][1], +1});
  }

  inc.k_entries.reserve(3 * static_cast<std::size_t>(inc.n_triangles));
  for (int t = 0; t < inc.n_triangles; ++t) {
    for (int l = 0; l < 3; ++l) {
      const int u = m.triangles[t][l];
      const int w = m.triangles[t][(l + 1) % 3];
      // CCW traversal u->w agrees with the edge orientation iff u is the
      // low endpoint.
      inc.k_entries.push_back({t, m.triangle_edges[t][l], u < w ? +1 : -1});
    }
  }
  return inc;
}

std::int64_t incidence_product_max(const IncidenceSet& inc) {
  // K*G row by row in exact integers.
  std::vector<std::pair<int, std::int64_t>> g_by_edge_lo(inc.n_edges), g_by_edge_hi(inc.n_edges);
  for (std::size_t i = 0; i < inc.g_entries.size(); i += 2) {
    const auto& a = inc.g_entries[i];
    const auto& b = inc.g_entries[i + 1];
    g_by_edge_lo[a.row] = {a.col, a.value};
    g_by_edge_hi[b.row] = {b.col, b.value};
  }
  std::int64_t worst = 0;
  std::map<std::pair<int, int>, std::int64_t> row_acc;
  int current_row = -1;
  auto flush = [&] {
    for (const auto& [key, v] : row_acc) worst = std::max(worst, v < 0 ? -v : v);
    row_acc.clear();
  };
  for (const auto& ke : inc.k_entries) {
    if (ke.row != current_row) {
      flush();
      current_row = ke.row;
    }
    row_acc[{ke.row, g_by_edge_lo[ke.col].first}] += ke.value * g_by_edge_lo[ke.col].second;
    row_acc[{ke.row, g_by_edge_hi[ke.col].first}] += ke.value * g_by_edge_hi[ke.col].second;
  }
  flush();
  return worst;
}

MimeticOperators build_mimetic_operators(const DualMesh& mesh) {
  const PrimalMesh& m = mesh.primal;
  const MeshMetrics& metrics = mesh.metrics;
  MimeticOperators ops;
  ops.incidence = build_incidence(mesh);

  std::vector<Triplet> grad, curl, div, curl_v;
  grad.reserve(ops.incidence.g_entries.size());
  div.reserve(ops.incidence.g_entries.size());
  for (const auto& e : ops.incidence.g_entries) {
    const double sign = static_cast<double>(e.value);
    grad.emplace_back(e.row, e.col, sign / metrics.primal_edge_length[e.row]);
    div.emplace_back(e.col, e.row, sign * metrics.dual_edge_length[e.row] / metrics.dual_cell_area[e.col]);
  }

  curl.reserve(ops.incidence.k_entries.size());
  curl_v.reserve(ops.incidence.k_entries.size());
  for (const auto& e : ops.incidence.k_entries) {
    const double sign = static_cast<double>(e.value);
    curl.emplace_back(e.row, e.col, sign * metrics.primal_edge_length[e.col] / metrics.triangle_area[e.row]);
    curl_v.emplace_back(e.col, e.row, sign / metrics.dual_edge_length[e.col]);
  }

  const int nv = ops.incidence.n_vertices;
  const int ne = ops.incidence.n_edges;
  const int nt = ops.incidence.n_triangles;
  ops.grad_D = SparseMatrix::from_triplets(ne, nv, grad);
  ops.curl_D = SparseMatrix::from_triplets(nt, ne, curl);
  ops.div_D = SparseMatrix::from_triplets(nv, ne, div);
  ops.curl_V = SparseMatrix::from_triplets(ne, nt, curl_v);
  return ops;
}

}  // namespace emfd
