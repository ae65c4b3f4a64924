#pragma once

#include <cstdint>
#include <vector>

#include "emfd/dualmesh.hpp"
#include "emfd/sparse.hpp"

namespace emfd {

/// Signed incidence structure of the primal complex, kept in exact integer
/// form so that the composition K*G can be verified to vanish identically.
struct IncidenceSet {
  int n_vertices = 0;
  int n_edges = 0;
  int n_triangles = 0;

  // G: edges x vertices, -1 at the low endpoint, +1 at the high endpoint.
  // K: triangles x edges, +1 where the CCW triangle traverses the edge in
  // its low->high direction (i.e. the triangle lies left of the edge).
  struct Entry {
    int row, col;
    std::int64_t value;
  };
  std::vector<Entry> g_entries;
  std::vector<Entry> k_entries;

  SparseMatrix G() const;
  SparseMatrix K() const;
};

IncidenceSet build_incidence(const DualMesh& mesh);

/// Max |(K*G)_ij| computed in 64-bit integer arithmetic; zero iff the
/// boundary-of-boundary identity holds exactly.
std::int64_t incidence_product_max(const IncidenceSet& inc);

/// Metric-aware first-order operators on the dual pair.
///
///   grad_D = D_e^-1 G                 edge tangential derivative of a vertex field
///   curl_D = D_T^-1 K D_e             triangle circulation density of an edge field
///   div_D  = D_V^-1 G^T D_dual        vertex divergence of an edge flux field
///            (sign chosen so that -div grad assembles with a plus)
///   curl_V = D_dual^-1 K^T            edge rotation of a triangle field
///
/// Adjointness: <curl_D u, w>_T = 2 <u, curl_V w>_e with the diamond edge
/// weights |e| |e*| / 2 and triangle weights |D_k|.
struct MimeticOperators {
  IncidenceSet incidence;
  SparseMatrix grad_D;
  SparseMatrix curl_D;
  SparseMatrix div_D;
  SparseMatrix curl_V;
};

MimeticOperators build_mimetic_operators(const DualMesh& mesh);

}  // namespace emfd
