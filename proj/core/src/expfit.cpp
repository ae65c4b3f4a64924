#include "emfd/expfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "emfd/errors.hpp"

namespace emfd {

namespace {

constexpr double kPairTol = 1e-12;  // potentials closer than this take the confluent limit

void require_finite(std::initializer_list<double> xs, const char* what) {
  for (double x : xs)
    if (!std::isfinite(x)) throw NonfiniteInput(std::string(what) + ": input is not finite");
}

void require_positive(double mantissa, const char* what) {
  if (!(mantissa > 0.0) || !std::isfinite(mantissa))
    throw NonpositiveAverage(std::string(what) + " is not strictly positive");
}

// Confluent limit of the triangle rule when two potentials coincide at q and
// the third sits at p: F = 2 (e^p - e^q (1 + p - q)) / (p - q)^2, evaluated
// in whichever gauge keeps every intermediate bounded.
ScaledValue tri_pair_limit(double p, double q) {
  const double delta = p - q;
  if (std::abs(delta) <= 1.0) {
    // power series 2 sum_m delta^m / (m+2)!  -- immune to cancellation
    double term = 1.0, sum = 1.0;
    for (int m = 1; m < 40; ++m) {
      term *= delta / (m + 2);
      sum += term;
      if (std::abs(term) < 1e-18 * sum) break;
    }
    return {q, sum};
  }
  if (delta > 700.0)  // expm1 would overflow; gauge at the far node instead
    return {p, 2.0 * (1.0 - std::exp(-delta) * (1.0 + delta)) / (delta * delta)};
  return {q, 2.0 * (std::expm1(delta) - delta) / (delta * delta)};
}

// Divided differences of exp over sorted gauged nodes y[i..j] (all <= 0).
// Coincident nodes take the confluent value e^y / (j-i)!.
double dd_exp(const double* y, int i, int j) {
  if (y[j] - y[i] <= kPairTol) {
    double mean = 0.0;
    for (int k = i; k <= j; ++k) mean += y[k];
    mean /= (j - i + 1);
    double f = std::exp(mean);
    for (int k = 2; k <= j - i; ++k) f /= k;
    return f;
  }
  return (dd_exp(y, i + 1, j) - dd_exp(y, i, j - 1)) / (y[j] - y[i]);
}

double bracket(double ea, double eb, double ec, double s_ab, double s_ac, double s_bc) {
  return ea / (s_ab * s_ac) - eb / (s_ab * s_bc) + ec / (s_bc * s_ac);
}

}  // namespace

double ScaledValue::value() const { return mantissa * std::exp(log_scale); }
double ScaledValue::log_value() const { return log_scale + std::log(mantissa); }

ScaledValue edge_exp_average_scaled(double phi_i, double phi_j, double s) {
  require_finite({phi_i, phi_j, s}, "edge average");
  const double d = phi_j - phi_i;
  ScaledValue r;
  if (std::abs(d) <= kPairTol) {
    r = {0.5 * (phi_i + phi_j), 1.0};
  } else if (phi_j >= phi_i) {
    r = {phi_j, -std::expm1(-d) / s};
  } else {
    r = {phi_i, std::expm1(d) / s};
  }
  require_positive(r.mantissa, "edge average");
  return r;
}

double edge_exp_average(double phi_i, double phi_j, double s) {
  return edge_exp_average_scaled(phi_i, phi_j, s).value();
}

ScaledValue tri_exp_average_scaled(const std::array<double, 3>& phi, const std::array<double, 3>& s,
                                   TriAverageDiagnostics* diag) {
  require_finite({phi[0], phi[1], phi[2], s[0], s[1], s[2]}, "triangle average");
  TriAverageDiagnostics local;
  TriAverageDiagnostics& d = diag ? *diag : local;

  std::array<double, 3> sorted = phi;
  std::sort(sorted.begin(), sorted.end());
  const double g01 = sorted[1] - sorted[0];
  const double g12 = sorted[2] - sorted[1];

  ScaledValue r;
  if (g01 <= kPairTol && g12 <= kPairTol) {
    d.degenerate_pair = true;
    r = {(sorted[0] + sorted[1] + sorted[2]) / 3.0, 1.0};
  } else if (g01 <= kPairTol) {
    d.degenerate_pair = true;
    r = tri_pair_limit(sorted[2], 0.5 * (sorted[0] + sorted[1]));
  } else if (g12 <= kPairTol) {
    d.degenerate_pair = true;
    r = tri_pair_limit(sorted[0], 0.5 * (sorted[1] + sorted[2]));
  } else {
    const double gauge = sorted[2];
    const double m = 2.0 * bracket(std::exp(phi[0] - gauge), std::exp(phi[1] - gauge),
                                   std::exp(phi[2] - gauge), s[0], s[1], s[2]);
    r = {gauge, m};
  }

  // Positivity floor 1e-3 e^{phi_min}. Rotational drift makes s inconsistent
  // with the potential gaps, and near an edge orthogonal to theta the bracket
  // can lose its sign entirely; the floor restores it (diagnosed, not silent).
  // Compare in the log domain: the floor itself underflows double once the
  // potential spread passes ~700.
  const double floor_log = sorted[0] + std::log(1e-3);
  if (!(r.mantissa > 0.0) || r.log_value() < floor_log) {
    r = {floor_log, 1.0};
    d.clamped = true;
  }
  return r;
}

double tri_exp_average(const std::array<double, 3>& phi, const std::array<double, 3>& s,
                       TriAverageDiagnostics* diag) {
  return tri_exp_average_scaled(phi, s, diag).value();
}

ScaledValue tet_exp_average_scaled(const std::array<double, 4>& phi, const std::array<double, 6>& s) {
  require_finite({phi[0], phi[1], phi[2], phi[3]}, "tet average");
  require_finite({s[0], s[1], s[2], s[3], s[4], s[5]}, "tet average");

  const double gauge = std::max(std::max(phi[0], phi[1]), std::max(phi[2], phi[3]));
  std::array<double, 4> y = {phi[0] - gauge, phi[1] - gauge, phi[2] - gauge, phi[3] - gauge};

  bool coincident = false;
  for (int a = 0; a < 4 && !coincident; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (std::abs(y[a] - y[b]) <= kPairTol) {
        coincident = true;
        break;
      }

  ScaledValue r;
  if (coincident) {
    std::sort(y.begin(), y.end());
    r = {gauge, 6.0 * dd_exp(y.data(), 0, 3)};
  } else {
    const double ei = std::exp(y[0]), ej = std::exp(y[1]), ek = std::exp(y[2]), el = std::exp(y[3]);
    const double b_ijl = bracket(ei, ej, el, s[0], s[2], s[4]);
    const double b_ijk = bracket(ei, ej, ek, s[0], s[1], s[3]);
    r = {gauge, 6.0 * (b_ijl - b_ijk) / s[5]};
  }
  require_positive(r.mantissa, "tet average");
  return r;
}

double tet_exp_average(const std::array<double, 4>& phi, const std::array<double, 6>& s) {
  return tet_exp_average_scaled(phi, s).value();
}

PotentialField PotentialField::zero() {
  PotentialField p;
  p.phi = [](Vec2, Vec2) { return 0.0; };
  p.theta_full = [](Vec2, Vec2) { return Vec2{0.0, 0.0}; };
  return p;
}

double ExpAverages::node_value(int v) const { return std::exp(log_node[v] + gauge_shift[component[v]]); }
double ExpAverages::edge_value(int e) const { return std::exp(log_edge[e] + gauge_shift[edge_component[e]]); }
double ExpAverages::tri_value(int k) const { return std::exp(log_tri[k] + gauge_shift[tri_component[k]]); }

ExpAverages build_exp_averages(const DualMesh& mesh, const PotentialField& pot) {
  const PrimalMesh& m = mesh.primal;
  const int nv = m.n_vertices();
  const int ne = m.n_edges();
  const int nt = m.n_triangles();

  // Connected components: the gauge shift is only meaningful within a
  // component, and components never couple.
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& e : m.edges) {
    const int ra = find(e[0]), rb = find(e[1]);
    if (ra != rb) parent[ra] = rb;
  }
  ExpAverages E;
  E.component.resize(nv);
  std::vector<int> comp_id(nv, -1);
  int n_comp = 0;
  for (int v = 0; v < nv; ++v) {
    const int r = find(v);
    if (comp_id[r] < 0) comp_id[r] = n_comp++;
    E.component[v] = comp_id[r];
  }

  std::vector<double> raw(nv);
  E.gauge_shift.assign(n_comp, -std::numeric_limits<double>::infinity());
  for (int v = 0; v < nv; ++v) {
    raw[v] = pot.phi_at(m.vertices[v], m.vertices[v]);
    if (!std::isfinite(raw[v]))
      throw NonfiniteInput("potential is not finite at vertex " + std::to_string(v));
    E.gauge_shift[E.component[v]] = std::max(E.gauge_shift[E.component[v]], raw[v]);
  }

  E.log_node.resize(nv);
  for (int v = 0; v < nv; ++v) E.log_node[v] = raw[v] - E.gauge_shift[E.component[v]];

  E.log_edge.resize(ne);
  E.edge_phi_lo.resize(ne);
  E.edge_phi_hi.resize(ne);
  E.edge_drift.resize(ne);
  E.edge_component.resize(ne);
  E.edge_stable_branch.assign(ne, 0);
  for (int e = 0; e < ne; ++e) {
    const int lo = m.edges[e][0], hi = m.edges[e][1];
    const Vec2 a = m.vertices[lo], b = m.vertices[hi];
    const Vec2 mid = (a + b) * 0.5;
    const int comp = E.component[lo];
    const double shift = E.gauge_shift[comp];
    // Both endpoint potentials are evaluated on the side the edge midpoint
    // lies in, so the gap is single-branch even across coefficient jumps.
    const double phi_lo = pot.phi_at(a, mid) - shift;
    const double phi_hi = pot.phi_at(b, mid) - shift;
    // Drift integral: the potential part contributes its exact endpoint gap
    // (fundamental theorem of calculus along the edge); only a rotational
    // remainder needs a midpoint sample. For a pure gradient the drift equals
    // the gap, so the average can never lose its sign and the assembled
    // scalar system matches the exp(phi)-scaled factorization to roundoff.
    double s = phi_hi - phi_lo;
    if (pot.theta_rot) s += dot(pot.theta_rot(mid, mid), b - a);
    ScaledValue sv;
    try {
      sv = edge_exp_average_scaled(phi_lo, phi_hi, s);
    } catch (const NonpositiveAverage&) {
      throw NonpositiveAverage("edge average is not strictly positive", e);
    } catch (const NonfiniteInput&) {
      throw NonfiniteInput("potential is not finite on edge " + std::to_string(e));
    }
    E.log_edge[e] = sv.log_value();
    E.edge_phi_lo[e] = phi_lo;
    E.edge_phi_hi[e] = phi_hi;
    E.edge_drift[e] = s;
    E.edge_component[e] = comp;
    E.edge_stable_branch[e] = std::abs(phi_hi - phi_lo) <= kPairTol ? 1 : 0;
  }

  E.log_tri.resize(nt);
  E.tri_component.resize(nt);
  E.clamped_triangles = 0;
  for (int k = 0; k < nt; ++k) {
    std::array<int, 3> vs = m.triangles[k];
    std::sort(vs.begin(), vs.end());  // the triangle rule orders vertices by global index
    const Vec2 pi = m.vertices[vs[0]], pj = m.vertices[vs[1]], pk = m.vertices[vs[2]];
    const Vec2 anchor = (pi + pj + pk) * (1.0 / 3.0);
    const int comp = E.component[vs[0]];
    const double shift = E.gauge_shift[comp];
    const std::array<double, 3> phi = {pot.phi_at(pi, anchor) - shift, pot.phi_at(pj, anchor) - shift,
                                       pot.phi_at(pk, anchor) - shift};
    // Pair drifts follow the edge convention: exact potential gap on the
    // anchor branch plus a midpoint sample of any rotational remainder. With
    // pure-gradient drift the bracket is then a second divided difference of
    // exp, positive by convexity, so the positivity floor can only engage
    // under rotational drift.
    auto rot_of = [&](Vec2 a, Vec2 b) {
      return pot.theta_rot ? dot(pot.theta_rot((a + b) * 0.5, anchor), b - a) : 0.0;
    };
    const std::array<double, 3> s = {phi[1] - phi[0] + rot_of(pi, pj),
                                     phi[2] - phi[0] + rot_of(pi, pk),
                                     phi[2] - phi[1] + rot_of(pj, pk)};
    TriAverageDiagnostics diag;
    ScaledValue sv;
    try {
      sv = tri_exp_average_scaled(phi, s, &diag);
    } catch (const NonfiniteInput&) {
      throw NonfiniteInput("potential is not finite on triangle " + std::to_string(k));
    }
    if (diag.clamped) ++E.clamped_triangles;
    E.log_tri[k] = sv.log_value();
    E.tri_component[k] = comp;
  }
  return E;
}

FluxOperators build_flux_operators(const DualMesh& mesh, const MimeticOperators& ops,
                                   const ExpAverages& averages) {
  const PrimalMesh& m = mesh.primal;
  const int nv = m.n_vertices();
  const int ne = m.n_edges();
  const int nt = m.n_triangles();

  FluxOperators flux;
  flux.averages = averages;

  std::vector<Triplet> j0;
  j0.reserve(2 * static_cast<std::size_t>(ne));
  for (int e = 0; e < ne; ++e) {
    const double len = mesh.metrics.primal_edge_length[e];
    j0.emplace_back(e, m.edges[e][0], -std::exp(averages.edge_phi_lo[e] - averages.log_edge[e]) / len);
    j0.emplace_back(e, m.edges[e][1], std::exp(averages.edge_phi_hi[e] - averages.log_edge[e]) / len);
  }
  flux.J0 = SparseMatrix::from_triplets(ne, nv, j0);

  std::vector<Triplet> j1;
  j1.reserve(ops.incidence.k_entries.size());
  for (const auto& ke : ops.incidence.k_entries) {
    const int k = ke.row, e = ke.col;
    const double v = static_cast<double>(ke.value) * mesh.metrics.primal_edge_length[e] /
                     mesh.metrics.triangle_area[k] * std::exp(averages.log_edge[e] - averages.log_tri[k]);
    j1.emplace_back(k, e, v);
  }
  flux.J1 = SparseMatrix::from_triplets(nt, ne, j1);
  return flux;
}

double flux_complex_residual(const FluxOperators& flux) { return (flux.J1 * flux.J0).max_abs(); }

}  // namespace emfd
