#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "emfd/dualmesh.hpp"
#include "emfd/mimetic_ops.hpp"
#include "emfd/sparse.hpp"

namespace emfd {

/// A strictly positive quantity kept as mantissa * exp(log_scale) so that
/// exponential averages of fields with huge potential variation never leave
/// the representable range.
struct ScaledValue {
  double log_scale = 0.0;
  double mantissa = 1.0;

  double value() const;
  double log_value() const;
};

/// Harmonic-exponential edge average
///   E = (e^{phi_j} - e^{phi_i}) / s,   s = theta . T,
/// with T the edge vector from endpoint i to endpoint j. For a potential
/// flow theta = grad phi and a straight edge, s equals phi_j - phi_i and the
/// rule degenerates to the logarithmic mean of the endpoint exponentials.
/// Near-coincident endpoints (|phi_j - phi_i| <= 1e-12) take the confluent
/// limit e^{(phi_i + phi_j)/2}.
double edge_exp_average(double phi_i, double phi_j, double s);
ScaledValue edge_exp_average_scaled(double phi_i, double phi_j, double s);

struct TriAverageDiagnostics {
  bool clamped = false;
  bool degenerate_pair = false;
};

/// Triangle average of e^phi against the fitted flux weights:
///   E = 2 [ e^{phi_i}/(s_ij s_ik) - e^{phi_j}/(s_ij s_jk) + e^{phi_k}/(s_jk s_ik) ]
/// with vertices ordered by global index and s_ab = theta(mid_ab) . (x_b - x_a).
/// s is passed as {s_ij, s_ik, s_jk}. Potentials with a near-coincident pair
/// (|dphi| <= 1e-12) fall back to confluent divided differences of exp, which
/// is the consistent-s limit of the formula. Results are clamped from below
/// at 1e-3 * min_a e^{phi_a} (recorded in the diagnostics, never silent).
double tri_exp_average(const std::array<double, 3>& phi, const std::array<double, 3>& s,
                       TriAverageDiagnostics* diag = nullptr);
ScaledValue tri_exp_average_scaled(const std::array<double, 3>& phi, const std::array<double, 3>& s,
                                   TriAverageDiagnostics* diag = nullptr);

/// Tetrahedron average, s = {s_ij, s_ik, s_il, s_jk, s_jl, s_kl}:
///   E = (6 / s_kl) [ B(i,j,l) - B(i,j,k) ],
/// where B is the bracket from the triangle rule. Near-coincident pairs fall
/// back to 6 * (divided difference of exp over the four potentials).
double tet_exp_average(const std::array<double, 4>& phi, const std::array<double, 6>& s);
ScaledValue tet_exp_average_scaled(const std::array<double, 4>& phi, const std::array<double, 6>& s);

/// Convection potential phi with beta/alpha = grad phi + rot_part. Piecewise
/// problems (diffusion jumps) make phi and theta side-dependent: every query
/// carries an anchor point, and the callable must evaluate the branch the
/// anchor lies in. Single-valued fields may ignore the anchor.
struct PotentialField {
  std::function<double(Vec2 p, Vec2 anchor)> phi;
  std::function<Vec2(Vec2 p, Vec2 anchor)> theta_full;  // grad phi + rotational part
  // Divergence-free remainder of theta (the part not generated by phi); null
  // means theta is a pure gradient. Experimental: convergence is retained,
  // but the exp(phi)-weighted symmetrization identities cannot survive a
  // rotational drift and monotonicity certificates fall back to direct routes.
  std::function<Vec2(Vec2 p, Vec2 anchor)> theta_rot;

  double phi_at(Vec2 p, Vec2 anchor) const { return phi(p, anchor); }
  Vec2 theta_full_at(Vec2 p, Vec2 anchor) const { return theta_full(p, anchor); }

  static PotentialField zero();
};

/// All exponential averages of one mesh/potential pair, stored in the log
/// domain. Potentials are gauged per connected component by subtracting the
/// component maximum; only differences of the logs below ever reach exp().
struct ExpAverages {
  std::vector<int> component;        // per vertex
  std::vector<int> edge_component;
  std::vector<int> tri_component;
  std::vector<double> gauge_shift;   // per component, subtracted from phi
  std::vector<double> log_node;      // per vertex, phi - shift (<= 0)
  std::vector<double> log_edge;      // per edge, log E_e (gauged)
  std::vector<double> log_tri;       // per triangle, log E_k (gauged)
  std::vector<double> edge_phi_lo;   // per edge, gauged side-consistent endpoint potentials
  std::vector<double> edge_phi_hi;
  std::vector<double> edge_drift;    // per edge, drift integral s_e = (phi_hi - phi_lo) + rot(mid) . T
  std::vector<std::uint8_t> edge_stable_branch;  // 1 where the confluent limit was used
  int clamped_triangles = 0;

  double node_value(int v) const;
  double edge_value(int e) const;
  double tri_value(int k) const;
};

ExpAverages build_exp_averages(const DualMesh& mesh, const PotentialField& pot);

/// Fitted flux operators
///   J0 = E_e^-1 grad_D E_x     (edges x vertices)
///   J1 = E_T^-1 curl_D E_e     (triangles x edges)
/// assembled entrywise from log differences, so entries stay bounded even
/// when the averages themselves overflow. J1 J0 = 0 up to roundoff: the
/// fitted complex is exact.
struct FluxOperators {
  SparseMatrix J0;
  SparseMatrix J1;
  ExpAverages averages;
};

FluxOperators build_flux_operators(const DualMesh& mesh, const MimeticOperators& ops,
                                   const ExpAverages& averages);

/// max |(J1 J0)_ij|, the residual of the fitted complex.
double flux_complex_residual(const FluxOperators& flux);

}  // namespace emfd
