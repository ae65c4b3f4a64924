#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "emfd/assembly.hpp"
#include "emfd/solve.hpp"

namespace emfd {

struct ErrorNorms {
  double energy = 0.0;  // gradient / curl seminorm of the error
  double l2 = 0.0;      // L2 norm of the error
};

/// Finite-element error norms of a vertex field against an exact solution:
/// the field is reconstructed as the piecewise-linear interpolant u_h and
/// energy = |u - u_h|_{H^1}, l2 = ||u - u_h||, both by degree-5 quadrature
/// on the primal triangles. Without exact_grad the energy entry is NaN.
ErrorNorms error_norms_scalar(const DualMesh& mesh, const std::function<double(Vec2)>& exact,
                              const std::function<Vec2(Vec2)>& exact_grad,
                              const std::vector<double>& full);

/// Finite-element error norms of a full edge field against an exact solution:
/// the tangential averages are expanded in the lowest-order edge basis
/// (Whitney forms) to a piecewise field u_h and energy = ||curl(u - u_h)||,
/// l2 = ||u - u_h||, both by degree-5 quadrature on the primal triangles.
/// Without exact_curl the energy entry is NaN.
ErrorNorms error_norms_vector(const DualMesh& mesh, const std::function<Vec2(Vec2)>& exact,
                              const std::function<double(Vec2)>& exact_curl,
                              const std::vector<double>& full);

/// A mesh-family/problem pair a refinement study can be run on.
struct StudyProblem {
  std::string name;
  ProblemKind kind = ProblemKind::scalar;
  std::function<DualMesh(int level)> make_mesh;
  std::function<double(int level)> spacing;  // nominal h at a level
  std::function<ProblemSpec(double alpha)> make_spec;
  std::function<double(Vec2)> exact_scalar;  // any of these may be absent
  std::function<Vec2(Vec2)> exact_scalar_grad;
  std::function<Vec2(Vec2)> exact_vector;
  std::function<double(Vec2)> exact_vector_curl;
};

struct StudyRow {
  int level = 0;
  double h = 0.0;
  double alpha = 0.0;
  double err_energy = 0.0;
  double err_l2 = 0.0;
  double rate_energy = 0.0;  // NaN on the coarsest level of each alpha
  double rate_l2 = 0.0;
};

/// Solves the problem on each (alpha, level) pair and reports errors and
/// log2 rates between consecutive levels. Meshes are shared across alphas;
/// the (alpha, level) solves fan out over MFD_THREADS worker threads
/// (default 1) with deterministic result order.
std::vector<StudyRow> convergence_study(const StudyProblem& problem, const std::vector<int>& levels,
                                        const std::vector<double>& alphas,
                                        const SolveOptions& opts = {});

/// CSV with header h,alpha,err_energy,err_l2,rate_energy,rate_l2.
void write_study_csv(const std::vector<StudyRow>& rows, std::ostream& out);

struct MonotonicityReport {
  bool is_z_matrix = false;
  double max_offdiag = 0.0;  // most positive off-diagonal entry
  std::optional<bool> inverse_nonnegative;
  double min_inverse_entry = 0.0;  // dense route only
  std::string method;              // "dense-inverse", "symmetrized-spd" or "none"
};

/// Certifies the M-matrix structure of an assembled system. Dimensions up to
/// dense_limit get the full inverse computed column by column (threshold
/// -1e-10); larger scalar systems fall back to a proof route: Z-pattern plus
/// positive definiteness of the symmetrized form. When the symmetrizing
/// scale is unusable the inverse sign question is left undetermined.
MonotonicityReport certify_monotone(const DiscreteSystem& sys, int dense_limit = 1200);

/// max(0, lower - min v, max v - upper): how far the field escapes the bound
/// interval. Unbounded sides pass -inf / +inf.
double oscillation_metric(const std::vector<double>& values, double lower, double upper);

}  // namespace emfd
