#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>

#include "emfd/assembly.hpp"
#include "emfd/dualmesh.hpp"
#include "emfd/solve.hpp"

namespace emfd {

/// JSON problem file. Unknown keys are rejected at every level; parsing and
/// re-serializing is idempotent (defaults materialize on the first pass).
///
/// {
///   "mesh":    {"family": "hexagon"|"square"|"file", "levels": N, "path": "..."},
///   "problem": {"preset": "name", "alpha": 1e-6}
///           or {"kind": "scalar"|"vector", "alpha": "expr", "beta": ["expr","expr"],
///               "gamma": "expr", "f": "expr"|["expr","expr"], "phi": "expr",
///               "rot": ["expr","expr"], "dirichlet": "expr"|["expr","expr"]},
///   "solver":  {"method": "direct"|"cg"|"bicgstab", "tolerance": t, "max_iterations": n},
///   "output":  {"csv": "...", "vtk": "...", "solution": "...", "matrix": "..."}
/// }
///
/// Explicit problems are single-branch: expressions are evaluated pointwise
/// and the fitted scheme uses theta = beta / alpha together with the given
/// potential phi. beta is the full convection field; the optional rot pair
/// declares its divergence-free remainder, the part of beta not generated by
/// phi (default zero). Piecewise-diffusion problems are available as presets.
struct MeshConfig {
  std::string family = "hexagon";
  int levels = 0;
  std::string path;  // family == "file"
};

struct ExplicitProblem {
  std::string kind = "scalar";
  std::string alpha = "1";
  std::array<std::string, 2> beta = {"0", "0"};
  std::string gamma = "0";
  std::array<std::string, 2> f = {"0", "0"};  // second entry used by vector problems
  std::string phi = "0";
  std::array<std::string, 2> rot = {"0", "0"};  // divergence-free remainder of beta
  std::array<std::string, 2> dirichlet = {"0", "0"};
};

struct SolverConfig {
  std::string method = "direct";
  double tolerance = 1e-10;
  int max_iterations = 5000;
};

struct OutputConfig {
  std::string csv;
  std::string vtk;
  std::string solution;
  std::string matrix;
};

struct ProblemConfig {
  MeshConfig mesh;
  std::string preset;           // non-empty selects a preset...
  std::optional<double> alpha;  // ...with an optional diffusion override
  std::optional<ExplicitProblem> problem;
  SolverConfig solver;
  OutputConfig output;
};

ProblemConfig read_config(std::istream& in);
ProblemConfig read_config_file(const std::string& path);
void write_config(const ProblemConfig& cfg, std::ostream& out);
std::string config_to_string(const ProblemConfig& cfg);

DualMesh make_config_mesh(const ProblemConfig& cfg);
ProblemSpec make_problem_spec(const ProblemConfig& cfg);
double config_alpha(const ProblemConfig& cfg);  // resolved diffusion parameter
SolveOptions make_solve_options(const ProblemConfig& cfg);

}  // namespace emfd
