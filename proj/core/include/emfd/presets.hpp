#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "emfd/analysis.hpp"
#include "emfd/assembly.hpp"

namespace emfd {

/// A named built-in problem: mesh family, coefficients, potential
/// decomposition, and (where one exists) the closed-form solution.
/// Layer problems carry a priori solution bounds instead.
struct Preset {
  std::string name;
  std::string description;
  ProblemKind kind = ProblemKind::scalar;
  std::string mesh_family;  // "hexagon" or "square"
  double default_alpha = 1.0;
  double lower_bound = -std::numeric_limits<double>::infinity();
  double upper_bound = std::numeric_limits<double>::infinity();
  std::function<ProblemSpec(double alpha)> make_spec;
  std::function<double(Vec2)> exact_scalar;  // null when no closed form is known
  std::function<Vec2(Vec2)> exact_scalar_grad;
  std::function<Vec2(Vec2)> exact_vector;
  std::function<double(Vec2)> exact_vector_curl;
};

const std::vector<Preset>& preset_catalog();
const Preset& find_preset(const std::string& name);  // throws ConfigError

DualMesh build_preset_mesh(const Preset& preset, int level);

/// Nominal spacing 2^-level (both families halve the max edge per level).
double preset_nominal_spacing(int level);

StudyProblem to_study(const Preset& preset);

}  // namespace emfd
