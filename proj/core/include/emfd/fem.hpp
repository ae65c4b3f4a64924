#pragma once

#include <vector>

#include "emfd/assembly.hpp"

namespace emfd {

/// Plain P1 Galerkin reference for the scalar problem,
///   find u: <alpha grad u + beta u, grad v> + <gamma u, v> = <f, v>,
/// with three-point edge-midpoint quadrature and no stabilization of any
/// kind. Returns the full vertex field (Dirichlet trace included). In the
/// convection-dominated regime this scheme oscillates; it exists as the
/// comparison baseline.
std::vector<double> fem_scalar_solve(const DualMesh& mesh, const ProblemSpec& spec);

}  // namespace emfd
