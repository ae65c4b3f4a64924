#pragma once

#include <vector>

#include "emfd/assembly.hpp"

namespace emfd {

enum class SolverMethod { direct, cg, bicgstab };

struct SolveOptions {
  SolverMethod method = SolverMethod::direct;
  double tolerance = 1e-10;  // relative residual target for iterative methods
  int max_iterations = 5000;
};

struct SolveReport {
  SolverMethod method = SolverMethod::direct;
  int iterations = 0;       // 0 for the direct solver
  double residual = 0.0;    // ||L u - rhs||_2 / ||rhs||_2 on the original system
};

struct Solution {
  std::vector<double> interior;
  std::vector<double> full;  // interior values scattered among the Dirichlet trace
  SolveReport report;
};

/// Direct sparse LU by default. "cg" runs conjugate gradients on the
/// symmetrized scalar system (rows scaled by exp(sym_log_scale), gauged);
/// "bicgstab" runs BiCGSTAB with an incomplete-LU preconditioner on the
/// unsymmetric system.
Solution solve(const DiscreteSystem& sys, const SolveOptions& opts = {});

}  // namespace emfd
