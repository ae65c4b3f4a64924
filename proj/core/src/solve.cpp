#include "emfd/solve.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

#include "emfd/errors.hpp"

namespace emfd {

namespace {

double relative_residual(const DiscreteSystem& sys, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const Eigen::VectorXd r = sys.L.eigen() * x - b;
  const double nb = b.norm();
  return nb > 0.0 ? r.norm() / nb : r.norm();
}

Eigen::VectorXd rhs_vector(const DiscreteSystem& sys) {
  return Eigen::Map<const Eigen::VectorXd>(sys.rhs.data(), static_cast<Eigen::Index>(sys.rhs.size()));
}

}  // namespace

Solution solve(const DiscreteSystem& sys, const SolveOptions& opts) {
  const Eigen::VectorXd b = rhs_vector(sys);
  Eigen::VectorXd x;
  SolveReport report;
  report.method = opts.method;

  switch (opts.method) {
    case SolverMethod::direct: {
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
      lu.compute(sys.L.eigen());
      if (lu.info() != Eigen::Success) throw SingularMatrix("sparse LU factorization failed");
      x = lu.solve(b);
      if (lu.info() != Eigen::Success) throw SingularMatrix("sparse LU solve failed");
      break;
    }
    case SolverMethod::cg: {
      if (sys.sym_log_scale.size() != sys.rhs.size())
        throw Error("cg needs the symmetrizable scalar system");
      const double smax = *std::max_element(sys.sym_log_scale.begin(), sys.sym_log_scale.end());
      Eigen::VectorXd d(static_cast<Eigen::Index>(sys.sym_log_scale.size()));
      for (Eigen::Index i = 0; i < d.size(); ++i) {
        d[i] = std::exp(sys.sym_log_scale[static_cast<std::size_t>(i)] - smax);
        if (!(d[i] > 0.0))
          throw Error("symmetrizing scale underflows at this potential range; use the direct solver");
      }
      Eigen::SparseMatrix<double> S = d.asDiagonal() * sys.L.eigen();
      Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
      cg.setTolerance(opts.tolerance);
      cg.setMaxIterations(opts.max_iterations);
      cg.compute(S);
      x = cg.solve((d.array() * b.array()).matrix());
      report.iterations = static_cast<int>(cg.iterations());
      if (cg.info() != Eigen::Success)
        throw NoConvergence("cg did not reach the residual target", report.iterations, cg.error());
      break;
    }
    case SolverMethod::bicgstab: {
      Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> solver;
      solver.setTolerance(opts.tolerance);
      solver.setMaxIterations(opts.max_iterations);
      solver.compute(sys.L.eigen());
      if (solver.info() != Eigen::Success) throw SingularMatrix("incomplete-LU preconditioner failed");
      x = solver.solve(b);
      report.iterations = static_cast<int>(solver.iterations());
      if (solver.info() != Eigen::Success)
        throw NoConvergence("bicgstab did not reach the residual target", report.iterations,
                            solver.error());
      break;
    }
  }

  report.residual = relative_residual(sys, x, b);
  if (!std::isfinite(report.residual)) throw SingularMatrix("solution has non-finite entries");

  Solution sol;
  sol.report = report;
  sol.interior.assign(x.data(), x.data() + x.size());
  sol.full = expand_solution(sys, sol.interior);
  return sol;
}

}  // namespace emfd
