#include "emfd/fem.hpp"

#include <Eigen/SparseLU>

#include <array>

#include "emfd/errors.hpp"

namespace emfd {

std::vector<double> fem_scalar_solve(const DualMesh& mesh, const ProblemSpec& spec) {
  const PrimalMesh& m = mesh.primal;
  const int nv = m.n_vertices();

  std::vector<int> interior(nv, -1);
  std::vector<double> boundary(nv, 0.0);
  int n = 0;
  for (int v = 0; v < nv; ++v) {
    if (m.vertex_on_boundary[v])
      boundary[v] = spec.dirichlet_scalar ? spec.dirichlet_scalar(m.vertices[v]) : 0.0;
    else
      interior[v] = n++;
  }

  std::vector<Triplet> trips;
  std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);

  for (int k = 0; k < m.n_triangles(); ++k) {
    const auto& t = m.triangles[k];
    const std::array<Vec2, 3> p = {m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]};
    const double area = mesh.metrics.triangle_area[k];
    const double w = area / 3.0;
    std::array<Vec2, 3> grad;  // grad of the barycentric basis functions
    for (int l = 0; l < 3; ++l) grad[l] = perp(p[(l + 2) % 3] - p[(l + 1) % 3]) * (1.0 / (2.0 * area));

    // Edge-midpoint quadrature: point q_m is opposite vertex m, basis values
    // are 1/2 at the two adjacent vertices and 0 at vertex m.
    std::array<Vec2, 3> q;
    for (int l = 0; l < 3; ++l) q[l] = (p[(l + 1) % 3] + p[(l + 2) % 3]) * 0.5;
    std::array<double, 3> alpha_q, gamma_q, f_q;
    std::array<Vec2, 3> beta_q;
    for (int l = 0; l < 3; ++l) {
      alpha_q[l] = spec.alpha_at(q[l], q[l]);
      gamma_q[l] = spec.gamma ? spec.gamma(q[l]) : 0.0;
      f_q[l] = spec.f_scalar ? spec.f_scalar(q[l]) : 0.0;
      beta_q[l] = spec.beta ? spec.beta(q[l]) : Vec2{0.0, 0.0};
    }
    auto lambda = [](int basis, int qpoint) { return basis == qpoint ? 0.0 : 0.5; };

    for (int i = 0; i < 3; ++i) {
      const int gi = interior[t[i]];
      if (gi < 0) continue;
      double fi = 0.0;
      for (int l = 0; l < 3; ++l) fi += w * f_q[l] * lambda(i, l);
      rhs[static_cast<std::size_t>(gi)] += fi;
      for (int j = 0; j < 3; ++j) {
        double a = 0.0;
        for (int l = 0; l < 3; ++l)
          a += w * (alpha_q[l] * dot(grad[j], grad[i]) + lambda(j, l) * dot(beta_q[l], grad[i]) +
                    gamma_q[l] * lambda(j, l) * lambda(i, l));
        const int gj = interior[t[j]];
        if (gj >= 0)
          trips.emplace_back(gi, gj, a);
        else
          rhs[static_cast<std::size_t>(gi)] -= a * boundary[t[j]];
      }
    }
  }

  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SingularMatrix("fem factorization failed");
  const Eigen::VectorXd x =
      lu.solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size())));
  if (lu.info() != Eigen::Success) throw SingularMatrix("fem solve failed");

  std::vector<double> full = boundary;
  for (int v = 0; v < nv; ++v)
    if (interior[v] >= 0) full[static_cast<std::size_t>(v)] = x[interior[v]];
  return full;
}

}  // namespace emfd
