#include "emfd/sparse.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace emfd {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, const std::vector<Triplet>& triplets) {
  Eigen::SparseMatrix<double> m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return SparseMatrix(std::move(m));
}

std::vector<double> SparseMatrix::apply(const std::vector<double>& x) const {
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  Eigen::VectorXd y = m_ * xv;
  return std::vector<double>(y.data(), y.data() + y.size());
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for_each([&](int, int, double v) { m = std::max(m, std::abs(v)); });
  return m;
}

double SparseMatrix::inf_norm() const {
  std::vector<double> row_sum(static_cast<std::size_t>(rows()), 0.0);
  for_each([&](int r, int, double v) { row_sum[static_cast<std::size_t>(r)] += std::abs(v); });
  double m = 0.0;
  for (double s : row_sum) m = std::max(m, s);
  return m;
}

void write_matrix_market(const SparseMatrix& m, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << " " << m.cols() << " " << m.nonzeros() << "\n";
  char buf[64];
  m.for_each([&](int r, int c, double v) {
    std::snprintf(buf, sizeof buf, "%d %d %.17g\n", r + 1, c + 1, v);
    out << buf;
  });
}

void write_vector(const std::vector<double>& v, std::ostream& out) {
  out << v.size() << "\n";
  char buf[64];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, "%.17g\n", x);
    out << buf;
  }
}

}  // namespace emfd
