#pragma once

#include <Eigen/SparseCore>
#include <iosfwd>
#include <vector>

namespace emfd {

using Triplet = Eigen::Triplet<double>;

/// Thin domain wrapper around Eigen's compressed sparse storage. Assembly
/// happens through triplets; duplicate entries are summed on finalize.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : m_(rows, cols) {}
  explicit SparseMatrix(Eigen::SparseMatrix<double> m) : m_(std::move(m)) { m_.makeCompressed(); }

  static SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& triplets);

  int rows() const { return static_cast<int>(m_.rows()); }
  int cols() const { return static_cast<int>(m_.cols()); }
  int nonzeros() const { return static_cast<int>(m_.nonZeros()); }

  std::vector<double> apply(const std::vector<double>& x) const;
  SparseMatrix transposed() const { return SparseMatrix(Eigen::SparseMatrix<double>(m_.transpose())); }
  SparseMatrix operator*(const SparseMatrix& o) const { return SparseMatrix(Eigen::SparseMatrix<double>(m_ * o.m_)); }

  /// Largest |a_ij|.
  double max_abs() const;
  /// Induced infinity norm (max absolute row sum).
  double inf_norm() const;

  template <class F>
  void for_each(F&& f) const {
    for (int k = 0; k < m_.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(m_, k); it; ++it)
        f(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  }

  Eigen::SparseMatrix<double>& eigen() { return m_; }
  const Eigen::SparseMatrix<double>& eigen() const { return m_; }

 private:
  Eigen::SparseMatrix<double> m_;  // column-major
};

/// Matrix Market "coordinate real general" dump (1-based indices).
void write_matrix_market(const SparseMatrix& m, std::ostream& out);

/// Plain-text vector: first line is the length, then one value per line.
void write_vector(const std::vector<double>& v, std::ostream& out);

}  // namespace emfd
