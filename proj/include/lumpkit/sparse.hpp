#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lumpkit {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix of doubles with sorted column indices.
class SparseMatrix {
 public:
  struct RowView {
    std::span<const std::size_t> cols;
    std::span<const double> values;
    std::size_t size() const { return cols.size(); }
  };

  SparseMatrix() = default;
  /// Duplicate (row, col) entries are summed; explicit zeros are dropped.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

  static SparseMatrix from_dense(const Eigen::MatrixXd& dense);
  static SparseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const { return col_idx_.size(); }

  RowView row(std::size_t i) const;
  double at(std::size_t i, std::size_t j) const;
  double row_sum(std::size_t i) const;

  /// p * M for a row vector p.
  std::vector<double> left_multiply(std::span<const double> p) const;
  Eigen::MatrixXd to_dense() const;
  std::vector<Triplet> triplets() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

}  // namespace lumpkit
