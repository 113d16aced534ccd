#ifndef LAPCLOSE_SPARSE_HPP
#define LAPCLOSE_SPARSE_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace lapclose {

inline constexpr double kInf = 1e300;

inline bool is_finite_bound(double v) { return v < kInf && v > -kInf; }

/// Sparse vector stored as parallel (index, value) arrays, indices ascending.
struct SparseVector {
  std::vector<int> index;
  std::vector<double> value;

  std::size_t size() const { return index.size(); }
  bool empty() const { return index.empty(); }

  void push(int i, double v) {
    index.push_back(i);
    value.push_back(v);
  }

  double dot(std::span<const double> dense) const;
  double max_abs() const;

  /// Densify into a vector of length `dim`.
  std::vector<double> to_dense(std::size_t dim) const;

  /// Build from a dense vector, dropping entries with |v| <= drop_tol.
  static SparseVector from_dense(std::span<const double> dense, double drop_tol = 0.0);

  /// Sort by index and merge duplicate indices by summation.
  /// Returns the number of merged duplicates.
  int canonicalize();
};

/// Compressed sparse column matrix.
class CscMatrix {
public:
  CscMatrix() = default;
  CscMatrix(int rows, int cols) : rows_(rows), cols_(cols), start_(cols + 1, 0) {}

  /// Build from row-wise sparse vectors over `cols` columns.
  static CscMatrix from_rows(std::span<const SparseVector> rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  std::span<const int> col_index(int j) const {
    return {index_.data() + start_[j], static_cast<std::size_t>(start_[j + 1] - start_[j])};
  }
  std::span<const double> col_value(int j) const {
    return {value_.data() + start_[j], static_cast<std::size_t>(start_[j + 1] - start_[j])};
  }
  int col_nnz(int j) const { return start_[j + 1] - start_[j]; }

  double col_dot(int j, std::span<const double> dense_rows) const;

  /// Append a column given as (row index, value) pairs.
  void append_column(const SparseVector& col);

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> start_{0};
  std::vector<int> index_;
  std::vector<double> value_;
};

}  // namespace lapclose

#endif
