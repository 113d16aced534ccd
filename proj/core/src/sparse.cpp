#include "lapclose/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lapclose {

double SparseVector::dot(std::span<const double> dense) const {
  double s = 0.0;
  for (std::size_t i = 0; i < index.size(); ++i) s += value[i] * dense[index[i]];
  return s;
}

double SparseVector::max_abs() const {
  double m = 0.0;
  for (double v : value) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> SparseVector::to_dense(std::size_t dim) const {
  std::vector<double> d(dim, 0.0);
  for (std::size_t i = 0; i < index.size(); ++i) d[index[i]] += value[i];
  return d;
}

SparseVector SparseVector::from_dense(std::span<const double> dense, double drop_tol) {
  SparseVector v;
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (std::abs(dense[i]) > drop_tol) v.push(static_cast<int>(i), dense[i]);
  return v;
}

int SparseVector::canonicalize() {
  std::vector<std::size_t> order(index.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return index[a] < index[b]; });
  SparseVector out;
  int merged = 0;
  for (std::size_t o : order) {
    if (!out.index.empty() && out.index.back() == index[o]) {
      out.value.back() += value[o];
      ++merged;
    } else {
      out.push(index[o], value[o]);
    }
  }
  *this = std::move(out);
  return merged;
}

CscMatrix CscMatrix::from_rows(std::span<const SparseVector> rows, int cols) {
  CscMatrix m(static_cast<int>(rows.size()), cols);
  std::vector<int> count(cols, 0);
  for (const auto& r : rows)
    for (int j : r.index) ++count[j];
  for (int j = 0; j < cols; ++j) m.start_[j + 1] = m.start_[j] + count[j];
  m.index_.resize(m.start_[cols]);
  m.value_.resize(m.start_[cols]);
  std::vector<int> fill(m.start_.begin(), m.start_.end() - 1);
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    const auto& r = rows[i];
    for (std::size_t e = 0; e < r.index.size(); ++e) {
      int pos = fill[r.index[e]]++;
      m.index_[pos] = i;
      m.value_[pos] = r.value[e];
    }
  }
  return m;
}

double CscMatrix::col_dot(int j, std::span<const double> dense_rows) const {
  double s = 0.0;
  for (int p = start_[j]; p < start_[j + 1]; ++p) s += value_[p] * dense_rows[index_[p]];
  return s;
}

void CscMatrix::append_column(const SparseVector& col) {
  for (std::size_t e = 0; e < col.index.size(); ++e) {
    index_.push_back(col.index[e]);
    value_.push_back(col.value[e]);
  }
  start_.push_back(static_cast<int>(index_.size()));
  ++cols_;
}

}  // namespace lapclose
