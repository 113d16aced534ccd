#include "lapclose/lp_core.hpp"

#include <algorithm>
#include <cmath>

#include "lapclose/cuts.hpp"

namespace lapclose {

int Basis::position_of(int var) const {
  auto it = std::find(head.begin(), head.end(), var);
  return it == head.end() ? -1 : static_cast<int>(it - head.begin());
}

std::uint64_t Basis::fingerprint() const {
  std::vector<int> sorted = head;
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (int v : sorted) {
    auto u = static_cast<std::uint32_t>(v);
    for (int b = 0; b < 4; ++b) {
      h ^= (u >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

StandardLp to_standard(const NormalizedMilp& nm, std::span<const CutRow> extra_cuts) {
  StandardLp lp;
  lp.n = nm.num_cols();
  lp.p = nm.num_integer;
  lp.original_rows = nm.num_rows();
  lp.structural_rows = nm.rows;
  lp.b = nm.rhs;
  for (const CutRow& cut : extra_cuts) {
    lp.structural_rows.push_back(cut.coefs);
    lp.b.push_back(cut.rhs);
  }
  lp.m = static_cast<int>(lp.structural_rows.size());

  std::vector<SparseVector> full(lp.m);
  for (int i = 0; i < lp.m; ++i) {
    full[i].push(i, -1.0);
    const SparseVector& r = lp.structural_rows[i];
    for (std::size_t e = 0; e < r.size(); ++e) full[i].push(lp.m + r.index[e], r.value[e]);
  }
  lp.a = CscMatrix::from_rows(full, lp.m + lp.n);
  lp.c.assign(lp.m + lp.n, 0.0);
  for (int j = 0; j < lp.n; ++j) lp.c[lp.m + j] = nm.objective[j];
  return lp;
}

Basis slack_basis(int rows, int cols) {
  Basis b;
  b.head.resize(rows);
  b.status.assign(cols, VarStatus::AtLower);
  for (int i = 0; i < rows; ++i) {
    b.head[i] = i;
    b.status[i] = VarStatus::Basic;
  }
  return b;
}

BasisFactor::BasisFactor(const CscMatrix& a, std::span<const int> head)
    : a_(&a), m_(a.rows()), head_(head.begin(), head.end()) {
  singleton_row_.assign(m_, -1);
  singleton_val_.assign(m_, 0.0);
  std::vector<char> row_taken(m_, 0);
  for (int p = 0; p < m_; ++p) {
    int j = head_[p];
    if (a.col_nnz(j) != 1) continue;
    int r = a.col_index(j)[0];
    double v = a.col_value(j)[0];
    if (row_taken[r] || std::abs(v) < kSingularPivot) continue;
    row_taken[r] = 1;
    singleton_row_[p] = r;
    singleton_val_[p] = v;
  }
  in_kernel_row_.assign(m_, 0);
  std::vector<int> row_to_kernel(m_, -1);
  for (int r = 0; r < m_; ++r)
    if (!row_taken[r]) {
      row_to_kernel[r] = static_cast<int>(kernel_row_.size());
      kernel_row_.push_back(r);
      in_kernel_row_[r] = 1;
    }
  for (int p = 0; p < m_; ++p)
    if (singleton_row_[p] < 0) kernel_pos_.push_back(p);

  const int q = static_cast<int>(kernel_pos_.size());
  lu_.assign(static_cast<std::size_t>(q) * q, 0.0);
  for (int c = 0; c < q; ++c) {
    int j = head_[kernel_pos_[c]];
    auto idx = a.col_index(j);
    auto val = a.col_value(j);
    for (std::size_t e = 0; e < idx.size(); ++e) {
      int kr = row_to_kernel[idx[e]];
      if (kr >= 0) lu_[static_cast<std::size_t>(kr) * q + c] = val[e];
    }
  }
  perm_.resize(q);
  for (int i = 0; i < q; ++i) perm_[i] = i;
  for (int k = 0; k < q; ++k) {
    int piv = k;
    double best = std::abs(lu_[static_cast<std::size_t>(k) * q + k]);
    for (int i = k + 1; i < q; ++i) {
      double v = std::abs(lu_[static_cast<std::size_t>(i) * q + k]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best < kSingularPivot) {
      std::vector<int> uncovered;
      for (int i = k; i < q; ++i) uncovered.push_back(kernel_row_[perm_[i]]);
      throw SingularBasisError(kernel_pos_[k], std::move(uncovered));
    }
    if (piv != k) {
      std::swap_ranges(lu_.begin() + static_cast<std::ptrdiff_t>(k) * q,
                       lu_.begin() + static_cast<std::ptrdiff_t>(k + 1) * q,
                       lu_.begin() + static_cast<std::ptrdiff_t>(piv) * q);
      std::swap(perm_[k], perm_[piv]);
    }
    const double* rowk = &lu_[static_cast<std::size_t>(k) * q];
    double d = rowk[k];
    for (int i = k + 1; i < q; ++i) {
      double* rowi = &lu_[static_cast<std::size_t>(i) * q];
      if (rowi[k] == 0.0) continue;
      double l = rowi[k] / d;
      rowi[k] = l;
      for (int c = k + 1; c < q; ++c) rowi[c] -= l * rowk[c];
    }
  }
}

void BasisFactor::kernel_solve(std::vector<double>& z) const {
  const int q = kernel_size();
  std::vector<double> w(q);
  for (int i = 0; i < q; ++i) w[i] = z[perm_[i]];
  for (int i = 0; i < q; ++i) {
    const double* row = &lu_[static_cast<std::size_t>(i) * q];
    double s = w[i];
    for (int c = 0; c < i; ++c) s -= row[c] * w[c];
    w[i] = s;
  }
  for (int i = q - 1; i >= 0; --i) {
    const double* row = &lu_[static_cast<std::size_t>(i) * q];
    double s = w[i];
    for (int c = i + 1; c < q; ++c) s -= row[c] * w[c];
    w[i] = s / row[i];
  }
  z = std::move(w);
}

void BasisFactor::kernel_solve_transposed(std::vector<double>& z) const {
  // (P^T L U)^T w = z  ->  U^T v = z, L^T u = v, w = P^T u.
  const int q = kernel_size();
  std::vector<double> v = z;
  for (int i = 0; i < q; ++i) {
    double s = v[i];
    for (int c = 0; c < i; ++c) s -= lu_[static_cast<std::size_t>(c) * q + i] * v[c];
    v[i] = s / lu_[static_cast<std::size_t>(i) * q + i];
  }
  for (int i = q - 1; i >= 0; --i) {
    double s = v[i];
    for (int c = i + 1; c < q; ++c) s -= lu_[static_cast<std::size_t>(c) * q + i] * v[c];
    v[i] = s;
  }
  std::vector<double> w(q);
  for (int i = 0; i < q; ++i) w[perm_[i]] = v[i];
  z = std::move(w);
}

std::vector<double> BasisFactor::ftran(std::span<const double> r) const {
  const int q = kernel_size();
  std::vector<double> t(r.begin(), r.end());
  std::vector<double> z(q);
  for (int i = 0; i < q; ++i) z[i] = t[kernel_row_[i]];
  kernel_solve(z);
  std::vector<double> x(m_, 0.0);
  for (int c = 0; c < q; ++c) {
    int p = kernel_pos_[c];
    x[p] = z[c];
    if (z[c] == 0.0) continue;
    int j = head_[p];
    auto idx = a_->col_index(j);
    auto val = a_->col_value(j);
    for (std::size_t e = 0; e < idx.size(); ++e)
      if (!in_kernel_row_[idx[e]]) t[idx[e]] -= val[e] * z[c];
  }
  for (int p = 0; p < m_; ++p)
    if (singleton_row_[p] >= 0) x[p] = t[singleton_row_[p]] / singleton_val_[p];
  for (const Eta& eta : etas_) {
    double xr = x[eta.pos] / eta.pivot;
    x[eta.pos] = xr;
    if (xr == 0.0) continue;
    for (std::size_t e = 0; e < eta.index.size(); ++e) x[eta.index[e]] -= eta.value[e] * xr;
  }
  return x;
}

std::vector<double> BasisFactor::btran(std::span<const double> g) const {
  std::vector<double> h(g.begin(), g.end());
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = h[it->pos];
    for (std::size_t e = 0; e < it->index.size(); ++e) s -= h[it->index[e]] * it->value[e];
    h[it->pos] = s / it->pivot;
  }
  std::vector<double> y(m_, 0.0);
  for (int p = 0; p < m_; ++p)
    if (singleton_row_[p] >= 0) y[singleton_row_[p]] = h[p] / singleton_val_[p];
  const int q = kernel_size();
  std::vector<double> z(q);
  for (int c = 0; c < q; ++c) {
    int p = kernel_pos_[c];
    int j = head_[p];
    double s = h[p];
    auto idx = a_->col_index(j);
    auto val = a_->col_value(j);
    for (std::size_t e = 0; e < idx.size(); ++e)
      if (!in_kernel_row_[idx[e]]) s -= val[e] * y[idx[e]];
    z[c] = s;
  }
  kernel_solve_transposed(z);
  for (int i = 0; i < q; ++i) y[kernel_row_[i]] = z[i];
  return y;
}

void BasisFactor::update(int pos, std::span<const double> alpha) {
  Eta eta;
  eta.pos = pos;
  eta.pivot = alpha[pos];
  for (int i = 0; i < m_; ++i)
    if (i != pos && alpha[i] != 0.0) {
      eta.index.push_back(i);
      eta.value.push_back(alpha[i]);
    }
  etas_.push_back(std::move(eta));
}

TableauRow tableau_row(const CscMatrix& a, std::span<const double> rhs, const Basis& basis, int basic_var) {
  int pos = basis.position_of(basic_var);
  if (pos < 0) throw std::invalid_argument("tableau_row: variable is not basic");
  BasisFactor factor(a, basis.head);
  std::vector<double> unit(a.rows(), 0.0);
  unit[pos] = 1.0;
  std::vector<double> rho = factor.btran(unit);
  TableauRow row;
  row.basic_var = basic_var;
  row.position = pos;
  row.coef.assign(a.cols(), 0.0);
  for (int j = 0; j < a.cols(); ++j)
    if (basis.status[j] != VarStatus::Basic) row.coef[j] = a.col_dot(j, rho);
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i) s += rho[i] * rhs[i];
  row.rhs = s;
  return row;
}

TableauRow tableau_row(const StandardLp& lp, const Basis& basis, int basic_var) {
  return tableau_row(lp.a, lp.b, basis, basic_var);
}

std::vector<double> basic_point(const StandardLp& lp, const Basis& basis) {
  for (int j = 0; j < lp.num_cols(); ++j)
    if (basis.status[j] == VarStatus::AtUpper)
      throw std::invalid_argument("basic_point: standard-form columns have no finite upper bound");
  BasisFactor factor(lp.a, basis.head);
  std::vector<double> xb = factor.ftran(lp.b);
  std::vector<double> x(lp.num_cols(), 0.0);
  for (int p = 0; p < lp.m; ++p) x[basis.head[p]] = xb[p];
  return x;
}

}  // namespace lapclose
