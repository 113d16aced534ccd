#ifndef LAPCLOSE_TESTS_ORACLE_HPP
#define LAPCLOSE_TESTS_ORACLE_HPP

// Reference computations for the tests. Everything here is deliberately naive and
// dense, and shares no code with the library beyond plain data types.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "lapclose/instance.hpp"
#include "lapclose/lp_core.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

enum class Status { Optimal, Infeasible, Unbounded };

/// max c x  s.t.  a_i x (sense_i) b_i,  x >= 0; sense is one of '<', '>', '='.
struct DenseLp {
  Matrix a;
  std::vector<double> b;
  std::vector<char> sense;
  std::vector<double> c;
};

struct DenseResult {
  Status status = Status::Infeasible;
  double z = 0.0;
  std::vector<double> x;
};

/// Two-phase tableau simplex with Bland's rule.
inline DenseResult dense_simplex(const DenseLp& lp, double tol = 1e-9) {
  const int m = static_cast<int>(lp.a.size());
  const int n = static_cast<int>(lp.c.size());
  std::vector<std::vector<double>> rows(m);
  std::vector<double> rhs(lp.b);
  std::vector<char> sense(lp.sense);
  for (int i = 0; i < m; ++i) {
    rows[i] = lp.a[i];
    if (rhs[i] < 0) {
      for (double& v : rows[i]) v = -v;
      rhs[i] = -rhs[i];
      if (sense[i] == '<') sense[i] = '>';
      else if (sense[i] == '>') sense[i] = '<';
    }
  }
  int extra = 0, arts = 0;
  for (char s : sense) {
    if (s != '=') ++extra;
    if (s != '<') ++arts;
  }
  const int art0 = n + extra;
  const int cols = art0 + arts;
  Matrix t(m + 1, std::vector<double>(cols + 1, 0.0));
  std::vector<int> basis(m);
  int e = n, a = art0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t[i][j] = rows[i][j];
    t[i][cols] = rhs[i];
    if (sense[i] == '<') {
      t[i][e] = 1.0;
      basis[i] = e++;
    } else {
      if (sense[i] == '>') t[i][e++] = -1.0;
      t[i][a] = 1.0;
      basis[i] = a++;
    }
  }
  auto pivot = [&](int r, int q) {
    double pv = t[r][q];
    for (double& v : t[r]) v /= pv;
    for (int i = 0; i <= m; ++i) {
      if (i == r || t[i][q] == 0.0) continue;
      double f = t[i][q];
      for (int j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
    }
    basis[r] = q;
  };
  // Objective row holds reduced costs of a maximization: entering when negative.
  auto set_objective = [&](const std::vector<double>& cost) {
    for (int j = 0; j <= cols; ++j) t[m][j] = j < cols ? -cost[j] : 0.0;
    for (int i = 0; i < m; ++i) {
      double f = t[m][basis[i]];
      if (f == 0.0) continue;
      for (int j = 0; j <= cols; ++j) t[m][j] -= f * t[i][j];
    }
  };
  auto run = [&](int allowed) -> bool {
    for (;;) {
      int q = -1;
      for (int j = 0; j < allowed; ++j)
        if (t[m][j] < -tol) {
          q = j;
          break;
        }
      if (q < 0) return true;
      int r = -1;
      double best = 0.0;
      for (int i = 0; i < m; ++i) {
        if (t[i][q] <= tol) continue;
        double ratio = t[i][cols] / t[i][q];
        if (r < 0 || ratio < best - 1e-12 || (ratio <= best + 1e-12 && basis[i] < basis[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r < 0) return false;
      pivot(r, q);
    }
  };
  DenseResult out;
  if (arts > 0) {
    std::vector<double> cost(cols, 0.0);
    for (int j = art0; j < cols; ++j) cost[j] = -1.0;
    set_objective(cost);
    run(cols);
    if (t[m][cols] < -1e-7) return out;
    for (int i = 0; i < m; ++i) {
      if (basis[i] < art0) continue;
      for (int j = 0; j < art0; ++j)
        if (std::abs(t[i][j]) > 1e-9) {
          pivot(i, j);
          break;
        }
    }
  }
  std::vector<double> cost(cols, 0.0);
  for (int j = 0; j < n; ++j) cost[j] = lp.c[j];
  set_objective(cost);
  if (!run(art0)) {
    out.status = Status::Unbounded;
    return out;
  }
  out.status = Status::Optimal;
  out.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) out.x[basis[i]] = t[i][cols];
  out.z = 0.0;
  for (int j = 0; j < n; ++j) out.z += lp.c[j] * out.x[j];
  return out;
}

/// Solve a square system by Gaussian elimination; nullopt when singular.
inline std::optional<std::vector<double>> solve_square(Matrix g, std::vector<double> h) {
  const int n = static_cast<int>(h.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(g[r][c]) > std::abs(g[piv][c])) piv = r;
    if (std::abs(g[piv][c]) < 1e-10) return std::nullopt;
    std::swap(g[piv], g[c]);
    std::swap(h[piv], h[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      double f = g[r][c] / g[c][c];
      if (f == 0.0) continue;
      for (int k = c; k < n; ++k) g[r][k] -= f * g[c][k];
      h[r] -= f * h[c];
    }
  }
  for (int i = 0; i < n; ++i) h[i] /= g[i][i];
  return h;
}

inline Matrix inverse(const Matrix& b) {
  const int n = static_cast<int>(b.size());
  Matrix inv(n, std::vector<double>(n));
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    auto col = solve_square(b, e);
    if (!col) return {};
    for (int i = 0; i < n; ++i) inv[i][j] = (*col)[i];
  }
  return inv;
}

inline Matrix dense_rows(const lapclose::NormalizedMilp& nm) {
  Matrix a(nm.num_rows(), std::vector<double>(nm.num_cols(), 0.0));
  for (int i = 0; i < nm.num_rows(); ++i)
    for (std::size_t e = 0; e < nm.rows[i].size(); ++e) a[i][nm.rows[i].index[e]] += nm.rows[i].value[e];
  return a;
}

/// LP relaxation as a DenseLp.
inline DenseLp relaxation(const lapclose::NormalizedMilp& nm) {
  DenseLp d;
  d.a = dense_rows(nm);
  d.b = nm.rhs;
  d.sense.assign(nm.num_rows(), '>');
  d.c = nm.objective;
  return d;
}

/// Best vertex of {A'x >= b, x >= 0} by trying every n-subset of tight constraints.
/// Assumes the LP is bounded; nullopt when no vertex is feasible.
inline std::optional<std::pair<double, std::vector<double>>> vertex_enumeration(const lapclose::NormalizedMilp& nm) {
  const int n = nm.num_cols();
  Matrix g = dense_rows(nm);
  std::vector<double> h = nm.rhs;
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    g.push_back(e);
    h.push_back(0.0);
  }
  const int total = static_cast<int>(g.size());
  std::optional<std::pair<double, std::vector<double>>> best;
  std::vector<int> pick(n);
  for (int i = 0; i < n; ++i) pick[i] = i;
  for (;;) {
    Matrix sg;
    std::vector<double> sh;
    for (int i : pick) {
      sg.push_back(g[i]);
      sh.push_back(h[i]);
    }
    if (auto x = solve_square(sg, sh)) {
      bool feasible = true;
      for (int i = 0; i < total && feasible; ++i) {
        double lhs = 0.0;
        for (int j = 0; j < n; ++j) lhs += g[i][j] * (*x)[j];
        feasible = lhs >= h[i] - 1e-9;
      }
      if (feasible) {
        double z = 0.0;
        for (int j = 0; j < n; ++j) z += nm.objective[j] * (*x)[j];
        if (!best || z > best->first + 1e-12) best = std::make_pair(z, *x);
      }
    }
    int i = n - 1;
    while (i >= 0 && pick[i] == total - n + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int k = i + 1; k < n; ++k) pick[k] = pick[k - 1] + 1;
  }
  return best;
}

/// (-I | A') of a StandardLp as a dense m x (m+n) matrix.
inline Matrix slp_matrix(const lapclose::StandardLp& lp) {
  Matrix a(lp.m, std::vector<double>(lp.m + lp.n, 0.0));
  for (int i = 0; i < lp.m; ++i) {
    a[i][i] = -1.0;
    const auto& r = lp.structural_rows[i];
    for (std::size_t e = 0; e < r.size(); ++e) a[i][lp.m + r.index[e]] += r.value[e];
  }
  return a;
}

struct DenseRow {
  std::vector<double> coef;  // per column, zero on basic columns
  double rhs = 0.0;
};

/// Row of B^{-1}(A | b) belonging to basic column `var`.
inline DenseRow tableau_row(const lapclose::StandardLp& lp, const std::vector<int>& head, int var) {
  Matrix a = slp_matrix(lp);
  Matrix bm(lp.m, std::vector<double>(lp.m));
  for (int i = 0; i < lp.m; ++i)
    for (int r = 0; r < lp.m; ++r) bm[i][r] = a[i][head[r]];
  Matrix inv = inverse(bm);
  int pos = static_cast<int>(std::find(head.begin(), head.end(), var) - head.begin());
  DenseRow row;
  row.coef.assign(lp.m + lp.n, 0.0);
  for (int j = 0; j < lp.m + lp.n; ++j)
    for (int i = 0; i < lp.m; ++i) row.coef[j] += inv[pos][i] * a[i][j];
  for (int i = 0; i < lp.m; ++i) row.rhs += inv[pos][i] * lp.b[i];
  for (int h : head) row.coef[h] = 0.0;
  return row;
}

inline double frac(double v) { return v - std::floor(v); }

/// Textbook GMI cut of a dense tableau row, in structural space, scaled to max|alpha| = 1.
/// Returns alpha followed by beta.
inline std::vector<double> gmi_in_x(const lapclose::StandardLp& lp, const DenseRow& row) {
  const double f0 = frac(row.rhs);
  std::vector<double> pi(lp.m + lp.n, 0.0);
  for (int j = 0; j < lp.m + lp.n; ++j) {
    double a = row.coef[j];
    if (a == 0.0) continue;
    bool integer = j >= lp.m && j < lp.m + lp.p;
    if (integer) {
      double fj = frac(a);
      pi[j] = fj <= f0 ? fj / f0 : (1.0 - fj) / (1.0 - f0);
    } else {
      pi[j] = a > 0 ? a / f0 : -a / (1.0 - f0);
    }
  }
  std::vector<double> alpha(lp.n, 0.0);
  double beta = 1.0;
  for (int j = 0; j < lp.n; ++j) alpha[j] += pi[lp.m + j];
  for (int i = 0; i < lp.m; ++i) {
    if (pi[i] == 0.0) continue;
    const auto& r = lp.structural_rows[i];
    for (std::size_t e = 0; e < r.size(); ++e) alpha[r.index[e]] += pi[i] * r.value[e];
    beta += pi[i] * lp.b[i];
  }
  double scale = 0.0;
  for (double v : alpha) scale = std::max(scale, std::abs(v));
  for (double& v : alpha) v /= scale;
  alpha.push_back(beta / scale);
  return alpha;
}

/// Membership value by the dense simplex: max y_k - ceil(x_k) f_k over the box-bounded system.
inline double membership_value(const lapclose::StandardLp& lp, const std::vector<double>& x, int k) {
  const int m = lp.m, n = lp.n;
  const double f = frac(x[k]);
  Matrix a = slp_matrix(lp);
  DenseLp d;
  for (int i = 0; i < m; ++i) {
    d.a.push_back(a[i]);
    d.b.push_back(lp.b[i] * f);
    d.sense.push_back('=');
  }
  for (int j = 0; j < m + n; ++j) {
    std::vector<double> e(m + n, 0.0);
    e[j] = 1.0;
    double ub;
    if (j < m) {
      const auto& r = lp.structural_rows[j];
      double act = -lp.b[j];
      for (std::size_t q = 0; q < r.size(); ++q) act += r.value[q] * x[r.index[q]];
      ub = act;
    } else {
      ub = x[j - m];
    }
    d.a.push_back(e);
    d.b.push_back(std::max(ub, 0.0));
    d.sense.push_back('<');
  }
  d.c.assign(m + n, 0.0);
  d.c[m + k] = 1.0;
  DenseResult r = dense_simplex(d);
  return r.z - std::ceil(x[k]) * f;
}

}  // namespace oracle

#endif
