#include "lapclose/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lapclose {

std::string_view to_string(CutOrigin o) {
  switch (o) {
    case CutOrigin::Certificate: return "certificate";
    case CutOrigin::Intersection: return "intersection";
    case CutOrigin::Gmi: return "gmi";
  }
  return "?";
}

double frac(double v) { return v - std::floor(v); }

double integrality_gap(double v) {
  double f = frac(v);
  return std::min(f, 1.0 - f);
}

namespace {

constexpr double kZeroCoef = 1e-12;

RowCutResult row_cut(const TableauRow& row, std::span<const char> integer_cols, double eps) {
  RowCutResult res;
  res.f0 = frac(row.rhs);
  if (integrality_gap(row.rhs) < eps) {
    res.status = RowCutStatus::NearIntegral;
    return res;
  }
  const double f0 = res.f0;
  const int cols = static_cast<int>(row.coef.size());
  res.cut.coef.assign(cols, 0.0);
  res.cut.rhs = f0 * (1.0 - f0);
  bool any = false;
  for (int j = 0; j < cols; ++j) {
    double a = row.coef[j];
    if (j == row.basic_var) continue;
    bool is_int = !integer_cols.empty() && integer_cols[j];
    if (is_int) {
      double fj = frac(a);
      if (fj < kZeroCoef || fj > 1.0 - kZeroCoef) continue;
      res.cut.coef[j] = fj <= f0 ? fj * (1.0 - f0) : (1.0 - fj) * f0;
    } else {
      if (std::abs(a) < kZeroCoef) continue;
      res.cut.coef[j] = std::max(a * (1.0 - f0), -a * f0);
    }
    any = true;
  }
  res.status = any ? RowCutStatus::Ok : RowCutStatus::EmptyDisjunction;
  return res;
}

}  // namespace

RowCutResult intersection_cut(const TableauRow& row, const StandardLp& /*lp*/, double eps) {
  return row_cut(row, {}, eps);
}

RowCutResult gmi_cut(const TableauRow& row, std::span<const char> integer_cols, double eps) {
  return row_cut(row, integer_cols, eps);
}

RowCutResult gmi_cut(const TableauRow& row, const StandardLp& lp, double eps) {
  std::vector<char> flags(lp.num_cols(), 0);
  for (int j = 0; j < lp.num_cols(); ++j) flags[j] = lp.is_integer_col(j) ? 1 : 0;
  return row_cut(row, flags, eps);
}

CutRow eliminate_slacks(const SlpCut& cut, const StandardLp& lp) {
  std::vector<double> alpha(lp.n, 0.0);
  double beta = cut.rhs;
  for (int j = 0; j < lp.n; ++j) alpha[j] = cut.coef[lp.structural_col(j)];
  for (int i = 0; i < lp.m; ++i) {
    double g = cut.coef[lp.slack_col(i)];
    if (g == 0.0) continue;
    const SparseVector& r = lp.structural_rows[i];
    for (std::size_t e = 0; e < r.size(); ++e) alpha[r.index[e]] += g * r.value[e];
    beta += g * lp.b[i];
  }
  CutRow out;
  out.coefs = SparseVector::from_dense(alpha, 0.0);
  out.rhs = beta;
  normalize_cut(out);
  return out;
}

bool normalize_cut(CutRow& cut) {
  double scale = cut.coefs.max_abs();
  if (scale == 0.0) return false;
  SparseVector out;
  for (std::size_t e = 0; e < cut.coefs.size(); ++e) {
    double v = cut.coefs.value[e] / scale;
    if (std::abs(v) <= kZeroCoef) continue;
    out.push(cut.coefs.index[e], v);
  }
  cut.coefs = std::move(out);
  cut.rhs /= scale;
  cut.prov.violation /= scale;
  return true;
}

double dynamism(const CutRow& cut) {
  double hi = 0.0, lo = kInf;
  for (double v : cut.coefs.value) {
    double a = std::abs(v);
    if (a == 0.0) continue;
    hi = std::max(hi, a);
    lo = std::min(lo, a);
  }
  return hi == 0.0 ? 1.0 : hi / lo;
}

double cut_distance(const CutRow& a, const CutRow& b, int n) {
  std::vector<double> da = a.coefs.to_dense(n);
  std::vector<double> db = b.coefs.to_dense(n);
  double d = std::abs(a.rhs - b.rhs);
  for (int j = 0; j < n; ++j) d = std::max(d, std::abs(da[j] - db[j]));
  return d;
}

bool same_cut(const CutRow& a, const CutRow& b, double tol) {
  if (std::abs(a.rhs - b.rhs) >= tol) return false;
  std::size_t i = 0, j = 0;
  while (i < a.coefs.size() || j < b.coefs.size()) {
    int ia = i < a.coefs.size() ? a.coefs.index[i] : std::numeric_limits<int>::max();
    int ib = j < b.coefs.size() ? b.coefs.index[j] : std::numeric_limits<int>::max();
    double va = 0.0, vb = 0.0;
    if (ia <= ib) va = a.coefs.value[i++];
    if (ib <= ia) vb = b.coefs.value[j++];
    if (std::abs(va - vb) >= tol) return false;
  }
  return true;
}

namespace {

std::vector<double> row_combination(std::span<const double> mult, const StandardLp& lp) {
  std::vector<double> out(lp.n, 0.0);
  for (std::size_t i = 0; i < mult.size(); ++i) {
    if (mult[i] == 0.0) continue;
    const SparseVector& r = lp.structural_rows[i];
    for (std::size_t e = 0; e < r.size(); ++e) out[r.index[e]] += mult[i] * r.value[e];
  }
  return out;
}

double rhs_combination(std::span<const double> mult, const StandardLp& lp) {
  double s = 0.0;
  for (std::size_t i = 0; i < mult.size(); ++i) s += mult[i] * lp.b[i];
  return s;
}

}  // namespace

CutRow certificate_cut(const DualCertificate& cert, const StandardLp& lp) {
  std::vector<double> alpha = row_combination(cert.u, lp);
  for (int j = 0; j < lp.n; ++j) alpha[j] += cert.s[j];
  alpha[cert.k] -= cert.u0;
  CutRow out;
  out.coefs = SparseVector::from_dense(alpha, 0.0);
  out.rhs = rhs_combination(cert.u, lp) - cert.u0 * std::floor(cert.xk);
  out.prov.origin = CutOrigin::Certificate;
  out.prov.split_var = cert.k;
  return out;
}

CutRow strengthen(const DualCertificate& cert, const StandardLp& lp) {
  if (!(cert.u0 > 0.0 && cert.v0 > 0.0))
    throw std::invalid_argument("strengthen: certificate needs u0 > 0 and v0 > 0");
  std::vector<double> ua = row_combination(cert.u, lp);
  std::vector<double> va = row_combination(cert.v, lp);
  std::vector<double> alpha(lp.n);
  for (int j = 0; j < lp.n; ++j) alpha[j] = ua[j] + cert.s[j];
  alpha[cert.k] -= cert.u0;
  for (int j = 0; j < lp.p; ++j) {
    if (j == cert.k) continue;
    double mj = cert.t[j] - cert.s[j];
    // Snap m_j that is integral up to rounding noise.
    double r = std::round(mj);
    if (std::abs(mj - r) < 1e-9) mj = r;
    alpha[j] = std::min(ua[j] - cert.u0 * std::floor(mj), va[j] + cert.v0 * std::ceil(mj));
  }
  CutRow out;
  out.coefs = SparseVector::from_dense(alpha, 0.0);
  out.rhs = rhs_combination(cert.u, lp) - cert.u0 * std::floor(cert.xk);
  out.prov.origin = CutOrigin::Certificate;
  out.prov.split_var = cert.k;
  out.prov.strengthened = true;
  return out;
}

}  // namespace lapclose
