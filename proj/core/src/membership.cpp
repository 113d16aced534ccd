#include "lapclose/membership.hpp"

#include <cmath>
#include <stdexcept>

namespace lapclose {

namespace {

// Activities and point coordinates below this are treated as zero when bounding y.
constexpr double kTightTol = 1e-9;
// Tolerated wrong-sign magnitude of a tableau entry in an optimal basis.
constexpr double kDualSignTol = 1e-7;

}  // namespace

FractionalPoint FractionalPoint::at(const StandardLp& lp, std::vector<double> x) {
  FractionalPoint pt;
  pt.x = std::move(x);
  pt.activity.resize(lp.original_rows);
  for (int i = 0; i < lp.original_rows; ++i) pt.activity[i] = lp.structural_rows[i].dot(pt.x) - lp.b[i];
  return pt;
}

MembershipProblem build_membership_lp(const StandardLp& lp, const FractionalPoint& pt, int k, double eps) {
  if (lp.m != lp.original_rows) throw std::invalid_argument("membership LP must use the original rows only");
  if (k < 0 || k >= lp.p) throw std::invalid_argument("membership LP: k is not an integer column");
  if (integrality_gap(pt.x[k]) < eps) throw NotFractionalError("membership LP: x_k is integral within eps");
  MembershipProblem prob;
  prob.k = k;
  prob.xk = pt.x[k];
  prob.fk = frac(pt.x[k]);
  prob.m = lp.m;
  prob.n = lp.n;
  prob.constant = -std::ceil(prob.xk) * prob.fk;
  BoundedLp& b = prob.lp;
  b.a = lp.a;
  b.rhs.resize(lp.m);
  for (int i = 0; i < lp.m; ++i) b.rhs[i] = lp.b[i] * prob.fk;
  b.lower.assign(lp.num_cols(), 0.0);
  b.upper.resize(lp.num_cols());
  for (int i = 0; i < lp.m; ++i) b.upper[i] = pt.activity[i] > kTightTol ? pt.activity[i] : 0.0;
  for (int j = 0; j < lp.n; ++j) b.upper[lp.m + j] = pt.x[j] > kTightTol ? pt.x[j] : 0.0;
  b.cost.assign(lp.num_cols(), 0.0);
  b.cost[prob.target_col()] = 1.0;
  b.sense = ObjSense::Maximize;
  return prob;
}

MembershipSolve membership_value(const MembershipProblem& prob, const std::optional<Basis>& start,
                                 const SimplexOptions& opts) {
  SimplexOptions o = opts;
  if (start) o.warm_start = start;
  MembershipSolve out;
  out.result = solve(prob.lp, o);
  out.status = out.result.status;
  out.value = out.result.objective + prob.constant;
  return out;
}

CertificateOutcome extract_dual_certificate(const MembershipProblem& prob, const StandardLp& lp,
                                            const Basis& basis) {
  CertificateOutcome out;
  const int target = prob.target_col();
  DualCertificate& c = out.cert;
  c.k = prob.k;
  c.xk = prob.xk;
  c.u.assign(prob.m, 0.0);
  c.v.assign(prob.m, 0.0);
  c.s.assign(prob.n, 0.0);
  c.t.assign(prob.n, 0.0);
  if (basis.status[target] == VarStatus::AtUpper) {
    out.status = CertificateStatus::TargetAtUpper;
    out.value = std::floor(prob.xk) * (std::ceil(prob.xk) - prob.xk);
    return out;
  }
  if (basis.status[target] != VarStatus::Basic) {
    out.status = CertificateStatus::Invalid;
    return out;
  }
  TableauRow row = tableau_row(prob.lp.a, prob.lp.rhs, basis, target);
  for (int j = 0; j < prob.m + prob.n; ++j) {
    if (basis.status[j] == VarStatus::Basic) continue;
    double a = row.coef[j];
    bool upper = basis.status[j] == VarStatus::AtUpper;
    double mult = upper ? -a : a;
    if (mult < -kDualSignTol * (1.0 + std::abs(a))) {
      out.status = CertificateStatus::Invalid;
      return out;
    }
    mult = std::max(mult, 0.0);
    if (j < prob.m) {
      (upper ? c.u : c.v)[j] = mult;
    } else {
      (upper ? c.s : c.t)[j - prob.m] = mult;
    }
  }
  double wb = 0.0;
  for (int i = 0; i < prob.m; ++i) wb += (c.u[i] - c.v[i]) * lp.b[i];
  c.u0 = std::ceil(prob.xk) - wb;
  c.v0 = 1.0 - c.u0;
  CutRow cut = certificate_cut(c, lp);
  // Structural upper bounds are x itself (clamped at zero).
  std::vector<double> x(prob.lp.upper.begin() + prob.m, prob.lp.upper.end());
  c.value = -cut.violation_at(x);
  out.status = (c.u0 > 0.0 && c.v0 > 0.0) ? CertificateStatus::Ok : CertificateStatus::SignRegime;
  return out;
}

std::optional<CutRow> assemble_cut(const DualCertificate& cert, const StandardLp& lp, const FractionalPoint& pt) {
  if (!(cert.u0 > 0.0 && cert.v0 > 0.0)) return std::nullopt;
  CutRow cut = certificate_cut(cert, lp);
  double viol = cut.violation_at(pt.x);
  if (!(viol > 0.0)) return std::nullopt;
  cut.prov.violation = viol;
  if (!normalize_cut(cut)) return std::nullopt;
  return cut;
}

CglpProblem build_cglp(const StandardLp& lp, const FractionalPoint& pt, std::span<const int> pi, int pi0,
                       double eps) {
  if (lp.m != lp.original_rows) throw std::invalid_argument("CGLP must use the original rows only");
  double px = 0.0;
  for (int j = 0; j < lp.n; ++j) px += pi[j] * pt.x[j];
  if (px - pi0 < eps || pi0 + 1 - px < eps) throw NotFractionalError("CGLP: pi^T x is not strictly inside the split");
  CglpProblem g;
  const int n = lp.n, m = lp.m;
  g.n = n;
  g.m = m;
  int col = 0;
  g.alpha_pos = col; col += n;
  g.alpha_neg = col; col += n;
  g.beta_pos = col++;
  g.beta_neg = col++;
  g.u = col; col += m;
  g.v = col; col += m;
  g.s = col; col += n;
  g.t = col; col += n;
  g.u0_pos = col++;
  g.u0_neg = col++;
  g.v0_pos = col++;
  g.v0_neg = col++;
  const int rows = 2 * n + 3;
  std::vector<SparseVector> r(rows);
  // alpha - u^T A' - s + u0 pi = 0 and alpha - v^T A' - t - v0 pi = 0.
  for (int side = 0; side < 2; ++side) {
    int base = side * n;
    int mult = side == 0 ? g.u : g.v;
    int slack = side == 0 ? g.s : g.t;
    for (int j = 0; j < n; ++j) {
      r[base + j].push(g.alpha_pos + j, 1.0);
      r[base + j].push(g.alpha_neg + j, -1.0);
      r[base + j].push(slack + j, -1.0);
      if (pi[j] != 0) {
        double sgn = side == 0 ? 1.0 : -1.0;
        int p = side == 0 ? g.u0_pos : g.v0_pos;
        int q = side == 0 ? g.u0_neg : g.v0_neg;
        r[base + j].push(p, sgn * pi[j]);
        r[base + j].push(q, -sgn * pi[j]);
      }
    }
    for (int i = 0; i < m; ++i) {
      const SparseVector& row = lp.structural_rows[i];
      for (std::size_t e = 0; e < row.size(); ++e) r[base + row.index[e]].push(mult + i, -row.value[e]);
    }
  }
  // beta - u^T b + pi0 u0 = 0 and beta - v^T b - (pi0 + 1) v0 = 0.
  for (int side = 0; side < 2; ++side) {
    SparseVector& row = r[2 * n + side];
    row.push(g.beta_pos, 1.0);
    row.push(g.beta_neg, -1.0);
    int mult = side == 0 ? g.u : g.v;
    for (int i = 0; i < m; ++i)
      if (lp.b[i] != 0.0) row.push(mult + i, -lp.b[i]);
    double c0 = side == 0 ? pi0 : -(pi0 + 1.0);
    if (c0 != 0.0) {
      row.push(side == 0 ? g.u0_pos : g.v0_pos, c0);
      row.push(side == 0 ? g.u0_neg : g.v0_neg, -c0);
    }
  }
  SparseVector& norm = r[2 * n + 2];
  norm.push(g.u0_pos, 1.0);
  norm.push(g.u0_neg, -1.0);
  norm.push(g.v0_pos, 1.0);
  norm.push(g.v0_neg, -1.0);
  for (auto& row : r) row.canonicalize();

  BoundedLp& b = g.lp;
  b.a = CscMatrix::from_rows(r, col);
  b.rhs.assign(rows, 0.0);
  b.rhs[2 * n + 2] = 1.0;
  b.lower.assign(col, 0.0);
  b.upper.assign(col, kInf);
  b.cost.assign(col, 0.0);
  for (int j = 0; j < n; ++j) {
    b.cost[g.alpha_pos + j] = pt.x[j];
    b.cost[g.alpha_neg + j] = -pt.x[j];
  }
  b.cost[g.beta_pos] = -1.0;
  b.cost[g.beta_neg] = 1.0;
  b.sense = ObjSense::Minimize;
  return g;
}

std::string_view to_string(SeparationStatus s) {
  switch (s) {
    case SeparationStatus::Cut: return "cut";
    case SeparationStatus::NoCut: return "no-cut";
    case SeparationStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

SeparationResult separate(const StandardLp& lp, const FractionalPoint& pt, int k, const SeparateOptions& opts) {
  SeparationResult res;
  MembershipProblem prob = build_membership_lp(lp, pt, k, opts.eps);
  MembershipSolve ms = membership_value(prob, opts.warm, opts.simplex);
  res.pivots = ms.result.iterations;
  res.value = ms.value;
  if (ms.status != LpStatus::Optimal || ms.result.artificial_in_basis) {
    res.status = SeparationStatus::Inconclusive;
    res.reason = std::string("membership LP ") + std::string(to_string(ms.status));
    return res;
  }
  res.basis = ms.result.basis;
  if (res.value > -opts.eps) {
    res.status = SeparationStatus::NoCut;
    res.reason = "point in split hull";
    return res;
  }
  CertificateOutcome co = extract_dual_certificate(prob, lp, res.basis);
  if (co.status != CertificateStatus::Ok) {
    res.status = co.status == CertificateStatus::Invalid ? SeparationStatus::Inconclusive : SeparationStatus::NoCut;
    res.reason = co.status == CertificateStatus::TargetAtUpper ? "target at upper bound"
                 : co.status == CertificateStatus::SignRegime  ? "u0 or v0 not positive"
                                                               : "terminal basis not dual feasible";
    return res;
  }
  std::optional<CutRow> plain = assemble_cut(co.cert, lp, pt);
  if (!plain) {
    res.status = SeparationStatus::Inconclusive;
    res.reason = "certificate does not cut the point";
    return res;
  }
  const std::uint64_t fp = res.basis.fingerprint();
  res.plain = *plain;
  res.plain.prov.basis_fingerprint = fp;

  CutRow sc = strengthen(co.cert, lp);
  sc.prov.violation = sc.violation_at(pt.x);
  normalize_cut(sc);
  sc.prov.basis_fingerprint = fp;
  res.strengthened_certificate = sc;

  TableauRow row = tableau_row(lp, res.basis, lp.structural_col(k));
  RowCutResult g = gmi_cut(row, lp, opts.eps);
  if (g.status == RowCutStatus::Ok) {
    CutRow gc = eliminate_slacks(g.cut, lp);
    gc.prov.origin = CutOrigin::Gmi;
    gc.prov.split_var = k;
    gc.prov.strengthened = true;
    gc.prov.basis_fingerprint = fp;
    gc.prov.violation = gc.violation_at(pt.x);
    res.strengthened = gc;
  } else {
    res.strengthened = sc;
  }
  res.cert = co.cert;
  res.status = SeparationStatus::Cut;
  return res;
}

}  // namespace lapclose
