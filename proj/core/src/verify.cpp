#include "lapclose/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "lapclose/closure.hpp"
#include "lapclose/simplex.hpp"

namespace lapclose {

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

long long EnumerationDomain::size() const {
  long long total = 1;
  for (std::size_t j = 0; j < lower.size(); ++j) {
    long long width = static_cast<long long>(upper[j]) - lower[j] + 1;
    if (width <= 0) return 0;
    if (total > cap / width + 1) return cap + 1;
    total *= width;
  }
  return total;
}

EnumerationDomain EnumerationDomain::from_instance(const NormalizedMilp& nm, int per_var_cap, long long cap) {
  EnumerationDomain dom;
  dom.cap = cap;
  dom.lower.assign(nm.num_integer, 0);
  dom.upper.assign(nm.num_integer, per_var_cap);
  for (int i = 0; i < nm.num_rows(); ++i) {
    const SparseVector& r = nm.rows[i];
    if (r.size() != 1 || r.index[0] >= nm.num_integer || r.value[0] >= 0.0) continue;
    // a x_j >= b with a < 0  ->  x_j <= b / a.
    double ub = std::floor(nm.rhs[i] / r.value[0] + 1e-9);
    int j = r.index[0];
    dom.upper[j] = std::min<double>(dom.upper[j], std::max(ub, -1.0));
  }
  return dom;
}

namespace {

CutRow normalized(CutRow c) {
  normalize_cut(c);
  return c;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

struct WindowCheck {
  bool ok = false;
  std::string reason;
  std::optional<DualCertificate> cert;
  TableauRow row;
};

// Shared preconditions of the two equivalence checks.
WindowCheck theorem_setting(const StandardLp& lp, const FractionalPoint& pt, int k, const Basis& basis) {
  WindowCheck w;
  MembershipProblem prob = build_membership_lp(lp, pt, k, 1e-9);
  const int target = prob.target_col();
  if (static_cast<int>(basis.status.size()) != lp.num_cols() || basis.status[target] != VarStatus::Basic) {
    w.reason = "x_k not basic in the terminal basis";
    return w;
  }
  CertificateOutcome co = extract_dual_certificate(prob, lp, basis);
  if (co.status == CertificateStatus::Invalid) {
    w.reason = "basis not dual feasible for the membership problem";
    return w;
  }
  w.row = tableau_row(lp, basis, target);
  double lo = std::floor(pt.x[k]), hi = std::ceil(pt.x[k]);
  if (!(w.row.rhs > lo + 1e-9 && w.row.rhs < hi - 1e-9)) {
    w.reason = "basic value outside the split window";
    return w;
  }
  w.cert = co.cert;
  w.ok = true;
  return w;
}

}  // namespace

CheckOutcome check_theorem3(const StandardLp& lp, const FractionalPoint& pt, int k, const Basis& basis, double tol,
                            double fault) {
  CheckOutcome out;
  WindowCheck w = theorem_setting(lp, pt, k, basis);
  if (!w.ok) {
    out.detail = w.reason;
    return out;
  }
  CutRow cert_cut = certificate_cut(*w.cert, lp);
  cert_cut = normalized(cert_cut);
  cert_cut.rhs += fault;
  RowCutResult ic = intersection_cut(w.row, lp, 1e-12);
  if (ic.status != RowCutStatus::Ok) {
    out.status = CheckStatus::Fail;
    out.detail = "intersection cut not formed";
    return out;
  }
  CutRow row_cut = eliminate_slacks(ic.cut, lp);
  out.deviation = cut_distance(cert_cut, row_cut, lp.n);
  out.status = out.deviation < tol ? CheckStatus::Pass : CheckStatus::Fail;
  if (out.status == CheckStatus::Fail) out.detail = "k=" + std::to_string(k) + " deviation " + fmt_double(out.deviation);
  return out;
}

CheckOutcome check_theorem4(const StandardLp& lp, const FractionalPoint& pt, int k, const Basis& basis, double tol,
                            double fault) {
  CheckOutcome out;
  WindowCheck w = theorem_setting(lp, pt, k, basis);
  if (!w.ok) {
    out.detail = w.reason;
    return out;
  }
  CutRow strong = normalized(strengthen(*w.cert, lp));
  strong.rhs += fault;
  RowCutResult g = gmi_cut(w.row, lp, 1e-12);
  if (g.status != RowCutStatus::Ok) {
    out.status = CheckStatus::Fail;
    out.detail = "GMI cut not formed";
    return out;
  }
  CutRow row_cut = eliminate_slacks(g.cut, lp);
  out.deviation = cut_distance(strong, row_cut, lp.n);
  out.status = out.deviation < tol ? CheckStatus::Pass : CheckStatus::Fail;
  if (out.status == CheckStatus::Fail) out.detail = "k=" + std::to_string(k) + " deviation " + fmt_double(out.deviation);
  return out;
}

CheckOutcome check_duality(const StandardLp& lp, const FractionalPoint& pt, int k, double eps, double fault) {
  CheckOutcome out;
  if (integrality_gap(pt.x[k]) < eps) {
    out.detail = "x_k integral within eps";
    return out;
  }
  MembershipProblem prob = build_membership_lp(lp, pt, k, eps);
  MembershipSolve ms = membership_value(prob);
  std::vector<int> pi(lp.n, 0);
  pi[k] = 1;
  CglpProblem cg = build_cglp(lp, pt, pi, static_cast<int>(std::floor(pt.x[k])), eps);
  SimplexResult cr = solve(cg.lp);
  if (ms.status != LpStatus::Optimal || cr.status != LpStatus::Optimal) {
    out.status = CheckStatus::Fail;
    out.detail = "membership " + std::string(to_string(ms.status)) + ", cglp " + std::string(to_string(cr.status));
    return out;
  }
  double v = ms.value + fault;
  out.deviation = std::abs(v - cr.objective);
  out.status = out.deviation < 1e-7 * (1.0 + std::abs(v)) ? CheckStatus::Pass : CheckStatus::Fail;
  if (out.status == CheckStatus::Fail)
    out.detail = "k=" + std::to_string(k) + " membership " + fmt_double(v) + " cglp " + fmt_double(cr.objective);
  return out;
}

CheckOutcome check_vertex_membership(const StandardLp& lp, const FractionalPoint& vertex, int k, double fault) {
  CheckOutcome out;
  if (integrality_gap(vertex.x[k]) < 1e-4) {
    out.detail = "x_k integral";
    return out;
  }
  MembershipProblem prob = build_membership_lp(lp, vertex, k);
  MembershipSolve ms = membership_value(prob);
  if (ms.status != LpStatus::Optimal) {
    out.status = CheckStatus::Fail;
    out.detail = "membership LP " + std::string(to_string(ms.status));
    return out;
  }
  const double f = prob.fk;
  double dy = 0.0;
  for (int j = 0; j < lp.n; ++j) dy = std::max(dy, std::abs(ms.result.x[lp.m + j] - f * vertex.x[j]));
  double dv = std::abs(ms.value + fault - (f - 1.0) * f);
  out.deviation = std::max(dy, dv);
  bool ok = dy < 1e-8 && dv < 1e-9;
  out.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  if (!ok) out.detail = "k=" + std::to_string(k) + " |y - f x| " + fmt_double(dy) + " |value - (f-1)f| " + fmt_double(dv);
  return out;
}

ValidityOutcome check_validity(const NormalizedMilp& nm, std::span<const CutRow> cuts, const EnumerationDomain& dom,
                               double tol) {
  ValidityOutcome out;
  if (!dom.within_cap()) {
    out.detail = "enumeration domain exceeds cap";
    return out;
  }
  const int p = nm.num_integer;
  const int n = nm.num_cols();
  const int m = nm.num_rows();
  const int nc = n - p;
  std::vector<std::vector<double>> dense_cuts;
  for (const CutRow& c : cuts) dense_cuts.push_back(c.coefs.to_dense(n));

  // Continuous restriction  -s + A'_C x_C = b - A'_I z  in bounded form; rhs set per assignment.
  BoundedLp sub;
  if (nc > 0) {
    std::vector<SparseVector> rows(m);
    for (int i = 0; i < m; ++i) {
      rows[i].push(i, -1.0);
      const SparseVector& r = nm.rows[i];
      for (std::size_t e = 0; e < r.size(); ++e)
        if (r.index[e] >= p) rows[i].push(m + r.index[e] - p, r.value[e]);
    }
    sub.a = CscMatrix::from_rows(rows, m + nc);
    sub.lower.assign(m + nc, 0.0);
    sub.upper.assign(m + nc, kInf);
    sub.cost.assign(m + nc, 0.0);
    sub.sense = ObjSense::Minimize;
  }

  std::vector<int> z(dom.lower.begin(), dom.lower.end());
  std::vector<double> point(n, 0.0);
  bool done = p > 0 && dom.size() == 0;
  while (!done) {
    std::vector<double> resid(nm.rhs);
    for (int i = 0; i < m; ++i) {
      const SparseVector& r = nm.rows[i];
      for (std::size_t e = 0; e < r.size(); ++e)
        if (r.index[e] < p) resid[i] -= r.value[e] * z[r.index[e]];
    }
    for (int j = 0; j < p; ++j) point[j] = z[j];
    bool feasible = true;
    std::optional<Basis> basis;
    if (nc == 0) {
      for (int i = 0; i < m && feasible; ++i) feasible = resid[i] <= 1e-9;
    } else {
      sub.rhs = resid;
      std::fill(sub.cost.begin(), sub.cost.end(), 0.0);
      SimplexResult fr = solve(sub);
      feasible = fr.status == LpStatus::Optimal;
      if (feasible) {
        basis = fr.basis;
        for (int j = 0; j < nc; ++j) point[p + j] = fr.x[m + j];
      }
    }
    if (feasible) {
      ++out.points;
      for (std::size_t c = 0; c < cuts.size(); ++c) {
        const std::vector<double>& a = dense_cuts[c];
        double lhs = 0.0;
        for (int j = 0; j < p; ++j) lhs += a[j] * z[j];
        std::vector<double> witness = point;
        bool unbounded = false;
        bool has_cont = false;
        for (int j = p; j < n; ++j) has_cont |= a[j] != 0.0;
        if (has_cont) {
          std::fill(sub.cost.begin(), sub.cost.end(), 0.0);
          for (int j = 0; j < nc; ++j) sub.cost[m + j] = a[p + j];
          SimplexOptions so;
          so.warm_start = basis;
          SimplexResult cr = solve(sub, so);
          if (cr.status == LpStatus::Unbounded) {
            unbounded = true;
          } else if (cr.status == LpStatus::Optimal) {
            lhs += cr.objective;
            for (int j = 0; j < nc; ++j) witness[p + j] = cr.x[m + j];
          } else {
            out.detail = "continuous restriction not solved";
            continue;
          }
        } else {
          for (int j = p; j < n; ++j) lhs += a[j] * point[j];
        }
        double amount = cuts[c].rhs - lhs;
        if (unbounded || amount > tol) {
          if (out.violations.size() < 32)
            out.violations.push_back(Violation{static_cast<int>(c), witness, unbounded ? kInf : amount});
          else
            out.violations.back().amount = std::max(out.violations.back().amount, amount);
        }
      }
    }
    // Odometer over the integer box.
    int j = 0;
    for (; j < p; ++j) {
      if (z[j] < dom.upper[j]) {
        ++z[j];
        break;
      }
      z[j] = dom.lower[j];
    }
    if (j == p) done = true;
  }
  out.status = out.violations.empty() ? CheckStatus::Pass : CheckStatus::Fail;
  return out;
}

NormalizedMilp t1_instance() {
  NormalizedMilp nm;
  nm.name = "T1";
  nm.num_integer = 1;
  nm.objective = {0.0, 1.0};
  SparseVector r1, r2;
  r1.push(0, -2.0);
  r1.push(1, -1.0);
  r2.push(0, 2.0);
  r2.push(1, -1.0);
  nm.rows = {r1, r2};
  nm.rhs = {-2.0, 0.0};
  nm.row_names = {"R1", "R2"};
  nm.col_names = {"X1", "X2"};
  nm.back_map = {BackMapEntry{0, 0.0, 1.0}, BackMapEntry{1, 0.0, 1.0}};
  return nm;
}

NormalizedMilp random_instance(std::mt19937_64& rng) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (;;) {
    const int n = uniform(2, 6);
    const int p = uniform(1, n);
    const int mr = uniform(2, 6);
    NormalizedMilp nm;
    nm.name = "rand";
    nm.num_integer = p;
    std::vector<int> ub(n);
    std::vector<double> x0(n);
    for (int j = 0; j < n; ++j) {
      ub[j] = uniform(1, 3);
      x0[j] = j < p ? uniform(0, ub[j]) : std::uniform_real_distribution<double>(0.0, ub[j])(rng);
    }
    for (int i = 0; i < mr; ++i) {
      SparseVector r;
      while (r.empty()) {
        for (int j = 0; j < n; ++j) {
          int a = uniform(-5, 5);
          if (a != 0) r.push(j, a);
        }
      }
      nm.rhs.push_back(std::floor(r.dot(x0)) - uniform(0, 2));
      nm.rows.push_back(std::move(r));
      nm.row_names.push_back("r" + std::to_string(i));
    }
    for (int j = 0; j < n; ++j) {
      SparseVector r;
      r.push(j, -1.0);
      nm.rows.push_back(std::move(r));
      nm.rhs.push_back(-ub[j]);
      nm.row_names.push_back("ub" + std::to_string(j));
    }
    nm.objective.resize(n);
    bool nonzero = false;
    for (int j = 0; j < n; ++j) {
      nm.objective[j] = uniform(-5, 5);
      nonzero |= nm.objective[j] != 0.0;
    }
    if (!nonzero) continue;
    for (int j = 0; j < n; ++j) {
      nm.col_names.push_back("x" + std::to_string(j));
      nm.back_map.push_back(BackMapEntry{j, 0.0, 1.0});
    }
    StandardLp lp = to_standard(nm);
    SimplexResult res = solve(to_bounded(lp));
    if (res.status != LpStatus::Optimal) continue;
    bool fractional = false;
    for (int k = 0; k < p; ++k) fractional |= integrality_gap(res.x[lp.m + k]) >= 1e-3;
    if (fractional) return nm;
  }
}

std::optional<Suite> parse_suite(std::string_view s) {
  if (s == "theorem3") return Suite::Theorem3;
  if (s == "theorem4") return Suite::Theorem4;
  if (s == "duality") return Suite::Duality;
  if (s == "vertex") return Suite::Vertex;
  if (s == "validity") return Suite::Validity;
  return std::nullopt;
}

std::string_view to_string(Suite s) {
  switch (s) {
    case Suite::Theorem3: return "theorem3";
    case Suite::Theorem4: return "theorem4";
    case Suite::Duality: return "duality";
    case Suite::Vertex: return "vertex";
    case Suite::Validity: return "validity";
  }
  return "?";
}

namespace {

constexpr double kPlantedFault = 0.1;

/// The LP optimum of the instance followed by optima after a few passes of cuts;
/// the first point is a vertex of the relaxation, later ones usually are not.
std::vector<FractionalPoint> sample_points(const NormalizedMilp& nm, const StandardLp& orig, int passes) {
  std::vector<FractionalPoint> pts;
  std::vector<CutRow> cuts;
  for (int pass = 0; pass <= passes; ++pass) {
    StandardLp lp = to_standard(nm, cuts);
    SimplexResult res = solve(to_bounded(lp));
    if (res.status != LpStatus::Optimal) break;
    FractionalPoint pt = FractionalPoint::at(orig, std::vector<double>(res.x.begin() + lp.m, res.x.end()));
    bool any = false;
    for (int k = 0; k < nm.num_integer; ++k) {
      if (integrality_gap(pt.x[k]) < 1e-4) continue;
      SeparationResult s = separate(orig, pt, k);
      if (s.status == SeparationStatus::Cut) {
        cuts.push_back(s.plain);
        any = true;
      }
    }
    pts.push_back(std::move(pt));
    if (!any) break;
  }
  return pts;
}

void note_failure(SuiteReport& rep, const std::string& what) {
  if (rep.first_failure.empty()) rep.first_failure = what;
}

std::string describe(const NormalizedMilp& nm, const FractionalPoint& pt) {
  std::ostringstream os;
  os.precision(12);
  os << nm.name << " x=(";
  for (std::size_t j = 0; j < pt.x.size(); ++j) os << (j ? ", " : "") << pt.x[j];
  os << ")";
  return os.str();
}

}  // namespace

SuiteReport run_suite(Suite suite, std::uint64_t seed, int count, Fixture fixture) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.suite = suite;
  std::mt19937_64 rng(seed);
  const double fault = fixture == Fixture::PlantedFault ? kPlantedFault : 0.0;

  if (suite == Suite::Theorem3 || suite == Suite::Theorem4) {
    for (int c = 0; c < count; ++c) {
      NormalizedMilp nm = random_instance(rng);
      nm.name += std::to_string(c);
      StandardLp orig = to_standard(nm);
      int pass = 0, fail = 0;
      for (const FractionalPoint& pt : sample_points(nm, orig, 3)) {
        for (int k = 0; k < nm.num_integer; ++k) {
          if (integrality_gap(pt.x[k]) < 1e-4) continue;
          SeparationResult s = separate(orig, pt, k);
          if (s.basis.head.empty()) continue;
          CheckOutcome o = suite == Suite::Theorem3 ? check_theorem3(orig, pt, k, s.basis, 1e-7, fault)
                                                    : check_theorem4(orig, pt, k, s.basis, 1e-7, fault);
          ++rep.checks;
          rep.max_deviation = std::max(rep.max_deviation, o.deviation);
          if (o.status == CheckStatus::Pass) ++pass;
          if (suite == Suite::Theorem4 && o.status != CheckStatus::Skipped &&
              cut_distance(s.plain, s.strengthened_certificate, orig.n) > 1e-9)
            ++rep.strengthened;
          if (o.status == CheckStatus::Fail) {
            ++fail;
            note_failure(rep, describe(nm, pt) + ": " + o.detail);
          }
        }
      }
      if (fail) ++rep.failed;
      else if (pass) ++rep.passed;
      else ++rep.skipped;
    }
  } else if (suite == Suite::Duality || suite == Suite::Vertex) {
    int cases = 0;
    for (int inst = 0; cases < count; ++inst) {
      NormalizedMilp nm = random_instance(rng);
      nm.name += std::to_string(inst);
      StandardLp orig = to_standard(nm);
      std::vector<FractionalPoint> pts = sample_points(nm, orig, suite == Suite::Vertex ? 0 : 3);
      for (const FractionalPoint& pt : pts) {
        for (int k = 0; k < nm.num_integer && cases < count; ++k) {
          if (integrality_gap(pt.x[k]) < 1e-4) continue;
          CheckOutcome o = suite == Suite::Duality ? check_duality(orig, pt, k, 1e-4, fault)
                                                   : check_vertex_membership(orig, pt, k, fault);
          ++cases;
          ++rep.checks;
          rep.max_deviation = std::max(rep.max_deviation, o.deviation);
          if (o.status == CheckStatus::Pass) ++rep.passed;
          else if (o.status == CheckStatus::Skipped) ++rep.skipped;
          else {
            ++rep.failed;
            note_failure(rep, describe(nm, pt) + ": " + o.detail);
          }
        }
        if (cases >= count) break;
      }
    }
  } else {
    // Validity: the triangle example plus `count` random instances, each checked
    // against the cuts of both closure modes and one GMI round.
    for (int c = 0; c <= count; ++c) {
      if (count == 0) break;
      NormalizedMilp nm = c == 0 ? t1_instance() : random_instance(rng);
      if (c > 0) nm.name += std::to_string(c);
      std::vector<CutRow> cuts;
      for (ClosureMode mode : {ClosureMode::Pe, ClosureMode::PeStar, ClosureMode::GmiRounds}) {
        ClosureConfig cfg;
        cfg.mode = mode;
        cfg.time_limit = 10.0;
        ClosureReport r = run_closure(nm, cfg);
        cuts.insert(cuts.end(), r.cuts.begin(), r.cuts.end());
      }
      for (CutRow& cut : cuts) cut.rhs += fault;
      EnumerationDomain dom = EnumerationDomain::from_instance(nm);
      ValidityOutcome o = check_validity(nm, cuts, dom);
      rep.checks += static_cast<long long>(cuts.size());
      if (o.status == CheckStatus::Pass) ++rep.passed;
      else if (o.status == CheckStatus::Skipped) ++rep.skipped;
      else {
        ++rep.failed;
        const Violation& v = o.violations.front();
        std::ostringstream os;
        os.precision(12);
        os << nm.name << ": cut " << v.cut << " violated by " << v.amount << " at (";
        for (std::size_t j = 0; j < v.point.size(); ++j) os << (j ? ", " : "") << v.point[j] + 0.0;
        os << ")";
        note_failure(rep, os.str());
        rep.max_deviation = std::max(rep.max_deviation, v.amount);
      }
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace lapclose
