#ifndef LAPCLOSE_CUTS_HPP
#define LAPCLOSE_CUTS_HPP

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "lapclose/lp_core.hpp"
#include "lapclose/sparse.hpp"

namespace lapclose {

enum class CutOrigin : std::uint8_t { Certificate, Intersection, Gmi };
std::string_view to_string(CutOrigin o);

struct CutProvenance {
  CutOrigin origin = CutOrigin::Certificate;
  int split_var = -1;  // structural index k of the disjunction x_k <= floor or x_k >= ceil
  std::uint64_t basis_fingerprint = 0;
  bool strengthened = false;
  /// beta - alpha^T x at the point the cut was generated for.
  double violation = 0.0;
  int round = 0;
};

/// alpha^T x >= beta over structural variables.
struct CutRow {
  SparseVector coefs;
  double rhs = 0.0;
  CutProvenance prov;

  double violation_at(std::span<const double> x) const { return rhs - coefs.dot(x); }
};

/// A cut over every column of a StandardLp (slacks first), before slack elimination.
struct SlpCut {
  std::vector<double> coef;
  double rhs = 0.0;
};

enum class RowCutStatus { Ok, NearIntegral, EmptyDisjunction };

struct RowCutResult {
  RowCutStatus status = RowCutStatus::NearIntegral;
  SlpCut cut;
  double f0 = 0.0;
};

/// Fractional part in [0, 1).
double frac(double v);
/// min(frac, 1 - frac): distance to the nearest integer.
double integrality_gap(double v);

/// Split cut from one tableau row treating every nonbasic column as continuous:
/// sum max{abar_j (1-f0), -abar_j f0} x_j >= f0 (1-f0).
RowCutResult intersection_cut(const TableauRow& row, const StandardLp& lp, double eps = 1e-4);

/// Gomory mixed-integer cut from one tableau row. `integer_cols[j]` marks integer columns.
RowCutResult gmi_cut(const TableauRow& row, std::span<const char> integer_cols, double eps = 1e-4);
/// Integrality taken from the StandardLp (slacks continuous).
RowCutResult gmi_cut(const TableauRow& row, const StandardLp& lp, double eps = 1e-4);

/// Substitute s_i = A'_i x - b_i for every slack and normalize to max|alpha| = 1.
CutRow eliminate_slacks(const SlpCut& cut, const StandardLp& lp);

/// Scale so that max|alpha| = 1; drops exact zeros. Returns false for an all-zero alpha.
bool normalize_cut(CutRow& cut);

/// max|alpha| / min nonzero |alpha|; 1 for an empty row.
double dynamism(const CutRow& cut);
inline constexpr double kMaxDynamism = 1e8;

/// Componentwise comparison of normalized (alpha, beta).
bool same_cut(const CutRow& a, const CutRow& b, double tol = 1e-7);
/// Largest componentwise difference of (alpha, beta) over `n` structurals.
double cut_distance(const CutRow& a, const CutRow& b, int n);

/// Multipliers certifying a split cut for x_k <= floor(xk) or x_k >= ceil(xk):
///   alpha = u^T A' + s - u0 e_k = v^T A' + t + v0 e_k,  u0 + v0 = 1.
struct DualCertificate {
  int k = -1;
  double xk = 0.0;
  std::vector<double> u, v;  // per original row
  std::vector<double> s, t;  // per structural
  double u0 = 0.0;
  double v0 = 0.0;
  /// Objective of the certificate, equal to the membership value.
  double value = 0.0;
};

/// Plain cut of a certificate, unnormalized.
CutRow certificate_cut(const DualCertificate& cert, const StandardLp& lp);

/// Integer-coefficient strengthening: for integer structural j != k with
/// m_j = t_j - s_j, alpha_j = min{u A'_j - u0 floor(m_j), v A'_j + v0 ceil(m_j)}.
/// Returns the unnormalized strengthened cut; requires u0, v0 > 0.
CutRow strengthen(const DualCertificate& cert, const StandardLp& lp);

}  // namespace lapclose

#endif
