#ifndef LAPCLOSE_MEMBERSHIP_HPP
#define LAPCLOSE_MEMBERSHIP_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lapclose/cuts.hpp"
#include "lapclose/lp_core.hpp"
#include "lapclose/simplex.hpp"

namespace lapclose {

/// A point of the current relaxation with its row activities A'x - b over the original rows.
struct FractionalPoint {
  std::vector<double> x;
  std::vector<double> activity;

  static FractionalPoint at(const StandardLp& lp, std::vector<double> x);
  double f(int k) const { return frac(x[k]); }
};

/// Raised when x_k is within eps of an integer, so no split on x_k separates the point.
class NotFractionalError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// max y_k  s.t.  -y_M + A'y_N = b f_k,  0 <= y_M <= A'x - b,  0 <= y_N <= x.
/// Columns coincide with the StandardLp columns (slacks first); the objective
/// constant -ceil(x_k) f_k is kept outside the LP.
struct MembershipProblem {
  int k = -1;
  double xk = 0.0;
  double fk = 0.0;
  int m = 0;
  int n = 0;
  BoundedLp lp;
  double constant = 0.0;

  int target_col() const { return m + k; }
};

/// `lp` must hold the original rows only.
MembershipProblem build_membership_lp(const StandardLp& lp, const FractionalPoint& pt, int k, double eps = 1e-4);

struct MembershipSolve {
  LpStatus status = LpStatus::IterationLimit;
  double value = 0.0;
  SimplexResult result;
};

MembershipSolve membership_value(const MembershipProblem& prob, const std::optional<Basis>& start = std::nullopt,
                                 const SimplexOptions& opts = {});

enum class CertificateStatus {
  Ok,
  /// y_{m+k} nonbasic at its upper bound: no cut from this basis.
  TargetAtUpper,
  /// u0 <= 0 or v0 <= 0: the certified inequality does not cut the point.
  SignRegime,
  /// The basis is not an optimal basis of the membership problem.
  Invalid,
};

struct CertificateOutcome {
  CertificateStatus status = CertificateStatus::Invalid;
  DualCertificate cert;
  /// Reported dual objective (for TargetAtUpper: floor(x_k)(ceil(x_k) - x_k)).
  double value = 0.0;
};

/// Read u, v, s, t from the tableau row of y_{m+k} in `basis` and derive u0, v0.
CertificateOutcome extract_dual_certificate(const MembershipProblem& prob, const StandardLp& lp,
                                            const Basis& basis);

/// alpha = u^T A' + s - u0 e_k, beta = u^T b - u0 floor(x_k), normalized, with
/// provenance filled in. Returns nullopt when the certificate does not cut `pt`.
std::optional<CutRow> assemble_cut(const DualCertificate& cert, const StandardLp& lp, const FractionalPoint& pt);

/// Explicit cut-generation LP for the split pi^T x <= pi0 or pi^T x >= pi0 + 1,
/// minimizing alpha^T x - beta under u0 + v0 = 1. Free variables are split.
struct CglpProblem {
  BoundedLp lp;
  int n = 0;
  int m = 0;
  // Column offsets.
  int alpha_pos = 0, alpha_neg = 0, beta_pos = 0, beta_neg = 0;
  int u = 0, v = 0, s = 0, t = 0;
  int u0_pos = 0, u0_neg = 0, v0_pos = 0, v0_neg = 0;
};

CglpProblem build_cglp(const StandardLp& lp, const FractionalPoint& pt, std::span<const int> pi, int pi0,
                       double eps = 1e-4);

enum class SeparationStatus { Cut, NoCut, Inconclusive };
std::string_view to_string(SeparationStatus s);

struct SeparateOptions {
  double eps = 1e-4;
  std::optional<Basis> warm;
  SimplexOptions simplex;
};

struct SeparationResult {
  SeparationStatus status = SeparationStatus::Inconclusive;
  double value = 0.0;
  /// Certificate cut (normalized).
  CutRow plain;
  /// GMI cut of the SLP row of x_k in the terminal basis (normalized).
  CutRow strengthened;
  /// Strengthening computed from the certificate (normalized); equals `strengthened`.
  CutRow strengthened_certificate;
  std::optional<DualCertificate> cert;
  Basis basis;
  int pivots = 0;
  std::string reason;
};

SeparationResult separate(const StandardLp& lp, const FractionalPoint& pt, int k, const SeparateOptions& opts = {});

}  // namespace lapclose

#endif
