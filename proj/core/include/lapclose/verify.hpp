#ifndef LAPCLOSE_VERIFY_HPP
#define LAPCLOSE_VERIFY_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lapclose/cuts.hpp"
#include "lapclose/instance.hpp"
#include "lapclose/lp_core.hpp"
#include "lapclose/membership.hpp"

namespace lapclose {

/// Integer box for brute-force enumeration of the integer columns.
struct EnumerationDomain {
  std::vector<int> lower;
  std::vector<int> upper;
  long long cap = 1'000'000;

  long long size() const;
  bool within_cap() const { return size() <= cap; }

  /// Ranges from single-variable upper-bound rows, each capped at `per_var_cap`.
  static EnumerationDomain from_instance(const NormalizedMilp& nm, int per_var_cap = 10, long long cap = 1'000'000);
};

enum class CheckStatus { Pass, Fail, Skipped };
std::string_view to_string(CheckStatus s);

struct CheckOutcome {
  CheckStatus status = CheckStatus::Skipped;
  double deviation = 0.0;
  std::string detail;
};

// `fault` is added to the certificate-side rhs or value; nonzero only to exercise
// failure reporting.

/// Certificate cut vs intersection cut of the SLP row of x_k in the same basis.
CheckOutcome check_theorem3(const StandardLp& lp, const FractionalPoint& pt, int k, const Basis& basis,
                            double tol = 1e-7, double fault = 0.0);
/// Certificate strengthening vs GMI cut of the SLP row of x_k in the same basis.
CheckOutcome check_theorem4(const StandardLp& lp, const FractionalPoint& pt, int k, const Basis& basis,
                            double tol = 1e-7, double fault = 0.0);
/// Membership value vs optimum of the explicit cut-generation LP.
CheckOutcome check_duality(const StandardLp& lp, const FractionalPoint& pt, int k, double eps = 1e-4,
                           double fault = 0.0);
/// At a vertex x of the relaxation the membership optimum is y = f_k x with value (f_k - 1) f_k.
CheckOutcome check_vertex_membership(const StandardLp& lp, const FractionalPoint& vertex, int k, double fault = 0.0);

struct Violation {
  int cut = -1;
  std::vector<double> point;
  double amount = 0.0;
};

struct ValidityOutcome {
  CheckStatus status = CheckStatus::Skipped;
  long long points = 0;  // integer assignments with a feasible continuous completion
  std::vector<Violation> violations;
  std::string detail;
};

/// Every mixed-integer feasible point with integer part in `dom` must satisfy every cut within `tol`.
/// Continuous parts are handled exactly by minimizing each cut over the continuous restriction.
ValidityOutcome check_validity(const NormalizedMilp& nm, std::span<const CutRow> cuts, const EnumerationDomain& dom,
                               double tol = 1e-7);

/// Small random MILP: n, m in [2, 6], integer coefficients in [-5, 5], box rows with
/// upper bounds in {1, 2, 3}; resampled until the LP optimum has a fractional integer column.
NormalizedMilp random_instance(std::mt19937_64& rng);

/// The two-variable triangle example: max x2, 2x1 + x2 <= 2, -2x1 + x2 <= 0, x1 integer.
NormalizedMilp t1_instance();

enum class Suite { Theorem3, Theorem4, Duality, Vertex, Validity };
std::optional<Suite> parse_suite(std::string_view s);
std::string_view to_string(Suite s);

enum class Fixture { None, PlantedFault };

struct SuiteReport {
  Suite suite = Suite::Theorem3;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
  long long checks = 0;
  /// theorem4 suite: checks in which strengthening changed the certificate cut.
  long long strengthened = 0;
  double max_deviation = 0.0;
  std::string first_failure;
  double seconds = 0.0;

  bool ok() const { return failed == 0; }
};

/// Seeded suite over `count` cases (instances for theorem and validity suites,
/// (instance, point, k) triples for duality and vertex suites).
SuiteReport run_suite(Suite suite, std::uint64_t seed, int count, Fixture fixture = Fixture::None);

}  // namespace lapclose

#endif
