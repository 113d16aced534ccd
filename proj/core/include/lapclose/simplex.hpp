#ifndef LAPCLOSE_SIMPLEX_HPP
#define LAPCLOSE_SIMPLEX_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "lapclose/instance.hpp"
#include "lapclose/lp_core.hpp"
#include "lapclose/sparse.hpp"

namespace lapclose {

/// opt c^T x  s.t.  A x = rhs,  lower <= x <= upper.
/// Every column needs at least one finite bound.
struct BoundedLp {
  CscMatrix a;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> cost;
  ObjSense sense = ObjSense::Minimize;

  int rows() const { return a.rows(); }
  int cols() const { return a.cols(); }
};

/// Wraps a StandardLp (max c^T x, x >= 0) as a BoundedLp.
BoundedLp to_bounded(const StandardLp& lp);

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };
std::string_view to_string(LpStatus s);

struct SimplexOptions {
  int iteration_limit = 50000;
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  int refactor_interval = 64;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int stall_window = 50;
  std::optional<Basis> warm_start;
};

struct SimplexResult {
  LpStatus status = LpStatus::IterationLimit;
  double objective = 0.0;
  std::vector<double> x;
  /// Row multipliers y with c_B = B^T y, in the LP's own sense.
  std::vector<double> duals;
  /// d_j = c_j - y^T A_j.
  std::vector<double> reduced_costs;
  Basis basis;
  int iterations = 0;
  int phase1_iterations = 0;
  /// Set when some row kept a zero-valued artificial in the final basis
  /// (a redundant equality); `basis.head` then holds indices >= cols().
  bool artificial_in_basis = false;
};

SimplexResult solve(const BoundedLp& lp, const SimplexOptions& opts = {});

}  // namespace lapclose

#endif
