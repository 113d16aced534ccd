#ifndef LAPCLOSE_LP_CORE_HPP
#define LAPCLOSE_LP_CORE_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "lapclose/instance.hpp"
#include "lapclose/sparse.hpp"

namespace lapclose {

struct CutRow;

/// Pivot magnitudes below this make a basis singular.
inline constexpr double kSingularPivot = 1e-10;

class SingularBasisError : public std::runtime_error {
public:
  SingularBasisError(int position, std::vector<int> uncovered_rows)
      : std::runtime_error("singular basis matrix"), position_(position), uncovered_(std::move(uncovered_rows)) {}
  /// Basis position whose column had no acceptable pivot.
  int position() const { return position_; }
  /// Rows that were still unpivoted when factorization stopped.
  const std::vector<int>& uncovered_rows() const { return uncovered_; }

private:
  int position_;
  std::vector<int> uncovered_;
};

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper };

/// An ordered basis: `head[r]` is the variable basic in row position r.
/// `status` covers every column; nonbasic columns are AtLower (J-) or AtUpper (J+).
struct Basis {
  std::vector<int> head;
  std::vector<VarStatus> status;

  int position_of(int var) const;
  bool is_basic(int var) const { return status[var] == VarStatus::Basic; }
  /// Order-independent hash of the basic index set.
  std::uint64_t fingerprint() const;
  bool operator==(const Basis&) const = default;
};

/// The slack-augmented system  -s + A'x = b  with slacks occupying columns [0, m)
/// and structurals columns [m, m+n).
struct StandardLp {
  int m = 0;
  int n = 0;
  int p = 0;
  int original_rows = 0;
  std::vector<SparseVector> structural_rows;  // A' including appended cut rows
  CscMatrix a;                                // (-I | A')
  std::vector<double> b;
  std::vector<double> c;  // zeros on slack columns

  int num_cols() const { return m + n; }
  int slack_col(int row) const { return row; }
  int structural_col(int j) const { return m + j; }
  bool is_slack(int col) const { return col < m; }
  bool is_integer_col(int col) const { return col >= m && col < m + p; }
};

StandardLp to_standard(const NormalizedMilp& nm, std::span<const CutRow> extra_cuts = {});

/// All-slack basis: every slack basic, structurals nonbasic at lower.
Basis slack_basis(int rows, int cols);

/// Dense LU of the non-singleton kernel of a basis matrix, with product-form updates.
///
/// Basic columns with a single nonzero (slack-like columns) are pivoted on their row
/// directly; the remaining q x q kernel is factorized densely with partial pivoting.
class BasisFactor {
public:
  BasisFactor() = default;
  /// Throws SingularBasisError when a kernel pivot falls below kSingularPivot.
  BasisFactor(const CscMatrix& a, std::span<const int> head);

  int rows() const { return m_; }
  int kernel_size() const { return static_cast<int>(kernel_pos_.size()); }
  int num_updates() const { return static_cast<int>(etas_.size()); }

  /// Solve B x = r; `r` is indexed by row, the result by basis position.
  std::vector<double> ftran(std::span<const double> r) const;
  /// Solve B^T y = g; `g` is indexed by basis position, the result by row.
  std::vector<double> btran(std::span<const double> g) const;
  /// Record the replacement of position `pos` by a column whose ftran is `alpha`.
  void update(int pos, std::span<const double> alpha);

private:
  struct Eta {
    int pos;
    double pivot;
    std::vector<int> index;
    std::vector<double> value;
  };

  void kernel_solve(std::vector<double>& z) const;
  void kernel_solve_transposed(std::vector<double>& z) const;

  const CscMatrix* a_ = nullptr;
  int m_ = 0;
  std::vector<int> head_;
  std::vector<int> singleton_row_;     // per position: row for singleton positions, -1 otherwise
  std::vector<double> singleton_val_;  // per position
  std::vector<int> kernel_pos_;        // kernel column -> basis position
  std::vector<int> kernel_row_;        // kernel row -> matrix row
  std::vector<char> in_kernel_row_;    // per matrix row
  std::vector<double> lu_;             // q x q row-major, L below diagonal (unit), U on/above
  std::vector<int> perm_;              // perm_[i] = original kernel row at factor row i
  std::vector<Eta> etas_;
};

/// Row of the simplex tableau  x_i + sum_{j nonbasic} abar_j x_j = rhs.
struct TableauRow {
  int basic_var = -1;
  int position = -1;
  std::vector<double> coef;  // indexed by column; zero on basic columns
  double rhs = 0.0;
};

TableauRow tableau_row(const CscMatrix& a, std::span<const double> rhs, const Basis& basis, int basic_var);
TableauRow tableau_row(const StandardLp& lp, const Basis& basis, int basic_var);

/// Basic solution with every nonbasic at its recorded bound (lower bound 0 in SLP).
std::vector<double> basic_point(const StandardLp& lp, const Basis& basis);

}  // namespace lapclose

#endif
