#ifndef LAPCLOSE_INSTANCE_HPP
#define LAPCLOSE_INSTANCE_HPP

#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lapclose/sparse.hpp"

namespace lapclose {

enum class ObjSense { Minimize, Maximize };
enum class RowSense { LessEqual, Equal, GreaterEqual };

/// Raised on malformed MPS input; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

/// Raised when an instance cannot be put into the x >= 0, A'x >= b template.
class ModelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct MilpRow {
  std::string name;
  RowSense sense = RowSense::GreaterEqual;
  SparseVector coefs;  // over column indices of MilpInstance
  double rhs = 0.0;
  std::optional<double> range;
};

struct MilpColumn {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  bool integer = false;
};

/// A MILP exactly as read from the file.
struct MilpInstance {
  std::string name;
  ObjSense sense = ObjSense::Minimize;
  SparseVector objective;
  double objective_constant = 0.0;
  std::vector<MilpRow> rows;
  std::vector<MilpColumn> columns;
  int duplicate_entries = 0;
  /// True when integer columns without a BOUNDS entry received [0, 1].
  bool binary_default_applied = false;

  int num_rows() const { return static_cast<int>(rows.size()); }
  int num_cols() const { return static_cast<int>(columns.size()); }
  int num_integer() const;

  /// Objective value of a point given in original column order.
  double objective_value(const std::vector<double>& x) const;
};

struct MpsOptions {
  enum class Format { Free, Fixed };
  Format format = Format::Free;
  /// Classic convention: integer-marked columns default to [0, 1].
  bool integer_default_binary = true;
};

MilpInstance parse_mps(std::istream& in, const MpsOptions& opts = {});
MilpInstance read_mps_file(const std::string& path, const MpsOptions& opts = {});

/// Affine map from a normalized variable back to its original column:
/// x_orig = shift + sign * x_norm.
struct BackMapEntry {
  int original_column = 0;
  double shift = 0.0;
  double sign = 1.0;
};

/// max c'x  s.t.  A'x >= b,  x >= 0,  integer columns first.
struct NormalizedMilp {
  std::string name;
  int num_integer = 0;  // p: columns [0, p) are integer
  std::vector<double> objective;
  std::vector<SparseVector> rows;  // A'
  std::vector<double> rhs;         // b
  std::vector<std::string> row_names;
  std::vector<std::string> col_names;
  /// original objective = sense_sign * (c'x) + objective_offset
  double objective_offset = 0.0;
  double sense_sign = 1.0;
  std::vector<BackMapEntry> back_map;  // one per normalized column

  int num_rows() const { return static_cast<int>(rows.size()); }
  int num_cols() const { return static_cast<int>(objective.size()); }
  bool is_integer(int j) const { return j < num_integer; }

  double normalized_objective(const std::vector<double>& x) const;
  double original_objective(double normalized_value) const {
    return sense_sign * normalized_value + objective_offset;
  }
  /// Row activities A'x - b.
  std::vector<double> activities(const std::vector<double>& x) const;
  /// Map a normalized point to original column order.
  std::vector<double> to_original(const std::vector<double>& x, int original_cols) const;
};

struct NormalizeOptions {
  /// Integer columns get lower bounds rounded up and upper bounds rounded down.
  bool round_integer_bounds = true;
  double tolerance = 1e-9;
};

NormalizedMilp normalize(const MilpInstance& inst, const NormalizeOptions& opts = {});

/// Reference optima: `name value` per line, `#` starts a comment.
std::map<std::string, double> read_optima(std::istream& in);
std::map<std::string, double> read_optima_file(const std::string& path);

}  // namespace lapclose

#endif
