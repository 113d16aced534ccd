#include "lapclose/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace lapclose {

int MilpInstance::num_integer() const {
  return static_cast<int>(
      std::count_if(columns.begin(), columns.end(), [](const MilpColumn& c) { return c.integer; }));
}

double MilpInstance::objective_value(const std::vector<double>& x) const {
  return objective.dot(x) + objective_constant;
}

namespace {

enum class Section { None, Name, Rows, Columns, Rhs, Ranges, Bounds, ObjSense, End };

std::vector<std::string> split_free(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Fixed MPS fields: 2-3, 5-12, 15-22, 25-36, 40-47, 50-61 (1-based columns).
std::vector<std::string> split_fixed(const std::string& line) {
  static constexpr int kStart[] = {1, 4, 14, 24, 39, 49};
  static constexpr int kLen[] = {2, 8, 8, 12, 8, 12};
  std::vector<std::string> out;
  for (int f = 0; f < 6; ++f) {
    if (static_cast<int>(line.size()) <= kStart[f]) break;
    out.push_back(trim(line.substr(kStart[f], kLen[f])));
  }
  while (!out.empty() && out.back().empty()) out.pop_back();
  if (!out.empty() && out.front().empty()) out.erase(out.begin());
  return out;
}

double parse_number(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "invalid number '" + s + "'");
  }
}

RowSense row_sense_from(const std::string& t, int line) {
  if (t == "L") return RowSense::LessEqual;
  if (t == "G") return RowSense::GreaterEqual;
  if (t == "E") return RowSense::Equal;
  throw ParseError(line, "unknown row type '" + t + "'");
}

struct MpsReader {
  const MpsOptions& opts;
  MilpInstance inst;
  std::unordered_map<std::string, int> row_index;  // constraint rows
  std::unordered_map<std::string, int> col_index;
  std::string objective_row;
  std::vector<std::string> free_rows;
  std::vector<bool> bound_touched;
  bool in_integer_block = false;
  Section section = Section::None;

  bool is_free_row(const std::string& name) const {
    return std::find(free_rows.begin(), free_rows.end(), name) != free_rows.end();
  }

  void header(const std::vector<std::string>& tok, int line) {
    const std::string& h = tok[0];
    if (h == "NAME") {
      section = Section::Name;
      if (tok.size() > 1) inst.name = tok[1];
    } else if (h == "ROWS") {
      section = Section::Rows;
    } else if (h == "COLUMNS") {
      section = Section::Columns;
    } else if (h == "RHS") {
      section = Section::Rhs;
    } else if (h == "RANGES") {
      section = Section::Ranges;
    } else if (h == "BOUNDS") {
      section = Section::Bounds;
    } else if (h == "OBJSENSE") {
      section = Section::ObjSense;
      if (tok.size() > 1) objsense(tok[1], line);
    } else if (h == "ENDATA") {
      section = Section::End;
    } else {
      throw ParseError(line, "unsupported or malformed section header '" + h + "'");
    }
  }

  void objsense(const std::string& s, int line) {
    if (s == "MAX" || s == "MAXIMIZE")
      inst.sense = ObjSense::Maximize;
    else if (s == "MIN" || s == "MINIMIZE")
      inst.sense = ObjSense::Minimize;
    else
      throw ParseError(line, "invalid OBJSENSE '" + s + "'");
  }

  void rows(const std::vector<std::string>& tok, int line) {
    if (tok.size() < 2) throw ParseError(line, "ROWS entry needs type and name");
    if (tok[0] == "N") {
      if (objective_row.empty())
        objective_row = tok[1];
      else
        free_rows.push_back(tok[1]);
      return;
    }
    MilpRow r;
    r.name = tok[1];
    r.sense = row_sense_from(tok[0], line);
    if (row_index.count(r.name)) throw ParseError(line, "duplicate row '" + r.name + "'");
    row_index.emplace(r.name, inst.num_rows());
    inst.rows.push_back(std::move(r));
  }

  int column(const std::string& name) {
    auto it = col_index.find(name);
    if (it != col_index.end()) return it->second;
    MilpColumn c;
    c.name = name;
    c.integer = in_integer_block;
    int idx = inst.num_cols();
    col_index.emplace(name, idx);
    inst.columns.push_back(std::move(c));
    bound_touched.push_back(false);
    return idx;
  }

  void add_entry(int col, const std::string& row, double v, int line) {
    if (row == objective_row) {
      inst.objective.push(col, v);
      return;
    }
    if (is_free_row(row)) return;
    auto it = row_index.find(row);
    if (it == row_index.end()) throw ParseError(line, "undeclared row '" + row + "'");
    inst.rows[it->second].coefs.push(col, v);
  }

  void columns(const std::vector<std::string>& tok, int line) {
    bool marker = false;
    for (const auto& t : tok)
      if (t.find("MARKER") != std::string::npos && t.find('\'') != std::string::npos) marker = true;
    if (marker) {
      bool org = false, end = false;
      for (const auto& t : tok) {
        if (t.find("INTORG") != std::string::npos) org = true;
        if (t.find("INTEND") != std::string::npos) end = true;
      }
      if (!org && !end) throw ParseError(line, "unknown MARKER");
      in_integer_block = org;
      return;
    }
    if (tok.size() != 3 && tok.size() != 5) throw ParseError(line, "COLUMNS entry has wrong field count");
    int col = column(tok[0]);
    if (in_integer_block) inst.columns[col].integer = true;
    add_entry(col, tok[1], parse_number(tok[2], line), line);
    if (tok.size() == 5) add_entry(col, tok[3], parse_number(tok[4], line), line);
  }

  // RHS and RANGES share the optional set-name layout.
  template <typename F>
  void pairs(const std::vector<std::string>& tok, int line, F&& apply) {
    std::size_t first = (tok.size() % 2 == 1) ? 1 : 0;
    if (tok.size() < 2 || tok.size() > 5) throw ParseError(line, "wrong field count");
    for (std::size_t i = first; i + 1 < tok.size(); i += 2) apply(tok[i], parse_number(tok[i + 1], line));
  }

  void rhs(const std::vector<std::string>& tok, int line) {
    pairs(tok, line, [&](const std::string& row, double v) {
      if (row == objective_row) {
        inst.objective_constant = -v;
        return;
      }
      if (is_free_row(row)) return;
      auto it = row_index.find(row);
      if (it == row_index.end()) throw ParseError(line, "RHS for undeclared row '" + row + "'");
      inst.rows[it->second].rhs = v;
    });
  }

  void ranges(const std::vector<std::string>& tok, int line) {
    pairs(tok, line, [&](const std::string& row, double v) {
      if (row == objective_row || is_free_row(row)) throw ParseError(line, "RANGES on N row '" + row + "'");
      auto it = row_index.find(row);
      if (it == row_index.end()) throw ParseError(line, "RANGES for undeclared row '" + row + "'");
      inst.rows[it->second].range = v;
    });
  }

  void bounds(const std::vector<std::string>& tok, int line) {
    if (tok.empty()) return;
    const std::string& type = tok[0];
    bool needs_value = type == "UP" || type == "LO" || type == "FX" || type == "LI" || type == "UI";
    std::string col_name;
    std::optional<double> value;
    if (needs_value) {
      if (tok.size() == 4) {
        col_name = tok[2];
        value = parse_number(tok[3], line);
      } else if (tok.size() == 3) {
        col_name = tok[1];
        value = parse_number(tok[2], line);
      } else {
        throw ParseError(line, "bound '" + type + "' needs a value");
      }
    } else {
      if (tok.size() == 2)
        col_name = tok[1];
      else if (tok.size() == 3 || (type == "BV" && tok.size() == 4))
        col_name = tok[2];
      else
        throw ParseError(line, "malformed bound '" + type + "'");
    }
    auto it = col_index.find(col_name);
    if (it == col_index.end()) throw ParseError(line, "bound for undeclared column '" + col_name + "'");
    MilpColumn& c = inst.columns[it->second];
    if (!bound_touched[it->second] && c.integer && opts.integer_default_binary) {
      // An explicit BOUNDS entry replaces the binary default entirely.
      c.upper = kInf;
    }
    bound_touched[it->second] = true;
    if (type == "UP" || type == "UI") {
      c.upper = *value;
      if (*value < 0.0 && c.lower == 0.0) c.lower = -kInf;
      if (type == "UI") c.integer = true;
    } else if (type == "LO" || type == "LI") {
      c.lower = *value;
      if (type == "LI") c.integer = true;
    } else if (type == "FX") {
      c.lower = c.upper = *value;
    } else if (type == "FR") {
      c.lower = -kInf;
      c.upper = kInf;
    } else if (type == "MI") {
      c.lower = -kInf;
    } else if (type == "PL") {
      c.upper = kInf;
    } else if (type == "BV") {
      c.lower = 0.0;
      c.upper = 1.0;
      c.integer = true;
    } else {
      throw ParseError(line, "unsupported bound type '" + type + "'");
    }
  }

  void line(const std::string& raw, int line_no) {
    std::string text = raw;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (trim(text).empty() || text[0] == '*') return;
    bool is_header = !std::isspace(static_cast<unsigned char>(text[0]));
    if (is_header) {
      header(split_free(text), line_no);
      return;
    }
    if (section == Section::None || section == Section::End)
      throw ParseError(line_no, "data line outside of any section");
    auto tok = (opts.format == MpsOptions::Format::Fixed && section != Section::ObjSense) ? split_fixed(text)
                                                                                          : split_free(text);
    if (tok.empty()) return;
    switch (section) {
      case Section::Name:
        throw ParseError(line_no, "unexpected data after NAME");
      case Section::Rows:
        rows(tok, line_no);
        break;
      case Section::Columns:
        columns(tok, line_no);
        break;
      case Section::Rhs:
        rhs(tok, line_no);
        break;
      case Section::Ranges:
        ranges(tok, line_no);
        break;
      case Section::Bounds:
        bounds(tok, line_no);
        break;
      case Section::ObjSense:
        objsense(tok[0], line_no);
        break;
      default:
        break;
    }
  }

  void finish() {
    if (objective_row.empty() && inst.rows.empty() && inst.columns.empty())
      throw ParseError(0, "empty MPS input");
    inst.duplicate_entries += inst.objective.canonicalize();
    for (auto& r : inst.rows) inst.duplicate_entries += r.coefs.canonicalize();
    if (opts.integer_default_binary) {
      for (int j = 0; j < inst.num_cols(); ++j) {
        auto& c = inst.columns[j];
        if (c.integer && !bound_touched[j]) {
          c.lower = 0.0;
          c.upper = 1.0;
          inst.binary_default_applied = true;
        }
      }
    }
  }
};

}  // namespace

MilpInstance parse_mps(std::istream& in, const MpsOptions& opts) {
  MpsReader reader{opts, {}, {}, {}, {}, {}, {}};
  std::string text;
  int line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    reader.line(text, line_no);
    if (reader.section == Section::End) break;
  }
  reader.finish();
  return std::move(reader.inst);
}

MilpInstance read_mps_file(const std::string& path, const MpsOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_mps(in, opts);
}

double NormalizedMilp::normalized_objective(const std::vector<double>& x) const {
  double s = 0.0;
  for (int j = 0; j < num_cols(); ++j) s += objective[j] * x[j];
  return s;
}

std::vector<double> NormalizedMilp::activities(const std::vector<double>& x) const {
  std::vector<double> act(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) act[i] = rows[i].dot(x) - rhs[i];
  return act;
}

std::vector<double> NormalizedMilp::to_original(const std::vector<double>& x, int original_cols) const {
  std::vector<double> orig(original_cols, 0.0);
  for (int j = 0; j < num_cols(); ++j) {
    const auto& bm = back_map[j];
    orig[bm.original_column] = bm.shift + bm.sign * x[j];
  }
  return orig;
}

NormalizedMilp normalize(const MilpInstance& inst, const NormalizeOptions& opts) {
  NormalizedMilp nm;
  nm.name = inst.name;
  const int n = inst.num_cols();

  // Integer columns first, stable within each class.
  std::vector<int> order;
  for (int j = 0; j < n; ++j)
    if (inst.columns[j].integer) order.push_back(j);
  nm.num_integer = static_cast<int>(order.size());
  for (int j = 0; j < n; ++j)
    if (!inst.columns[j].integer) order.push_back(j);

  std::vector<int> new_index(n);
  std::vector<double> shift(n), sign(n);
  std::vector<double> width(n, kInf);
  for (int pos = 0; pos < n; ++pos) {
    int j = order[pos];
    new_index[j] = pos;
    const MilpColumn& c = inst.columns[j];
    double lo = c.lower, up = c.upper;
    if (c.integer && opts.round_integer_bounds) {
      if (is_finite_bound(lo)) lo = std::ceil(lo - opts.tolerance);
      if (is_finite_bound(up)) up = std::floor(up + opts.tolerance);
    }
    if (is_finite_bound(lo) && is_finite_bound(up) && lo > up + opts.tolerance)
      throw ModelError("column '" + c.name + "' has empty bound interval");
    if (is_finite_bound(lo)) {
      shift[j] = lo;
      sign[j] = 1.0;
      if (is_finite_bound(up)) width[j] = std::max(0.0, up - lo);
    } else if (is_finite_bound(up)) {
      shift[j] = up;
      sign[j] = -1.0;
    } else {
      throw ModelError("free column '" + c.name + "' is not supported (no variable splitting)");
    }
    nm.col_names.push_back(c.name);
    nm.back_map.push_back({j, shift[j], sign[j]});
  }

  const double sense_sign = inst.sense == ObjSense::Minimize ? -1.0 : 1.0;
  nm.sense_sign = sense_sign;
  nm.objective.assign(n, 0.0);
  nm.objective_offset = inst.objective_constant;
  for (std::size_t e = 0; e < inst.objective.size(); ++e) {
    int j = inst.objective.index[e];
    double cj = inst.objective.value[e];
    nm.objective_offset += cj * shift[j];
    nm.objective[new_index[j]] += sense_sign * cj * sign[j];
  }

  auto emit = [&](const std::string& name, const SparseVector& coefs, double scale, double rhs) {
    SparseVector row;
    for (std::size_t e = 0; e < coefs.size(); ++e) {
      double v = scale * coefs.value[e];
      if (v != 0.0) row.push(coefs.index[e], v);
    }
    row.canonicalize();
    nm.rows.push_back(std::move(row));
    nm.rhs.push_back(scale * rhs);
    nm.row_names.push_back(name);
  };

  for (const MilpRow& r : inst.rows) {
    // a^T x = a^T shift + sum (a_j sign_j) x'_j
    SparseVector mapped;
    double base = 0.0;
    for (std::size_t e = 0; e < r.coefs.size(); ++e) {
      int j = r.coefs.index[e];
      double a = r.coefs.value[e];
      base += a * shift[j];
      mapped.push(new_index[j], a * sign[j]);
    }
    double lo = -kInf, up = kInf;
    switch (r.sense) {
      case RowSense::GreaterEqual:
        lo = r.rhs;
        if (r.range) up = r.rhs + std::abs(*r.range);
        break;
      case RowSense::LessEqual:
        up = r.rhs;
        if (r.range) lo = r.rhs - std::abs(*r.range);
        break;
      case RowSense::Equal:
        lo = up = r.rhs;
        if (r.range) {
          if (*r.range >= 0)
            up = r.rhs + *r.range;
          else
            lo = r.rhs + *r.range;
        }
        break;
    }
    if (is_finite_bound(lo)) emit(r.name, mapped, 1.0, lo - base);
    if (is_finite_bound(up)) emit(is_finite_bound(lo) ? r.name + "#up" : r.name, mapped, -1.0, up - base);
  }

  for (int pos = 0; pos < n; ++pos) {
    int j = order[pos];
    if (!is_finite_bound(width[j])) continue;
    SparseVector row;
    row.push(pos, -1.0);
    nm.rows.push_back(std::move(row));
    nm.rhs.push_back(-width[j]);
    nm.row_names.push_back("ub:" + inst.columns[j].name);
  }
  return nm;
}

std::map<std::string, double> read_optima(std::istream& in) {
  std::map<std::string, double> out;
  std::string text;
  int line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    auto hash = text.find('#');
    if (hash != std::string::npos) text.resize(hash);
    auto tok = split_free(text);
    if (tok.empty()) continue;
    if (tok.size() != 2) throw ParseError(line_no, "expected 'name value'");
    out[tok[0]] = parse_number(tok[1], line_no);
  }
  return out;
}

std::map<std::string, double> read_optima_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_optima(in);
}

}  // namespace lapclose
