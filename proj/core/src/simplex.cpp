#include "lapclose/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lapclose {

BoundedLp to_bounded(const StandardLp& lp) {
  BoundedLp out;
  out.a = lp.a;
  out.rhs = lp.b;
  out.lower.assign(lp.num_cols(), 0.0);
  out.upper.assign(lp.num_cols(), kInf);
  out.cost = lp.c;
  out.sense = ObjSense::Maximize;
  return out;
}

std::string_view to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "?";
}

namespace {

constexpr double kPivotTol = 1e-9;

class Solver {
public:
  Solver(const BoundedLp& lp, const SimplexOptions& opts) : lp_(lp), opts_(opts) {
    m_ = lp.rows();
    n_ = lp.cols();
    a_ = &lp.a;
    lower_ = lp.lower;
    upper_ = lp.upper;
    const double sign = lp.sense == ObjSense::Maximize ? -1.0 : 1.0;
    cost_.resize(n_);
    for (int j = 0; j < n_; ++j) {
      if (!is_finite_bound(lower_[j]) && !is_finite_bound(upper_[j]))
        throw std::invalid_argument("simplex: free columns are not supported");
      if (lower_[j] > upper_[j]) infeasible_bounds_ = true;
      cost_[j] = sign * lp.cost[j];
    }
  }

  SimplexResult run() {
    SimplexResult res;
    if (infeasible_bounds_) {
      res.status = LpStatus::Infeasible;
      return res;
    }
    init_basis();
    LpStatus st = LpStatus::IterationLimit;
    for (int attempt = 0; attempt < 4; ++attempt) {
      if (!primal_feasible() && dual_feasible()) {
        st = dual();
        if (st == LpStatus::Infeasible || st == LpStatus::IterationLimit) break;
      }
      st = primal();
      if (st != LpStatus::Optimal) break;
      // Confirm from a fresh factorization before declaring optimality.
      refactor();
      if (primal_feasible() && dual_feasible()) break;
    }
    res.status = st;
    res.iterations = iterations_;
    res.phase1_iterations = phase1_iterations_;
    finish(res);
    return res;
  }

private:
  int total_cols() const { return static_cast<int>(lower_.size()); }
  bool is_fixed(int j) const { return upper_[j] - lower_[j] <= 0.0; }
  double nonbasic_value(int j) const {
    if (status_[j] == VarStatus::AtUpper) return upper_[j];
    return is_finite_bound(lower_[j]) ? lower_[j] : upper_[j];
  }

  int add_artificial(int row) {
    if (!aug_) {
      aug_ = *a_;
      a_ = &*aug_;
    }
    SparseVector col;
    col.push(row, 1.0);
    aug_->append_column(col);
    lower_.push_back(0.0);
    upper_.push_back(0.0);
    cost_.push_back(0.0);
    status_.push_back(VarStatus::Basic);
    x_.push_back(0.0);
    return total_cols() - 1;
  }

  void init_basis() {
    bool ok = false;
    if (opts_.warm_start && static_cast<int>(opts_.warm_start->head.size()) == m_ &&
        static_cast<int>(opts_.warm_start->status.size()) == n_) {
      const Basis& ws = *opts_.warm_start;
      head_ = ws.head;
      status_ = ws.status;
      bool valid = true;
      std::vector<int> seen(n_, 0);
      for (int v : head_) {
        if (v < 0 || v >= n_ || seen[v]++ || status_[v] != VarStatus::Basic) valid = false;
      }
      int basic_count = 0;
      for (int j = 0; j < n_; ++j) basic_count += status_[j] == VarStatus::Basic;
      if (valid && basic_count == m_) {
        try {
          factor_ = BasisFactor(*a_, head_);
          ok = true;
        } catch (const SingularBasisError&) {
          ok = false;
        }
      }
    }
    if (!ok) crash_basis();
    x_.assign(total_cols(), 0.0);
    for (int j = 0; j < total_cols(); ++j) {
      if (status_[j] == VarStatus::AtUpper && !is_finite_bound(upper_[j])) status_[j] = VarStatus::AtLower;
      if (status_[j] == VarStatus::AtLower && !is_finite_bound(lower_[j])) status_[j] = VarStatus::AtUpper;
    }
    compute_primal();
  }

  void crash_basis() {
    head_.assign(m_, -1);
    status_.assign(n_, VarStatus::AtLower);
    for (int j = 0; j < n_; ++j)
      if (!is_finite_bound(lower_[j])) status_[j] = VarStatus::AtUpper;
    // Prefer non-fixed singleton columns, then any singleton column.
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < n_; ++j) {
        if (a_->col_nnz(j) != 1 || status_[j] == VarStatus::Basic) continue;
        if (pass == 0 && is_fixed(j)) continue;
        int r = a_->col_index(j)[0];
        if (head_[r] >= 0 || std::abs(a_->col_value(j)[0]) < 1e-7) continue;
        head_[r] = j;
        status_[j] = VarStatus::Basic;
      }
    x_.assign(n_, 0.0);
    for (int r = 0; r < m_; ++r)
      if (head_[r] < 0) head_[r] = add_artificial(r);
    factor_ = BasisFactor(*a_, head_);
  }

  void refactor() {
    for (int guard = 0; guard <= m_; ++guard) {
      try {
        factor_ = BasisFactor(*a_, head_);
        break;
      } catch (const SingularBasisError& e) {
        int pos = e.position();
        int old = head_[pos];
        status_[old] = (is_finite_bound(lower_[old]) &&
                        (!is_finite_bound(upper_[old]) ||
                         std::abs(x_[old] - lower_[old]) <= std::abs(x_[old] - upper_[old])))
                           ? VarStatus::AtLower
                           : VarStatus::AtUpper;
        head_[pos] = add_artificial(e.uncovered_rows().front());
      }
    }
    compute_primal();
  }

  void compute_primal() {
    std::vector<double> r(lp_.rhs.begin(), lp_.rhs.end());
    for (int j = 0; j < total_cols(); ++j) {
      if (status_[j] == VarStatus::Basic) continue;
      x_[j] = nonbasic_value(j);
      if (x_[j] == 0.0) continue;
      auto idx = a_->col_index(j);
      auto val = a_->col_value(j);
      for (std::size_t e = 0; e < idx.size(); ++e) r[idx[e]] -= val[e] * x_[j];
    }
    std::vector<double> xb = factor_.ftran(r);
    for (int p = 0; p < m_; ++p) x_[head_[p]] = xb[p];
  }

  double infeasibility(int j) const {
    if (x_[j] < lower_[j] - opts_.primal_tol) return lower_[j] - x_[j];
    if (x_[j] > upper_[j] + opts_.primal_tol) return x_[j] - upper_[j];
    return 0.0;
  }

  bool primal_feasible() const {
    for (int v : head_)
      if (infeasibility(v) > 0.0) return false;
    return true;
  }

  std::vector<double> duals_for(const std::vector<double>& basic_cost) const {
    return factor_.btran(basic_cost);
  }

  std::vector<double> phase2_duals() const {
    std::vector<double> g(m_);
    for (int p = 0; p < m_; ++p) g[p] = cost_[head_[p]];
    return duals_for(g);
  }

  double reduced_cost(int j, const std::vector<double>& y, bool phase1) const {
    return (phase1 ? 0.0 : cost_[j]) - a_->col_dot(j, y);
  }

  bool dual_feasible() const {
    std::vector<double> y = phase2_duals();
    for (int j = 0; j < total_cols(); ++j) {
      if (status_[j] == VarStatus::Basic || is_fixed(j)) continue;
      double d = reduced_cost(j, y, false);
      if (status_[j] == VarStatus::AtLower && d < -opts_.dual_tol) return false;
      if (status_[j] == VarStatus::AtUpper && d > opts_.dual_tol) return false;
    }
    return true;
  }

  std::vector<double> column(int j) const {
    std::vector<double> col(m_, 0.0);
    auto idx = a_->col_index(j);
    auto val = a_->col_value(j);
    for (std::size_t e = 0; e < idx.size(); ++e) col[idx[e]] += val[e];
    return factor_.ftran(col);
  }

  void pivot(int pos, int entering, const std::vector<double>& alpha, VarStatus leaving_status) {
    int leaving = head_[pos];
    status_[leaving] = leaving_status;
    x_[leaving] = leaving_status == VarStatus::AtUpper ? upper_[leaving] : lower_[leaving];
    head_[pos] = entering;
    status_[entering] = VarStatus::Basic;
    factor_.update(pos, alpha);
    if (factor_.num_updates() >= opts_.refactor_interval) refactor();
  }

  bool drive_out_artificials() {
    bool changed = false;
    for (int pos = 0; pos < m_; ++pos) {
      int v = head_[pos];
      if (v < n_) continue;
      std::vector<double> e(m_, 0.0);
      e[pos] = 1.0;
      std::vector<double> rho = factor_.btran(e);
      int best = -1;
      double best_abs = 1e-7;
      for (int j = 0; j < n_; ++j) {
        if (status_[j] == VarStatus::Basic) continue;
        double aj = std::abs(a_->col_dot(j, rho));
        if (aj > best_abs) {
          best_abs = aj;
          best = j;
        }
      }
      if (best < 0) continue;
      std::vector<double> alpha = column(best);
      double t = (x_[v] - 0.0) / alpha[pos];
      for (int p = 0; p < m_; ++p) x_[head_[p]] -= alpha[p] * t;
      x_[best] += t;
      pivot(pos, best, alpha, VarStatus::AtLower);
      changed = true;
    }
    if (changed) refactor();
    return changed;
  }

  LpStatus primal() {
    int degenerate = 0;
    bool was_phase1 = false;
    for (;;) {
      if (iterations_ >= opts_.iteration_limit) return LpStatus::IterationLimit;
      std::vector<double> g(m_, 0.0);
      bool phase1 = false;
      for (int p = 0; p < m_; ++p) {
        int v = head_[p];
        if (x_[v] < lower_[v] - opts_.primal_tol) {
          g[p] = -1.0;
          phase1 = true;
        } else if (x_[v] > upper_[v] + opts_.primal_tol) {
          g[p] = 1.0;
          phase1 = true;
        }
      }
      if (was_phase1 && !phase1) {
        if (drive_out_artificials()) continue;
      }
      was_phase1 = phase1;
      if (!phase1)
        for (int p = 0; p < m_; ++p) g[p] = cost_[head_[p]];
      std::vector<double> y = duals_for(g);

      const bool bland = degenerate >= opts_.stall_window;
      int q = -1;
      double best = 0.0;
      for (int j = 0; j < total_cols(); ++j) {
        if (status_[j] == VarStatus::Basic || is_fixed(j)) continue;
        double d = reduced_cost(j, y, phase1);
        double gain = 0.0;
        if (status_[j] == VarStatus::AtLower && d < -opts_.dual_tol) gain = -d;
        if (status_[j] == VarStatus::AtUpper && d > opts_.dual_tol) gain = d;
        if (gain <= 0.0) continue;
        if (bland) {
          q = j;
          break;
        }
        if (gain > best) {
          best = gain;
          q = j;
        }
      }
      if (q < 0) return phase1 ? LpStatus::Infeasible : LpStatus::Optimal;

      const double dir = status_[q] == VarStatus::AtLower ? 1.0 : -1.0;
      std::vector<double> alpha = column(q);

      // Step to the blocking bound of basic position p: `relaxed` widens feasible
      // bounds by the primal tolerance (Harris pass 1).
      auto ratio_of = [&](int p, bool relaxed, VarStatus& to) {
        int v = head_[p];
        double rate = -dir * alpha[p];
        double tol = relaxed ? opts_.primal_tol : 0.0;
        to = VarStatus::AtLower;
        if (x_[v] < lower_[v] - opts_.primal_tol) return rate > 0 ? (lower_[v] - x_[v]) / rate : kInf;
        if (x_[v] > upper_[v] + opts_.primal_tol) {
          to = VarStatus::AtUpper;
          return rate < 0 ? (x_[v] - upper_[v]) / -rate : kInf;
        }
        if (rate < 0 && is_finite_bound(lower_[v])) return (x_[v] - lower_[v] + tol) / -rate;
        if (rate > 0 && is_finite_bound(upper_[v])) {
          to = VarStatus::AtUpper;
          return (upper_[v] + tol - x_[v]) / rate;
        }
        return kInf;
      };

      double theta_max = kInf;
      VarStatus to = VarStatus::AtLower;
      for (int p = 0; p < m_; ++p)
        if (std::abs(alpha[p]) > kPivotTol) theta_max = std::min(theta_max, ratio_of(p, true, to));
      const double range = upper_[q] - lower_[q];
      if (!is_finite_bound(theta_max) && !is_finite_bound(range)) {
        if (phase1) {
          // Cannot happen in exact arithmetic; rebuild and retry.
          refactor();
          ++iterations_;
          continue;
        }
        return LpStatus::Unbounded;
      }

      int r = -1;
      double t = 0.0;
      VarStatus leave_to = VarStatus::AtLower;
      if (!bland) {
        // Pass 2: among rows within the relaxed bound, take the largest pivot.
        double best_pivot = 0.0;
        for (int p = 0; p < m_; ++p) {
          if (std::abs(alpha[p]) <= kPivotTol) continue;
          double ratio = ratio_of(p, false, to);
          if (ratio > theta_max || std::abs(alpha[p]) <= best_pivot) continue;
          r = p;
          t = std::max(ratio, 0.0);
          leave_to = to;
          best_pivot = std::abs(alpha[p]);
        }
      } else {
        // Smallest ratio, smallest variable index on ties.
        double min_ratio = kInf;
        for (int p = 0; p < m_; ++p) {
          if (std::abs(alpha[p]) <= kPivotTol) continue;
          double ratio = ratio_of(p, false, to);
          if (!is_finite_bound(ratio)) continue;
          ratio = std::max(ratio, 0.0);
          bool smaller = r < 0 || ratio < min_ratio - 1e-12;
          if (smaller || (ratio <= min_ratio + 1e-12 && head_[p] < head_[r])) {
            if (smaller) min_ratio = ratio;
            r = p;
            t = ratio;
            leave_to = to;
          }
        }
      }

      ++iterations_;
      if (phase1) ++phase1_iterations_;
      if (is_finite_bound(range) && (r < 0 || range <= t)) {
        // Bound flip of the entering column.
        for (int p = 0; p < m_; ++p) x_[head_[p]] -= dir * range * alpha[p];
        status_[q] = status_[q] == VarStatus::AtLower ? VarStatus::AtUpper : VarStatus::AtLower;
        x_[q] = nonbasic_value(q);
        degenerate = 0;
        continue;
      }
      for (int p = 0; p < m_; ++p) x_[head_[p]] -= dir * t * alpha[p];
      x_[q] += dir * t;
      degenerate = t <= 1e-12 ? degenerate + 1 : 0;
      pivot(r, q, alpha, leave_to);
    }
  }

  LpStatus dual() {
    int degenerate = 0;
    for (;;) {
      if (iterations_ >= opts_.iteration_limit) return LpStatus::IterationLimit;
      int r = -1;
      double worst = 0.0;
      for (int p = 0; p < m_; ++p) {
        double inf = infeasibility(head_[p]);
        if (inf > worst) {
          worst = inf;
          r = p;
        }
      }
      if (r < 0) return LpStatus::Optimal;
      const int leaving = head_[r];
      const bool to_lower = x_[leaving] < lower_[leaving];
      const double target = to_lower ? lower_[leaving] : upper_[leaving];

      std::vector<double> e(m_, 0.0);
      e[r] = 1.0;
      std::vector<double> rho = factor_.btran(e);
      std::vector<double> y = phase2_duals();

      // Harris two-pass dual ratio test.
      std::vector<int> cand;
      std::vector<double> row_alpha;
      std::vector<double> dj;
      double theta_max = kInf;
      for (int j = 0; j < total_cols(); ++j) {
        if (status_[j] == VarStatus::Basic || is_fixed(j)) continue;
        double arj = a_->col_dot(j, rho);
        if (std::abs(arj) <= kPivotTol) continue;
        bool eligible = to_lower ? ((status_[j] == VarStatus::AtLower && arj < 0) ||
                                    (status_[j] == VarStatus::AtUpper && arj > 0))
                                 : ((status_[j] == VarStatus::AtLower && arj > 0) ||
                                    (status_[j] == VarStatus::AtUpper && arj < 0));
        if (!eligible) continue;
        double d = reduced_cost(j, y, false);
        cand.push_back(j);
        row_alpha.push_back(arj);
        dj.push_back(d);
        theta_max = std::min(theta_max, (std::abs(d) + opts_.dual_tol) / std::abs(arj));
      }
      if (cand.empty()) return LpStatus::Infeasible;
      const bool bland = degenerate >= opts_.stall_window;
      int pick = -1;
      double best = 0.0;
      for (std::size_t c = 0; c < cand.size(); ++c) {
        double ratio = std::abs(dj[c]) / std::abs(row_alpha[c]);
        if (ratio > theta_max) continue;
        if (bland) {
          if (pick < 0 || ratio < std::abs(dj[pick]) / std::abs(row_alpha[pick]) - 1e-12) pick = static_cast<int>(c);
          continue;
        }
        if (std::abs(row_alpha[c]) > best) {
          best = std::abs(row_alpha[c]);
          pick = static_cast<int>(c);
        }
      }
      const int q = cand[pick];
      std::vector<double> alpha = column(q);
      if (std::abs(alpha[r]) <= kPivotTol) {
        refactor();
        ++iterations_;
        continue;
      }
      double step = (x_[leaving] - target) / alpha[r];
      for (int p = 0; p < m_; ++p) x_[head_[p]] -= alpha[p] * step;
      x_[q] += step;
      ++iterations_;
      double dual_step = std::abs(dj[pick]) / std::abs(row_alpha[pick]);
      degenerate = dual_step <= 1e-12 ? degenerate + 1 : 0;
      pivot(r, q, alpha, to_lower ? VarStatus::AtLower : VarStatus::AtUpper);
    }
  }

  void finish(SimplexResult& res) {
    std::vector<double> y = phase2_duals();
    const double sign = lp_.sense == ObjSense::Maximize ? -1.0 : 1.0;
    res.x.assign(x_.begin(), x_.begin() + n_);
    res.duals.resize(m_);
    for (int i = 0; i < m_; ++i) res.duals[i] = sign * y[i];
    res.reduced_costs.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      if (status_[j] == VarStatus::Basic) continue;
      double d = reduced_cost(j, y, false);
      res.reduced_costs[j] = sign * d;
      // A fixed column may sit at either bound; pick the side its reduced cost supports.
      if (is_fixed(j)) status_[j] = d < 0.0 ? VarStatus::AtUpper : VarStatus::AtLower;
    }
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) obj += lp_.cost[j] * res.x[j];
    res.objective = obj;
    res.basis.head = head_;
    res.basis.status.assign(status_.begin(), status_.begin() + n_);
    res.artificial_in_basis = std::any_of(head_.begin(), head_.end(), [&](int v) { return v >= n_; });
  }

  const BoundedLp& lp_;
  const SimplexOptions& opts_;
  int m_ = 0;
  int n_ = 0;
  const CscMatrix* a_ = nullptr;
  std::optional<CscMatrix> aug_;
  std::vector<double> lower_, upper_, cost_, x_;
  std::vector<int> head_;
  std::vector<VarStatus> status_;
  BasisFactor factor_;
  int iterations_ = 0;
  int phase1_iterations_ = 0;
  bool infeasible_bounds_ = false;
};

}  // namespace

SimplexResult solve(const BoundedLp& lp, const SimplexOptions& opts) {
  Solver solver(lp, opts);
  return solver.run();
}

}  // namespace lapclose
