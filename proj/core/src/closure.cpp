#include "lapclose/closure.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "lapclose/membership.hpp"
#include "lapclose/simplex.hpp"

namespace lapclose {

std::string_view to_string(ClosureMode m) {
  switch (m) {
    case ClosureMode::Pe: return "pe";
    case ClosureMode::PeStar: return "pestar";
    case ClosureMode::GmiRounds: return "gmi-rounds";
  }
  return "?";
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Proved: return "Proved";
    case Termination::RoundsDone: return "RoundsDone";
    case Termination::TimeLimit: return "TimeLimit";
    case Termination::Stalled: return "Stalled";
  }
  return "?";
}

std::optional<ClosureMode> parse_mode(std::string_view s) {
  if (s == "pe") return ClosureMode::Pe;
  if (s == "pestar") return ClosureMode::PeStar;
  if (s == "gmi-rounds") return ClosureMode::GmiRounds;
  return std::nullopt;
}

double gap_closed(double z_lp, double z_cut, double z_opt) {
  const double scale = 1.0 + std::max({std::abs(z_lp), std::abs(z_opt)});
  if (std::abs(z_opt - z_lp) <= 1e-9 * scale) {
    if (std::abs(z_cut - z_lp) <= 1e-9 * scale) return 100.0;
    throw std::domain_error("gap_closed: relaxation already optimal but cut bound differs");
  }
  double g = 100.0 * (z_lp - z_cut) / (z_lp - z_opt);
  return std::clamp(g, 0.0, 100.0);
}

bool CutPool::add(CutRow cut) {
  for (Entry& e : entries_) {
    if (!same_cut(e.cut, cut)) continue;
    if (e.active) return false;
    e.active = true;
    e.slack_streak = 0;
    return true;
  }
  entries_.push_back(Entry{std::move(cut), true, 0});
  return true;
}

int CutPool::park_inactive(std::span<const double> x, double slack_threshold, int park_after) {
  int parked = 0;
  for (Entry& e : entries_) {
    if (!e.active) continue;
    double slack = e.cut.coefs.dot(x) - e.cut.rhs;
    e.slack_streak = slack > slack_threshold ? e.slack_streak + 1 : 0;
    if (e.slack_streak >= park_after) {
      e.active = false;
      ++parked;
    }
  }
  return parked;
}

int CutPool::reactivate_violated(std::span<const double> x, double eps) {
  int count = 0;
  for (Entry& e : entries_) {
    if (e.active || e.cut.violation_at(x) <= eps) continue;
    e.active = true;
    e.slack_streak = 0;
    ++count;
  }
  return count;
}

std::vector<int> CutPool::active_ids() const {
  std::vector<int> ids;
  for (int i = 0; i < static_cast<int>(entries_.size()); ++i)
    if (entries_[i].active) ids.push_back(i);
  return ids;
}

std::vector<CutRow> CutPool::active_cuts() const {
  std::vector<CutRow> out;
  for (const Entry& e : entries_)
    if (e.active) out.push_back(e.cut);
  return out;
}

int CutPool::num_active() const {
  return static_cast<int>(std::count_if(entries_.begin(), entries_.end(), [](const Entry& e) { return e.active; }));
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Carry a master basis across row changes. Rows are identified by `ids`
/// (cut pool indices for cut rows); new rows enter with their slack basic.
std::optional<Basis> map_basis(const Basis& old, int orig_rows, int n, const std::vector<int>& old_ids,
                               const std::vector<int>& new_ids) {
  const int m_old = orig_rows + static_cast<int>(old_ids.size());
  const int m_new = orig_rows + static_cast<int>(new_ids.size());
  if (static_cast<int>(old.status.size()) != m_old + n) return std::nullopt;
  std::unordered_map<int, int> row_of;
  for (int i = 0; i < static_cast<int>(new_ids.size()); ++i) row_of[new_ids[i]] = orig_rows + i;
  std::vector<int> old_to_new(m_old + n, -1);
  for (int i = 0; i < orig_rows; ++i) old_to_new[i] = i;
  for (int i = 0; i < static_cast<int>(old_ids.size()); ++i) {
    auto it = row_of.find(old_ids[i]);
    if (it != row_of.end()) old_to_new[orig_rows + i] = it->second;
  }
  for (int j = 0; j < n; ++j) old_to_new[m_old + j] = m_new + j;

  Basis b;
  b.status.assign(m_new + n, VarStatus::AtLower);
  std::vector<char> carried(m_new, 0);
  for (int j = 0; j < m_old + n; ++j) {
    int nj = old_to_new[j];
    if (nj < 0) continue;
    b.status[nj] = old.status[j];
    if (nj < m_new) carried[nj] = 1;
  }
  for (int v : old.head) {
    int nv = old_to_new[v];
    if (nv >= 0) b.head.push_back(nv);
  }
  for (int r = 0; r < m_new; ++r)
    if (!carried[r]) {
      b.status[r] = VarStatus::Basic;
      b.head.push_back(r);
    }
  if (static_cast<int>(b.head.size()) != m_new) return std::nullopt;
  return b;
}

struct MasterSolve {
  StandardLp lp;
  SimplexResult result;
  std::vector<double> x;  // structurals
  double z = 0.0;         // normalized objective
};

class Master {
public:
  explicit Master(const NormalizedMilp& nm) : nm_(nm) {}

  MasterSolve solve(const std::vector<CutRow>& cuts, const std::vector<int>& ids) {
    MasterSolve ms;
    ms.lp = to_standard(nm_, cuts);
    SimplexOptions opts;
    if (prev_basis_) opts.warm_start = map_basis(*prev_basis_, nm_.num_rows(), nm_.num_cols(), prev_ids_, ids);
    ms.result = lapclose::solve(to_bounded(ms.lp), opts);
    if (ms.result.status == LpStatus::Optimal && !ms.result.artificial_in_basis) {
      prev_basis_ = ms.result.basis;
      prev_ids_ = ids;
    } else {
      prev_basis_.reset();
    }
    ms.x.assign(ms.result.x.begin() + ms.lp.m, ms.result.x.end());
    ms.z = ms.result.objective;
    return ms;
  }

private:
  const NormalizedMilp& nm_;
  std::optional<Basis> prev_basis_;
  std::vector<int> prev_ids_;
};

[[noreturn]] void relaxation_error(const SimplexResult& r) {
  throw ModelError("LP relaxation is " + std::string(to_string(r.status)));
}

std::vector<SeparationResult> separate_all(const StandardLp& orig, const FractionalPoint& pt, const std::vector<int>& ks,
                                           double eps, int threads) {
  std::vector<SeparationResult> out(ks.size());
  auto run_one = [&](std::size_t i, const std::optional<Basis>& warm) {
    SeparateOptions o;
    o.eps = eps;
    o.warm = warm;
    out[i] = separate(orig, pt, ks[i], o);
  };
  if (threads <= 1 || ks.size() < 2) {
    std::optional<Basis> warm;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      run_one(i, warm);
      // Every terminal basis of this pass is feasible for the next problem: same rows and bounds.
      if (out[i].status != SeparationStatus::Inconclusive && !out[i].basis.head.empty()) warm = out[i].basis;
    }
    return out;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ks.size(); i = next++) run_one(i, std::nullopt);
  };
  std::vector<std::thread> pool;
  int count = std::min<int>(threads, static_cast<int>(ks.size()));
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

bool acceptable(const CutRow& cut) {
  return !cut.coefs.empty() && dynamism(cut) <= kMaxDynamism && cut.prov.violation > 1e-9;
}

}  // namespace

ClosureReport optimize_closure(const NormalizedMilp& nm, const ClosureConfig& cfg) {
  if (!(cfg.eps > 0.0)) throw std::invalid_argument("closure: eps must be positive");
  if (cfg.tail_window < 2) throw std::invalid_argument("closure: tailing-off window must be at least 2");
  const auto t0 = Clock::now();
  ClosureReport rep;
  rep.instance = nm.name;
  rep.mode = cfg.mode;
  const StandardLp orig = to_standard(nm);
  const int p = nm.num_integer;
  double bmax = 0.0;
  for (double b : nm.rhs) bmax = std::max(bmax, std::abs(b));
  const double park_threshold = cfg.park_slack * (1.0 + bmax);

  CutPool pool;
  Master master(nm);
  std::vector<int> all_k(p);
  std::iota(all_k.begin(), all_k.end(), 0);
  std::vector<int> K = all_k;
  bool reinit = true;
  std::vector<double> z_hist;  // normalized objective per iteration since last reset
  int tail_count = 0;
  bool first = true;

  for (int iter = 1;; ++iter) {
    if (seconds_since(t0) > cfg.time_limit) {
      rep.termination = Termination::TimeLimit;
      break;
    }
    // Master solve; reactivated pool cuts force a re-solve before separating.
    MasterSolve ms;
    for (;;) {
      auto tm = Clock::now();
      ms = master.solve(pool.active_cuts(), pool.active_ids());
      rep.stats.master_seconds += seconds_since(tm);
      rep.stats.master_pivots += ms.result.iterations;
      ++rep.stats.master_iterations;
      if (ms.result.status != LpStatus::Optimal) break;
      int re = pool.reactivate_violated(ms.x, cfg.eps);
      rep.stats.reactivated += re;
      if (re == 0) break;
    }
    if (ms.result.status != LpStatus::Optimal) {
      if (first) relaxation_error(ms.result);
      rep.termination = Termination::Stalled;
      break;
    }
    if (first) {
      rep.z_lp = nm.original_objective(ms.z);
      first = false;
    }
    rep.z_cut = nm.original_objective(ms.z);
    rep.x = ms.x;
    rep.stats.parked += pool.park_inactive(ms.x, park_threshold, cfg.park_after);

    // Candidates: fractional columns of K, ascending by value then index.
    std::vector<int> F;
    for (int k : K)
      if (integrality_gap(ms.x[k]) >= cfg.eps) F.push_back(k);
    std::stable_sort(F.begin(), F.end(), [&](int a, int b) {
      if (ms.x[a] != ms.x[b]) return ms.x[a] < ms.x[b];
      return a < b;
    });

    // Separate against the original rows only, so every cut stays rank 1.
    auto ts = Clock::now();
    FractionalPoint pt = FractionalPoint::at(orig, ms.x);
    std::vector<SeparationResult> results = separate_all(orig, pt, F, cfg.eps, cfg.threads);
    rep.stats.separation_seconds += seconds_since(ts);

    IterationLog log;
    log.iteration = iter;
    log.objective = rep.z_cut;
    log.separations = static_cast<int>(F.size());
    log.reinit = reinit;
    std::vector<int> Kn;
    for (std::size_t i = 0; i < F.size(); ++i) {
      SeparationResult& r = results[i];
      ++rep.stats.membership_solved;
      rep.stats.membership_pivots += r.pivots;
      if (r.status == SeparationStatus::NoCut) {
        ++log.no_cuts;
        continue;
      }
      if (r.status == SeparationStatus::Inconclusive) {
        ++log.inconclusive;
        continue;
      }
      CutRow cut = cfg.mode == ClosureMode::Pe ? r.plain : r.strengthened;
      cut.prov.round = iter;
      if (!acceptable(cut)) {
        ++rep.stats.rejected;
        continue;
      }
      if (cfg.max_active_cuts > 0 && pool.num_active() >= cfg.max_active_cuts) {
        ++rep.stats.rejected;
        continue;
      }
      if (!pool.add(cut)) {
        ++rep.stats.rejected;
        continue;
      }
      rep.cuts.push_back(cut);
      ++log.cuts;
      Kn.push_back(F[i]);
    }
    rep.stats.cuts += log.cuts;
    rep.stats.non_cuts += log.no_cuts;
    rep.stats.inconclusive += log.inconclusive;
    log.active_cuts = pool.num_active();
    log.seconds = seconds_since(t0);
    rep.log.push_back(log);
    if (cfg.on_iteration) cfg.on_iteration(log);

    // A clean pass over every integer column proves the point is in the closure.
    if (Kn.empty() && reinit) {
      rep.termination = log.inconclusive == 0 ? Termination::Proved : Termination::Stalled;
      break;
    }
    // Tailing off over the window since the last reset.
    z_hist.push_back(ms.z);
    bool tail = false;
    const int W = cfg.tail_window;
    if (static_cast<int>(z_hist.size()) > W) {
      double z_old = z_hist[z_hist.size() - 1 - W];
      double improvement = (z_old - ms.z) / std::max(1.0, std::abs(z_old));
      if (improvement < cfg.tail_tol) {
        tail = true;
        ++tail_count;
      } else {
        tail_count = 0;
      }
    }
    if (tail && tail_count >= cfg.stall_resets) {
      rep.termination = Termination::Stalled;
      break;
    }
    if (Kn.empty() || tail) {
      K = all_k;
      reinit = true;
      if (tail) z_hist.clear();
    } else {
      K = std::move(Kn);
      reinit = false;
    }
  }
  rep.stats.total_seconds = seconds_since(t0);
  return rep;
}

ClosureReport gmi_rounds(const NormalizedMilp& nm, const ClosureConfig& cfg) {
  const auto t0 = Clock::now();
  ClosureReport rep;
  rep.instance = nm.name;
  rep.mode = ClosureMode::GmiRounds;
  rep.rounds = cfg.rounds;
  rep.termination = Termination::RoundsDone;
  CutPool pool;
  Master master(nm);
  for (int round = 0;; ++round) {
    auto tm = Clock::now();
    MasterSolve ms = master.solve(pool.active_cuts(), pool.active_ids());
    rep.stats.master_seconds += seconds_since(tm);
    rep.stats.master_pivots += ms.result.iterations;
    ++rep.stats.master_iterations;
    if (ms.result.status != LpStatus::Optimal) {
      if (round == 0) relaxation_error(ms.result);
      rep.termination = Termination::Stalled;
      break;
    }
    if (round == 0) rep.z_lp = nm.original_objective(ms.z);
    rep.z_cut = nm.original_objective(ms.z);
    rep.x = ms.x;
    if (round >= cfg.rounds || seconds_since(t0) > cfg.time_limit) {
      if (round < cfg.rounds) rep.termination = Termination::TimeLimit;
      break;
    }
    IterationLog log;
    log.iteration = round + 1;
    log.objective = rep.z_cut;
    log.reinit = true;
    const StandardLp& lp = ms.lp;
    const Basis& basis = ms.result.basis;
    std::vector<CutRow> fresh;
    for (int pos = 0; pos < lp.m; ++pos) {
      int col = basis.head[pos];
      if (!lp.is_integer_col(col)) continue;
      if (integrality_gap(ms.result.x[col]) < cfg.eps) continue;
      ++log.separations;
      TableauRow row = tableau_row(lp, basis, col);
      RowCutResult g = gmi_cut(row, lp, cfg.eps);
      if (g.status != RowCutStatus::Ok) {
        ++log.no_cuts;
        continue;
      }
      CutRow cut = eliminate_slacks(g.cut, lp);
      cut.prov.origin = CutOrigin::Gmi;
      cut.prov.split_var = col - lp.m;
      cut.prov.strengthened = true;
      cut.prov.basis_fingerprint = basis.fingerprint();
      cut.prov.violation = cut.violation_at(ms.x);
      cut.prov.round = round + 1;
      if (!acceptable(cut)) {
        ++rep.stats.rejected;
        continue;
      }
      fresh.push_back(std::move(cut));
    }
    for (CutRow& cut : fresh) {
      if (!pool.add(cut)) {
        ++rep.stats.rejected;
        continue;
      }
      rep.cuts.push_back(cut);
      ++log.cuts;
    }
    rep.stats.cuts += log.cuts;
    rep.stats.non_cuts += log.no_cuts;
    log.active_cuts = pool.num_active();
    log.seconds = seconds_since(t0);
    rep.log.push_back(log);
    if (cfg.on_iteration) cfg.on_iteration(log);
    if (log.cuts == 0) break;
  }
  rep.stats.total_seconds = seconds_since(t0);
  return rep;
}

ClosureReport run_closure(const NormalizedMilp& nm, const ClosureConfig& cfg) {
  return cfg.mode == ClosureMode::GmiRounds ? gmi_rounds(nm, cfg) : optimize_closure(nm, cfg);
}

}  // namespace lapclose
