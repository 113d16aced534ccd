#ifndef LAPCLOSE_CLOSURE_HPP
#define LAPCLOSE_CLOSURE_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lapclose/cuts.hpp"
#include "lapclose/instance.hpp"
#include "lapclose/lp_core.hpp"

namespace lapclose {

enum class ClosureMode { Pe, PeStar, GmiRounds };
enum class Termination { Proved, RoundsDone, TimeLimit, Stalled };

std::string_view to_string(ClosureMode m);
std::string_view to_string(Termination t);
std::optional<ClosureMode> parse_mode(std::string_view s);

struct IterationLog {
  int iteration = 0;
  double objective = 0.0;  // original sense
  int separations = 0;
  int cuts = 0;
  int no_cuts = 0;
  int inconclusive = 0;
  int active_cuts = 0;
  bool reinit = false;
  double seconds = 0.0;
};

struct ClosureConfig {
  ClosureMode mode = ClosureMode::PeStar;
  int rounds = 1;  // GmiRounds only
  double eps = 1e-4;
  double time_limit = 3600.0;
  int tail_window = 10;
  double tail_tol = 1e-4;
  /// Consecutive tailing-off resets before the run is declared stalled.
  int stall_resets = 3;
  /// Upper bound on active cut rows in the master; 0 means unlimited.
  int max_active_cuts = 0;
  /// Park a cut after this many consecutive solves with slack above the threshold.
  int park_after = 30;
  /// Slack threshold factor; the threshold is park_slack * (1 + max|b|).
  double park_slack = 1e-7;
  int threads = 1;
  std::function<void(const IterationLog&)> on_iteration;
};

struct ClosureStats {
  int master_iterations = 0;  // master LP solves
  int membership_solved = 0;
  int cuts = 0;
  int non_cuts = 0;
  int inconclusive = 0;
  int rejected = 0;  // duplicates and numerically unsafe cuts
  int parked = 0;
  int reactivated = 0;
  long long master_pivots = 0;
  long long membership_pivots = 0;
  double master_seconds = 0.0;
  double separation_seconds = 0.0;
  double total_seconds = 0.0;
};

struct ClosureReport {
  std::string instance;
  ClosureMode mode = ClosureMode::PeStar;
  int rounds = 0;
  Termination termination = Termination::Proved;
  double z_lp = 0.0;   // original sense
  double z_cut = 0.0;  // original sense
  std::vector<IterationLog> log;
  ClosureStats stats;
  /// Every cut added to the master during the run, in insertion order.
  std::vector<CutRow> cuts;
  /// Final master solution in normalized space.
  std::vector<double> x;
};

/// Cuts kept by the cutting-plane loop; active ones are master rows.
class CutPool {
public:
  struct Entry {
    CutRow cut;
    bool active = true;
    int slack_streak = 0;
  };

  /// Adds the cut unless an equal one is stored; reactivates a parked duplicate.
  /// Returns true when the master gains a row.
  bool add(CutRow cut);
  /// Update slack counters at `x` and park long-inactive cuts; returns the number parked.
  int park_inactive(std::span<const double> x, double slack_threshold, int park_after);
  /// Reactivate parked cuts violated at `x` by more than `eps`; returns the number reactivated.
  int reactivate_violated(std::span<const double> x, double eps);

  const std::vector<Entry>& entries() const { return entries_; }
  /// Indices of active entries, in insertion order.
  std::vector<int> active_ids() const;
  std::vector<CutRow> active_cuts() const;
  int num_active() const;

private:
  std::vector<Entry> entries_;
};

/// Cutting-plane loop over elementary split cuts: exact elementary closure (Pe)
/// or its strengthened approximation (PeStar).
ClosureReport optimize_closure(const NormalizedMilp& nm, const ClosureConfig& cfg);

/// Rounds of GMI cuts read from the optimal master tableau; cuts accumulate in the master.
ClosureReport gmi_rounds(const NormalizedMilp& nm, const ClosureConfig& cfg);

/// Dispatches on cfg.mode.
ClosureReport run_closure(const NormalizedMilp& nm, const ClosureConfig& cfg);

/// Percentage of the integrality gap closed, clamped to [0, 100].
/// Throws std::domain_error when z_opt == z_lp but z_cut differs.
double gap_closed(double z_lp, double z_cut, double z_opt);

}  // namespace lapclose

#endif
