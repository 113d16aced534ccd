#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <sstream>

namespace lapclose::tools {

using nlohmann::ordered_json;

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

namespace {

std::optional<double> gap_of(const ClosureReport& rep, const std::optional<double>& z_opt) {
  if (!z_opt) return std::nullopt;
  try {
    return gap_closed(rep.z_lp, rep.z_cut, *z_opt);
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

std::string fmt(double v, int prec = 12) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

}  // namespace

ordered_json run_report_json(const ClosureReport& rep, const RunInfo& info) {
  ordered_json j;
  j["schema"] = 1;
  j["instance"] = rep.instance;
  j["path"] = info.path;
  j["mode"] = std::string(to_string(rep.mode));
  j["termination"] = std::string(to_string(rep.termination));
  j["z_lp"] = round12(rep.z_lp);
  j["z_cut"] = round12(rep.z_cut);
  j["z_opt"] = info.z_opt ? ordered_json(round12(*info.z_opt)) : ordered_json(nullptr);
  std::optional<double> gap = gap_of(rep, info.z_opt);
  j["gap_closed"] = gap ? ordered_json(round12(*gap)) : ordered_json("n/a");
  j["iterations"] = rep.log.size();
  const ClosureStats& s = rep.stats;
  j["cuts"] = {{"emitted", s.cuts}, {"parked", s.parked}, {"reactivated", s.reactivated}, {"rejected", s.rejected}};
  j["separations"] = {{"membership_solved", s.membership_solved},
                      {"cut", s.cuts},
                      {"no_cut", s.non_cuts},
                      {"inconclusive", s.inconclusive}};
  j["pivots"] = {{"master", s.master_pivots},
                 {"membership", s.membership_pivots},
                 {"total", s.master_pivots + s.membership_pivots}};
  j["master_solves"] = s.master_iterations;
  if (!info.omit_timings)
    j["seconds"] = {{"master", round12(s.master_seconds)},
                    {"separation", round12(s.separation_seconds)},
                    {"total", round12(s.total_seconds)}};
  const ClosureConfig& c = info.config;
  j["config"] = {{"mode", std::string(to_string(c.mode))},
                 {"rounds", c.rounds},
                 {"eps", c.eps},
                 {"time_limit", c.time_limit},
                 {"tail_window", c.tail_window},
                 {"tail_tol", c.tail_tol},
                 {"park_after", c.park_after},
                 {"park_slack", c.park_slack},
                 {"threads", c.threads},
                 {"seed", info.seed}};
  ordered_json log = ordered_json::array();
  for (const IterationLog& it : rep.log) {
    ordered_json e = {{"iteration", it.iteration},
                      {"objective", round12(it.objective)},
                      {"separations", it.separations},
                      {"cuts", it.cuts},
                      {"no_cuts", it.no_cuts},
                      {"inconclusive", it.inconclusive},
                      {"active_cuts", it.active_cuts},
                      {"reinit", it.reinit}};
    if (!info.omit_timings) e["seconds"] = round12(it.seconds);
    log.push_back(std::move(e));
  }
  j["log"] = std::move(log);
  return j;
}

void print_run_report(std::ostream& out, const ClosureReport& rep, const RunInfo& info) {
  std::optional<double> gap = gap_of(rep, info.z_opt);
  const ClosureStats& s = rep.stats;
  auto row = [&](const char* key, const std::string& val) { out << std::left << std::setw(20) << key << val << '\n'; };
  row("instance", rep.instance);
  row("mode", std::string(to_string(rep.mode)));
  row("termination", std::string(to_string(rep.termination)));
  row("iterations", std::to_string(rep.log.size()));
  row("z_lp", fmt(round12(rep.z_lp)));
  row("z_cut", fmt(round12(rep.z_cut)));
  row("z_opt", info.z_opt ? fmt(round12(*info.z_opt)) : "n/a");
  row("gap_closed_%", gap ? fmt(round12(*gap), 6) : "n/a");
  row("cuts", std::to_string(s.cuts));
  row("no_cuts", std::to_string(s.non_cuts));
  row("inconclusive", std::to_string(s.inconclusive));
  row("rejected", std::to_string(s.rejected));
  row("parked", std::to_string(s.parked));
  row("master_solves", std::to_string(s.master_iterations));
  row("membership_solved", std::to_string(s.membership_solved));
  row("pivots", std::to_string(s.master_pivots + s.membership_pivots));
  if (!info.omit_timings) row("seconds", fmt(s.total_seconds, 4));
}

ordered_json suite_json(const SuiteReport& rep, bool omit_timings) {
  ordered_json j = {{"suite", std::string(to_string(rep.suite))},
                    {"passed", rep.passed},
                    {"failed", rep.failed},
                    {"skipped", rep.skipped},
                    {"checks", rep.checks},
                    {"max_deviation", round12(rep.max_deviation)},
                    {"ok", rep.ok()}};
  if (rep.suite == Suite::Theorem4) j["strengthened"] = rep.strengthened;
  if (!rep.first_failure.empty()) j["first_failure"] = rep.first_failure;
  if (!omit_timings) j["seconds"] = round12(rep.seconds);
  return j;
}

void print_suite_line(std::ostream& out, const SuiteReport& rep) {
  out << std::left << std::setw(10) << to_string(rep.suite) << (rep.ok() ? "PASS" : "FAIL") << "  passed "
      << rep.passed << "  failed " << rep.failed << "  skipped " << rep.skipped << "  checks " << rep.checks
      << "  max-dev " << std::setprecision(3) << rep.max_deviation << '\n';
}

}  // namespace lapclose::tools
