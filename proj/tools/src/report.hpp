#ifndef LAPCLOSE_TOOLS_REPORT_HPP
#define LAPCLOSE_TOOLS_REPORT_HPP

#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"
#include "lapclose/closure.hpp"
#include "lapclose/verify.hpp"

namespace lapclose::tools {

/// Round to 12 significant digits so reports compare stably across platforms.
double round12(double v);

struct RunInfo {
  std::string path;
  std::optional<double> z_opt;
  ClosureConfig config;
  std::uint64_t seed = 0;
  bool omit_timings = false;
};

nlohmann::ordered_json run_report_json(const ClosureReport& rep, const RunInfo& info);
void print_run_report(std::ostream& out, const ClosureReport& rep, const RunInfo& info);

nlohmann::ordered_json suite_json(const SuiteReport& rep, bool omit_timings);
void print_suite_line(std::ostream& out, const SuiteReport& rep);

}  // namespace lapclose::tools

#endif
