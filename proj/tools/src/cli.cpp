#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>

#include "CLI11.hpp"
#include "lapclose/closure.hpp"
#include "lapclose/verify.hpp"
#include "report.hpp"

namespace lapclose::tools {

namespace {

struct CloseArgs {
  std::string path;
  std::string mode = "pestar";
  int rounds = 1;
  double eps = 1e-4;
  double time_limit = 3600.0;
  std::string optima;
  std::string json;
  std::uint64_t seed = 0;
  int threads = 1;
  bool omit_timings = false;
  bool quiet = false;
};

struct VerifyArgs {
  std::string suite = "all";
  std::uint64_t seed = 1;
  int count = 100;
  std::string fixture = "none";
  std::string json;
  bool omit_timings = false;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::optional<double> lookup_optimum(const std::map<std::string, double>& optima, const std::string& name,
                                     const std::string& path) {
  std::string stem = std::filesystem::path(path).stem().string();
  for (const std::string& key : {name, lower(name), stem, lower(stem)}) {
    auto it = optima.find(key);
    if (it != optima.end()) return it->second;
  }
  return std::nullopt;
}

bool write_json(const std::string& path, const nlohmann::ordered_json& j, std::ostream& err) {
  std::ofstream f(path);
  if (!f) {
    err << "error: cannot write " << path << '\n';
    return false;
  }
  f << j.dump(2) << '\n';
  return true;
}

int cmd_close(const CloseArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<ClosureMode> mode = parse_mode(a.mode);
  if (!mode) {
    err << "error: unknown mode " << a.mode << '\n';
    return kExitInputError;
  }
  RunInfo info;
  info.path = a.path;
  info.seed = a.seed;
  info.omit_timings = a.omit_timings;
  ClosureConfig& cfg = info.config;
  cfg.mode = *mode;
  cfg.rounds = a.rounds;
  cfg.eps = a.eps;
  cfg.time_limit = a.time_limit;
  cfg.threads = a.threads;
  ClosureReport rep;
  try {
    NormalizedMilp nm = normalize(read_mps_file(a.path));
    if (!a.optima.empty()) info.z_opt = lookup_optimum(read_optima_file(a.optima), nm.name, a.path);
    rep = run_closure(nm, cfg);
  } catch (const ParseError& e) {
    err << "error: " << a.path << ": " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  if (!a.quiet) print_run_report(out, rep, info);
  if (!a.json.empty() && !write_json(a.json, run_report_json(rep, info), err)) return kExitInputError;
  bool complete = rep.termination == Termination::Proved || rep.termination == Termination::RoundsDone;
  return complete ? kExitOk : kExitIncomplete;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<Suite> suites;
  if (a.suite == "all") {
    suites = {Suite::Theorem3, Suite::Theorem4, Suite::Duality, Suite::Vertex, Suite::Validity};
  } else if (auto s = parse_suite(a.suite)) {
    suites = {*s};
  } else {
    err << "error: unknown suite " << a.suite << '\n';
    return kExitInputError;
  }
  Fixture fixture = Fixture::None;
  if (a.fixture == "planted-fault") fixture = Fixture::PlantedFault;
  else if (a.fixture != "none") {
    err << "error: unknown fixture " << a.fixture << '\n';
    return kExitInputError;
  }
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["seed"] = a.seed;
  j["count"] = a.count;
  j["suites"] = nlohmann::ordered_json::array();
  bool ok = true;
  for (Suite s : suites) {
    SuiteReport r = run_suite(s, a.seed, a.count, fixture);
    print_suite_line(out, r);
    if (!r.ok()) {
      ok = false;
      out << "  counterexample: " << r.first_failure << '\n';
    }
    j["suites"].push_back(suite_json(r, a.omit_timings));
  }
  j["ok"] = ok;
  if (!a.json.empty() && !write_json(a.json, j, err)) return kExitInputError;
  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elementary split closure by lift-and-project membership LPs", "lapclose"};
  app.require_subcommand(1);

  CloseArgs ca;
  CLI::App* close = app.add_subcommand("close", "Optimize over the closure of an MPS instance");
  close->add_option("instance", ca.path, "MPS file")->required();
  close->add_option("--mode", ca.mode, "pe | pestar | gmi-rounds")->capture_default_str();
  close->add_option("--rounds", ca.rounds, "GMI rounds")->capture_default_str()->check(CLI::NonNegativeNumber);
  close->add_option("--eps", ca.eps, "Fractionality and violation tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  close->add_option("--time-limit", ca.time_limit, "Seconds")->capture_default_str()->check(CLI::PositiveNumber);
  close->add_option("--optima", ca.optima, "File of reference optima (name value per line)");
  close->add_option("--json", ca.json, "Write the run report as JSON");
  close->add_option("--seed", ca.seed, "Recorded in the report; the run itself is deterministic")->capture_default_str();
  close->add_option("--threads", ca.threads, "Concurrent separations per pass")->capture_default_str()->check(CLI::PositiveNumber);
  close->add_flag("--omit-timings", ca.omit_timings, "Leave wall times out of the reports");
  close->add_flag("--quiet", ca.quiet, "No summary on stdout");

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "Run the randomized oracle suites");
  verify->add_option("--suite", va.suite, "theorem3 | theorem4 | duality | vertex | validity | all")->capture_default_str();
  verify->add_option("--seed", va.seed, "Random seed")->capture_default_str();
  verify->add_option("--count", va.count, "Cases per suite")->capture_default_str()->check(CLI::NonNegativeNumber);
  verify->add_option("--fixture", va.fixture, "none | planted-fault")->capture_default_str();
  verify->add_option("--json", va.json, "Write the summary as JSON");
  verify->add_flag("--omit-timings", va.omit_timings, "Leave wall times out of the JSON summary");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  if (close->parsed()) return cmd_close(ca, out, err);
  return cmd_verify(va, out, err);
}

}  // namespace lapclose::tools
