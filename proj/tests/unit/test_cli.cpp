#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "report.hpp"

using lapclose::tools::run_cli;

namespace {

const std::string kData = LAPCLOSE_DATA_DIR;

struct Run {
  int code = -1;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

nlohmann::json load(const std::string& path) {
  std::ifstream f(path);
  return nlohmann::json::parse(f);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("close on the toy with reference optima closes the full gap") {
  Run r = cli({"close", kData + "/t1.mps", "--mode", "pe", "--optima", kData + "/t1_optima.txt", "--json",
               "cli_t1.json"});
  CHECK(r.code == 0);
  nlohmann::json j = load("cli_t1.json");
  CHECK(j["schema"] == 1);
  CHECK(j["termination"] == "Proved");
  CHECK(j["gap_closed"].get<double>() == doctest::Approx(100.0));
  CHECK(j["z_cut"].get<double>() == doctest::Approx(0.0));
  CHECK(j["cuts"]["emitted"] == 1);
  CHECK(r.out.find("gap_closed") != std::string::npos);
}

TEST_CASE("close on bell3a in elementary mode") {
  Run r = cli({"close", kData + "/miplib3/bell3a.mps", "--mode", "pe", "--optima", kData + "/miplib3/optima.txt",
               "--json", "cli_bell3a.json", "--quiet"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(load("cli_bell3a.json")["gap_closed"].get<double>() == doctest::Approx(64.56).epsilon(0.5 / 64.56));
}

TEST_CASE("one GMI round reports its cuts") {
  Run r = cli({"close", kData + "/miplib3/p0033.mps", "--mode", "gmi-rounds", "--rounds", "1", "--optima",
               kData + "/miplib3/optima.txt", "--json", "cli_gmi.json"});
  CHECK(r.code == 0);
  nlohmann::json j = load("cli_gmi.json");
  CHECK(j["termination"] == "RoundsDone");
  CHECK(j["log"].size() == 1);
  CHECK(j["cuts"]["emitted"].get<int>() > 0);
  CHECK(j["gap_closed"].get<double>() > 0.0);
  CHECK(j["config"]["rounds"] == 1);
}

TEST_CASE("missing reference optima leave the gap unreported") {
  Run r = cli({"close", kData + "/t1.mps", "--json", "cli_noopt.json"});
  CHECK(r.code == 0);
  nlohmann::json j = load("cli_noopt.json");
  CHECK(j["z_opt"].is_null());
  CHECK(j["gap_closed"] == "n/a");
}

TEST_CASE("reports round-trip and carry twelve significant digits") {
  cli({"close", kData + "/miplib3/p0033.mps", "--mode", "pe", "--optima", kData + "/miplib3/optima.txt", "--json",
       "cli_rt.json"});
  std::string text = slurp("cli_rt.json");
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(text);
  CHECK(j.dump(2) + "\n" == text);
  double z = j["z_lp"].get<double>();
  CHECK(lapclose::tools::round12(z) == z);
  CHECK(j["seconds"].is_object());
}

TEST_CASE("same arguments give byte-identical reports") {
  std::vector<std::string> args{"close", kData + "/miplib3/lseu.mps", "--mode", "pestar", "--omit-timings",
                                "--seed", "3", "--json", "cli_det_a.json"};
  Run a = cli(args);
  args.back() = "cli_det_b.json";
  Run b = cli(args);
  CHECK(a.code == b.code);
  CHECK(a.out == b.out);
  CHECK(slurp("cli_det_a.json") == slurp("cli_det_b.json"));
  CHECK_FALSE(load("cli_det_a.json").contains("seconds"));
}

TEST_CASE("close exit codes") {
  CHECK(cli({"close", "no_such_file.mps"}).code == 1);
  CHECK_FALSE(cli({"close", "no_such_file.mps"}).err.empty());
  CHECK(cli({"close", kData + "/t1.mps", "--mode", "cplex"}).code == 1);
  CHECK(cli({"close", kData + "/t1.mps", "--eps", "-1"}).code == 1);
  CHECK(cli({"close"}).code == 1);
  CHECK(cli({"close", kData + "/miplib3/p0033.mps", "--time-limit", "1e-9", "--quiet"}).code == 2);
  {
    std::ofstream f("cli_infeasible.mps");
    f << "NAME INF\nROWS\n N obj\n G c1\n L c2\nCOLUMNS\n x obj 1 c1 1\n x c2 1\nRHS\n rhs c1 2 c2 1\nENDATA\n";
  }
  Run inf = cli({"close", "cli_infeasible.mps"});
  CHECK(inf.code == 1);
  CHECK(inf.err.find("infeasible") != std::string::npos);
}

TEST_CASE("verify exit codes") {
  Run all = cli({"verify", "--suite", "all", "--count", "100", "--seed", "7", "--json", "cli_verify.json"});
  CHECK(all.code == 0);
  nlohmann::json j = load("cli_verify.json");
  CHECK(j["ok"] == true);
  CHECK(j["suites"].size() == 5);
  Run bad = cli({"verify", "--suite", "validity", "--fixture", "planted-fault", "--count", "3"});
  CHECK(bad.code == 3);
  CHECK(bad.out.find("counterexample") != std::string::npos);
  Run none = cli({"verify", "--count", "0"});
  CHECK(none.code == 0);
  CHECK(none.out.find("checks 0") != std::string::npos);
  CHECK(cli({"verify", "--suite", "theorem9"}).code == 1);
  CHECK(cli({"verify", "--fixture", "other"}).code == 1);
}

TEST_CASE("help exits cleanly") {
  Run r = cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("close") != std::string::npos);
  CHECK(cli({}).code == 1);
}
