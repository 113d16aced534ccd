#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "lapclose/closure.hpp"
#include "lapclose/membership.hpp"
#include "lapclose/simplex.hpp"
#include "lapclose/verify.hpp"

using namespace lapclose;

namespace {

const char* kInstances[] = {"p0033", "lseu", "stein27", "flugpl", "egout", "mod008", "bell3a", "vpm1"};

NormalizedMilp load(int i) {
  return normalize(read_mps_file(std::string(LAPCLOSE_DATA_DIR) + "/miplib3/" + kInstances[i] + ".mps"));
}

void BM_RelaxationSolve(benchmark::State& state) {
  NormalizedMilp nm = load(static_cast<int>(state.range(0)));
  BoundedLp lp = to_bounded(to_standard(nm));
  state.SetLabel(nm.name);
  for (auto _ : state) benchmark::DoNotOptimize(solve(lp).objective);
}
BENCHMARK(BM_RelaxationSolve)->DenseRange(0, 7)->Unit(benchmark::kMicrosecond);

// Separation of every fractional column at the relaxation optimum, cold and chained.
void BM_SeparateAll(benchmark::State& state) {
  NormalizedMilp nm = load(static_cast<int>(state.range(0)));
  const bool chained = state.range(1) != 0;
  StandardLp lp = to_standard(nm);
  SimplexResult r = solve(to_bounded(lp));
  FractionalPoint pt = FractionalPoint::at(lp, std::vector<double>(r.x.begin() + lp.m, r.x.end()));
  std::vector<int> ks;
  for (int k = 0; k < lp.p; ++k)
    if (integrality_gap(pt.x[k]) >= 1e-4) ks.push_back(k);
  state.SetLabel(nm.name + (chained ? " chained" : " cold"));
  long long pivots = 0;
  for (auto _ : state) {
    SeparateOptions opts;
    for (int k : ks) {
      SeparationResult s = separate(lp, pt, k, opts);
      pivots += s.pivots;
      if (chained && !s.basis.head.empty()) opts.warm = s.basis;
    }
  }
  state.counters["separations"] = static_cast<double>(ks.size());
  state.counters["pivots/iter"] = benchmark::Counter(static_cast<double>(pivots), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_SeparateAll)->ArgsProduct({{0, 1, 5}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Closure(benchmark::State& state) {
  NormalizedMilp nm = load(static_cast<int>(state.range(0)));
  ClosureConfig cfg;
  cfg.mode = static_cast<ClosureMode>(state.range(1));
  state.SetLabel(nm.name + " " + std::string(to_string(cfg.mode)));
  for (auto _ : state) benchmark::DoNotOptimize(run_closure(nm, cfg).z_cut);
}
BENCHMARK(BM_Closure)->ArgsProduct({{0, 1, 6}, {0, 1, 2}})->Unit(benchmark::kMillisecond);

void BM_ClosureThreads(benchmark::State& state) {
  NormalizedMilp nm = load(1);
  ClosureConfig cfg;
  cfg.mode = ClosureMode::Pe;
  cfg.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_closure(nm, cfg).z_cut);
}
BENCHMARK(BM_ClosureThreads)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_OracleSuite(benchmark::State& state) {
  Suite suite = static_cast<Suite>(state.range(0));
  state.SetLabel(std::string(to_string(suite)));
  for (auto _ : state) benchmark::DoNotOptimize(run_suite(suite, 1, 20).checks);
}
BENCHMARK(BM_OracleSuite)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
