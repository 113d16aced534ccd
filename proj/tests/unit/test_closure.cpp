#include "doctest.h"
#include "lapclose/closure.hpp"
#include "lapclose/membership.hpp"
#include "lapclose/simplex.hpp"
#include "lapclose/verify.hpp"
#include "oracle.hpp"

using namespace lapclose;

namespace {

NormalizedMilp corpus(const std::string& name) {
  return normalize(read_mps_file(std::string(LAPCLOSE_DATA_DIR) + "/miplib3/" + name + ".mps"));
}

ClosureConfig config(ClosureMode mode, int rounds = 1) {
  ClosureConfig c;
  c.mode = mode;
  c.rounds = rounds;
  return c;
}

CutRow unit_cut(int j, double rhs) {
  CutRow c;
  c.coefs.push(j, 1.0);
  c.rhs = rhs;
  return c;
}

}  // namespace

TEST_CASE("gap closed percentages") {
  CHECK(gap_closed(1, 0, 0) == doctest::Approx(100));
  CHECK(gap_closed(1, 1, 0) == doctest::Approx(0));
  CHECK(gap_closed(1, 0.5, 0) == doctest::Approx(50));
  CHECK(gap_closed(1, 1.5, 0) == 0.0);
  CHECK(gap_closed(1, -0.5, 0) == 100.0);
  // Minimization: the bound moves up towards the optimum.
  CHECK(gap_closed(10, 12, 14) == doctest::Approx(50));
  CHECK(gap_closed(3, 3, 3) == 100.0);
  CHECK_THROWS_AS(gap_closed(3, 2, 3), std::domain_error);
}

TEST_CASE("toy closure: one cut closes the whole gap") {
  ClosureReport rep = optimize_closure(t1_instance(), config(ClosureMode::Pe));
  CHECK(rep.termination == Termination::Proved);
  CHECK(rep.z_lp == doctest::Approx(1.0));
  CHECK(rep.z_cut == doctest::Approx(0.0));
  CHECK(rep.cuts.size() == 1);
  CHECK(rep.stats.cuts == 1);
  CHECK(gap_closed(rep.z_lp, rep.z_cut, 0.0) == doctest::Approx(100));
}

TEST_CASE("an integral relaxation needs no cuts") {
  NormalizedMilp nm = t1_instance();
  nm.objective = {-1.0, 0.0};  // max -x1: optimum at the origin
  for (ClosureMode mode : {ClosureMode::Pe, ClosureMode::PeStar, ClosureMode::GmiRounds}) {
    ClosureReport rep = run_closure(nm, config(mode));
    CHECK(rep.cuts.empty());
    CHECK(rep.z_cut == doctest::Approx(rep.z_lp));
    if (mode != ClosureMode::GmiRounds) CHECK(rep.termination == Termination::Proved);
  }
}

TEST_CASE("one GMI round on the toy reproduces the split cut") {
  ClosureReport rep = gmi_rounds(t1_instance(), config(ClosureMode::GmiRounds, 1));
  CHECK(rep.termination == Termination::RoundsDone);
  REQUIRE(rep.cuts.size() == 1);
  CHECK(rep.cuts[0].coefs.to_dense(2) == std::vector<double>{0.0, -1.0});
  CHECK(gap_closed(rep.z_lp, rep.z_cut, 0.0) == doctest::Approx(100));
  ClosureReport none = gmi_rounds(t1_instance(), config(ClosureMode::GmiRounds, 0));
  CHECK(none.cuts.empty());
  CHECK(none.z_cut == none.z_lp);
}

TEST_CASE("pool keeps tight cuts and parks long-slack ones") {
  CutPool pool;
  CHECK(pool.add(unit_cut(0, 1.0)));
  CHECK(pool.add(unit_cut(1, 1.0)));
  CHECK_FALSE(pool.add(unit_cut(0, 1.0)));
  std::vector<double> x{1.0, 3.0};  // cut 0 tight, cut 1 slack
  for (int i = 0; i < 2; ++i) CHECK(pool.park_inactive(x, 1e-7, 3) == 0);
  CHECK(pool.park_inactive(x, 1e-7, 3) == 1);
  CHECK(pool.num_active() == 1);
  CHECK(pool.entries()[0].active);
  CHECK(pool.entries()[0].slack_streak == 0);
  CHECK_FALSE(pool.entries()[1].active);
  CHECK(pool.active_ids() == std::vector<int>{0});
  // Not violated: stays parked.
  CHECK(pool.reactivate_violated(x, 1e-4) == 0);
  std::vector<double> y{1.0, 0.5};
  CHECK(pool.reactivate_violated(y, 1e-4) == 1);
  CHECK(pool.num_active() == 2);
  CHECK(pool.entries()[1].slack_streak == 0);
}

TEST_CASE("a slack streak is broken by one tight solve") {
  CutPool pool;
  pool.add(unit_cut(0, 1.0));
  std::vector<double> slack{2.0}, tight{1.0};
  pool.park_inactive(slack, 1e-7, 3);
  pool.park_inactive(slack, 1e-7, 3);
  pool.park_inactive(tight, 1e-7, 3);
  CHECK(pool.park_inactive(slack, 1e-7, 3) == 0);
  CHECK(pool.num_active() == 1);
}

TEST_CASE("adding a duplicate of a parked cut reactivates it") {
  CutPool pool;
  pool.add(unit_cut(0, 1.0));
  std::vector<double> slack{5.0};
  pool.park_inactive(slack, 1e-7, 1);
  REQUIRE(pool.num_active() == 0);
  CHECK(pool.add(unit_cut(0, 1.0)));
  CHECK(pool.num_active() == 1);
  CHECK(pool.entries().size() == 1);
}

TEST_CASE("master objective never improves as cuts are added") {
  NormalizedMilp nm = corpus("p0033");
  ClosureConfig cfg = config(ClosureMode::PeStar);
  std::vector<double> seen;
  cfg.on_iteration = [&](const IterationLog& log) { seen.push_back(log.objective); };
  ClosureReport rep = optimize_closure(nm, cfg);
  REQUIRE(rep.log.size() >= 2);
  CHECK(seen.size() == rep.log.size());
  double prev = kInf;
  for (const IterationLog& log : rep.log) {
    // Back to the normalized maximization.
    double z = nm.sense_sign * (log.objective - nm.objective_offset);
    CHECK(z <= prev + 1e-7);
    prev = z;
  }
}

TEST_CASE("a proved elementary closure leaves nothing to separate") {
  NormalizedMilp nm = corpus("p0033");
  ClosureConfig cfg = config(ClosureMode::Pe);
  ClosureReport rep = optimize_closure(nm, cfg);
  REQUIRE(rep.termination == Termination::Proved);
  StandardLp lp = to_standard(nm);
  FractionalPoint pt = FractionalPoint::at(lp, rep.x);
  int checked = 0;
  for (int k = 0; k < nm.num_integer; ++k) {
    if (integrality_gap(pt.x[k]) < cfg.eps) continue;
    MembershipSolve ms = membership_value(build_membership_lp(lp, pt, k, cfg.eps));
    CHECK(ms.value >= -cfg.eps);
    ++checked;
  }
  CHECK(checked > 0);
  for (const CutRow& cut : rep.cuts) CHECK(cut.prov.origin == CutOrigin::Certificate);
}

TEST_CASE("one GMI round on p0033 matches textbook cuts re-solved by the dense simplex") {
  NormalizedMilp nm = corpus("p0033");
  ClosureReport rep = gmi_rounds(nm, config(ClosureMode::GmiRounds, 1));
  StandardLp lp = to_standard(nm);
  SimplexResult r = solve(to_bounded(lp));
  REQUIRE(r.status == LpStatus::Optimal);
  oracle::DenseLp d = oracle::relaxation(nm);
  int added = 0;
  for (int pos = 0; pos < lp.m; ++pos) {
    int col = r.basis.head[pos];
    if (!lp.is_integer_col(col) || integrality_gap(r.x[col]) < 1e-4) continue;
    std::vector<double> cut = oracle::gmi_in_x(lp, oracle::tableau_row(lp, r.basis.head, col));
    d.b.push_back(cut.back());
    cut.pop_back();
    d.a.push_back(cut);
    d.sense.push_back('>');
    ++added;
  }
  CHECK(added == static_cast<int>(rep.cuts.size()));
  oracle::DenseResult ref = oracle::dense_simplex(d);
  REQUIRE(ref.status == oracle::Status::Optimal);
  CHECK(rep.z_cut == doctest::Approx(nm.original_objective(ref.z)).epsilon(1e-7));
}

TEST_CASE("closure runs are deterministic and thread count does not change the bound") {
  NormalizedMilp nm = corpus("lseu");
  ClosureReport a = optimize_closure(nm, config(ClosureMode::Pe));
  ClosureReport b = optimize_closure(nm, config(ClosureMode::Pe));
  CHECK(a.z_cut == b.z_cut);
  CHECK(a.cuts.size() == b.cuts.size());
  CHECK(a.stats.membership_pivots == b.stats.membership_pivots);
  ClosureConfig threaded = config(ClosureMode::Pe);
  threaded.threads = 4;
  ClosureReport c = optimize_closure(nm, threaded);
  CHECK(c.termination == Termination::Proved);
  CHECK(gap_closed(c.z_lp, c.z_cut, 1120) == doctest::Approx(gap_closed(a.z_lp, a.z_cut, 1120)).epsilon(1e-3));
}

TEST_CASE("time limit and argument errors") {
  ClosureConfig cfg = config(ClosureMode::PeStar);
  cfg.time_limit = 1e-9;
  ClosureReport rep = optimize_closure(corpus("p0033"), cfg);
  CHECK(rep.termination == Termination::TimeLimit);
  cfg = config(ClosureMode::Pe);
  cfg.eps = 0.0;
  CHECK_THROWS_AS(optimize_closure(t1_instance(), cfg), std::invalid_argument);
  NormalizedMilp unbounded = t1_instance();
  // Only 2 x1 - x2 >= 0 remains.
  unbounded.rows.erase(unbounded.rows.begin());
  unbounded.rhs.erase(unbounded.rhs.begin());
  unbounded.objective = {1.0, 0.0};
  CHECK_THROWS_AS(optimize_closure(unbounded, config(ClosureMode::Pe)), ModelError);
}

TEST_CASE("mode names round-trip") {
  for (ClosureMode m : {ClosureMode::Pe, ClosureMode::PeStar, ClosureMode::GmiRounds}) CHECK(parse_mode(to_string(m)) == m);
  CHECK_FALSE(parse_mode("cplex").has_value());
}
