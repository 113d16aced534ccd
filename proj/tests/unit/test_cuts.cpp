#include <random>

#include "doctest.h"
#include "lapclose/cuts.hpp"
#include "lapclose/simplex.hpp"
#include "lapclose/verify.hpp"
#include "oracle.hpp"

using namespace lapclose;

namespace {

// Row over columns (basic x_k, x_a, x_b, x_c).
TableauRow row_of(std::vector<double> coef, double rhs) {
  TableauRow r;
  r.basic_var = 0;
  r.position = 0;
  r.coef = std::move(coef);
  r.rhs = rhs;
  return r;
}

const StandardLp kNoLp{};

}  // namespace

TEST_CASE("intersection cut of a two-term row") {
  RowCutResult r = intersection_cut(row_of({0.0, 0.5, -0.3}, 2.7), kNoLp);
  REQUIRE(r.status == RowCutStatus::Ok);
  CHECK(r.f0 == doctest::Approx(0.7));
  CHECK(r.cut.coef[1] == doctest::Approx(0.15));
  CHECK(r.cut.coef[2] == doctest::Approx(0.21));
  CHECK(r.cut.rhs == doctest::Approx(0.21));
}

TEST_CASE("GMI cut with integer and continuous nonbasics") {
  std::vector<char> integer{1, 1, 0, 1};
  RowCutResult r = gmi_cut(row_of({0.0, 2.6, -0.3, 0.5}, 2.7), integer);
  REQUIRE(r.status == RowCutStatus::Ok);
  CHECK(r.cut.coef[1] == doctest::Approx(0.18));
  CHECK(r.cut.coef[2] == doctest::Approx(0.21));
  CHECK(r.cut.coef[3] == doctest::Approx(0.15));
  CHECK(r.cut.rhs == doctest::Approx(0.21));
}

TEST_CASE("GMI with continuous nonbasics is the intersection cut") {
  TableauRow row = row_of({0.0, 2.6, -0.3, 0.5}, 2.7);
  std::vector<char> none(4, 0);
  RowCutResult a = gmi_cut(row, none);
  RowCutResult b = intersection_cut(row, kNoLp);
  CHECK(a.cut.coef == b.cut.coef);
  CHECK(a.cut.rhs == b.cut.rhs);
}

TEST_CASE("zero row with fractional rhs is an empty disjunction, not a cut") {
  CHECK(intersection_cut(row_of({0.0, 0.0, 0.0}, 1.4), kNoLp).status == RowCutStatus::EmptyDisjunction);
  CHECK(intersection_cut(row_of({0.0, 1.0}, 3.00001), kNoLp).status == RowCutStatus::NearIntegral);
  CHECK(intersection_cut(row_of({0.0, 1.0}, 2.99999), kNoLp).status == RowCutStatus::NearIntegral);
}

TEST_CASE("toy intersection cut eliminates to -x2 >= 0") {
  StandardLp lp = to_standard(t1_instance());
  TableauRow row;
  row.basic_var = 2;
  row.coef = {0.25, -0.25, 0.0, 0.0};
  row.rhs = 0.5;
  RowCutResult r = intersection_cut(row, lp);
  REQUIRE(r.status == RowCutStatus::Ok);
  CHECK(r.cut.coef[0] == doctest::Approx(0.125));
  CHECK(r.cut.coef[1] == doctest::Approx(0.125));
  CHECK(r.cut.rhs == doctest::Approx(0.25));
  CutRow c = eliminate_slacks(r.cut, lp);
  REQUIRE(c.coefs.size() == 1);
  CHECK(c.coefs.index[0] == 1);
  CHECK(c.coefs.value[0] == doctest::Approx(-1.0));
  CHECK(c.rhs == doctest::Approx(0.0));
}

TEST_CASE("slack-free cuts are only rescaled") {
  StandardLp lp = to_standard(t1_instance());
  SlpCut s{{0.0, 0.0, 4.0, -2.0}, 1.0};
  CutRow c = eliminate_slacks(s, lp);
  CHECK(c.coefs.to_dense(2) == std::vector<double>{1.0, -0.5});
  CHECK(c.rhs == doctest::Approx(0.25));
}

TEST_CASE("normalization, dynamism and duplicate detection") {
  CutRow c;
  c.coefs.push(0, 3.0);
  c.coefs.push(2, -6.0);
  c.rhs = 1.5;
  REQUIRE(normalize_cut(c));
  CHECK(c.coefs.max_abs() == 1.0);
  CHECK(c.rhs == doctest::Approx(0.25));
  CHECK(dynamism(c) == doctest::Approx(2.0));
  CutRow d = c;
  d.coefs.value[0] += 5e-8;
  CHECK(same_cut(c, d));
  d.coefs.value[0] += 1e-6;
  CHECK_FALSE(same_cut(c, d));
  CHECK(cut_distance(c, d, 3) == doctest::Approx(1.05e-6));
  CutRow zero;
  CHECK_FALSE(normalize_cut(zero));
  CHECK(dynamism(zero) == 1.0);
}

TEST_CASE("GMI coefficients never exceed intersection coefficients") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 8;
    std::vector<double> a(n);
    std::vector<char> integer(n);
    for (int j = 1; j < n; ++j) {
      a[j] = rng() % 4 == 0 ? std::round(coef(rng)) : coef(rng);
      integer[j] = rng() % 2;
    }
    TableauRow row = row_of(a, coef(rng));
    RowCutResult g = gmi_cut(row, integer);
    RowCutResult ic = intersection_cut(row, kNoLp);
    if (ic.status != RowCutStatus::Ok) continue;
    CHECK(g.cut.rhs == doctest::Approx(ic.cut.rhs));
    for (int j = 1; j < n; ++j) CHECK(g.cut.coef[j] <= ic.cut.coef[j] + 1e-12);
  }
}

TEST_CASE("GMI cuts from optimal tableaus match the textbook formula") {
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    StandardLp lp = to_standard(random_instance(rng));
    SimplexResult r = solve(to_bounded(lp));
    REQUIRE(r.status == LpStatus::Optimal);
    for (int pos = 0; pos < lp.m; ++pos) {
      int col = r.basis.head[pos];
      if (!lp.is_integer_col(col) || integrality_gap(r.x[col]) < 1e-3) continue;
      RowCutResult g = gmi_cut(tableau_row(lp, r.basis, col), lp);
      if (g.status != RowCutStatus::Ok) continue;
      CutRow cut = eliminate_slacks(g.cut, lp);
      std::vector<double> ref = oracle::gmi_in_x(lp, oracle::tableau_row(lp, r.basis.head, col));
      std::vector<double> got = cut.coefs.to_dense(lp.n);
      for (int j = 0; j < lp.n; ++j) CHECK(got[j] == doctest::Approx(ref[j]).epsilon(1e-8));
      CHECK(cut.rhs == doctest::Approx(ref[lp.n]).epsilon(1e-8));
      // The cut separates the vertex.
      CHECK(cut.violation_at(std::span(r.x).subspan(lp.m)) > 0.0);
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("strengthening with integral m_j: both minimands coincide") {
  // Two integer columns; certificate made consistent on column 1 with m_1 = t_1 - s_1 = 2.
  NormalizedMilp nm;
  nm.num_integer = 2;
  nm.objective = {0.0, 0.0};
  SparseVector r;
  r.push(0, 1.0);
  r.push(1, 1.0);
  nm.rows = {r};
  nm.rhs = {0.0};
  nm.back_map = {BackMapEntry{0, 0, 1}, BackMapEntry{1, 0, 1}};
  StandardLp lp = to_standard(nm);
  DualCertificate c;
  c.k = 0;
  c.xk = 0.5;
  c.u = {3.0};
  c.v = {1.0};
  c.s = {0.0, 0.0};
  c.t = {0.0, 2.0};
  c.u0 = 0.25;
  c.v0 = 0.75;
  CutRow plain = certificate_cut(c, lp);
  CutRow strong = strengthen(c, lp);
  std::vector<double> sp = strong.coefs.to_dense(2);
  // u A'_1 - u0 * 2 and v A'_1 + v0 * 2.
  CHECK(sp[1] == doctest::Approx(3.0 - 0.25 * 2));
  CHECK(sp[1] == doctest::Approx(1.0 + 0.75 * 2));
  CHECK(sp[1] <= plain.coefs.to_dense(2)[1]);
  CHECK(strong.rhs == doctest::Approx(plain.rhs));
  // m_1 = 0: strengthening leaves the coefficient alone.
  c.v = {3.0};
  c.t = {0.0, 0.0};
  strong = strengthen(c, lp);
  CHECK(strong.coefs.to_dense(2)[1] == doctest::Approx(certificate_cut(c, lp).coefs.to_dense(2)[1]));
  c.u0 = 0.0;
  c.v0 = 1.0;
  CHECK_THROWS_AS(strengthen(c, lp), std::invalid_argument);
}
