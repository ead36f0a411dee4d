#include "doctest.h"
#include "mdsfe/error.hpp"
#include "mdsfe/nichols.hpp"

using namespace mdsfe;

TEST_CASE("rank one Betti table") {
  auto s = bichar_from_dynkin(6, {2}, {{0}});
  auto res = betti_solve(s, 1, 9, 6);
  const auto& t = res.tables[0];
  CHECK(t.at(0, {0}) == 1);
  CHECK(t.at(1, {1}) == 1);
  CHECK(t.at(2, {3}) == 1);
  CHECK(t.at(3, {4}) == 1);
  CHECK(t.at(4, {6}) == 1);
  CHECK(t.at(2, {2}) == 0);
  CHECK(t.at(0, {5}) == 0);
  CHECK(t.at(3, {-1}) == 0);
  CHECK_THROWS_AS(t.at(7, {0}), Error);
  CHECK(betti_relations_check(res, 0).ok);
}

TEST_CASE("walk independence and relations on the rank two example") {
  auto s = bichar_from_matrix(parse_matrix("0,1;1,0", 4), 4);
  auto a = betti_solve(s, 1, 5, 5);
  BettiOptions opt;
  opt.seed = 11;
  auto b = betti_solve(s, 1, 5, 5, opt);
  REQUIRE(a.tables.size() == 3);
  for (size_t o = 0; o < 3; ++o) CHECK(a.tables[o].entries == b.tables[o].entries);
  for (int i = 0; i < 2; ++i) {
    auto rep = betti_relations_check(a, i);
    CHECK(rep.ok);
    CHECK(rep.checked > 0);
    auto q = betti_question_check(a, i);
    CHECK(q.holds + q.fails + q.skipped > 0);
  }
}

TEST_CASE("symmetrizer dimensions") {
  auto a2 = bichar_from_cartan('A', 2, 6, 2);
  auto sm = nichols_small_oracle(a2, 4);
  CHECK(sm.dims.at({1, 1}) == 2);
  CHECK(sm.dims.at({2, 2}) == 3);
  CHECK(sm.dims.at({3, 0}) == 0);
  CHECK(sm.betti.at({1, {1, 0}}) == 1);
  CHECK(sm.betti.count({1, {1, 1}}) == 0);
  CHECK_THROWS_AS(nichols_small_oracle(a2, 9), Error);
}

TEST_CASE("unclassifiable groupoid") {
  auto odd = bichar_from_dynkin(15, {3, 3}, {{0, 5}, {5, 0}});
  BettiOptions opt;
  opt.cutoff = 50;
  CHECK_THROWS_AS(betti_solve(odd, 1, 2, 2, opt), Error);
}

TEST_CASE("Kostant pattern for A2 and B2") {
  auto a2 = kostant_oracle('A', 2);
  CHECK(a2.elements.size() == 6);
  CHECK(a2.dim(1, {-1, 0}) == 1);
  CHECK(a2.dim(2, {-2, -1}) == 1);
  CHECK(a2.dim(3, {-2, -2}) == 1);
  CHECK(a2.dim(1, {-1, -1}) == 0);
  auto b2 = kostant_oracle('B', 2);
  CHECK(b2.elements.size() == 8);
  CHECK(b2.positive_roots.size() == 4);
  CHECK(nilradical_cohomology('B', 2) == b2.betti);
  CHECK(kostant_fe_check(b2, -4, 2).ok);
  CHECK_THROWS_AS(kostant_oracle('E', 6), Error);
}

TEST_CASE("Verma module invariants") {
  auto r = verma_check(3, 0);
  CHECK(r.relations_ok);
  CHECK(r.dim_e == 2);
  CHECK(r.dim_f == 1);
  CHECK_THROWS_AS(verma_check(3, 2), Error);
}
