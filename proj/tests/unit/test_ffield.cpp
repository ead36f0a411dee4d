#include "doctest.h"
#include "mdsfe/error.hpp"
#include "mdsfe/ffield.hpp"

using namespace mdsfe;

TEST_CASE("field construction") {
  auto F5 = Field::build(5, 1);
  CHECK(F5->gen() == 2);
  auto F9 = Field::build(3, 2);
  CHECK(F9->q() == 9);
  CHECK(F9->modulus() == std::vector<int>{1, 0, 1});
  try {
    Field::build(2, 1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == "EvenCharacteristic");
  }
  CHECK_THROWS_AS(Field::build(9, 1), Error);
  // Frobenius on F_9
  for (int a = 0; a < 9; ++a)
    for (int b = 0; b < 9; ++b) CHECK(F9->pow(F9->add(a, b), 3) == F9->add(F9->pow(a, 3), F9->pow(b, 3)));
}

TEST_CASE("characters") {
  auto F5 = Field::build(5, 1);
  auto xi = make_character(F5, 2);
  CHECK(xi.value(2) == CycNum(-1));
  auto chi = make_character(F5, 4);
  CHECK(chi.value(2) == CycNum::zeta(4));
  CHECK_THROWS_AS(make_character(F5, 3), Error);
  CHECK(chi.pow(2).value(3) == xi.value(3));
}

TEST_CASE("Gauss sums") {
  auto F5 = Field::build(5, 1);
  CycNum g = gauss_sum(make_character(F5, 2));
  CHECK(g * g == CycNum(5));
  CHECK(g == CycNum(1) + CycNum(2) * CycNum::zeta(5) + CycNum(2) * CycNum::zeta(5, 4));
  CHECK(gauss_sum(Character{F5, 4, 0}) == CycNum(-1));
  for (long p : {5L, 13L})
    for (long n : {2L, 4L, 6L, 12L}) {
      auto F = Field::build(p, 1);
      if ((p - 1) % n) continue;
      for (long a = 1; a < n; ++a) {
        Character c{F, n, a};
        CHECK(gauss_sum(c) * gauss_sum(c).conj() == CycNum(p));
      }
    }
  auto F9 = Field::build(3, 2);
  for (long a = 1; a < 8; ++a) {
    Character c{F9, 8, a};
    CHECK(gauss_sum(c) * gauss_sum(c).conj() == CycNum(9));
  }
  CHECK(hasse_davenport_check(make_character(F5, 2), 2));
  CHECK(hasse_davenport_check(make_character(F5, 4), 2));
  CHECK(hasse_davenport_check(make_character(F5, 4), 1));
  CHECK(hasse_davenport_check(make_character(F5, 4), 3));
}
