#include <random>

#include "doctest.h"
#include "mdsfe/error.hpp"
#include "mdsfe/exactnum.hpp"

using namespace mdsfe;

namespace {
CycNum random_cyc(std::mt19937& rng, long m) {
  std::uniform_int_distribution<int> d(-5, 5);
  CycNum r;
  for (int k = 0; k < 4; ++k) r += CycNum::zeta(m, d(rng) + 10) * CycNum(Rat(d(rng), 1 + (d(rng) + 5)));
  return r;
}
}  // namespace

TEST_CASE("cyclotomic basics") {
  CHECK(CycNum::zeta(4) * CycNum::zeta(4) == CycNum(-1));
  CHECK(CycNum::zeta(5).conj() * CycNum::zeta(5) == CycNum(1));
  CHECK((CycNum(1) + CycNum::zeta(3) + CycNum::zeta(3, 2)).is_zero());
  CHECK(CycNum::zeta(6) == -CycNum::zeta(3, 2));
  CHECK(CycNum::zeta(12, 3) == CycNum::zeta(4));
  CHECK((CycNum::zeta(8) + CycNum::zeta(8, -1)).pow(2) == CycNum(2));
  CHECK_THROWS_AS(CycNum(0).inverse(), Error);
}

TEST_CASE("cyclotomic ring axioms on random samples") {
  std::mt19937 rng(7);
  for (long m : {5L, 12L, 20L, 15L}) {
    for (int t = 0; t < 10; ++t) {
      CycNum a = random_cyc(rng, m), b = random_cyc(rng, m), c = random_cyc(rng, 20);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a * b).conj() == a.conj() * b.conj());
      CHECK(a.conj().conj() == a);
      if (!a.is_zero()) CHECK(a * a.inverse() == CycNum(1));
      auto ea = cyc_embed(a), eb = cyc_embed(b), eab = cyc_embed(a * b);
      auto prod = ea.value() * eb.value();
      CHECK(std::abs(prod - eab.value()) < 1e-12L);
    }
  }
}

TEST_CASE("cyclotomic json round trip and embedding") {
  CycNum z = CycNum::zeta(20, 3) * CycNum(Rat(2, 3)) + CycNum(1);
  CHECK(CycNum::from_json(z.to_json()) == z);
  auto e = cyc_embed(CycNum::zeta(4), 40);
  CHECK(std::abs(e.re) <= e.eps);
  CHECK(std::abs(e.im - 1) <= e.eps);
  CycNum::conductor_bound = 100;
  CHECK_THROWS_AS(CycNum::zeta(101), Error);
  CycNum::conductor_bound = 10000;
}
