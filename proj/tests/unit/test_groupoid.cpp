#include <cmath>

#include "doctest.h"
#include "mdsfe/error.hpp"
#include "mdsfe/groupoid.hpp"

using namespace mdsfe;

TEST_CASE("bicharacter from a matrix") {
  auto s = bichar_from_matrix(parse_matrix("0,1;1,0", 4), 4);
  CHECK(s.diag(0) == CycNum(-1));
  CHECK(s.sym(0, 1) == CycNum::zeta(4));
  CHECK(object_matrix(s) == parse_matrix("0,1;1,0", 4));
  CHECK_THROWS_AS(bichar_from_matrix(parse_matrix("2,1;1,0", 4), 4), Error);
}

TEST_CASE("reflections") {
  auto a2 = bichar_from_cartan('A', 2, 10, 2);
  CHECK(a2.diag(0) == CycNum::zeta(5));
  CHECK(a2.sym(0, 1) == CycNum::zeta(5).pow(-1));
  CHECK(reflection_m(a2, 0, 1) == 1);
  auto t = reflect(a2, 0);
  CHECK(t.basis == IntMatrix{{-1, 1}, {0, 1}});
  CHECK(reflect(t, 0).basis == a2.basis);
  CHECK(t.same_class(a2));
  auto s = bichar_from_matrix(parse_matrix("0,1;1,0", 4), 4);
  CHECK(object_matrix(reflect(s, 0)) == parse_matrix("0,3;3,3", 4));
  CHECK(classify_reflection(s, 0) == NodeKind::Dirichlet);
  auto b = reflect(s, 0);
  CHECK(classify_reflection(b, 1) == NodeKind::Kubota);
  CHECK(object_matrix(reflect(b, 1)) == object_matrix(b));
  auto odd = bichar_from_dynkin(15, {3, 3}, {{0, 5}, {5, 0}});
  CHECK(classify_reflection(odd, 0) == NodeKind::None);
  CHECK_THROWS_AS(object_matrix(odd), Error);
}

TEST_CASE("enumeration and output") {
  auto g = groupoid_enumerate(bichar_from_matrix(parse_matrix("0,1;1,0", 4), 4), 1, 100);
  CHECK(g.objects.size() == 3);
  CHECK(g.base_count == 6);
  CHECK(g.to_dot().find("s_2:kubota") != std::string::npos);
  auto h = groupoid_enumerate(bichar_from_cartan('A', 2, 10, 2), 1, 3);
  CHECK(h.truncated);
  CHECK_THROWS_AS(cone_cover_check(h, 10), Error);
  auto k = groupoid_enumerate(bichar_from_cartan('B', 2, 14, 2), 1, 100);
  CHECK(k.base_count == 8);
  CHECK(cone_cover_check(k, 2000).ok);
}

TEST_CASE("sigma against the basis reflection") {
  long q = 5, n = 4;
  auto s0 = bichar_from_matrix(parse_matrix("0,1;1,0", n), n);
  std::vector<BicharState> states = {s0, reflect(s0, 0), reflect(s0, 1)};
  double x[2] = {0.37, 1.9};
  auto pair = [&](double a0, double a1, const double* y) {
    return a0 * std::log(std::sqrt((double)q) * std::fabs(y[0])) + a1 * std::log(std::sqrt((double)q) * std::fabs(y[1]));
  };
  for (auto& s : states) {
    auto cfg = make_config(q, 1, n, object_matrix(s));
    for (int i = 0; i < 2; ++i) {
      auto kind = classify_reflection(s, i);
      auto m = sigma_apply(kind, i, cfg);
      auto absval = [](const CycNum& c) { return (double)std::abs(cyc_embed(c).value()); };
      int j = 1 - i;
      double y[2];
      y[i] = absval(m.base[i]) / x[i];
      y[j] = absval(m.base[j]) * x[j] * std::pow(x[i], (double)m.shift[j]);
      long mij = reflection_m(s, i, j);
      // s(e_i) = -e_i, s(e_j) = e_j + m_ij e_i
      double lhs_i = -pair(i == 0, i == 1, x);
      double lhs_j = pair(j == 0, j == 1, x) + mij * pair(i == 0, i == 1, x);
      CHECK(std::fabs(lhs_i - pair(i == 0, i == 1, y)) < 1e-9);
      CHECK(std::fabs(lhs_j - pair(j == 0, j == 1, y)) < 1e-9);
    }
  }
}
