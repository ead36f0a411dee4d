#include "doctest.h"
#include "mdsfe/error.hpp"
#include "mdsfe/feq.hpp"

#include <tuple>

using namespace mdsfe;

namespace {

CycNum Q(long a) { return CycNum(Rat(a)); }

}  // namespace

TEST_CASE("rational functions") {
  auto f = RatFn::geometric(Q(1), 1);
  CHECK(f.project(0, 2) == RatFn::geometric(Q(1), 2));
  RatFn s;
  for (int k = 0; k < 3; ++k) s = s + f.project(k, 3);
  CHECK(s == f);
  auto e = RatFn::geometric(Q(3), 1).expand(4);
  CHECK(e[4] == Q(81));
  auto g = RatFn(LPoly::monomial(1, Q(2)), {{Q(5), 2}});
  CHECK(g.subst_inverse(Q(7)).subst_inverse(Q(7)) == g);
}

TEST_CASE("reflections of the rank two example") {
  auto A = parse_matrix("0,1;1,0", 4);
  auto B = tau_apply(0, A, 4);
  CHECK(B == parse_matrix("0,3;3,3", 4));
  CHECK(tau_apply(1, A, 4) == parse_matrix("3,3;3,0", 4));
  CHECK(tau_apply(0, B, 4) == A);
  CHECK_THROWS_AS(tau_apply(1, B, 4), Error);
  auto cfg = make_config(5, 1, 4, A);
  CHECK(reflection_closure(cfg).size() == 3);
  CHECK(classify_node(cfg.with_matrix(B), 1) == NodeKind::Kubota);
  CHECK(classify_node(cfg, 0) == NodeKind::Dirichlet);
}

TEST_CASE("sigma on monomials") {
  auto cfg = make_config(5, 1, 4, parse_matrix("0,1;1,0", 4));
  auto m = sigma_apply(NodeKind::Dirichlet, 0, cfg);
  CHECK(m.image({2, 3}) == Exps{1, 3});
  CHECK(m.scalar({1, 0}) == Q(5).inverse());
  auto B = cfg.with_matrix(parse_matrix("0,3;3,3", 4));
  auto k = sigma_apply(NodeKind::Kubota, 1, B);
  CHECK(k.image({2, 1}) == Exps{2, 1});
  CHECK_THROWS_AS(sigma_apply(NodeKind::Kubota, 0, cfg), Error);
}

TEST_CASE("kubota gamma entry") {
  auto c1 = make_config(5, 1, 4, {{3}});
  auto G = kubota_gamma_u(c1, 0, 0);
  CHECK(G.size() == 4);
  auto inv = mat_mul(G, mat_subst_inverse(G, Q(1)));
  CHECK(is_identity(inv));
  auto S = scattering_kubota(c1, 0, 1);
  CycNum g = gauss_sum(c1.diag_char(0));
  auto back = mat_mul(S.entries, mat_subst_inverse(S.entries, g * g / Q(25)));
  CHECK(is_identity(back));
}

TEST_CASE("theta printed against projection") {
  auto cfg = make_config(5, 1, 4, parse_matrix("0,1;1,0", 4));
  for (long K = 0; K < 8; ++K) {
    auto S = scattering_dirichlet(cfg, 0, {0, (int)K}, nullptr, true);
    CHECK(S.entries == dirichlet_theta_printed(4, Q(5), S.K, S.b));
  }
}

TEST_CASE("solver on the trivial rank one case") {
  auto cfg = make_config(5, 1, 2, {{0}});
  SolveOptions opt;
  opt.D = 5;
  opt.seed_bound = 1;
  auto R = fe_solve(cfg, false, Poly(), opt);
  CHECK(R.converged);
  for (int d = 0; d <= 5; ++d) CHECK(*R.set.get(0, {d}) == Q(5).pow(d));
}

TEST_CASE("expanded kubota matrix against the explicit formula") {
  for (auto [p, n, M] : {std::tuple<long, long, const char*>{5, 4, "3"}, {13, 6, "1,4;4,1"}}) {
    auto cfg = make_config(p, 1, n, parse_matrix(M, n));
    long ni = mds_params(cfg).ni[0];
    for (long K = 0; K < n; ++K) {
      auto E = expand_operator(scattering_kubota(cfg, 0, K).entries, ni, n, K);
      CHECK(E == kubota_expanded_printed(cfg, 0, K));
    }
  }
  RatMatrix bad(1, std::vector<RatFn>(1, RatFn::monomial(0)));
  CHECK_NOTHROW(expand_operator(bad, 1, 2, 0));
  RatMatrix off(2, std::vector<RatFn>(2));
  off[0][0] = RatFn::monomial(1);
  CHECK_THROWS_AS(expand_operator(off, 2, 4, 0), Error);
}
