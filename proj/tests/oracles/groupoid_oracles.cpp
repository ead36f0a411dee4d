#include <map>
#include <random>
#include <set>
#include <string>

#include "mdsfe/error.hpp"
#include "mdsfe/groupoid.hpp"
#include "oracles.hpp"

namespace mdsfe::oracle {

namespace {

long md(long a, long n) {
  a %= n;
  return a < 0 ? a + n : a;
}

struct Fixture {
  std::string name;
  BicharState state;
};

// Printed diagrams: node labels and edge labels as exponents of zeta_N.
BicharState dynkin(long N, std::vector<long> nodes, std::vector<std::tuple<int, int, long>> edges) {
  int r = (int)nodes.size();
  std::vector<std::vector<long>> E(r, std::vector<long>(r, 0));
  for (auto [a, b, v] : edges) E[a][b] = E[b][a] = v;
  return bichar_from_dynkin(N, nodes, E);
}

std::vector<Fixture> printed_diagrams() {
  std::vector<Fixture> f;
  for (long n : {2L, 4L, 6L, 8L}) {
    f.push_back({"rank two example n=" + std::to_string(n), bichar_from_matrix({{0, 1}, {1, 0}}, n)});
    f.push_back({"rank two example, first reflection n=" + std::to_string(n),
                 bichar_from_matrix({{0, n - 1}, {n - 1, 1 + n / 2}}, n)});
    f.push_back({"rank two example, second reflection n=" + std::to_string(n),
                 bichar_from_matrix({{1 + n / 2, n - 1}, {n - 1, 0}}, n)});
  }
  // g(2,3), zeta = gene^2 with gene of order 6
  f.push_back({"g(2,3) top left", dynkin(6, {3, 2, 3}, {{0, 1, 4}, {1, 2, 2}})});
  f.push_back({"g(2,3) top right", dynkin(6, {3, 3, 3}, {{0, 1, 2}, {1, 2, 2}})});
  f.push_back({"g(2,3) bottom left", dynkin(6, {3, 1, 3}, {{0, 1, 4}, {1, 2, 4}})});
  f.push_back({"g(2,3) bottom right", dynkin(6, {2, 2, 3}, {{0, 1, 4}, {1, 2, 4}, {0, 2, 4}})});
  f.push_back({"g(4,3)", dynkin(6, {3, 3, 3, 3}, {{0, 1, 4}, {1, 2, 2}, {2, 3, 2}})});
  // G(3) with a parameter of order 6, 5 and 8
  for (long N : {6L, 10L, 8L}) {
    long a = N == 10 ? 2 : 1;
    f.push_back({"G(3) N=" + std::to_string(N),
                 dynkin(N, {N / 2, N / 2, md(3 * a, N)}, {{0, 1, a}, {1, 2, md(-3 * a, N)}})});
  }
  // super type A with all nodes -1, and the fourth-root D family
  for (long n : {4L, 6L}) {
    f.push_back({"A(2|1) n=" + std::to_string(n), bichar_from_matrix({{0, n - 1, 0}, {n - 1, 0, 1}, {0, 1, 0}}, n)});
    f.push_back({"A(2|2) n=" + std::to_string(n),
                 bichar_from_matrix({{0, 1, 0, 0}, {1, 0, n - 1, 0}, {0, n - 1, 0, 1}, {0, 0, 1, 0}}, n)});
  }
  f.push_back({"D(1|2)", bichar_from_matrix({{0, 1, 0}, {1, 0, 2}, {0, 2, 0}}, 4)});
  f.push_back({"D(2|2)", bichar_from_matrix({{0, 3, 0, 0}, {3, 0, 1, 0}, {0, 1, 0, 2}, {0, 0, 2, 0}}, 4)});
  // Cartan type at a generic parameter
  for (auto [t, r] : {std::pair<char, int>{'A', 2}, {'A', 3}, {'B', 2}, {'C', 3}, {'D', 4}, {'G', 2}})
    f.push_back({std::string("Cartan ") + t + std::to_string(r), bichar_from_cartan(t, r, 14, 2)});
  return f;
}

// Quadratic form of the original bicharacter on a vector in original coordinates.
long quad0(const BicharState& s0, const std::vector<long>& c) {
  long e = 0;
  for (int k = 0; k < s0.r(); ++k) {
    e += md(c[k] * c[k], s0.N) * s0.qdiag[k];
    for (int l = k + 1; l < s0.r(); ++l) e += md(c[k] * c[l], s0.N) * s0.qsym[k][l];
    e %= s0.N;
  }
  return md(e, s0.N);
}

// All states reachable, recomputed from the original bicharacter at every step.
std::vector<BicharState> states_of(const BicharState& s0, long cutoff) {
  std::vector<BicharState> out = {s0};
  std::set<IntMatrix> seen = {s0.basis};
  for (size_t k = 0; k < out.size() && (long)out.size() < cutoff; ++k)
    for (int i = 0; i < s0.r(); ++i) {
      if (!out[k].admissible(i)) continue;
      auto t = reflect(out[k], i);
      if (seen.insert(t.basis).second) out.push_back(t);
    }
  return out;
}

}  // namespace

Outcome groupoid_suite() {
  Outcome out;
  for (long n : {4L, 6L}) {
    IntMatrix A = {{0, 1}, {1, 0}};
    auto g = groupoid_enumerate(bichar_from_matrix(A, n), 1, 5000);
    std::set<IntMatrix> want = {A, {{0, n - 1}, {n - 1, 1 + n / 2}}, {{1 + n / 2, n - 1}, {n - 1, 0}}};
    std::set<IntMatrix> got(g.objects.begin(), g.objects.end());
    out.checked++;
    if (g.objects.size() != 3 || got != want) out.fail("rank two example: objects differ from the figure");
    // (from, node, to, kind) with objects named by matrix
    std::set<std::tuple<IntMatrix, int, IntMatrix, NodeKind>> edges, expect;
    for (auto& e : g.edges) edges.insert({g.objects[e.from], e.i, g.objects[e.to], e.kind});
    IntMatrix B = {{0, n - 1}, {n - 1, 1 + n / 2}}, C = {{1 + n / 2, n - 1}, {n - 1, 0}};
    expect = {{A, 0, B, NodeKind::Dirichlet}, {B, 0, A, NodeKind::Dirichlet}, {A, 1, C, NodeKind::Dirichlet},
              {C, 1, A, NodeKind::Dirichlet}, {B, 1, B, NodeKind::Kubota},    {C, 0, C, NodeKind::Kubota}};
    out.checked++;
    if (edges != expect || g.edges.size() != 6) out.fail("rank two example: edges differ from the figure");
  }
  for (long N : {10L, 12L, 14L, 16L}) {
    auto g = groupoid_enumerate(bichar_from_cartan('A', 2, N, 2), 1, 5000);
    out.checked++;
    if (g.objects.size() != 1 || g.base_count != 6 || g.truncated)
      out.fail("A2 at order " + std::to_string(N / 2) + ": " + std::to_string(g.objects.size()) + " objects, " +
               std::to_string(g.base_count) + " bases");
  }
  {
    auto g = groupoid_enumerate(bichar_from_matrix({{0, 2, 0}, {2, 0, 2}, {0, 2, 0}}, 6), 1, 5000);
    out.checked++;
    if (g.objects.size() != 5 || g.truncated) out.fail("g(2,3): " + std::to_string(g.objects.size()) + " objects");
    std::set<IntMatrix> got(g.objects.begin(), g.objects.end());
    for (IntMatrix M : {IntMatrix{{0, 2, 0}, {2, 0, 2}, {0, 2, 0}}, IntMatrix{{0, 4, 0}, {4, 4, 4}, {0, 4, 0}},
                        IntMatrix{{5, 4, 4}, {4, 0, 4}, {4, 4, 5}}, IntMatrix{{0, 4, 0}, {4, 5, 2}, {0, 2, 0}}}) {
      out.checked++;
      if (!got.count(M)) out.fail("g(2,3): missing object " + matrix_to_string(M));
    }
  }
  for (auto& fx : printed_diagrams()) {
    for (int i = 0; i < fx.state.r(); ++i) {
      out.checked++;
      if (classify_reflection(fx.state, i) == NodeKind::None)
        out.fail(fx.name + ": node " + std::to_string(i + 1) + " is neither Kubota nor Dirichlet");
    }
    auto g = groupoid_enumerate(fx.state, 1, 20000);
    out.checked++;
    if (g.truncated) out.fail(fx.name + ": enumeration truncated");
    for (auto& e : g.edges) {
      out.checked++;
      if (e.kind == NodeKind::None) out.fail(fx.name + ": an enumerated node is neither type");
    }
  }
  return out;
}

Outcome bicharacter_suite() {
  Outcome out;
  for (auto& fx : printed_diagrams()) {
    const BicharState& s0 = fx.state;
    long n = gene_order(s0);
    for (auto& s : states_of(s0, 20000)) {
      // data on the basis agrees with the original bicharacter
      int r = s.r();
      for (int a = 0; a < r; ++a) {
        std::vector<long> ca(r);
        for (int k = 0; k < r; ++k) ca[k] = s.basis[k][a];
        out.checked++;
        if (quad0(s0, ca) != s.qdiag[a]) out.fail(fx.name + ": diagonal value differs from the bicharacter");
      }
      IntMatrix M = object_matrix(s);
      auto P = mds_params(M, n);
      for (int i = 0; i < r; ++i) {
        auto kind = classify_reflection(s, i);
        auto t = reflect(s, i);
        out.checked++;
        if (reflect(t, i).basis != s.basis) out.fail(fx.name + ": reflection is not involutive");
        IntMatrix Mt = object_matrix(t);
        if (kind == NodeKind::Kubota) {
          out.checked++;
          if (Mt != M) out.fail(fx.name + ": Kubota reflection changes M");
          if (!P.kubota_ok(i)) out.fail(fx.name + ": Kubota node without n_ij");
        } else if (kind == NodeKind::Dirichlet) {
          out.checked++;
          if (Mt != tau_apply(i, M, n)) out.fail(fx.name + ": Dirichlet reflection differs from tau_i");
        }
        for (int j = 0; j < r; ++j) {
          if (j == i) continue;
          long m = reflection_m(s, i, j);
          long want = kind == NodeKind::Kubota ? P.nij[i][j] : P.eij[i][j];
          out.checked++;
          if (m != want)
            out.fail(fx.name + ": m_" + std::to_string(i + 1) + std::to_string(j + 1) + " = " + std::to_string(m) +
                     ", expected " + std::to_string(want));
        }
      }
    }
  }
  return out;
}

Outcome cone_suite() {
  Outcome out;
  std::vector<std::pair<std::string, BicharState>> cases = {
      {"A2", bichar_from_cartan('A', 2, 10, 2)},
      {"rank two example n=4", bichar_from_matrix({{0, 1}, {1, 0}}, 4)},
      {"rank two example n=6", bichar_from_matrix({{0, 1}, {1, 0}}, 6)},
      {"g(2,3)", bichar_from_matrix({{0, 2, 0}, {2, 0, 2}, {0, 2, 0}}, 6)}};
  std::mt19937_64 rng(20240607);
  for (auto& [name, s] : cases) {
    auto g = groupoid_enumerate(s, 1, 20000);
    int r = s.r();
    std::uniform_int_distribution<long> num(-999983, 999983), den(1, 997);
    long uncovered = 0, overlaps = 0;
    for (int t = 0; t < 10000; ++t) {
      // rational sample; positive denominators do not change signs
      std::vector<Rat> v(r);
      for (auto& x : v) x = Rat(num(rng), den(rng));
      int cover = 0, interior = 0;
      for (auto& B : g.bases) {
        bool ge = true, gt = true;
        for (int c = 0; c < r; ++c) {
          Rat d = 0;
          for (int k = 0; k < r; ++k) d += v[k] * Rat(B[k][c]);
          if (d < 0) ge = false;
          if (d <= 0) gt = false;
        }
        cover += ge;
        interior += gt;
      }
      out.checked++;
      if (!cover) ++uncovered;
      if (interior > 1) ++overlaps;
    }
    if (uncovered) out.fail(name + ": " + std::to_string(uncovered) + " samples in no cone");
    if (overlaps) out.fail(name + ": " + std::to_string(overlaps) + " samples interior to two cones");
    auto rep = cone_cover_check(g, 10000, 7);
    out.checked += rep.samples;
    if (!rep.ok) out.fail(name + ": " + rep.detail);
  }
  // A2: the bases are exactly the simple systems of the Weyl group
  {
    auto g = groupoid_enumerate(bichar_from_cartan('A', 2, 10, 2), 1, 5000);
    auto P = root_pairing('A', 2);
    auto refl = [&](const std::vector<long>& x, int a) {
      long c = x[0] * P[0][a] + x[1] * P[1][a];
      auto y = x;
      y[a] -= c;
      return y;
    };
    std::set<IntMatrix> chambers;
    std::vector<std::pair<std::vector<long>, std::vector<long>>> frontier = {{{1, 0}, {0, 1}}};
    while (!frontier.empty()) {
      auto [a, b] = frontier.back();
      frontier.pop_back();
      IntMatrix B = {{a[0], b[0]}, {a[1], b[1]}};
      if (!chambers.insert(B).second) continue;
      for (int w = 0; w < 2; ++w) frontier.push_back({refl(a, w), refl(b, w)});
    }
    std::set<IntMatrix> got(g.bases.begin(), g.bases.end());
    out.checked++;
    if (got != chambers) out.fail("A2: bases differ from the Weyl chambers");
  }
  return out;
}

}  // namespace mdsfe::oracle
