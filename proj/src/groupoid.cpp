#include "mdsfe/groupoid.hpp"

#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "json.hpp"
#include "mdsfe/error.hpp"

namespace mdsfe {

namespace {

long mod(long a, long n) {
  a %= n;
  return a < 0 ? a + n : a;
}

long quad(const BicharState& s, const std::vector<long>& c) {
  long e = 0;
  int r = s.r();
  for (int k = 0; k < r; ++k) {
    if (!c[k]) continue;
    e += mod(c[k] * c[k], s.N) * s.qdiag[k];
    for (int l = k + 1; l < r; ++l) e += mod(c[k] * c[l], s.N) * s.qsym[k][l];
    e %= s.N;
  }
  return mod(e, s.N);
}

void fill_sym_diag(BicharState& s) {
  for (int i = 0; i < s.r(); ++i) s.qsym[i][i] = mod(2 * s.qdiag[i], s.N);
}

IntMatrix identity(int r) {
  IntMatrix I(r, std::vector<long>(r, 0));
  for (int i = 0; i < r; ++i) I[i][i] = 1;
  return I;
}

long least_multiple(long target, long g, long N) {
  long n = N / std::gcd(N, g);
  for (long m = 0; m < n; ++m)
    if (mod(m * g - target, N) == 0) return m;
  return -1;
}

}  // namespace

BicharState bichar_from_matrix(const IntMatrix& M, long n) {
  if (n < 2 || n % 2) fail("InvalidArgument", "gene order must be even");
  int r = (int)M.size();
  BicharState s;
  s.N = n;
  s.qdiag.resize(r);
  s.qsym.assign(r, std::vector<long>(r, 0));
  for (int i = 0; i < r; ++i) {
    if ((int)M[i].size() != r) fail("InvalidArgument", "matrix must be square");
    s.qdiag[i] = mod(M[i][i] + n / 2, n);
    for (int j = 0; j < r; ++j) {
      if (mod(M[i][j] - M[j][i], n)) fail("InvalidArgument", "matrix must be symmetric");
      if (i != j) s.qsym[i][j] = mod(M[i][j], n);
    }
  }
  fill_sym_diag(s);
  s.basis = identity(r);
  for (int i = 0; i < r; ++i)
    if (!s.admissible(i)) fail("InadmissibleDiagonal", "q_ii = 1 at node " + std::to_string(i + 1));
  return s;
}

IntMatrix root_pairing(char type, int r) {
  if (r < 1) fail("UnsupportedType", "rank must be positive");
  IntMatrix P(r, std::vector<long>(r, 0));
  for (int i = 0; i < r; ++i) P[i][i] = 2;
  auto chain = [&](int upto) {
    for (int i = 0; i + 1 < upto; ++i) P[i][i + 1] = P[i + 1][i] = -1;
  };
  switch (type) {
    case 'A':
      chain(r);
      break;
    case 'B':
      if (r < 2) fail("UnsupportedType", "B needs rank >= 2");
      chain(r);
      for (int i = 0; i + 1 < r; ++i) P[i][i] = 4;
      for (int i = 0; i + 2 < r; ++i) P[i][i + 1] = P[i + 1][i] = -2;
      P[r - 2][r - 1] = P[r - 1][r - 2] = -2;
      break;
    case 'C':
      if (r < 2) fail("UnsupportedType", "C needs rank >= 2");
      chain(r);
      P[r - 1][r - 1] = 4;
      P[r - 2][r - 1] = P[r - 1][r - 2] = -2;
      break;
    case 'D':
      if (r < 4) fail("UnsupportedType", "D needs rank >= 4");
      chain(r - 1);
      P[r - 3][r - 1] = P[r - 1][r - 3] = -1;
      break;
    case 'E':
      if (r < 6 || r > 8) fail("UnsupportedType", "E needs rank 6, 7 or 8");
      // Bourbaki labelling: 1-3-4-5-..., 2 attached to 4
      P[0][2] = P[2][0] = -1;
      P[1][3] = P[3][1] = -1;
      for (int i = 2; i + 1 < r; ++i) P[i][i + 1] = P[i + 1][i] = -1;
      break;
    case 'F':
      if (r != 4) fail("UnsupportedType", "F needs rank 4");
      P[0][0] = P[1][1] = 4;
      P[0][1] = P[1][0] = -2;
      P[1][2] = P[2][1] = -2;
      P[2][3] = P[3][2] = -1;
      break;
    case 'G':
      if (r != 2) fail("UnsupportedType", "G needs rank 2");
      P[1][1] = 6;
      P[0][1] = P[1][0] = -3;
      break;
    default:
      fail("UnsupportedType", std::string("unknown type ") + type);
  }
  return P;
}

BicharState bichar_from_cartan(char type, int rank, long N, long qexp) {
  auto P = root_pairing(type, rank);
  BicharState s;
  s.N = N;
  s.qdiag.resize(rank);
  s.qsym.assign(rank, std::vector<long>(rank, 0));
  for (int i = 0; i < rank; ++i) {
    s.qdiag[i] = mod(qexp * (P[i][i] / 2), N);
    for (int j = 0; j < rank; ++j)
      if (i != j) s.qsym[i][j] = mod(qexp * P[i][j], N);
  }
  fill_sym_diag(s);
  s.basis = identity(rank);
  for (int i = 0; i < rank; ++i)
    if (!s.admissible(i)) fail("InadmissibleDiagonal", "q_ii = 1 at node " + std::to_string(i + 1));
  return s;
}

BicharState bichar_from_dynkin(long N, const std::vector<long>& nodes, const std::vector<std::vector<long>>& edges) {
  int r = (int)nodes.size();
  BicharState s;
  s.N = N;
  s.qdiag.resize(r);
  s.qsym.assign(r, std::vector<long>(r, 0));
  for (int i = 0; i < r; ++i) {
    s.qdiag[i] = mod(nodes[i], N);
    for (int j = 0; j < r; ++j) {
      if (mod(edges[i][j] - edges[j][i], N) && i != j) fail("InvalidArgument", "edge labels must be symmetric");
      if (i != j) s.qsym[i][j] = mod(edges[i][j], N);
    }
  }
  fill_sym_diag(s);
  s.basis = identity(r);
  for (int i = 0; i < r; ++i)
    if (!s.admissible(i)) fail("InadmissibleDiagonal", "q_ii = 1 at node " + std::to_string(i + 1));
  return s;
}

long reflection_m(const BicharState& s, int i, int j) {
  if (!s.admissible(i)) fail("Inadmissible", "q_ii = 1 at node " + std::to_string(i + 1));
  for (long m = 0;; ++m)
    if (mod((m + 1) * s.qdiag[i], s.N) == 0 || mod(m * s.qdiag[i] + s.qsym[i][j], s.N) == 0) return m;
}

BicharState reflect(const BicharState& s, int i) {
  int r = s.r();
  if (i < 0 || i >= r) fail("InvalidArgument", "node index out of range");
  if (!s.admissible(i)) fail("Inadmissible", "q_ii = 1 at node " + std::to_string(i + 1));
  IntMatrix P = identity(r);  // columns: new basis in the current one
  P[i][i] = -1;
  for (int j = 0; j < r; ++j)
    if (j != i) P[i][j] = reflection_m(s, i, j);
  auto col = [&](int j) {
    std::vector<long> c(r);
    for (int k = 0; k < r; ++k) c[k] = P[k][j];
    return c;
  };
  BicharState t;
  t.N = s.N;
  t.qdiag.resize(r);
  t.qsym.assign(r, std::vector<long>(r, 0));
  for (int j = 0; j < r; ++j) t.qdiag[j] = quad(s, col(j));
  for (int j = 0; j < r; ++j)
    for (int k = j + 1; k < r; ++k) {
      auto a = col(j), b = col(k);
      std::vector<long> c(r);
      for (int x = 0; x < r; ++x) c[x] = a[x] + b[x];
      t.qsym[j][k] = t.qsym[k][j] = mod(quad(s, c) - t.qdiag[j] - t.qdiag[k], s.N);
    }
  fill_sym_diag(t);
  t.basis.assign(r, std::vector<long>(r, 0));
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int k = 0; k < r; ++k) t.basis[a][b] += s.basis[a][k] * P[k][b];
  return t;
}

long gene_order(const BicharState& s, long gexp) { return s.N / std::gcd(s.N, mod(gexp, s.N)); }

IntMatrix object_matrix(const BicharState& s, long gexp) {
  int r = s.r();
  long g = mod(gexp, s.N);
  if (s.N % 2) fail("NotInGeneGroup", "-1 is not a power of gene");
  IntMatrix M(r, std::vector<long>(r, 0));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      long target = i == j ? s.qdiag[i] + s.N / 2 : s.qsym[i][j];
      long m = least_multiple(target, g, s.N);
      if (m < 0) fail("NotInGeneGroup", "value at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      M[i][j] = m;
    }
  return M;
}

NodeKind classify_reflection(const BicharState& s, int i) {
  if (!s.admissible(i)) fail("Inadmissible", "q_ii = 1 at node " + std::to_string(i + 1));
  if (s.N % 2 == 0 && s.qdiag[i] == s.N / 2) return NodeKind::Dirichlet;
  long g = std::gcd(s.qdiag[i], s.N);
  for (int j = 0; j < s.r(); ++j)
    if (j != i && s.qsym[i][j] % g) return NodeKind::None;
  return NodeKind::Kubota;
}

const char* reflection_kind_name(NodeKind k) { return k == NodeKind::None ? "neither" : node_kind_name(k); }

int GroupoidGraph::object_of(const BicharState& s) const {
  for (size_t o = 0; o < reps.size(); ++o)
    if (reps[o].same_class(s)) return (int)o;
  return -1;
}

GroupoidGraph groupoid_enumerate(const BicharState& s0, long gexp, long cutoff) {
  if (cutoff < 1) fail("InvalidArgument", "cutoff must be positive");
  GroupoidGraph g;
  g.n = gene_order(s0, gexp);
  std::set<IntMatrix> seen;
  std::set<std::tuple<int, int, int>> edge_seen;
  std::deque<BicharState> queue;
  auto add_object = [&](const BicharState& s) {
    int o = g.object_of(s);
    if (o >= 0) return o;
    g.reps.push_back(s);
    g.objects.push_back(object_matrix(s, gexp));
    return (int)g.reps.size() - 1;
  };
  add_object(s0);
  seen.insert(s0.basis);
  g.bases.push_back(s0.basis);
  queue.push_back(s0);
  while (!queue.empty()) {
    BicharState s = queue.front();
    queue.pop_front();
    int from = add_object(s);
    for (int i = 0; i < s.r(); ++i) {
      if (!s.admissible(i)) continue;
      BicharState t = reflect(s, i);
      int to = add_object(t);
      if (edge_seen.insert({from, i, to}).second) g.edges.push_back({from, i, to, classify_reflection(s, i)});
      if (seen.count(t.basis)) continue;
      if ((long)seen.size() >= cutoff) {
        g.truncated = true;
        continue;
      }
      seen.insert(t.basis);
      g.bases.push_back(t.basis);
      queue.push_back(t);
    }
  }
  g.base_count = (long)g.bases.size();
  return g;
}

std::string GroupoidGraph::to_dot() const {
  std::string s = "digraph groupoid {\n";
  for (size_t o = 0; o < objects.size(); ++o)
    s += "  o" + std::to_string(o) + " [label=\"" + matrix_to_string(objects[o]) + "\"];\n";
  for (auto& e : edges)
    s += "  o" + std::to_string(e.from) + " -> o" + std::to_string(e.to) + " [label=\"s_" + std::to_string(e.i + 1) +
         ":" + reflection_kind_name(e.kind) + "\"];\n";
  s += "}\n";
  return s;
}

std::string GroupoidGraph::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  auto objs = nlohmann::ordered_json::array();
  for (size_t o = 0; o < objects.size(); ++o) {
    nlohmann::ordered_json x;
    x["id"] = o;
    x["M"] = matrix_to_string(objects[o]);
    x["qdiag"] = reps[o].qdiag;
    x["qsym"] = reps[o].qsym;
    objs.push_back(x);
  }
  j["N"] = reps.empty() ? 0 : reps[0].N;
  j["objects"] = objs;
  auto es = nlohmann::ordered_json::array();
  for (auto& e : edges)
    es.push_back({{"from", e.from}, {"i", e.i + 1}, {"to", e.to}, {"kind", reflection_kind_name(e.kind)}});
  j["edges"] = es;
  j["base_count"] = base_count;
  j["truncated"] = truncated;
  return j.dump();
}

ConeReport cone_cover_check(const GroupoidGraph& g, long samples, uint64_t seed) {
  if (g.truncated) fail("Truncated", "groupoid enumeration was truncated");
  ConeReport rep;
  if (g.bases.empty()) return rep;
  int r = (int)g.bases[0].size();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> dist(-1000000, 1000000);
  std::vector<long> v(r);
  for (long t = 0; t < samples; ++t) {
    for (auto& x : v) x = dist(rng);
    int cover = 0, interior = 0;
    for (auto& B : g.bases) {
      bool all_ge = true, all_gt = true;
      for (int c = 0; c < r && all_ge; ++c) {
        long d = 0;
        for (int k = 0; k < r; ++k) d += v[k] * B[k][c];
        if (d < 0) all_ge = false;
        if (d <= 0) all_gt = false;
      }
      cover += all_ge;
      interior += all_gt;
    }
    ++rep.samples;
    if (cover == 0) {
      ++rep.uncovered;
      if (rep.ok) rep.detail = "a sample lies in no cone";
      rep.ok = false;
    }
    if (interior > 1) {
      ++rep.overlaps;
      if (rep.ok) rep.detail = "a sample is interior to two cones";
      rep.ok = false;
    }
  }
  return rep;
}

}  // namespace mdsfe
