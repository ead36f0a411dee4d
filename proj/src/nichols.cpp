#include "mdsfe/nichols.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "mdsfe/error.hpp"

namespace mdsfe {

namespace {

long mod(long a, long n) {
  a %= n;
  return a < 0 ? a + n : a;
}

std::string vec_str(const std::vector<long>& v) {
  std::string s = "(";
  for (size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s + ")";
}

Rat frac(long a, long b) {
  Rat q(a, b);
  q.canonicalize();
  return q;
}

bool is_zero(const Rat& a) { return a == 0; }
bool is_zero(const CycNum& a) { return a.is_zero(); }

// Row-reduce a copy; rows may be ragged-free dense vectors.
template <class T>
long rank_of(std::vector<std::vector<T>> A) {
  if (A.empty()) return 0;
  size_t cols = A[0].size();
  long rank = 0;
  for (size_t c = 0; c < cols && rank < (long)A.size(); ++c) {
    size_t p = rank;
    while (p < A.size() && is_zero(A[p][c])) ++p;
    if (p == A.size()) continue;
    std::swap(A[p], A[rank]);
    T inv = T(1) / A[rank][c];
    for (size_t k = c; k < cols; ++k) A[rank][k] *= inv;
    for (size_t q = 0; q < A.size(); ++q) {
      if ((long)q == rank || is_zero(A[q][c])) continue;
      T f = A[q][c];
      for (size_t k = c; k < cols; ++k) A[q][k] -= f * A[rank][k];
    }
    ++rank;
  }
  return rank;
}

// Solve A x = b for square invertible A over Q.
std::vector<Rat> solve_rat(std::vector<std::vector<Rat>> A, std::vector<Rat> b) {
  size_t n = A.size();
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && A[p][c] == 0) ++p;
    if (p == n) fail("Singular", "basis matrix is singular");
    std::swap(A[p], A[c]);
    std::swap(b[p], b[c]);
    for (size_t q = 0; q < n; ++q) {
      if (q == c || A[q][c] == 0) continue;
      Rat f = A[q][c] / A[c][c];
      for (size_t k = c; k < n; ++k) A[q][k] -= f * A[c][k];
      b[q] -= f * b[c];
    }
  }
  for (size_t c = 0; c < n; ++c) b[c] /= A[c][c];
  return b;
}

long node_order(const BicharState& s, int i) { return s.N / std::gcd(s.qdiag[i], s.N); }

long dtilde(const BicharState& s, int i, const std::vector<long>& d) {
  long t = 0;
  for (int k = 0; k < s.r(); ++k)
    if (k != i) t += d[k] * reflection_m(s, i, k);
  return t;
}

bool dirichlet_special(const BicharState& s, int i, const std::vector<long>& d) {
  long e = 0;
  for (int k = 0; k < s.r(); ++k)
    if (k != i) e += d[k] * s.qsym[i][k];
  return mod(e, s.N) == 0;
}

std::vector<long> with(std::vector<long> d, int i, long v) {
  d[i] = v;
  return d;
}

struct Tie {};

class Walker {
 public:
  Walker(const GroupoidGraph& g, const BettiOptions& opt, long cap) : g_(g), cap_(cap), rng_(opt.seed) {
    plain_ = opt.seed == 1;
    reseed();
  }

  long value(long j, int obj, const std::vector<long>& d, const BicharState& st) {
    if (j < 0) return 0;
    for (long x : d)
      if (x < 0) return 0;
    if (std::all_of(d.begin(), d.end(), [](long x) { return x == 0; })) return j == 0 ? 1 : 0;
    auto key = std::make_tuple(j, obj, d);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    for (int attempt = 0;; ++attempt) {
      try {
        return walk(j, obj, d, st);
      } catch (const Tie&) {
        if (attempt > 32) fail("NotAnchored", "walk direction stays degenerate at " + vec_str(d));
        plain_ = false;
        reseed();
      }
    }
  }

  long walks = 0, steps = 0;

 private:
  const GroupoidGraph& g_;
  long cap_;
  std::mt19937_64 rng_;
  bool plain_ = true;
  std::vector<Rat> weights_, pert_;
  std::map<std::tuple<long, int, std::vector<long>>, long> memo_;
  std::map<IntMatrix, BicharState> cache_;

  void reseed() {
    int r = g_.reps.empty() ? 0 : g_.reps[0].r();
    weights_.assign(r, Rat(1));
    pert_.assign(r, Rat(0));
    for (int k = 0; k < r; ++k) {
      pert_[k] = frac((long)(rng_() % 2001) - 1000, 7919);
      if (!plain_) weights_[k] = frac((long)(rng_() % 997) + 1, (long)(rng_() % 89) + 1);
    }
  }

  const BicharState& reflected(const BicharState& s, int i) {
    IntMatrix key = s.basis;
    key.push_back({(long)i});
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, reflect(s, i)).first;
    return it->second;
  }

  struct Step {
    int obj;
    std::vector<long> d;
    long correction;
  };

  long walk(long j, int obj, const std::vector<long>& d0, const BicharState& st0) {
    ++walks;
    int r = st0.r();
    // start point x with x . e_k = weights_k, direction -beta + perturbation
    std::vector<std::vector<Rat>> BT(r, std::vector<Rat>(r));
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) BT[a][b] = st0.basis[b][a];
    std::vector<Rat> x = solve_rat(BT, weights_);
    std::vector<Rat> beta(r, Rat(0));
    for (int a = 0; a < r; ++a)
      for (int k = 0; k < r; ++k) beta[a] += Rat(st0.basis[a][k] * d0[k]);
    std::vector<Rat> dir(r);
    Rat scale = 1;
    for (;;) {
      Rat dot = 0;
      for (int a = 0; a < r; ++a) {
        dir[a] = -beta[a] + scale * pert_[a];
        dot += dir[a] * beta[a];
      }
      if (dot < 0) break;
      scale /= 2;
    }

    std::vector<Step> path;
    const BicharState* cur = &st0;
    int o = obj;
    std::vector<long> d = d0;
    long anchor = 0;
    for (long step = 0;; ++step) {
      bool neg = std::any_of(d.begin(), d.end(), [](long v) { return v < 0; });
      bool zero = std::all_of(d.begin(), d.end(), [](long v) { return v == 0; });
      if (neg || zero) {
        anchor = (zero && j == 0) ? 1 : 0;
        break;
      }
      auto it = memo_.find(std::make_tuple(j, o, d));
      if (it != memo_.end() && step > 0) {
        anchor = it->second;
        break;
      }
      if (step >= cap_) fail("NotAnchored", "no anchor within " + std::to_string(cap_) + " steps from " + vec_str(d0));
      // first wall hit along x + s dir
      int wall = -1;
      Rat best;
      bool tie = false;
      for (int k = 0; k < r; ++k) {
        Rat xe = 0, de = 0;
        for (int a = 0; a < r; ++a) {
          xe += x[a] * cur->basis[a][k];
          de += dir[a] * cur->basis[a][k];
        }
        if (de >= 0) continue;
        Rat sk = -xe / de;
        if (wall < 0 || sk < best) {
          wall = k;
          best = sk;
          tie = false;
        } else if (sk == best) {
          tie = true;
        }
      }
      if (wall < 0) fail("NotAnchored", "ray leaves the groupoid cones from " + vec_str(d0));
      if (tie) throw Tie{};
      int i = wall;
      NodeKind kind = classify_reflection(*cur, i);
      if (kind == NodeKind::None) fail("Unclassifiable", "node " + std::to_string(i + 1) + " is neither Kubota nor Dirichlet");
      const BicharState& nxt = reflected(*cur, i);
      int o2 = g_.object_of(nxt);
      if (o2 < 0) fail("NotAnchored", "reflection leaves the enumerated groupoid");
      long dt = dtilde(*cur, i, d);
      long di = d[i], di2, corr = 0;
      if (kind == NodeKind::Kubota) {
        long ni = node_order(*cur, i);
        di2 = dt - di - mod(dt - 2 * di, ni);
        long sh = mod(2 * di - 1 - dt, ni);
        if (sh != 0)
          corr = value(j - 1, o, with(d, i, di - sh), *cur) - value(j - 1, o2, with(d, i, dt + 1 - di - ni), nxt);
      } else if (dirichlet_special(*cur, i, d)) {
        di2 = dt - di;
        corr = value(j - 1, o, with(d, i, di - 1), *cur) - value(j - 1, o2, with(d, i, dt - di - 1), nxt);
      } else {
        di2 = dt - di - 1;
      }
      path.push_back({o, d, corr});
      ++steps;
      d[i] = di2;
      o = o2;
      cur = &nxt;
    }
    long acc = anchor;
    for (auto p = path.rbegin(); p != path.rend(); ++p) {
      acc += p->correction;
      if (acc < 0)
        fail("RelationViolated", "negative value " + std::to_string(acc) + " forced at j=" + std::to_string(j) +
                                     " object " + std::to_string(p->obj) + " d=" + vec_str(p->d));
      memo_[std::make_tuple(j, p->obj, p->d)] = acc;
    }
    return acc;
  }
};

void for_box(int r, long lo, long hi, const std::function<void(const std::vector<long>&)>& f) {
  std::vector<long> d(r, lo);
  for (;;) {
    f(d);
    int k = 0;
    while (k < r && d[k] == hi) d[k++] = lo;
    if (k == r) return;
    ++d[k];
  }
}

}  // namespace

bool BettiTable::in_range(long j, const std::vector<long>& d) const {
  if (j > jmax) return false;
  for (long x : d)
    if (x > dmax) return false;
  return true;
}

long BettiTable::at(long j, const std::vector<long>& d) const {
  if (j < 0) return 0;
  for (long x : d)
    if (x < 0) return 0;
  auto it = entries.find({j, d});
  if (it == entries.end()) fail("Unknown", "entry j=" + std::to_string(j) + " d=" + vec_str(d) + " not filled");
  return it->second;
}

BettiResult betti_solve(const BicharState& s, long gexp, long dmax, long jmax, const BettiOptions& opt) {
  if (dmax < 0 || jmax < 0) fail("InvalidArgument", "bounds must be nonnegative");
  BettiResult res;
  res.graph = groupoid_enumerate(s, gexp, opt.cutoff);
  if (res.graph.truncated) fail("Truncated", "groupoid exceeds the cutoff");
  for (auto& e : res.graph.edges)
    if (e.kind == NodeKind::None)
      fail("Unclassifiable", "edge from object " + std::to_string(e.from) + " at node " + std::to_string(e.i + 1));
  int r = s.r();
  long objs = (long)res.graph.reps.size();
  long cap = opt.step_cap > 0 ? opt.step_cap
                              : std::max<long>({64, (dmax + 1) * objs * r, res.graph.base_count + 1});
  Walker w(res.graph, opt, cap);
  for (int o = 0; o < objs; ++o) {
    BettiTable t;
    t.object = o;
    t.r = r;
    t.jmax = jmax;
    t.dmax = dmax;
    for (long j = 0; j <= jmax; ++j)
      for_box(r, 0, dmax, [&](const std::vector<long>& d) { t.entries[{j, d}] = w.value(j, o, d, res.graph.reps[o]); });
    res.tables.push_back(std::move(t));
  }
  res.walks = w.walks;
  res.steps = w.steps;
  return res;
}

RelationReport betti_relations_check(const BettiResult& res, int i) {
  RelationReport rep;
  const auto& g = res.graph;
  for (size_t o = 0; o < g.reps.size(); ++o) {
    const BicharState& s = g.reps[o];
    if (i < 0 || i >= s.r()) fail("InvalidArgument", "node index out of range");
    NodeKind kind = classify_reflection(s, i);
    if (kind == NodeKind::None) fail("Unclassifiable", "node " + std::to_string(i + 1));
    BicharState t = reflect(s, i);
    int o2 = g.object_of(t);
    const BettiTable& A = res.tables[o];
    const BettiTable& B = res.tables[o2];
    long ni = node_order(s, i);
    auto term = [&](const BettiTable& T, long j, const std::vector<long>& d, bool& ok) -> long {
      bool neg = j < 0 || std::any_of(d.begin(), d.end(), [](long v) { return v < 0; });
      if (neg) return 0;
      if (!T.in_range(j, d)) {
        ok = false;
        return 0;
      }
      return T.at(j, d);
    };
    for (long j = 0; j <= A.jmax; ++j) {
      for_box(s.r(), 0, A.dmax, [&](const std::vector<long>& d) {
        long dt = dtilde(s, i, d), di = d[i];
        bool ok = true;
        long lhs, rhs;
        const char* which;
        if (kind == NodeKind::Kubota) {
          if (mod(2 * di - 1 - dt, ni) == 0) {
            which = "kubota special";
            lhs = term(A, j, d, ok);
            rhs = term(A, j, with(d, i, dt + 1 - di - ni), ok);
          } else {
            which = "kubota general";
            lhs = term(A, j, d, ok) - term(A, j - 1, with(d, i, di - mod(2 * di - 1 - dt, ni)), ok);
            rhs = term(B, j, with(d, i, dt + 1 - di - mod(dt + 1 - 2 * di, ni)), ok) -
                  term(B, j - 1, with(d, i, dt + 1 - di - ni), ok);
          }
        } else if (dirichlet_special(s, i, d)) {
          which = "dirichlet special";
          lhs = term(A, j, d, ok) - term(A, j - 1, with(d, i, di - 1), ok);
          rhs = term(B, j, with(d, i, dt - di), ok) - term(B, j - 1, with(d, i, dt - di - 1), ok);
        } else {
          which = "dirichlet general";
          lhs = term(A, j, d, ok);
          rhs = term(B, j, with(d, i, dt - di - 1), ok);
        }
        if (!ok) {
          ++rep.skipped;
          return;
        }
        ++rep.checked;
        if (lhs != rhs && rep.ok) {
          rep.ok = false;
          rep.detail = std::string(which) + " fails at object " + std::to_string(o) + " node " + std::to_string(i + 1) +
                       " j=" + std::to_string(j) + " d=" + vec_str(d) + ": " + std::to_string(lhs) +
                       " != " + std::to_string(rhs);
        }
      });
    }
  }
  return rep;
}

QuestionReport betti_question_check(const BettiResult& res, int i) {
  QuestionReport rep;
  const auto& g = res.graph;
  for (size_t o = 0; o < g.reps.size(); ++o) {
    const BicharState& s = g.reps[o];
    if (!s.admissible(i)) continue;
    BicharState t = reflect(s, i);
    int o2 = g.object_of(t);
    const BettiTable& A = res.tables[o];
    const BettiTable& B = res.tables[o2];
    long ni = node_order(s, i);
    auto term = [&](const BettiTable& T, long j, const std::vector<long>& d, bool& ok) -> long {
      if (j < 0 || std::any_of(d.begin(), d.end(), [](long v) { return v < 0; })) return 0;
      if (!T.in_range(j, d)) {
        ok = false;
        return 0;
      }
      return T.at(j, d);
    };
    for (long j = 0; j <= A.jmax; ++j) {
      for_box(s.r(), 0, A.dmax, [&](const std::vector<long>& d) {
        long dt = dtilde(s, i, d), di = d[i];
        long c = 0;
        for (int k = 0; k < s.r(); ++k)
          if (k != i) c += d[k] * s.qsym[i][k];
        long e = -1;
        for (long t2 = 0; t2 < ni; ++t2)
          if (mod(t2 * s.qdiag[i] - c, s.N) == 0) e = t2;
        bool ok = true;
        long lhs, rhs;
        if (e < 0 || mod(2 * di + e - 1, ni) == 0) {
          lhs = term(A, j, d, ok);
          rhs = term(B, j, with(d, i, dt + 1 - di - ni), ok);
        } else {
          lhs = term(A, j, d, ok) - term(A, j - 1, with(d, i, di - mod(2 * di + e - 1, ni)), ok);
          rhs = term(B, j, with(d, i, dt + 1 - di - mod(1 - e - 2 * di, ni)), ok) -
                term(B, j - 1, with(d, i, dt + 1 - di - ni), ok);
        }
        if (!ok) {
          ++rep.skipped;
        } else if (lhs == rhs) {
          ++rep.holds;
        } else {
          if (!rep.fails)
            rep.first_failure = "object " + std::to_string(o) + " node " + std::to_string(i + 1) +
                                " j=" + std::to_string(j) + " d=" + vec_str(d);
          ++rep.fails;
        }
      });
    }
  }
  return rep;
}

std::vector<std::vector<long>> braiding_exponents(const BicharState& s) {
  int r = s.r();
  std::vector<std::vector<long>> b(r, std::vector<long>(r, 0));
  for (int i = 0; i < r; ++i) {
    b[i][i] = s.qdiag[i];
    for (int j = i + 1; j < r; ++j) b[i][j] = s.qsym[i][j];
  }
  return b;
}

namespace {

using Word = std::vector<int>;

std::vector<Word> words_of(const std::vector<long>& content) {
  std::vector<Word> out;
  Word w;
  for (size_t k = 0; k < content.size(); ++k)
    for (long t = 0; t < content[k]; ++t) w.push_back((int)k);
  do out.push_back(w);
  while (std::next_permutation(w.begin(), w.end()));
  return out;
}

// Column sym(w) in the basis of words with the same content.
std::vector<CycNum> symmetrize(const Word& w, const std::vector<std::vector<long>>& b, long N,
                               const std::map<Word, int>& index) {
  size_t L = w.size();
  std::vector<std::vector<long long>> counts(index.size(), std::vector<long long>(N, 0));
  std::vector<int> tau(L);
  std::iota(tau.begin(), tau.end(), 0);
  Word out(L);
  do {
    long e = 0;
    for (size_t a = 0; a < L; ++a)
      for (size_t c = a + 1; c < L; ++c)
        if (tau[a] > tau[c]) e += b[w[a]][w[c]];
    for (size_t a = 0; a < L; ++a) out[tau[a]] = w[a];
    ++counts[index.at(out)][mod(e, N)];
  } while (std::next_permutation(tau.begin(), tau.end()));
  std::vector<CycNum> col;
  col.reserve(index.size());
  for (auto& c : counts) col.push_back(CycNum::from_exponent_counts(N, c));
  return col;
}

struct Component {
  std::vector<Word> words;
  std::map<Word, int> index;
  std::vector<int> basis;                       // word indices whose images form a basis
  std::vector<std::vector<CycNum>> coords;      // coords[word] in that basis
};

// Reduced row echelon form in place; returns pivot columns.
std::vector<size_t> rref(std::vector<std::vector<CycNum>>& A) {
  std::vector<size_t> piv;
  if (A.empty()) return piv;
  size_t cols = A[0].size(), rank = 0;
  for (size_t c = 0; c < cols && rank < A.size(); ++c) {
    size_t p = rank;
    while (p < A.size() && A[p][c].is_zero()) ++p;
    if (p == A.size()) continue;
    std::swap(A[p], A[rank]);
    CycNum inv = A[rank][c].inverse();
    for (size_t k = c; k < cols; ++k) A[rank][k] *= inv;
    for (size_t q = 0; q < A.size(); ++q) {
      if (q == rank || A[q][c].is_zero()) continue;
      CycNum f = A[q][c];
      for (size_t k = c; k < cols; ++k)
        if (!A[rank][k].is_zero()) A[q][k] -= f * A[rank][k];
    }
    piv.push_back(c);
    ++rank;
  }
  return piv;
}

// Images of words under the symmetrizer; the first independent ones form a basis.
Component build_component(const std::vector<long>& content, const std::vector<std::vector<long>>& b, long N) {
  Component c;
  c.words = words_of(content);
  for (size_t k = 0; k < c.words.size(); ++k) c.index[c.words[k]] = (int)k;
  size_t W = c.words.size();
  std::vector<std::vector<CycNum>> M(W, std::vector<CycNum>(W));
  for (size_t k = 0; k < W; ++k) {
    auto col = symmetrize(c.words[k], b, N, c.index);
    for (size_t t = 0; t < W; ++t) M[t][k] = col[t];
  }
  auto piv = rref(M);
  for (size_t p : piv) c.basis.push_back((int)p);
  c.coords.assign(W, std::vector<CycNum>(piv.size()));
  for (size_t k = 0; k < W; ++k)
    for (size_t p = 0; p < piv.size(); ++p) c.coords[k][p] = M[p][k];
  return c;
}

}  // namespace

SmallNichols nichols_small_oracle(const BicharState& s, long bound) {
  int r = s.r();
  double words = 1;
  for (long k = 0; k < bound; ++k) words *= r;
  if (bound < 0 || bound > 7 || words > 20000) fail("DegreeTooLarge", "total degree bound too large for the oracle");
  auto b = braiding_exponents(s);
  SmallNichols out;
  out.r = r;
  out.bound = bound;
  std::map<std::vector<long>, Component> comps;
  std::vector<std::vector<long>> grades;
  for_box(r, 0, bound, [&](const std::vector<long>& d) {
    long t = std::accumulate(d.begin(), d.end(), 0L);
    if (t == 0 || t > bound) return;
    comps.emplace(d, build_component(d, b, s.N));
    grades.push_back(d);
  });
  out.dims[std::vector<long>(r, 0)] = 1;
  for (auto& [d, c] : comps) out.dims[d] = (long)c.basis.size();

  // product of basis elements: class of the concatenated word
  auto product = [&](const std::vector<long>& d1, int k1, const std::vector<long>& d2, int k2) {
    const Component& A = comps.at(d1);
    const Component& B = comps.at(d2);
    std::vector<long> d(r);
    for (int k = 0; k < r; ++k) d[k] = d1[k] + d2[k];
    const Component& C = comps.at(d);
    Word w = A.words[A.basis[k1]];
    const Word& w2 = B.words[B.basis[k2]];
    w.insert(w.end(), w2.begin(), w2.end());
    return std::make_pair(d, C.coords[C.index.at(w)]);
  };

  out.betti[{0, std::vector<long>(r, 0)}] = 1;
  for (auto& D : grades) {
    long total = std::accumulate(D.begin(), D.end(), 0L);
    // chains: ordered lists of nonzero grades summing to D, with basis indices
    using Chain = std::vector<std::pair<std::vector<long>, int>>;
    std::vector<std::vector<Chain>> chains(total + 2);
    std::function<void(std::vector<long>, Chain&)> rec = [&](std::vector<long> rest, Chain& cur) {
      if (std::all_of(rest.begin(), rest.end(), [](long v) { return v == 0; })) {
        chains[cur.size()].push_back(cur);
        return;
      }
      for_box(r, 0, bound, [&](const std::vector<long>& g) {
        long t = std::accumulate(g.begin(), g.end(), 0L);
        if (t == 0) return;
        for (int k = 0; k < r; ++k)
          if (g[k] > rest[k]) return;
        auto it = comps.find(g);
        if (it == comps.end()) return;
        std::vector<long> rem(r);
        for (int k = 0; k < r; ++k) rem[k] = rest[k] - g[k];
        for (int q = 0; q < (int)it->second.basis.size(); ++q) {
          cur.push_back({g, q});
          rec(rem, cur);
          cur.pop_back();
        }
      });
    };
    Chain tmp;
    rec(D, tmp);
    std::vector<std::map<Chain, int>> idx(total + 2);
    for (long j = 1; j <= total; ++j)
      for (size_t k = 0; k < chains[j].size(); ++k) idx[j][chains[j][k]] = (int)k;
    // boundary j -> j-1 as a dense matrix, rows = targets
    std::vector<long> rk(total + 2, 0);
    for (long j = 2; j <= total; ++j) {
      size_t rows = chains[j - 1].size(), cols = chains[j].size();
      if (!rows || !cols) continue;
      std::vector<std::vector<CycNum>> M(rows, std::vector<CycNum>(cols));
      for (size_t c = 0; c < cols; ++c) {
        const Chain& ch = chains[j][c];
        for (long t = 0; t + 1 < j; ++t) {
          auto [g, coords] = product(ch[t].first, ch[t].second, ch[t + 1].first, ch[t + 1].second);
          CycNum sign = (t % 2 == 0) ? CycNum(-1) : CycNum(1);
          for (size_t q = 0; q < coords.size(); ++q) {
            if (coords[q].is_zero()) continue;
            Chain nc(ch.begin(), ch.begin() + t);
            nc.push_back({g, (int)q});
            nc.insert(nc.end(), ch.begin() + t + 2, ch.end());
            M[idx[j - 1].at(nc)][c] += sign * coords[q];
          }
        }
      }
      rk[j] = rank_of(M);
    }
    for (long j = 1; j <= total; ++j) {
      long dim = (long)chains[j].size() - rk[j] - rk[j + 1];
      if (dim) out.betti[{j, D}] = dim;
    }
  }
  return out;
}

long weyl_group_order(char type, int rank) {
  auto fact = [](long n) {
    long f = 1;
    for (long k = 2; k <= n; ++k) f *= k;
    return f;
  };
  switch (type) {
    case 'A': return fact(rank + 1);
    case 'B':
    case 'C': return (1L << rank) * fact(rank);
    case 'D': return (1L << (rank - 1)) * fact(rank);
    case 'G': return 12;
    case 'F': return 1152;
    case 'E': return rank == 6 ? 51840 : rank == 7 ? 2903040 : 696729600;
  }
  fail("UnsupportedType", std::string(1, type));
}

long WeylOrbitDatum::dim(long k, const std::vector<long>& beta) const {
  auto it = betti.find({k, beta});
  return it == betti.end() ? 0 : it->second;
}

namespace {

std::vector<long> simple_reflect(const IntMatrix& P, int i, const std::vector<long>& v) {
  long pr = 0;
  for (size_t k = 0; k < v.size(); ++k) pr += v[k] * P[k][i];
  std::vector<long> w = v;
  w[i] -= 2 * pr / P[i][i];
  return w;
}

}  // namespace

WeylOrbitDatum kostant_oracle(char type, int rank) {
  if (rank < 1 || rank > 4) fail("UnsupportedType", "rank must be between 1 and 4");
  WeylOrbitDatum W;
  W.type = type;
  W.rank = rank;
  W.pairing = root_pairing(type, rank);
  const IntMatrix& P = W.pairing;
  std::set<std::vector<long>> roots;
  std::deque<std::vector<long>> q;
  for (int i = 0; i < rank; ++i) {
    std::vector<long> a(rank, 0);
    a[i] = 1;
    roots.insert(a);
    q.push_back(a);
  }
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    for (int i = 0; i < rank; ++i) {
      auto w = simple_reflect(P, i, v);
      if (roots.insert(w).second) q.push_back(w);
    }
  }
  std::vector<long> two_rho(rank, 0);
  for (auto& a : roots)
    if (std::all_of(a.begin(), a.end(), [](long x) { return x >= 0; })) {
      W.positive_roots.push_back(a);
      for (int k = 0; k < rank; ++k) two_rho[k] += a[k];
    }
  for (int k = 0; k < rank; ++k) W.rho.push_back(frac(two_rho[k], 2));
  // BFS over w(2 rho); rho is regular so images label elements
  std::map<std::vector<long>, size_t> seen;
  std::vector<std::vector<long>> images = {two_rho};
  W.elements.push_back({{}, 0, std::vector<long>(rank, 0)});
  seen[two_rho] = 0;
  for (size_t h = 0; h < images.size(); ++h) {
    for (int i = 0; i < rank; ++i) {
      auto img = simple_reflect(P, i, images[h]);
      if (seen.count(img)) continue;
      WeylElement e;
      e.word = W.elements[h].word;
      e.word.insert(e.word.begin(), i);
      e.length = W.elements[h].length + 1;
      for (int k = 0; k < rank; ++k) e.shift.push_back((img[k] - two_rho[k]) / 2);
      seen[img] = images.size();
      images.push_back(img);
      W.elements.push_back(e);
    }
  }
  if ((long)W.elements.size() != weyl_group_order(type, rank))
    fail("UnsupportedType", "Weyl group enumeration does not match the group order");
  for (auto& e : W.elements) W.betti[{e.length, e.shift}] += 1;
  return W;
}

KostantFeReport kostant_fe_check(const WeylOrbitDatum& w, long lo, long hi) {
  KostantFeReport rep;
  int r = w.rank;
  long kmax = (long)w.positive_roots.size() + 1;
  const IntMatrix& P = w.pairing;
  auto bad = [&](const std::string& what, long k, const std::vector<long>& beta, int i) {
    if (!rep.ok) return;
    rep.ok = false;
    rep.detail = what + " at k=" + std::to_string(k) + " beta=" + vec_str(beta) + " i=" + std::to_string(i + 1);
  };
  for_box(r, lo, hi, [&](const std::vector<long>& beta) {
    for (int i = 0; i < r; ++i) {
      long p = 0;
      for (int k = 0; k < r; ++k) p += beta[k] * P[k][i];
      long a = P[i][i];
      auto b2 = simple_reflect(P, i, beta);
      b2[i] -= 1;
      for (long k = -1; k <= kmax; ++k) {
        if (p > -a) {
          ++rep.checked;
          if (w.dim(k, beta) != w.dim(k + 1, b2)) bad("first isomorphism", k, beta, i);
        }
        if (p < 0) {
          ++rep.checked;
          if (w.dim(k + 1, beta) != w.dim(k, b2)) bad("second isomorphism", k, beta, i);
        }
        if (-a < p && p < 0) {
          ++rep.checked;
          if (w.dim(k, beta) || w.dim(k + 1, b2) || w.dim(k + 1, beta) || w.dim(k, b2)) bad("vanishing", k, beta, i);
        }
      }
    }
  });
  return rep;
}

std::map<std::pair<long, std::vector<long>>, long> nilradical_cohomology(char type, int rank) {
  int n;
  switch (type) {
    case 'A': n = rank + 1; break;
    case 'B': n = 2 * rank + 1; break;
    case 'C':
    case 'D': n = 2 * rank; break;
    default: fail("UnsupportedType", std::string(1, type));
  }
  if (rank < 1 || (type == 'B' && rank < 2) || (type == 'C' && rank < 2) || (type == 'D' && rank < 4))
    fail("UnsupportedType", "rank out of range");
  using Mat = std::vector<std::vector<long>>;
  auto unit = [&](int a, int b) {
    Mat m(n, std::vector<long>(n, 0));
    m[a][b] = 1;
    return m;
  };
  auto sub = [&](Mat x, const Mat& y) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) x[a][b] -= y[a][b];
    return x;
  };
  auto bracket = [&](const Mat& x, const Mat& y) {
    Mat z(n, std::vector<long>(n, 0));
    for (int a = 0; a < n; ++a)
      for (int k = 0; k < n; ++k) {
        if (!x[a][k] && !y[a][k]) continue;
        for (int b = 0; b < n; ++b) z[a][b] += x[a][k] * y[k][b] - y[a][k] * x[k][b];
      }
    return z;
  };
  // Chevalley generators, 0-based indices, antidiagonal forms
  std::vector<Mat> gen;
  for (int i = 0; i < rank; ++i) {
    if (type == 'A') {
      gen.push_back(unit(i, i + 1));
    } else if (type == 'D' && i == rank - 1) {
      gen.push_back(sub(unit(rank - 2, rank), unit(rank - 1, rank + 1)));
    } else if (type == 'C' && i == rank - 1) {
      gen.push_back(unit(rank - 1, rank));
    } else {
      gen.push_back(sub(unit(i, i + 1), unit(n - 2 - i, n - 1 - i)));
    }
  }
  auto nonzero = [](const Mat& m) {
    for (auto& row : m)
      for (long v : row)
        if (v) return true;
    return false;
  };
  std::vector<Mat> basis;
  std::vector<std::vector<long>> grade;
  std::map<std::vector<long>, int> by_grade;
  for (int i = 0; i < rank; ++i) {
    std::vector<long> g(rank, 0);
    g[i] = 1;
    by_grade[g] = (int)basis.size();
    basis.push_back(gen[i]);
    grade.push_back(g);
  }
  for (size_t h = 0; h < basis.size(); ++h)
    for (int i = 0; i < rank; ++i) {
      Mat z = bracket(gen[i], basis[h]);
      if (!nonzero(z)) continue;
      auto g = grade[h];
      ++g[i];
      if (by_grade.count(g)) continue;
      by_grade[g] = (int)basis.size();
      basis.push_back(z);
      grade.push_back(g);
    }
  int N = (int)basis.size();
  if (N > 16) fail("UnsupportedType", "nilradical too large for the cochain oracle");
  // structure constants [x_a, x_b] = c x_m
  std::vector<std::vector<std::pair<int, Rat>>> sc(N, std::vector<std::pair<int, Rat>>(N, {-1, Rat(0)}));
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      Mat z = bracket(basis[a], basis[b]);
      if (!nonzero(z)) continue;
      std::vector<long> g(rank);
      for (int k = 0; k < rank; ++k) g[k] = grade[a][k] + grade[b][k];
      auto it = by_grade.find(g);
      if (it == by_grade.end()) fail("InvalidArgument", "bracket leaves the nilradical");
      const Mat& xm = basis[it->second];
      Rat c;
      bool found = false;
      for (int u = 0; u < n && !found; ++u)
        for (int v = 0; v < n && !found; ++v)
          if (xm[u][v]) {
            c = frac(z[u][v], xm[u][v]);
            found = true;
          }
      sc[a][b] = {it->second, c};
    }
  // chain complex on exterior powers, graded by root lattice
  std::map<std::pair<int, std::vector<long>>, std::vector<unsigned>> cells;
  for (unsigned S = 0; S < (1u << N); ++S) {
    std::vector<long> g(rank, 0);
    int k = 0;
    for (int a = 0; a < N; ++a)
      if (S >> a & 1) {
        ++k;
        for (int t = 0; t < rank; ++t) g[t] += grade[a][t];
      }
    cells[{k, g}].push_back(S);
  }
  auto boundary_rank = [&](int k, const std::vector<long>& g) -> long {
    auto src = cells.find({k, g});
    auto dst = cells.find({k - 1, g});
    if (k < 2 || src == cells.end() || dst == cells.end()) return 0;
    std::map<unsigned, int> row;
    for (size_t q = 0; q < dst->second.size(); ++q) row[dst->second[q]] = (int)q;
    std::vector<std::vector<Rat>> M(dst->second.size(), std::vector<Rat>(src->second.size(), Rat(0)));
    for (size_t c = 0; c < src->second.size(); ++c) {
      unsigned S = src->second[c];
      std::vector<int> el;
      for (int a = 0; a < N; ++a)
        if (S >> a & 1) el.push_back(a);
      for (size_t x = 0; x < el.size(); ++x)
        for (size_t y = x + 1; y < el.size(); ++y) {
          auto [m, cf] = sc[el[x]][el[y]];
          if (m < 0) continue;
          unsigned rest = S & ~(1u << el[x]) & ~(1u << el[y]);
          if (rest >> m & 1) continue;
          // [x_a, x_b] ^ rest, sorted: sign from position of m in rest
          int before = __builtin_popcount(rest & ((1u << m) - 1));
          long sign = ((x + y) % 2 ? -1 : 1) * (before % 2 ? -1 : 1);
          M[row.at(rest | (1u << m))][c] += Rat(sign) * cf;
        }
    }
    return rank_of(M);
  };
  std::map<std::pair<long, std::vector<long>>, long> out;
  for (auto& [key, list] : cells) {
    auto [k, g] = key;
    long dim = (long)list.size() - boundary_rank(k, g) - boundary_rank(k + 1, g);
    if (dim) {
      std::vector<long> ng(rank);
      for (int t = 0; t < rank; ++t) ng[t] = -g[t];
      out[{k, ng}] = dim;
    }
  }
  return out;
}

VermaReport verma_check(long n, long s) {
  if (n < 3 || n % 2 == 0) fail("BadParameters", "order must be odd and at least 3");
  if (s < 0 || s > n - 2) fail("BadParameters", "s must lie in [0, n-2]");
  using Mat = std::vector<std::vector<CycNum>>;
  auto v = [&](long e) { return CycNum::zeta(n, mod(e, n)); };
  auto zero = [&] { return Mat(n, std::vector<CycNum>(n)); };
  auto mul = [&](const Mat& A, const Mat& B) {
    Mat C = zero();
    for (long a = 0; a < n; ++a)
      for (long k = 0; k < n; ++k) {
        if (A[a][k].is_zero()) continue;
        for (long b = 0; b < n; ++b)
          if (!B[k][b].is_zero()) C[a][b] += A[a][k] * B[k][b];
      }
    return C;
  };
  auto lin = [&](const Mat& A, const CycNum& x, const Mat& B, const CycNum& y) {
    Mat C = zero();
    for (long a = 0; a < n; ++a)
      for (long b = 0; b < n; ++b) C[a][b] = x * A[a][b] + y * B[a][b];
    return C;
  };
  auto eq = [&](const Mat& A, const Mat& B) {
    for (long a = 0; a < n; ++a)
      for (long b = 0; b < n; ++b)
        if (A[a][b] != B[a][b]) return false;
    return true;
  };
  auto power = [&](const Mat& A, long e) {
    Mat R = zero();
    for (long a = 0; a < n; ++a) R[a][a] = CycNum(1);
    for (long k = 0; k < e; ++k) R = mul(R, A);
    return R;
  };
  // column t is the image of F^t x
  Mat E = zero(), F = zero(), K = zero(), Ki = zero(), I = zero();
  CycNum diff = v(1) - v(-1);
  CycNum den = (diff * diff).inverse();
  for (long t = 0; t < n; ++t) {
    I[t][t] = CycNum(1);
    if (t + 1 < n) F[t + 1][t] = CycNum(1);
    K[t][t] = v(s - 2 * t);
    Ki[t][t] = v(2 * t - s);
    if (t > 0) E[t - 1][t] = (v(s + 1) + v(-1 - s) - v(s + 1 - 2 * t) - v(2 * t - s - 1)) * den;
  }
  VermaReport rep;
  std::vector<std::pair<std::string, bool>> rel = {
      {"EF - FE = (K - K^-1)/(v - v^-1)", eq(lin(mul(E, F), 1, mul(F, E), -1), lin(K, diff.inverse(), Ki, -diff.inverse()))},
      {"KE = v^2 EK", eq(mul(K, E), lin(mul(E, K), v(2), zero(), 0))},
      {"KF = v^-2 FK", eq(mul(K, F), lin(mul(F, K), v(-2), zero(), 0))},
      {"E^n = 0", eq(power(E, n), zero())},
      {"F^n = 0", eq(power(F, n), zero())},
      {"K^2n = 1", eq(power(K, 2 * n), I)},
      {"K K^-1 = 1", eq(mul(K, Ki), I) && eq(mul(Ki, K), I)},
      {"E x = 0", [&] {
         for (long a = 0; a < n; ++a)
           if (!E[a][0].is_zero()) return false;
         return true;
       }()},
      {"K x = v^s x", K[0][0] == v(s)},
  };
  rep.relations_ok = true;
  for (auto& [name, ok] : rel)
    if (!ok && rep.relations_ok) {
      rep.relations_ok = false;
      rep.detail = "relation fails: " + name;
    }
  rep.dim_e = n - rank_of(E);
  rep.dim_f = n - rank_of(F);
  return rep;
}

}  // namespace mdsfe
