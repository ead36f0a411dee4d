#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mdsfe/groupoid.hpp"

namespace mdsfe {

// h_{E'}(j, d) = dim Gr^{-sum d_k e_k} Ext^j(1, 1) for one groupoid object.
struct BettiTable {
  int object = 0;
  int r = 0;
  long jmax = 0, dmax = 0;
  std::map<std::pair<long, std::vector<long>>, long> entries;  // known entries

  // 0 outside the nonnegative range; throws Unknown past the bounds.
  long at(long j, const std::vector<long>& d) const;
  bool in_range(long j, const std::vector<long>& d) const;
};

struct BettiOptions {
  uint64_t seed = 1;    // perturbation of the walk direction
  long step_cap = 0;    // 0: (dmax + 1) * objects * r, at least 64
  long cutoff = 100000;  // groupoid enumeration bound
};

struct BettiResult {
  GroupoidGraph graph;
  std::vector<BettiTable> tables;  // indexed by object
  long walks = 0, steps = 0;
};

// Throws Unclassifiable, NotAnchored, RelationViolated (negative value).
BettiResult betti_solve(const BicharState& s, long gexp, long dmax, long jmax, const BettiOptions& opt = {});

struct RelationReport {
  bool ok = true;
  long checked = 0, skipped = 0;
  std::string detail;  // first witness
};

// Every instance of the node-i relations whose terms lie in the filled region.
RelationReport betti_relations_check(const BettiResult& res, int i);

// The conjectural generalized relation; counts only, never asserts.
struct QuestionReport {
  long holds = 0, fails = 0, skipped = 0;
  std::string first_failure;
};
QuestionReport betti_question_check(const BettiResult& res, int i);

// Bicharacter chi(e_i, e_j) on the current basis as exponents of zeta_N, twist-equivalent to s:
// chi(e_i,e_i) = q_ii, chi(e_i,e_j) = q~_ij for i < j, 1 for i > j.
std::vector<std::vector<long>> braiding_exponents(const BicharState& s);

struct SmallNichols {
  int r = 0;
  long bound = 0;
  std::map<std::vector<long>, long> dims;                          // dim Gr^d B(V)
  std::map<std::pair<long, std::vector<long>>, long> betti;        // dim Tor_j in grade d
};

// Quantum symmetrizer ranks and the normalized bar complex, exact over the cyclotomic field.
// Throws DegreeTooLarge when r^bound exceeds the word budget.
SmallNichols nichols_small_oracle(const BicharState& s, long bound);

struct WeylElement {
  std::vector<int> word;       // reduced word, simple reflections 0-based
  long length = 0;
  std::vector<long> shift;     // w(rho) - rho in simple-root coordinates
};

struct WeylOrbitDatum {
  char type = 'A';
  int rank = 0;
  IntMatrix pairing;                    // <a_i, a_j>
  std::vector<std::vector<long>> positive_roots;
  std::vector<Rat> rho;                 // simple-root coordinates
  std::vector<WeylElement> elements;
  // Gr^beta H^k: nonzero (value 1) exactly on (k, beta) listed here.
  std::map<std::pair<long, std::vector<long>>, long> betti;
  long dim(long k, const std::vector<long>& beta) const;
};

WeylOrbitDatum kostant_oracle(char type, int rank);  // throws UnsupportedType
long weyl_group_order(char type, int rank);

struct KostantFeReport {
  bool ok = true;
  long checked = 0;
  std::string detail;
};
// Shifted-reflection isomorphisms and vanishing for all beta with coordinates in [lo, hi].
KostantFeReport kostant_fe_check(const WeylOrbitDatum& w, long lo, long hi);

// Chevalley-Eilenberg cohomology of the positive nilpotent part, from a matrix realization.
// Types A, B, C, D. Returns dim Gr^beta H^k for every nonzero entry.
std::map<std::pair<long, std::vector<long>>, long> nilradical_cohomology(char type, int rank);

struct VermaReport {
  long dim_e = 0, dim_f = 0;  // dim of E- and F-invariants
  bool relations_ok = false;
  std::string detail;
};
// Verma module of u_v(sl_2), v of odd order n >= 3, K x = v^s x, 0 <= s <= n - 2. Throws BadParameters.
VermaReport verma_check(long n, long s);

}  // namespace mdsfe
