#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdsfe/feq.hpp"

namespace mdsfe {

// Bicharacter data on the current basis; roots of unity stored as exponents of zeta_N.
struct BicharState {
  long N = 2;
  std::vector<long> qdiag;              // q_ii
  std::vector<std::vector<long>> qsym;  // q~_ij = chi(e_i,e_j) chi(e_j,e_i); diagonal is 2 q_ii
  IntMatrix basis;                      // columns: current basis in original coordinates

  int r() const { return (int)qdiag.size(); }
  bool admissible(int i) const { return qdiag[i] != 0; }
  CycNum diag(int i) const { return CycNum::zeta(N, qdiag[i]); }
  CycNum sym(int i, int j) const { return CycNum::zeta(N, qsym[i][j]); }
  // equivalence key: (qdiag, qsym) only
  bool same_class(const BicharState& o) const { return qdiag == o.qdiag && qsym == o.qsym; }
};

// gene = zeta_n: q_ii = -gene^{M_ii}, q~_ij = gene^{M_ij}.
BicharState bichar_from_matrix(const IntMatrix& M, long n);
// Symmetric pairing <a_i, a_j> of simple roots, short roots of squared length 2.
IntMatrix root_pairing(char type, int rank);  // throws UnsupportedType
// chi(a, b) = v^{<a,b>} with the parameter v^2 = zeta_N^{qexp}.
BicharState bichar_from_cartan(char type, int rank, long N, long qexp);
// Node labels and edge labels (symmetric, diagonal ignored) as exponents of zeta_N.
BicharState bichar_from_dynkin(long N, const std::vector<long>& nodes, const std::vector<std::vector<long>>& edges);

long reflection_m(const BicharState& s, int i, int j);  // m_ij; throws Inadmissible
BicharState reflect(const BicharState& s, int i);
// M with gene = zeta_N^{gexp}; throws NotInGeneGroup.
IntMatrix object_matrix(const BicharState& s, long gexp = 1);
long gene_order(const BicharState& s, long gexp = 1);
NodeKind classify_reflection(const BicharState& s, int i);  // None means neither
const char* reflection_kind_name(NodeKind k);

struct GroupoidEdge {
  int from = 0, i = 0, to = 0;
  NodeKind kind = NodeKind::None;
};

struct GroupoidGraph {
  long n = 0;  // order of gene
  std::vector<BicharState> reps;  // one state per object
  std::vector<IntMatrix> objects;  // M of each object
  std::vector<GroupoidEdge> edges;
  std::vector<IntMatrix> bases;  // every visited ordered basis
  long base_count = 0;
  bool truncated = false;

  int object_of(const BicharState& s) const;
  std::string to_dot() const;
  std::string to_json() const;
};

GroupoidGraph groupoid_enumerate(const BicharState& s, long gexp, long cutoff);

struct ConeReport {
  bool ok = true;
  long samples = 0, uncovered = 0, overlaps = 0;
  std::string detail;
};

// Random integer vectors against the cones {v : v . e >= 0 for e in E'}; throws Truncated.
ConeReport cone_cover_check(const GroupoidGraph& g, long samples, uint64_t seed = 1);

}  // namespace mdsfe
