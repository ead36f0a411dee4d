#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mdsfe/polyring.hpp"

namespace mdsfe {

using IntMatrix = std::vector<std::vector<long>>;
using Exps = std::vector<int>;

IntMatrix parse_matrix(const std::string& text, long n);  // "a,b;c,d", entries reduced mod n
std::string matrix_to_string(const IntMatrix& M);

struct MdsConfig {
  FieldPtr field;
  Character chi;  // order n, n even
  IntMatrix M;    // symmetric, entries in [0, n)

  int r() const { return (int)M.size(); }
  long n() const { return chi.n; }
  void validate() const;
  // Same matrix over the degree-e extension, with chi composed with the norm.
  MdsConfig extend(int e) const;
  MdsConfig with_matrix(IntMatrix M2) const;
  Character xi() const { return chi.pow(chi.n / 2); }
  // xi * chi^{M_ii}
  Character diag_char(int i) const { return chi.pow(chi.n / 2 + M[i][i]); }
  CycNum chi_minus_one() const;  // +-1
};

MdsConfig make_config(long p, int e, long n, const IntMatrix& M);

struct MdsParams {
  std::vector<long> ni;
  // -M_ij = n_ij (M_ii + n/2) + o_ij n + p_ij; p_ij > 0 means n_ij does not exist
  // in the sense of the Kubota functional equation.
  std::vector<std::vector<long>> nij, oij, pij;
  std::vector<std::vector<int>> eij;  // [M_ij != 0]
  bool kubota_ok(int i) const;        // p_ij = 0 for all j != i
};

MdsParams mds_params(const MdsConfig& cfg);
MdsParams mds_params(const IntMatrix& M, long n);

// a(T^d) over the degree-delta extension of cfg's field, from the closed forms
// (extension Gauss sums by Hasse-Davenport); nullopt if there is none.
std::optional<CycNum> local_closed_form(const MdsConfig& cfg, const Exps& d, int delta = 1);
// a(pi^d) for pi prime of any degree (Axiom 3 transport); throws NoClosedForm.
CycNum coeff_local_base(const Poly& pi, const Exps& d, const MdsConfig& cfg);

CycNum coeff_squarefree(const std::vector<Poly>& f, const MdsConfig& cfg);
// General formula with f_1...f_{r-1} squarefree (direct Gauss sums; small degrees).
CycNum coeff_general_lastvar(const std::vector<Poly>& f, const MdsConfig& cfg);

// Source of prime-power blocks a(T^d) over F_{q^delta}.
class LocalBlocks {
 public:
  explicit LocalBlocks(MdsConfig cfg) : cfg_(std::move(cfg)) {}
  const MdsConfig& config() const { return cfg_; }
  std::optional<CycNum> get(int delta, const Exps& d);
  // Supply values (e.g. from the local solver) for a given extension degree.
  void supply(int delta, const Exps& d, const CycNum& v);

 private:
  MdsConfig cfg_;
  std::map<std::pair<int, Exps>, std::optional<CycNum>> cache_;
};

// a(f) by twisted multiplicativity from prime-power blocks; throws UnknownLocalBlock.
CycNum coeff_assemble(const std::vector<Poly>& f, const MdsConfig& cfg, LocalBlocks* blocks = nullptr);

struct CoeffEntry {
  CycNum value;
  bool known = false;
};

struct CoeffTable {
  MdsConfig config;
  bool local = false;
  Poly pi;  // local mode only
  int D = 0;
  std::map<Exps, CoeffEntry> entries;

  const CoeffEntry* find(const Exps& d) const {
    auto it = entries.find(d);
    return it == entries.end() ? nullptr : &it->second;
  }
  std::string to_json() const;
};

// Monic polynomials of degree <= D with factorizations, generated by a sieve.
class PolyTable {
 public:
  PolyTable(FieldPtr F, int D);
  int max_degree() const { return D_; }
  const FieldPtr& field() const { return F_; }
  long long count(int d) const { return counts_[d]; }
  // factorization of monic poly (d, index) as (prime id, exponent), prime ids ascending
  std::span<const std::pair<int, int>> factors(int d, long long idx) const {
    const auto& st = start_[d];
    return {flat_[d].data() + st[idx], flat_[d].data() + st[idx + 1]};
  }
  const Poly& prime(int id) const { return primes_[id]; }
  int prime_degree(int id) const { return primes_[id].deg(); }
  int num_primes() const { return (int)primes_.size(); }

 private:
  FieldPtr F_;
  int D_;
  std::vector<long long> counts_;
  std::vector<std::vector<uint32_t>> start_;
  std::vector<std::vector<std::pair<int, int>>> flat_;
  std::vector<Poly> primes_;
};

// Global sums over monic tuples of the given degrees.
class GlobalEnumerator {
 public:
  GlobalEnumerator(const MdsConfig& cfg, int maxdeg, LocalBlocks* blocks = nullptr);
  // nullopt if some contributing block is unknown
  std::optional<CycNum> sum(const Exps& d);
  const PolyTable& table() const { return table_; }

 private:
  MdsConfig cfg_;
  PolyTable table_;
  LocalBlocks own_blocks_;
  LocalBlocks* blocks_;
  std::vector<long> prime_diag_;  // exponent of (pi'/pi)_chi per prime id
  long m1_ = 0;                   // exponent of chi(-1)
  std::unordered_map<unsigned long long, int> pair_cache_;
  std::unordered_map<unsigned long long, int> block_ids_;
  std::vector<std::optional<CycNum>> block_vals_;
  int pair_residue(int a, int b);
  int block_id(int delta, const int* d);  // -1 zero, -2 unknown, 0 one
};

// Truncated series table; global entries by enumeration (q^{sum d} <= bound), local by blocks.
CoeffTable series_truncate(const MdsConfig& cfg, bool local, const Poly& pi, int D, LocalBlocks* blocks = nullptr,
                           long long global_bound = 10000000, bool total_degree = true);

}  // namespace mdsfe
