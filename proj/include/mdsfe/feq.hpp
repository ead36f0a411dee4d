#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdsfe/mdcoeff.hpp"

namespace mdsfe {

// Laurent polynomial sum c[j] x^{low + j}.
struct LPoly {
  int low = 0;
  std::vector<CycNum> c;

  static LPoly monomial(int e, const CycNum& a = CycNum(1));
  bool is_zero() const;
  int high() const { return low + (int)c.size() - 1; }
  CycNum coeff(int e) const;
  void add_term(int e, const CycNum& a);
  void trim();
  LPoly operator+(const LPoly& o) const;
  LPoly operator-(const LPoly& o) const;
  LPoly operator*(const LPoly& o) const;
  LPoly scaled(const CycNum& a) const;
  bool operator==(const LPoly& o) const;
};

// Rational function num / prod (1 - c x^m), m >= 1.
class RatFn {
 public:
  struct Binom {
    CycNum c;
    int m = 1;
  };

  RatFn() = default;
  RatFn(const CycNum& a);  // NOLINT
  RatFn(LPoly num, std::vector<Binom> den = {});
  static RatFn monomial(int e, const CycNum& a = CycNum(1));
  static RatFn geometric(const CycNum& c, int m);  // 1 / (1 - c x^m)

  const LPoly& num() const { return num_; }
  const std::vector<Binom>& den() const { return den_; }
  LPoly den_poly() const;
  bool is_zero() const { return num_.is_zero(); }

  RatFn operator+(const RatFn& o) const;
  RatFn operator-(const RatFn& o) const;
  RatFn operator*(const RatFn& o) const;
  RatFn operator-() const;
  friend bool operator==(const RatFn& a, const RatFn& b);
  friend bool operator!=(const RatFn& a, const RatFn& b) { return !(a == b); }

  RatFn subst_scale(const CycNum& a) const;       // x -> a x
  RatFn subst_inverse(const CycNum& a) const;     // x -> a / x
  RatFn subst_power(const CycNum& a, int e) const;  // x -> a x^e, e >= 1
  // S^{k,n}: terms with exponent = k mod n.
  RatFn project(long k, long n) const;
  // Laurent expansion, exponents up to hi.
  std::map<int, CycNum> expand(int hi) const;
  std::string to_string() const;

 private:
  LPoly num_;
  std::vector<Binom> den_;
};

using RatMatrix = std::vector<std::vector<RatFn>>;
RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b);
bool is_identity(const RatMatrix& a);
RatMatrix mat_subst_inverse(const RatMatrix& a, const CycNum& c);

enum class NodeKind { Kubota, Dirichlet, None };
const char* node_kind_name(NodeKind k);
// Dirichlet if M_ii = 0, Kubota if every p_ij = 0 (and M_ii != n/2), None otherwise.
NodeKind classify_node(const MdsConfig& cfg, int i);

IntMatrix tau_apply(int i, const IntMatrix& M, long n);  // throws NotDirichletNode

// Induced action of sigma_i on monomials: x^d -> scalar(d) x^{image(d)}.
struct MonomialMap {
  int i = 0;
  std::vector<long> shift;  // image_i = -d_i + sum_j shift[j] d_j
  std::vector<CycNum> base;  // scalar = base_i^{d_i} prod_j base_j^{d_j}
  Exps image(const Exps& d) const;
  CycNum scalar(const Exps& d) const;
};
MonomialMap sigma_apply(NodeKind kind, int i, const MdsConfig& cfg);  // MissingNij, NotDirichletNode

struct ScatteringMatrix {
  NodeKind kind = NodeKind::None;
  bool local = false;
  int delta = 1;  // deg pi
  long size = 0;
  RatMatrix entries;
  CycNum prefactor = CycNum(1);
  // Kubota: K, n_i; Dirichlet: K, v, v_i, b, omega.
  long K = 0, v = 0, vi = 0, b = 0, ni = 0;
  CycNum omega = CycNum(1);
};

// Gamma(x, K) (or Gamma_pi) in the variable x, n_i x n_i; throws Requires1Mod4, MissingNij.
ScatteringMatrix scattering_kubota(const MdsConfig& cfg, int i, long K, const Poly* pi = nullptr);
// Gamma in u = (qx/g)^{deg pi}, local or global.
RatMatrix kubota_gamma_u(const MdsConfig& cfg, int i, long K, const Poly* pi = nullptr);
// n x n Dirichlet matrix for node i with class context k (k[i] ignored). Entries include the
// chi^{(v+v_i)(k+l)}(-1) twist; prefactor holds omega g^{b-1} (and local factors).
ScatteringMatrix scattering_dirichlet(const MdsConfig& cfg, int i, const Exps& k, const Poly* pi = nullptr,
                                      bool raw_theta = false);
// Theta(x, K) by the displayed formulas.
RatMatrix dirichlet_theta_printed(long n, const CycNum& q, long K, bool b);

// (E_m^n G)_{k,l} = S^{k+l-K,n} G_{k%m,l%m}; throws SupportViolation.
RatMatrix expand_operator(const RatMatrix& G, long m, long n, long K);
// The explicit E_{n_i}^n Gamma(x, K) formula as printed (global case).
RatMatrix kubota_expanded_printed(const MdsConfig& cfg, int i, long K);

// A family of truncated series, one per groupoid object.
struct SeriesSet {
  MdsConfig cfg;  // field and character; matrix of objects[0]
  bool local = false;
  Poly pi;
  int D = 0;
  std::vector<IntMatrix> objects;
  std::vector<std::map<Exps, CycNum>> known;

  MdsConfig config(int o) const { return cfg.with_matrix(objects[o]); }
  int find(const IntMatrix& M) const;
  std::optional<CycNum> get(int o, const Exps& d) const;
  CoeffTable table(int o, int D) const;
  std::string to_json(int D) const;
};

// Objects reachable by Dirichlet reflections; throws PossiblyInfiniteGroupoid past the cap.
std::vector<IntMatrix> reflection_closure(const MdsConfig& cfg, int max_objects = 64);

struct FeReport {
  bool ok = true;
  long checked = 0;        // identities evaluated on known data
  long undetermined = 0;   // identities touching unknown entries
  long slices = 0;
  CycNum max_residual;     // first nonzero residual, if any
  std::string detail;
};

// Checks the functional equation of node i of object o through total degree D.
FeReport fe_verify(const SeriesSet& set, int o, int i, int D);

struct SolveOptions {
  int D = 6;
  int cap = -1;                  // per-coordinate bound on stored entries; default D + 1
  long long seed_bound = 1000;   // global seeds by enumeration while q^{sum d} <= bound
  int max_objects = 64;
  int max_sweeps = 200;
  bool seed_closed_forms = true;
};

struct SolveResult {
  SeriesSet set;
  bool converged = false;
  int sweeps = 0;
  std::vector<std::pair<int, Exps>> missing;  // (object, exponents) with total degree <= D
};

// Fixpoint propagation of all functional equations; throws InconsistentSystem.
SolveResult fe_solve(const MdsConfig& cfg, bool local, const Poly& pi, const SolveOptions& opt);

// Multivariate candidate num/den (den(0) != 0) against every known entry of total degree <= D.
struct MultiPoly {
  std::map<Exps, CycNum> terms;
};
bool rational_verify(const CoeffTable& table, const MultiPoly& num, const MultiPoly& den, int D);
std::map<Exps, CycNum> rational_expand(const MultiPoly& num, const MultiPoly& den, int r, int D);

}  // namespace mdsfe
