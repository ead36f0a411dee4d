#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mdsfe/ffield.hpp"

namespace mdsfe {

class Poly;
using Factorization = std::vector<std::pair<Poly, int>>;

// Polynomial over a finite field, coefficients low degree first, no trailing zeros.
class Poly {
 public:
  Poly() = default;
  Poly(FieldPtr F, std::vector<int> c);
  static Poly constant(const FieldPtr& F, int c);
  static Poly monomial(const FieldPtr& F, int deg, int c = 1);  // c * T^deg
  static Poly linear(const FieldPtr& F, int root);               // T - root
  // Monic polynomial of degree d with lower coefficients given by the base-q digits of index.
  static Poly monic_from_index(const FieldPtr& F, int d, long index);
  static Poly parse(const FieldPtr& F, const std::string& text);

  const FieldPtr& field() const { return F_; }
  const std::vector<int>& coeffs() const { return c_; }
  int deg() const { return (int)c_.size() - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  int lc() const { return c_.empty() ? 0 : c_.back(); }
  int coeff(int i) const { return (i >= 0 && i < (int)c_.size()) ? c_[i] : 0; }
  long monic_index() const;  // inverse of monic_from_index

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator%(const Poly& o) const;
  Poly operator/(const Poly& o) const;
  Poly scale(int s) const;
  Poly pow(int e) const;
  Poly derivative() const;
  Poly monic() const;
  int eval(int x) const;
  bool operator==(const Poly& o) const { return c_ == o.c_; }
  bool operator!=(const Poly& o) const { return c_ != o.c_; }
  bool operator<(const Poly& o) const;  // by degree, then monic index order

  const Factorization& factorization() const;  // cached, monic only
  std::string to_string() const;

 private:
  FieldPtr F_;
  std::vector<int> c_;
  mutable std::shared_ptr<const Factorization> fact_;
  void trim();
};

void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);
Poly gcd(const Poly& a, const Poly& b);  // monic

// Res(f, g) = lc(g)^{deg f} prod_{g(b)=0} f(b).
int resultant(const Poly& f, const Poly& g);
int discriminant(const Poly& f);

// (f/g)_chi = chi(Res(f, g/lc g)); exponent of zeta_n or -1 when zero.
long residue_exponent(const Poly& f, const Poly& g, const Character& chi);
CycNum residue_symbol(const Poly& f, const Poly& g, const Character& chi);
long scalar_residue_exponent(int a, const Poly& g, const Character& chi);  // (a/g) for a scalar

// Function field Gauss sum g_chi(f1, f2) by direct summation over h mod f2.
CycNum ff_gauss_sum(const Poly& f1, const Poly& f2, const Character& chi);

Factorization factor_monic(const Poly& f);
bool is_irreducible(const Poly& f);
bool is_squarefree(const Poly& f);
int moebius(const Poly& f);
Int poly_phi(const Poly& f);  // |(F_q[T]/f)^*|

// Enumeration bound: q^d above this raises DegreeTooLarge.
extern long long enumeration_bound;
long long count_monic(const FieldPtr& F, int d);
std::vector<Poly> enumerate_monic(const FieldPtr& F, int d);
void for_each_monic(const FieldPtr& F, int d, const std::function<void(const Poly&)>& fn);
const std::vector<Poly>& primes_of_degree(const FieldPtr& F, int d);  // monic irreducibles, cached

// Number of monic pairs (f, nu), deg f = d, deg nu = e, gcd(f, pi nu) = 1 (pi linear).
Int lambda_count(const FieldPtr& F, long d, long e);
Int lambda_count_brute(const Poly& pi, long d, long e);

}  // namespace mdsfe
