#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "mdsfe/exactnum.hpp"

namespace mdsfe {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// Finite field of odd order. Either a prime field, or an extension
// base[t]/(modulus) of another Field. Elements are integer codes: the base-|base|
// digits of an element are its coordinates in 1, t, t^2, ... (a prime-field
// element is its own residue). Elements of any field lower in the tower keep
// their code.
class Field {
 public:
  static FieldPtr prime(long p);
  // F_{p^e} as an extension of F_p; modulus given low-degree-first over F_p.
  static FieldPtr build(long p, int e, const std::vector<int>& modulus = {});
  // Degree-e extension of base (modulus over base, low-degree-first, monic).
  static FieldPtr extension(const FieldPtr& base, int e, const std::vector<int>& modulus = {});

  long p() const { return p_; }
  long q() const { return q_; }
  int degree() const { return e_; }            // over base
  int absolute_degree() const { return abs_e_; }  // over F_p
  const FieldPtr& base() const { return base_; }
  const std::vector<int>& modulus() const { return modulus_; }
  int gen() const { return exp_[1 % (q_ - 1)]; }

  int add(int a, int b) const {
    if (!add_.empty()) return add_[(size_t)a * q_ + b];
    return add_slow(a, b);
  }
  int neg(int a) const { return neg_[a]; }
  int sub(int a, int b) const { return add(a, neg_[b]); }
  int mul(int a, int b) const {
    if (a == 0 || b == 0) return 0;
    long s = log_[a] + log_[b];
    if (s >= q_ - 1) s -= q_ - 1;
    return exp_[s];
  }
  int inv(int a) const;
  int div(int a, int b) const { return mul(a, inv(b)); }
  int pow(int a, long e) const;
  int log(int a) const { return log_[a]; }  // -1 for 0
  int exp(long t) const {
    t %= (q_ - 1);
    if (t < 0) t += q_ - 1;
    return exp_[t];
  }
  int trace(int a) const { return trace_[a]; }  // absolute trace, in [0, p)
  int from_int(long v) const {                   // image of an integer
    v %= p_;
    if (v < 0) v += p_;
    return (int)v;
  }
  // Norm down to a subfield F lower in the tower (as code in F).
  int norm_to(int a, const Field& sub) const;
  bool contains_subfield(const Field& sub) const;
  long id() const { return id_; }

 private:
  Field() = default;
  int add_slow(int a, int b) const;
  void finish();

  long p_ = 0, q_ = 0, bq_ = 0;
  int e_ = 1, abs_e_ = 1;
  FieldPtr base_;
  std::vector<int> modulus_;
  std::vector<int> exp_, log_, neg_, trace_;
  std::vector<uint16_t> add_;
  long id_ = 0;
};

// Multiplicative character chi(gen^t) = zeta_n^{a t}; chi(0) = 0.
struct Character {
  FieldPtr field;
  long n = 1;
  long a = 0;

  // Exponent of zeta_n, or -1 at 0.
  long exponent(int x) const {
    if (x == 0) return -1;
    long t = field->log(x);
    return (long)(((__int128)a * t) % n);
  }
  CycNum value(int x) const {
    long e = exponent(x);
    return e < 0 ? CycNum(0) : CycNum::zeta(n, e);
  }
  long order() const;
  bool trivial() const { return a % n == 0; }
  Character pow(long k) const;
  Character operator*(const Character& o) const;
  // chi composed with the norm to the field of this character.
  Character lift(const FieldPtr& ext) const;
  long value_at_minus_one() const { return exponent(field->neg(1)); }
};

Character make_character(const FieldPtr& F, long n);  // the order-n character with chi(gen) = zeta_n
Character quadratic_character(const FieldPtr& F);

// Finite field Gauss sum sum_{a != 0} chi(a) e(Tr a / p) (cached).
CycNum gauss_sum(const Character& chi);
bool hasse_davenport_check(const Character& chi, int e);

}  // namespace mdsfe
