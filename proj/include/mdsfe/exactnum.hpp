#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace mdsfe {

using Rat = mpq_class;
using Int = mpz_class;

// Exact element of the cyclotomic field Q(zeta_m), stored in the power basis
// 1, z, ..., z^{phi(m)-1} modulo the m-th cyclotomic polynomial.
class CycNum {
 public:
  CycNum();                      // zero
  CycNum(long v);                // NOLINT rational integer
  CycNum(const Rat& v);          // NOLINT
  static CycNum zeta(long m, long k = 1);
  static CycNum from_coeffs(long m, std::vector<Rat> coeffs);
  // Sum of c[j] * zeta_m^j over j in [0, m); c may be any length-m vector.
  static CycNum from_exponent_counts(long m, const std::vector<long long>& c);

  long conductor() const { return m_; }
  const std::vector<Rat>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_rational() const { return m_ == 1; }
  Rat rational_value() const;  // requires is_rational()

  CycNum operator-() const;
  CycNum& operator+=(const CycNum& o);
  CycNum& operator-=(const CycNum& o);
  CycNum& operator*=(const CycNum& o);
  CycNum& operator/=(const CycNum& o);
  friend CycNum operator+(CycNum a, const CycNum& b) { return a += b; }
  friend CycNum operator-(CycNum a, const CycNum& b) { return a -= b; }
  friend CycNum operator*(CycNum a, const CycNum& b) { return a *= b; }
  friend CycNum operator/(CycNum a, const CycNum& b) { return a /= b; }
  friend bool operator==(const CycNum& a, const CycNum& b);
  friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

  CycNum inverse() const;
  CycNum pow(long e) const;
  CycNum conj() const;
  // Galois automorphism zeta_m -> zeta_m^k, gcd(k, m) = 1.
  CycNum galois(long k) const;
  // Re-express in Q(zeta_M) for a multiple M of the conductor.
  CycNum embed(long M) const;

  std::string to_string() const;
  std::string to_json() const;
  static CycNum from_json(const std::string& s);

  // Configured bound on conductors; exceeding it raises ConductorOverflow.
  static long conductor_bound;

 private:
  long m_ = 1;
  std::vector<Rat> c_;
  void normalize();
};

std::vector<long long> cyclotomic_poly(long m);  // coefficients, low degree first
long euler_phi(long m);
long lcm_long(long a, long b);

struct ComplexApprox {
  long double re = 0, im = 0;
  long double eps = 0;
  std::complex<long double> value() const { return {re, im}; }
};

// Numeric embedding zeta_m -> exp(2 pi i / m); only for cross-checks.
ComplexApprox cyc_embed(const CycNum& a, int precision_bits = 60);

}  // namespace mdsfe
