#include "mdsfe/exactnum.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "mdsfe/error.hpp"

namespace mdsfe {

long CycNum::conductor_bound = 10000;

long euler_phi(long m) {
  long r = m, x = m;
  for (long p = 2; p * p <= x; ++p) {
    if (x % p == 0) {
      while (x % p == 0) x /= p;
      r -= r / p;
    }
  }
  if (x > 1) r -= r / x;
  return r;
}

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

std::vector<long long> cyclotomic_poly(long m) {
  // Phi_m = prod_{d | m} (x^d - 1)^{mu(m/d)}, computed by exact division.
  std::vector<long long> num{1}, den{1};
  auto mul_xd_minus_1 = [](std::vector<long long>& p, long d) {
    std::vector<long long> r(p.size() + d, 0);
    for (size_t i = 0; i < p.size(); ++i) {
      r[i + d] += p[i];
      r[i] -= p[i];
    }
    p = std::move(r);
  };
  auto mobius = [](long k) {
    int s = 1;
    for (long p = 2; p * p <= k; ++p) {
      if (k % p == 0) {
        k /= p;
        if (k % p == 0) return 0;
        s = -s;
      }
    }
    if (k > 1) s = -s;
    return s;
  };
  for (long d = 1; d <= m; ++d) {
    if (m % d) continue;
    int mu = mobius(m / d);
    if (mu == 1) mul_xd_minus_1(num, d);
    if (mu == -1) mul_xd_minus_1(den, d);
  }
  // num / den, den monic up to sign
  long long lead = den.back();
  std::vector<long long> q(num.size() - den.size() + 1, 0);
  for (long i = (long)num.size() - 1; i >= (long)den.size() - 1; --i) {
    long long c = num[i] / lead;
    q[i - den.size() + 1] = c;
    for (size_t j = 0; j < den.size(); ++j) num[i - den.size() + 1 + j] -= c * den[j];
  }
  return q;
}

namespace {

struct CycTable {
  long m = 1, phi = 1;
  // pow[k] = coordinates of zeta_m^k in the power basis, k in [0, m)
  std::vector<std::vector<long>> pow;
};

const CycTable& table(long m) {
  static std::mutex mu;
  static std::map<long, std::unique_ptr<CycTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return *it->second;
  auto t = std::make_unique<CycTable>();
  t->m = m;
  t->phi = euler_phi(m);
  auto phi_m = cyclotomic_poly(m);
  long phi = t->phi;
  t->pow.assign(m, std::vector<long>(phi, 0));
  std::vector<long> cur(phi, 0);
  cur[0] = 1;
  for (long k = 0; k < m; ++k) {
    t->pow[k] = cur;
    // multiply by zeta
    long top = cur[phi - 1];
    for (long j = phi - 1; j > 0; --j) cur[j] = cur[j - 1];
    cur[0] = 0;
    if (top != 0)
      for (long j = 0; j < phi; ++j) cur[j] -= top * phi_m[j];
  }
  auto& ref = *t;
  cache[m] = std::move(t);
  return ref;
}

long canonical_conductor(long m) { return (m % 4 == 2) ? m / 2 : m; }

// Reduce a bucket vector indexed by powers of zeta_m (length m, m canonical).
std::vector<Rat> reduce_buckets(long m, const std::vector<Rat>& b) {
  const auto& t = table(m);
  std::vector<Rat> out(t.phi);
  for (long k = 0; k < m; ++k) {
    if (sgn(b[k]) == 0) continue;
    const auto& v = t.pow[k];
    for (long j = 0; j < t.phi; ++j)
      if (v[j]) out[j] += b[k] * v[j];
  }
  return out;
}

void check_bound(long m) {
  if (m > CycNum::conductor_bound)
    fail("ConductorOverflow", "conductor " + std::to_string(m) + " exceeds bound");
}

// Buckets for zeta_m^k with m possibly 2 mod 4: returns (canonical conductor, sign, exponent)
struct Mapped {
  long m;
  int sign;
  long k;
};
Mapped map_power(long m, long k) {
  k %= m;
  if (k < 0) k += m;
  if (m % 4 != 2) return {m, 1, k};
  long d = m / 2;
  long e = (long)(((__int128)k * ((d + 1) / 2)) % d);
  return {d, (k % 2) ? -1 : 1, e};
}

}  // namespace

CycNum::CycNum() : m_(1), c_(1) {}
CycNum::CycNum(long v) : m_(1), c_{Rat(v)} {}
CycNum::CycNum(const Rat& v) : m_(1), c_{v} {}

CycNum CycNum::zeta(long m, long k) {
  if (m <= 0) fail("BadParameters", "zeta conductor must be positive");
  auto mp = map_power(m, k);
  check_bound(mp.m);
  CycNum r;
  r.m_ = mp.m;
  std::vector<Rat> b(mp.m);
  b[mp.k] = mp.sign;
  r.c_ = reduce_buckets(mp.m, b);
  r.normalize();
  return r;
}

CycNum CycNum::from_coeffs(long m, std::vector<Rat> coeffs) {
  if (m % 4 == 2) {
    std::vector<Rat> b(m);
    for (size_t j = 0; j < coeffs.size(); ++j) b[j] = coeffs[j];
    CycNum r;
    r.m_ = m / 2;
    std::vector<Rat> bb(r.m_);
    for (long j = 0; j < m; ++j)
      if (sgn(b[j])) {
        auto mp = map_power(m, j);
        bb[mp.k] += mp.sign * b[j];
      }
    r.c_ = reduce_buckets(r.m_, bb);
    r.normalize();
    return r;
  }
  check_bound(m);
  if ((long)coeffs.size() != euler_phi(m)) fail("BadParameters", "coefficient vector length must be phi(m)");
  CycNum r;
  r.m_ = m;
  r.c_ = std::move(coeffs);
  r.normalize();
  return r;
}

CycNum CycNum::from_exponent_counts(long m, const std::vector<long long>& c) {
  long mc = canonical_conductor(m);
  check_bound(mc);
  std::vector<Rat> b(mc);
  for (long j = 0; j < (long)c.size(); ++j)
    if (c[j]) {
      auto mp = map_power(m, j);
      b[mp.k] += Rat(mp.sign) * Rat((long)c[j]);
    }
  CycNum r;
  r.m_ = mc;
  r.c_ = reduce_buckets(mc, b);
  r.normalize();
  return r;
}

void CycNum::normalize() {
  for (auto& x : c_) x.canonicalize();
  if (m_ == 1) return;
  for (size_t j = 1; j < c_.size(); ++j)
    if (sgn(c_[j]) != 0) return;
  Rat v = c_[0];
  m_ = 1;
  c_.assign(1, v);
}

bool CycNum::is_zero() const {
  for (const auto& x : c_)
    if (sgn(x) != 0) return false;
  return true;
}

Rat CycNum::rational_value() const {
  if (m_ != 1) fail("BadParameters", "not rational");
  return c_[0];
}

CycNum CycNum::embed(long M) const {
  if (M == m_) return *this;
  if (M % m_ != 0) fail("BadParameters", "embed target not a multiple of conductor");
  long Mc = canonical_conductor(M);
  check_bound(Mc);
  long step = M / m_;
  std::vector<Rat> b(Mc);
  for (size_t j = 0; j < c_.size(); ++j)
    if (sgn(c_[j])) {
      auto mp = map_power(M, (long)j * step);
      b[mp.k] += mp.sign * c_[j];
    }
  CycNum r;
  r.m_ = Mc;
  r.c_ = reduce_buckets(Mc, b);
  return r;
}

static void unify(CycNum& a, CycNum& b) {
  if (a.conductor() == b.conductor()) return;
  long L = lcm_long(a.conductor(), b.conductor());
  a = a.embed(L);
  b = b.embed(L);
}

CycNum CycNum::operator-() const {
  CycNum r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

CycNum& CycNum::operator+=(const CycNum& o) {
  if (o.m_ == 1) {
    c_[0] += o.c_[0];
    normalize();
    return *this;
  }
  CycNum b = o;
  unify(*this, b);
  for (size_t j = 0; j < c_.size(); ++j) c_[j] += b.c_[j];
  normalize();
  return *this;
}

CycNum& CycNum::operator-=(const CycNum& o) { return *this += -o; }

CycNum& CycNum::operator*=(const CycNum& o) {
  if (o.m_ == 1) {
    for (auto& x : c_) x *= o.c_[0];
    normalize();
    return *this;
  }
  if (m_ == 1) {
    Rat s = c_[0];
    *this = o;
    for (auto& x : c_) x *= s;
    normalize();
    return *this;
  }
  CycNum b = o;
  unify(*this, b);
  long m = m_;
  std::vector<Rat> buckets(m);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (sgn(c_[i]) == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) {
      if (sgn(b.c_[j]) == 0) continue;
      buckets[(i + j) % m] += c_[i] * b.c_[j];
    }
  }
  c_ = reduce_buckets(m, buckets);
  normalize();
  return *this;
}

CycNum CycNum::inverse() const {
  if (is_zero()) fail("DivisionByZero");
  if (m_ == 1) return CycNum(Rat(1) / c_[0]);
  long phi = (long)c_.size();
  // Column j of the multiplication matrix is this * zeta^j.
  std::vector<std::vector<Rat>> A(phi, std::vector<Rat>(phi + 1));
  for (long j = 0; j < phi; ++j) {
    std::vector<Rat> b(m_);
    for (long i = 0; i < phi; ++i) b[(i + j) % m_] += c_[i];
    auto col = reduce_buckets(m_, b);
    for (long i = 0; i < phi; ++i) A[i][j] = col[i];
  }
  A[0][phi] = 1;
  for (long col = 0; col < phi; ++col) {
    long piv = col;
    while (piv < phi && sgn(A[piv][col]) == 0) ++piv;
    if (piv == phi) fail("DivisionByZero", "singular multiplication matrix");
    std::swap(A[piv], A[col]);
    Rat inv = Rat(1) / A[col][col];
    for (long k = col; k <= phi; ++k) A[col][k] *= inv;
    for (long r = 0; r < phi; ++r) {
      if (r == col || sgn(A[r][col]) == 0) continue;
      Rat f = A[r][col];
      for (long k = col; k <= phi; ++k) A[r][k] -= f * A[col][k];
    }
  }
  CycNum r;
  r.m_ = m_;
  r.c_.resize(phi);
  for (long i = 0; i < phi; ++i) r.c_[i] = A[i][phi];
  r.normalize();
  return r;
}

CycNum& CycNum::operator/=(const CycNum& o) {
  if (o.is_zero()) fail("DivisionByZero");
  return *this *= o.inverse();
}

bool operator==(const CycNum& a, const CycNum& b) {
  if (a.m_ == b.m_) return a.c_ == b.c_;
  CycNum x = a, y = b;
  unify(x, y);
  return x.c_ == y.c_;
}

CycNum CycNum::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  CycNum base = *this, r(1);
  while (e) {
    if (e & 1) r *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return r;
}

CycNum CycNum::galois(long k) const {
  if (m_ == 1) return *this;
  k %= m_;
  if (k < 0) k += m_;
  if (std::gcd(k, m_) != 1) fail("BadParameters", "galois exponent not coprime to conductor");
  std::vector<Rat> b(m_);
  for (size_t j = 0; j < c_.size(); ++j)
    if (sgn(c_[j])) b[(long)((__int128)j * k % m_)] += c_[j];
  CycNum r;
  r.m_ = m_;
  r.c_ = reduce_buckets(m_, b);
  r.normalize();
  return r;
}

CycNum CycNum::conj() const { return galois(m_ - 1); }

std::string CycNum::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (size_t j = 0; j < c_.size(); ++j) {
    if (sgn(c_[j]) == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[j].get_str();
    if (j > 0) os << "*z" << m_ << "^" << j;
  }
  if (first) os << "0";
  return os.str();
}

std::string CycNum::to_json() const {
  nlohmann::json j;
  j["m"] = m_;
  std::vector<std::string> cs;
  for (const auto& x : c_) {
    Rat y = x;
    y.canonicalize();
    cs.push_back(y.get_num().get_str() + "/" + y.get_den().get_str());
  }
  j["coeffs"] = cs;
  return j.dump();
}

CycNum CycNum::from_json(const std::string& s) {
  auto j = nlohmann::json::parse(s);
  long m = j.at("m").get<long>();
  std::vector<Rat> cs;
  for (const auto& e : j.at("coeffs")) {
    Rat r(e.get<std::string>());
    r.canonicalize();
    cs.push_back(r);
  }
  return from_coeffs(m, std::move(cs));
}

ComplexApprox cyc_embed(const CycNum& a, int precision_bits) {
  // long double carries a 64-bit mantissa; requests beyond 60 bits are capped.
  int bits = std::min(precision_bits, 60);
  const long double pi = 3.141592653589793238462643383279502884L;
  ComplexApprox r;
  long double mag = 0;
  long m = a.conductor();
  for (size_t j = 0; j < a.coeffs().size(); ++j) {
    const Rat& c = a.coeffs()[j];
    if (sgn(c) == 0) continue;
    long double cv = (long double)c.get_d();
    if (!c.get_den().fits_slong_p() || !c.get_num().fits_slong_p()) {
      cv = (long double)c.get_d();
    } else {
      cv = (long double)c.get_num().get_si() / (long double)c.get_den().get_si();
    }
    long double ang = 2 * pi * (long double)j / (long double)m;
    r.re += cv * std::cos(ang);
    r.im += cv * std::sin(ang);
    mag += std::fabs(cv);
  }
  long double ulp = std::ldexp(1.0L, -62);
  r.eps = std::ldexp(1.0L, -bits) * (1 + mag) + 8 * ulp * (1 + mag) * (long double)(a.coeffs().size() + 1);
  return r;
}

}  // namespace mdsfe
