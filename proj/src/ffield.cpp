#include "mdsfe/ffield.hpp"

#include <atomic>
#include <map>
#include <numeric>
#include <tuple>

#include "mdsfe/error.hpp"

namespace mdsfe {

namespace {

std::atomic<long> next_field_id{1};

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::vector<long> prime_factors(long n) {
  std::vector<long> r;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      r.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) r.push_back(n);
  return r;
}

// Minimal polynomial arithmetic over a Field, used only during construction.
using P = std::vector<int>;

void trim(P& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

P pmod(P a, const P& m, const Field& F) {
  trim(a);
  int inv_lead = F.inv(m.back());
  while (a.size() >= m.size()) {
    int c = F.mul(a.back(), inv_lead);
    size_t sh = a.size() - m.size();
    for (size_t i = 0; i < m.size(); ++i) a[sh + i] = F.sub(a[sh + i], F.mul(c, m[i]));
    trim(a);
  }
  return a;
}

P pmul(const P& a, const P& b, const Field& F) {
  if (a.empty() || b.empty()) return {};
  P r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

P pmulmod(const P& a, const P& b, const P& m, const Field& F) { return pmod(pmul(a, b, F), m, F); }

P ppowmod(P a, long long e, const P& m, const Field& F) {
  P r{1};
  a = pmod(a, m, F);
  while (e) {
    if (e & 1) r = pmulmod(r, a, m, F);
    e >>= 1;
    if (e) a = pmulmod(a, a, m, F);
  }
  return r;
}

P pgcd(P a, P b, const Field& F) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    P r = pmod(a, b, F);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

P psub(P a, const P& b, const Field& F) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = F.sub(a[i], b[i]);
  trim(a);
  return a;
}

// Rabin-style irreducibility: gcd(x^{Q^i} - x, f) = 1 for i <= deg/2.
bool irreducible(const P& f, const Field& F) {
  int d = (int)f.size() - 1;
  if (d <= 0) return false;
  if (d == 1) return true;
  P x{0, 1};
  P cur = x;
  for (int i = 1; i <= d / 2; ++i) {
    cur = ppowmod(cur, F.q(), f, F);
    P g = pgcd(f, psub(cur, x, F), F);
    if (g.size() > 1) return false;
  }
  return true;
}

}  // namespace

int Field::inv(int a) const {
  if (a == 0) fail("DivisionByZero", "inverse of 0 in finite field");
  long t = log_[a];
  return exp_[t == 0 ? 0 : (q_ - 1 - t)];
}

int Field::pow(int a, long e) const {
  if (a == 0) return e == 0 ? 1 : 0;
  long m = q_ - 1;
  long t = (long)(((__int128)log_[a] * (e % m + m)) % m);
  return exp_[t];
}

int Field::add_slow(int a, int b) const {
  if (!base_) {
    long s = a + b;
    return (int)(s >= p_ ? s - p_ : s);
  }
  int r = 0;
  long mult = 1;
  for (int i = 0; i < e_; ++i) {
    int da = (int)(a % bq_), db = (int)(b % bq_);
    a /= bq_;
    b /= bq_;
    r += (int)(base_->add(da, db) * mult);
    mult *= bq_;
  }
  return r;
}

FieldPtr Field::prime(long p) {
  if (p == 2) fail("EvenCharacteristic", "q must be odd");
  if (!is_prime(p)) fail("NotPrime", std::to_string(p) + " is not prime");
  std::shared_ptr<Field> F(new Field());
  F->p_ = p;
  F->q_ = p;
  F->bq_ = p;
  F->e_ = 1;
  F->abs_e_ = 1;
  F->id_ = next_field_id++;
  // smallest primitive root
  auto pf = prime_factors(p - 1);
  long g = 1;
  for (long c = 1; c < p; ++c) {
    bool ok = true;
    for (long l : pf) {
      long e = (p - 1) / l, r = 1, b = c;
      while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
      }
      if (r == 1) ok = false;
    }
    if (ok) {
      g = c;
      break;
    }
  }
  F->exp_.resize(p - 1);
  F->log_.assign(p, -1);
  long v = 1;
  for (long t = 0; t < p - 1; ++t) {
    F->exp_[t] = (int)v;
    F->log_[v] = (int)t;
    v = v * g % p;
  }
  F->finish();
  return F;
}

FieldPtr Field::build(long p, int e, const std::vector<int>& modulus) {
  if (p % 2 == 0) fail("EvenCharacteristic", "q must be odd");
  FieldPtr base = prime(p);
  if (e < 1) fail("BadParameters", "extension degree must be positive");
  if (e == 1) {
    if (!modulus.empty() && modulus.size() != 2) fail("Reducible", "modulus degree mismatch");
    return base;
  }
  return extension(base, e, modulus);
}

FieldPtr Field::extension(const FieldPtr& base, int e, const std::vector<int>& modulus) {
  if (e == 1) return base;
  const Field& B = *base;
  P mod;
  if (!modulus.empty()) {
    mod = modulus;
    trim(mod);
    if ((int)mod.size() != e + 1 || mod.back() != 1) fail("Reducible", "modulus must be monic of the given degree");
    if (!irreducible(mod, B)) fail("Reducible", "modulus is reducible");
  } else {
    long count = 1;
    for (int i = 0; i < e; ++i) count *= B.q();
    for (long code = 0; code < count; ++code) {
      P cand(e + 1);
      long c = code;
      for (int i = 0; i < e; ++i) {
        cand[i] = (int)(c % B.q());
        c /= B.q();
      }
      cand[e] = 1;
      if (irreducible(cand, B)) {
        mod = cand;
        break;
      }
    }
  }
  std::shared_ptr<Field> F(new Field());
  F->p_ = B.p();
  F->bq_ = B.q();
  F->e_ = e;
  F->abs_e_ = B.absolute_degree() * e;
  F->q_ = 1;
  for (int i = 0; i < e; ++i) F->q_ *= B.q();
  if (F->q_ > 65535) fail("DegreeTooLarge", "field too large for table arithmetic");
  F->base_ = base;
  F->modulus_ = mod;
  F->id_ = next_field_id++;
  long q = F->q_;
  auto to_poly = [&](long code) {
    P r(e);
    for (int i = 0; i < e; ++i) {
      r[i] = (int)(code % B.q());
      code /= B.q();
    }
    trim(r);
    return r;
  };
  auto to_code = [&](const P& a) {
    long c = 0, m = 1;
    for (int i = 0; i < e; ++i) {
      if (i < (int)a.size()) c += a[i] * m;
      m *= B.q();
    }
    return c;
  };
  auto pf = prime_factors(q - 1);
  long gen = -1;
  for (long c = 1; c < q; ++c) {
    P a = to_poly(c);
    bool ok = true;
    for (long l : pf) {
      P r = ppowmod(a, (q - 1) / l, mod, B);
      if (r.size() == 1 && r[0] == 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      gen = c;
      break;
    }
  }
  if (gen < 0) fail("Reducible", "no generator found");
  F->exp_.resize(q - 1);
  F->log_.assign(q, -1);
  P g = to_poly(gen), cur{1};
  for (long t = 0; t < q - 1; ++t) {
    long c = to_code(cur);
    if (F->log_[c] != -1) fail("Reducible", "generator order check failed");
    F->exp_[t] = (int)c;
    F->log_[c] = (int)t;
    cur = pmulmod(cur, g, mod, B);
  }
  F->finish();
  return F;
}

void Field::finish() {
  neg_.resize(q_);
  if (q_ <= 1500) {
    add_.assign((size_t)q_ * q_, 0);
    for (long a = 0; a < q_; ++a)
      for (long b = 0; b < q_; ++b) add_[(size_t)a * q_ + b] = (uint16_t)add_slow((int)a, (int)b);
  }
  for (long a = 0; a < q_; ++a) {
    for (long b = 0; b < q_; ++b)
      if (add((int)a, (int)b) == 0) {
        neg_[a] = (int)b;
        break;
      }
  }
  trace_.resize(q_);
  for (long a = 0; a < q_; ++a) {
    int s = 0;
    if (a != 0) {
      long t = log_[a];
      for (int i = 0; i < abs_e_; ++i) {
        s = add(s, exp_[t]);
        t = (long)((__int128)t * p_ % (q_ - 1));
      }
    }
    if (s >= p_) fail("Reducible", "trace not in prime field");
    trace_[a] = s;
  }
}

bool Field::contains_subfield(const Field& sub) const {
  const Field* f = this;
  while (f) {
    if (f == &sub) return true;
    f = f->base_.get();
  }
  return false;
}

int Field::norm_to(int a, const Field& sub) const {
  if (!contains_subfield(sub)) fail("BadParameters", "not a subfield in the tower");
  if (a == 0) return 0;
  long e = (q_ - 1) / (sub.q() - 1);
  int r = pow(a, e);
  if (r >= sub.q()) fail("BadParameters", "norm left the subfield");
  return r;
}

long Character::order() const {
  long g = std::gcd(((a % n) + n) % n, n);
  return n / g;
}

Character Character::pow(long k) const {
  Character c = *this;
  c.a = (long)(((__int128)a * k % n + n) % n);
  return c;
}

Character Character::operator*(const Character& o) const {
  if (field.get() != o.field.get()) fail("BadParameters", "characters on different fields");
  long L = lcm_long(n, o.n);
  Character c{field, L, (a * (L / n) + o.a * (L / o.n)) % L};
  return c;
}

Character Character::lift(const FieldPtr& ext) const {
  if (ext.get() == field.get()) return *this;
  int ng = ext->norm_to(ext->gen(), *field);
  long s = field->log(ng);
  Character c{ext, n, (long)(((__int128)a * s) % n)};
  return c;
}

Character make_character(const FieldPtr& F, long n) {
  if (n <= 0 || (F->q() - 1) % n != 0)
    fail("OrderNotDividing", std::to_string(n) + " does not divide q-1");
  return Character{F, n, n == 1 ? 0 : 1};
}

Character quadratic_character(const FieldPtr& F) { return Character{F, 2, 1}; }

CycNum gauss_sum(const Character& chi) {
  static std::mutex mu;
  static std::map<std::tuple<long, long, long>, CycNum> cache;
  long n = chi.n, a = ((chi.a % n) + n) % n;
  // reduce to the primitive form of the character
  long g = std::gcd(a, n);
  long nn = n / g, aa = a / g;
  if (nn == 1) aa = 0;
  auto key = std::make_tuple(chi.field->id(), nn, aa);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const Field& F = *chi.field;
  long p = F.p();
  long L = lcm_long(nn, p);
  std::vector<long long> counts(L, 0);
  Character c{chi.field, nn, aa};
  for (long x = 1; x < F.q(); ++x) {
    long e = c.exponent((int)x);
    long t = F.trace((int)x);
    counts[(e * (L / nn) + t * (L / p)) % L] += 1;
  }
  CycNum r = CycNum::from_exponent_counts(L, counts);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, r);
  return r;
}

bool hasse_davenport_check(const Character& chi, int e) {
  if (e < 1) fail("BadParameters", "extension degree must be positive");
  FieldPtr E = Field::extension(chi.field, e);
  Character ce = chi.lift(E);
  CycNum lhs = -gauss_sum(ce);
  CycNum rhs = (-gauss_sum(chi)).pow(e);
  return lhs == rhs;
}

}  // namespace mdsfe
