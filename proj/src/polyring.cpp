#include "mdsfe/polyring.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <sstream>

#include "mdsfe/error.hpp"

namespace mdsfe {

long long enumeration_bound = 10000000;

Poly::Poly(FieldPtr F, std::vector<int> c) : F_(std::move(F)), c_(std::move(c)) { trim(); }

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::constant(const FieldPtr& F, int c) { return Poly(F, {c}); }

Poly Poly::monomial(const FieldPtr& F, int deg, int c) {
  std::vector<int> v(deg + 1, 0);
  v[deg] = c;
  return Poly(F, v);
}

Poly Poly::linear(const FieldPtr& F, int root) { return Poly(F, {F->neg(root), 1}); }

Poly Poly::monic_from_index(const FieldPtr& F, int d, long index) {
  std::vector<int> v(d + 1);
  long q = F->q();
  for (int i = 0; i < d; ++i) {
    v[i] = (int)(index % q);
    index /= q;
  }
  v[d] = 1;
  Poly r;
  r.F_ = F;
  r.c_ = std::move(v);
  return r;
}

long Poly::monic_index() const {
  long idx = 0, m = 1;
  for (int i = 0; i < deg(); ++i) {
    idx += c_[i] * m;
    m *= F_->q();
  }
  return idx;
}

bool Poly::operator<(const Poly& o) const {
  if (deg() != o.deg()) return deg() < o.deg();
  for (int i = deg(); i >= 0; --i)
    if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
  return false;
}

Poly Poly::operator+(const Poly& o) const {
  const FieldPtr& F = F_ ? F_ : o.F_;
  std::vector<int> r(std::max(c_.size(), o.c_.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) r[i] = F->add(coeff((int)i), o.coeff((int)i));
  return Poly(F, r);
}

Poly Poly::operator-(const Poly& o) const {
  const FieldPtr& F = F_ ? F_ : o.F_;
  std::vector<int> r(std::max(c_.size(), o.c_.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) r[i] = F->sub(coeff((int)i), o.coeff((int)i));
  return Poly(F, r);
}

Poly Poly::operator*(const Poly& o) const {
  const FieldPtr& F = F_ ? F_ : o.F_;
  if (is_zero() || o.is_zero()) return Poly(F, {});
  std::vector<int> r(c_.size() + o.c_.size() - 1, 0);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i]) continue;
    for (size_t j = 0; j < o.c_.size(); ++j)
      if (o.c_[j]) r[i + j] = F->add(r[i + j], F->mul(c_[i], o.c_[j]));
  }
  return Poly(F, r);
}

void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
  if (b.is_zero()) fail("DivisionByZero", "polynomial division by zero");
  const FieldPtr& F = b.field();
  std::vector<int> rem = a.coeffs();
  int db = b.deg();
  int inv = F->inv(b.lc());
  std::vector<int> quo(std::max(0, a.deg() - db + 1), 0);
  const auto& bc = b.coeffs();
  for (int i = (int)rem.size() - 1; i >= db; --i) {
    int c = rem[i];
    if (!c) continue;
    c = F->mul(c, inv);
    quo[i - db] = c;
    for (int j = 0; j <= db; ++j) rem[i - db + j] = F->sub(rem[i - db + j], F->mul(c, bc[j]));
  }
  q = Poly(F, quo);
  rem.resize(std::min<size_t>(rem.size(), (size_t)std::max(db, 0)));
  r = Poly(F, rem);
}

Poly Poly::operator%(const Poly& o) const {
  Poly q, r;
  divmod(*this, o, q, r);
  return r;
}

Poly Poly::operator/(const Poly& o) const {
  Poly q, r;
  divmod(*this, o, q, r);
  return q;
}

Poly Poly::scale(int s) const {
  std::vector<int> r(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r[i] = F_->mul(c_[i], s);
  return Poly(F_, r);
}

Poly Poly::pow(int e) const {
  Poly r = constant(F_, 1), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly(F_, {});
  std::vector<int> r(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = F_->mul(c_[i], F_->from_int((long)i));
  return Poly(F_, r);
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scale(F_->inv(lc()));
}

int Poly::eval(int x) const {
  int r = 0;
  for (int i = deg(); i >= 0; --i) r = F_->add(F_->mul(r, x), c_[i]);
  return r;
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

namespace {

int field_pow(const Field& F, int a, long e) {
  if (e == 0) return 1;
  return F.pow(a, e);
}

// Resultant on raw coefficient vectors.
int resultant_raw(std::vector<int> f, std::vector<int> g, const Field& F) {
  auto trim = [](std::vector<int>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  trim(f);
  trim(g);
  if (g.empty()) fail("BadParameters", "resultant with zero polynomial");
  int acc = 1;
  while (true) {
    int dg = (int)g.size() - 1;
    if (dg == 0) {
      if (f.empty()) return acc;
      return F.mul(acc, field_pow(F, g[0], (long)f.size() - 1));
    }
    if (f.empty()) return 0;
    int df = (int)f.size() - 1;
    // f <- f mod g
    if (df >= dg) {
      int inv = F.inv(g.back());
      for (int i = df; i >= dg; --i) {
        int c = f[i];
        if (!c) continue;
        c = F.mul(c, inv);
        for (int j = 0; j <= dg; ++j) f[i - dg + j] = F.sub(f[i - dg + j], F.mul(c, g[j]));
      }
      f.resize(dg);
      trim(f);
    }
    if (f.empty()) return 0;
    int dr = (int)f.size() - 1;
    acc = F.mul(acc, field_pow(F, g.back(), df - dr));
    if ((long)dr * dg % 2) acc = F.neg(acc);
    std::swap(f, g);
  }
}

}  // namespace

int resultant(const Poly& f, const Poly& g) {
  const FieldPtr& F = g.field() ? g.field() : f.field();
  return resultant_raw(f.coeffs(), g.coeffs(), *F);
}

int discriminant(const Poly& f) {
  if (f.deg() < 1) fail("BadParameters", "discriminant needs degree >= 1");
  const Field& F = *f.field();
  long d = f.deg();
  // Res(f', f) with our convention is lc(f)^{deg f'} prod f'(b).
  int r = resultant(f.derivative(), f);
  int v = F.mul(F.inv(f.lc()), r);
  if ((d * (d - 1) / 2) % 2) v = F.neg(v);
  return v;
}

long residue_exponent(const Poly& f, const Poly& g, const Character& chi) {
  if (g.is_zero()) fail("BadParameters", "residue symbol modulo zero");
  const Field& F = *chi.field;
  std::vector<int> gm = g.coeffs();
  if (g.lc() != 1) {
    int inv = F.inv(g.lc());
    for (auto& c : gm) c = F.mul(c, inv);
  }
  int r = resultant_raw(f.coeffs(), gm, F);
  return chi.exponent(r);
}

CycNum residue_symbol(const Poly& f, const Poly& g, const Character& chi) {
  long e = residue_exponent(f, g, chi);
  return e < 0 ? CycNum(0) : CycNum::zeta(chi.n, e);
}

long scalar_residue_exponent(int a, const Poly& g, const Character& chi) {
  return residue_exponent(Poly::constant(chi.field, a), g, chi);
}

CycNum ff_gauss_sum(const Poly& f1, const Poly& f2, const Character& chi) {
  const Field& F = *chi.field;
  if (f2.is_zero()) fail("BadParameters", "Gauss sum modulo zero");
  int d = f2.deg();
  if (d == 0) return CycNum(1);
  long long count = count_monic(chi.field, d);
  Poly g = f2.monic();
  Poly f1r = f1 % g;
  long n = chi.n, p = F.p();
  long L = lcm_long(n, p);
  std::vector<long long> counts(L, 0);
  long q = F.q();
  std::vector<int> h(d, 0);
  const auto& gc = g.coeffs();
  for (long long idx = 0; idx < count; ++idx) {
    long t = idx;
    for (int i = 0; i < d; ++i) {
      h[i] = (int)(t % q);
      t /= q;
    }
    int res = resultant_raw(h, gc, F);
    long e = chi.exponent(res);
    if (e < 0) continue;
    // coefficient of T^{d-1} in h * f1r mod g
    Poly prod = Poly(chi.field, h) * f1r;
    Poly rem = prod % g;
    int c = rem.coeff(d - 1);
    long tr = F.trace(c);
    counts[(e * (L / n) + tr * (L / p)) % L] += 1;
  }
  return CycNum::from_exponent_counts(L, counts);
}

long long count_monic(const FieldPtr& F, int d) {
  long long c = 1;
  for (int i = 0; i < d; ++i) {
    c *= F->q();
    if (c > enumeration_bound) fail("DegreeTooLarge", "q^d exceeds enumeration bound");
  }
  return c;
}

void for_each_monic(const FieldPtr& F, int d, const std::function<void(const Poly&)>& fn) {
  long long c = count_monic(F, d);
  for (long long i = 0; i < c; ++i) fn(Poly::monic_from_index(F, d, (long)i));
}

std::vector<Poly> enumerate_monic(const FieldPtr& F, int d) {
  std::vector<Poly> r;
  r.reserve((size_t)count_monic(F, d));
  for_each_monic(F, d, [&](const Poly& p) { r.push_back(p); });
  return r;
}

const std::vector<Poly>& primes_of_degree(const FieldPtr& F, int d) {
  static std::mutex mu;
  static std::map<std::pair<long, int>, std::unique_ptr<std::vector<Poly>>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({F->id(), d});
    if (it != cache.end()) return *it->second;
  }
  auto v = std::make_unique<std::vector<Poly>>();
  if (d >= 1) {
    for_each_monic(F, d, [&](const Poly& p) {
      if (is_irreducible(p)) v->push_back(p);
    });
  }
  std::lock_guard<std::mutex> lock(mu);
  auto& ref = *v;
  cache[{F->id(), d}] = std::move(v);
  return ref;
}

bool is_irreducible(const Poly& f) {
  int d = f.deg();
  if (d < 1) return false;
  if (d == 1) return true;
  // gcd(T^{q^i} - T, f) = 1 for i <= d/2
  const FieldPtr& F = f.field();
  Poly T = Poly::monomial(F, 1);
  Poly cur = T;
  for (int i = 1; i <= d / 2; ++i) {
    // cur <- cur^q mod f
    Poly b = cur, r = Poly::constant(F, 1);
    long e = F->q();
    while (e) {
      if (e & 1) r = (r * b) % f;
      e >>= 1;
      if (e) b = (b * b) % f;
    }
    cur = r;
    if (gcd(f, cur - T).deg() > 0) return false;
  }
  return true;
}

Factorization factor_monic(const Poly& f) {
  if (!f.is_monic()) fail("BadParameters", "factor_monic needs a monic polynomial");
  Factorization out;
  Poly rest = f;
  const FieldPtr& F = f.field();
  for (int d = 1; 2 * d <= rest.deg(); ++d) {
    for (const Poly& p : primes_of_degree(F, d)) {
      if (2 * d > rest.deg()) break;
      int m = 0;
      while (true) {
        Poly q, r;
        divmod(rest, p, q, r);
        if (!r.is_zero()) break;
        rest = q;
        ++m;
      }
      if (m) out.push_back({p, m});
    }
  }
  if (rest.deg() >= 1) {
    bool merged = false;
    for (auto& pr : out)
      if (pr.first == rest) {
        pr.second++;
        merged = true;
      }
    if (!merged) out.push_back({rest, 1});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

const Factorization& Poly::factorization() const {
  if (!fact_) fact_ = std::make_shared<const Factorization>(factor_monic(*this));
  return *fact_;
}

bool is_squarefree(const Poly& f) {
  for (const auto& pr : f.factorization())
    if (pr.second > 1) return false;
  return true;
}

int moebius(const Poly& f) {
  int s = 1;
  for (const auto& pr : f.factorization()) {
    if (pr.second > 1) return 0;
    s = -s;
  }
  return s;
}

Int poly_phi(const Poly& f) {
  Int r = 1;
  Int q = (long)f.field()->q();
  for (const auto& pr : f.factorization()) {
    Int qd;
    mpz_pow_ui(qd.get_mpz_t(), q.get_mpz_t(), pr.first.deg());
    Int t;
    mpz_pow_ui(t.get_mpz_t(), qd.get_mpz_t(), pr.second - 1);
    r *= t * (qd - 1);
  }
  return r;
}

Int lambda_count(const FieldPtr& F, long d, long e) {
  if (d < 0 || e < 0) return 0;
  Rat q = (long)F->q();
  auto qp = [&](long k) {
    Rat r = 1;
    if (k >= 0)
      for (long i = 0; i < k; ++i) r *= q;
    else
      for (long i = 0; i < -k; ++i) r /= q;
    return r;
  };
  Rat v;
  if (d == 0)
    v = qp(e);
  else if (e >= d)
    v = qp(d + e) * (1 - qp(-1)) * (1 - qp(-2 * d)) / (1 + qp(-1));
  else
    v = qp(d + e) * (1 - qp(-1)) * (1 + qp(-2 * e - 1)) / (1 + qp(-1));
  v.canonicalize();
  if (v.get_den() != 1) fail("InconsistentSystem", "non-integral Lambda value");
  return v.get_num();
}

Int lambda_count_brute(const Poly& pi, long d, long e) {
  if (d < 0 || e < 0) return 0;
  const FieldPtr& F = pi.field();
  auto fs = enumerate_monic(F, (int)d);
  auto ns = enumerate_monic(F, (int)e);
  Int c = 0;
  for (const auto& f : fs) {
    if (gcd(f, pi).deg() > 0) continue;
    for (const auto& nu : ns)
      if (gcd(f, nu).deg() == 0) c += 1;
  }
  return c;
}

namespace {
std::string strip(const std::string& s) {
  std::string r;
  for (char c : s)
    if (!std::isspace((unsigned char)c)) r += c;
  return r;
}
}  // namespace

Poly Poly::parse(const FieldPtr& F, const std::string& text) {
  std::string s = strip(text);
  if (s.empty()) fail("Usage", "empty polynomial");
  std::map<int, long> terms;
  size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      if (s[i] == '-') sign = -1;
      ++i;
    }
    long coef = 1;
    bool have_coef = false;
    if (i < s.size() && std::isdigit((unsigned char)s[i])) {
      size_t j = i;
      while (j < s.size() && std::isdigit((unsigned char)s[j])) ++j;
      coef = std::stol(s.substr(i, j - i));
      have_coef = true;
      i = j;
      if (i < s.size() && s[i] == '*') ++i;
    }
    int power = 0;
    if (i < s.size() && (s[i] == 'T' || s[i] == 't' || s[i] == 'x')) {
      ++i;
      power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        size_t j = i;
        while (j < s.size() && std::isdigit((unsigned char)s[j])) ++j;
        if (j == i) fail("Usage", "bad exponent in polynomial '" + text + "'");
        power = std::stoi(s.substr(i, j - i));
        i = j;
      }
    } else if (!have_coef) {
      fail("Usage", "cannot parse polynomial '" + text + "'");
    }
    terms[power] += sign * coef;
    if (i < s.size() && s[i] != '+' && s[i] != '-') fail("Usage", "cannot parse polynomial '" + text + "'");
  }
  int deg = terms.rbegin()->first;
  std::vector<int> c(deg + 1, 0);
  for (auto& [k, v] : terms) c[k] = F->add(c[k], F->from_int(v));
  return Poly(F, c);
}

std::string Poly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = deg(); i >= 0; --i) {
    int c = c_[i];
    if (!c) continue;
    if (!first) os << "+";
    first = false;
    if (i == 0) {
      os << c;
    } else {
      if (c != 1) os << c << "*";
      os << "T";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

}  // namespace mdsfe
