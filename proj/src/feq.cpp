#include "mdsfe/feq.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mdsfe/error.hpp"

namespace mdsfe {

namespace {

long mod(long a, long n) {
  a %= n;
  return a < 0 ? a + n : a;
}

CycNum sign(bool neg) { return CycNum(neg ? -1 : 1); }

CycNum ipow(long q, long k) {
  Int r = 1;
  for (long i = 0; i < std::abs(k); ++i) r *= q;
  return k >= 0 ? CycNum(Rat(r)) : CycNum(Rat(1, 1) / Rat(r));
}

CycNum ext_gauss(const Character& psi, int delta) {
  CycNum g = gauss_sum(psi);
  if (delta == 1) return g;
  return -((-g).pow(delta));
}

std::string exps_str(const Exps& d) {
  std::string s;
  for (size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s;
}

}  // namespace

// ---------------------------------------------------------------- LPoly

LPoly LPoly::monomial(int e, const CycNum& a) {
  LPoly p;
  p.low = e;
  p.c = {a};
  p.trim();
  return p;
}

bool LPoly::is_zero() const { return c.empty(); }

CycNum LPoly::coeff(int e) const {
  int j = e - low;
  return (j >= 0 && j < (int)c.size()) ? c[j] : CycNum(0);
}

void LPoly::add_term(int e, const CycNum& a) {
  if (a.is_zero()) return;
  if (c.empty()) {
    low = e;
    c = {a};
    return;
  }
  if (e < low) {
    c.insert(c.begin(), low - e, CycNum(0));
    low = e;
  }
  int j = e - low;
  if (j >= (int)c.size()) c.resize(j + 1);
  c[j] += a;
  trim();
}

void LPoly::trim() {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
  size_t s = 0;
  while (s < c.size() && c[s].is_zero()) ++s;
  if (s == c.size()) {
    c.clear();
    low = 0;
    return;
  }
  if (s) {
    c.erase(c.begin(), c.begin() + s);
    low += (int)s;
  }
}

LPoly LPoly::operator+(const LPoly& o) const {
  LPoly r = *this;
  for (size_t j = 0; j < o.c.size(); ++j) r.add_term(o.low + (int)j, o.c[j]);
  return r;
}

LPoly LPoly::operator-(const LPoly& o) const { return *this + o.scaled(CycNum(-1)); }

LPoly LPoly::operator*(const LPoly& o) const {
  LPoly r;
  if (is_zero() || o.is_zero()) return r;
  r.low = low + o.low;
  r.c.assign(c.size() + o.c.size() - 1, CycNum(0));
  for (size_t a = 0; a < c.size(); ++a) {
    if (c[a].is_zero()) continue;
    for (size_t b = 0; b < o.c.size(); ++b) r.c[a + b] += c[a] * o.c[b];
  }
  r.trim();
  return r;
}

LPoly LPoly::scaled(const CycNum& a) const {
  LPoly r = *this;
  for (auto& x : r.c) x *= a;
  r.trim();
  return r;
}

bool LPoly::operator==(const LPoly& o) const {
  LPoly a = *this, b = o;
  a.trim();
  b.trim();
  if (a.c.size() != b.c.size()) return false;
  if (a.c.empty()) return true;
  if (a.low != b.low) return false;
  for (size_t j = 0; j < a.c.size(); ++j)
    if (a.c[j] != b.c[j]) return false;
  return true;
}

// ---------------------------------------------------------------- RatFn

RatFn::RatFn(const CycNum& a) : num_(LPoly::monomial(0, a)) {}

RatFn::RatFn(LPoly num, std::vector<Binom> den) : num_(std::move(num)) {
  for (auto& b : den)
    if (!b.c.is_zero()) den_.push_back(b);
  num_.trim();
}

RatFn RatFn::monomial(int e, const CycNum& a) { return RatFn(LPoly::monomial(e, a)); }

RatFn RatFn::geometric(const CycNum& c, int m) { return RatFn(LPoly::monomial(0), {{c, m}}); }

static LPoly binom_poly(const RatFn::Binom& b) {
  LPoly p = LPoly::monomial(0);
  p.add_term(b.m, -b.c);
  return p;
}

LPoly RatFn::den_poly() const {
  LPoly p = LPoly::monomial(0);
  for (auto& b : den_) p = p * binom_poly(b);
  return p;
}

RatFn RatFn::operator+(const RatFn& o) const {
  std::vector<bool> used(o.den_.size(), false);
  std::vector<Binom> common, only_a;
  for (auto& b : den_) {
    bool found = false;
    for (size_t j = 0; j < o.den_.size(); ++j)
      if (!used[j] && o.den_[j].m == b.m && o.den_[j].c == b.c) {
        used[j] = true;
        found = true;
        break;
      }
    (found ? common : only_a).push_back(b);
  }
  LPoly fa = num_, fb = o.num_;
  std::vector<Binom> den = den_;
  for (size_t j = 0; j < o.den_.size(); ++j)
    if (!used[j]) {
      fa = fa * binom_poly(o.den_[j]);
      den.push_back(o.den_[j]);
    }
  for (auto& b : only_a) fb = fb * binom_poly(b);
  return RatFn(fa + fb, den);
}

RatFn RatFn::operator-() const { return RatFn(num_.scaled(CycNum(-1)), den_); }
RatFn RatFn::operator-(const RatFn& o) const { return *this + (-o); }

RatFn RatFn::operator*(const RatFn& o) const {
  auto den = den_;
  den.insert(den.end(), o.den_.begin(), o.den_.end());
  return RatFn(num_ * o.num_, den);
}

bool operator==(const RatFn& a, const RatFn& b) { return a.num_ * b.den_poly() == b.num_ * a.den_poly(); }

RatFn RatFn::subst_scale(const CycNum& a) const { return subst_power(a, 1); }

RatFn RatFn::subst_power(const CycNum& a, int e) const {
  if (e < 1) fail("InvalidArgument", "substitution exponent must be positive");
  LPoly n;
  for (size_t j = 0; j < num_.c.size(); ++j) {
    int k = num_.low + (int)j;
    n.add_term(k * e, num_.c[j] * a.pow(k));
  }
  std::vector<Binom> den;
  for (auto& b : den_) den.push_back({b.c * a.pow(b.m), b.m * e});
  return RatFn(n, den);
}

RatFn RatFn::subst_inverse(const CycNum& a) const {
  LPoly n;
  for (size_t j = 0; j < num_.c.size(); ++j) {
    int k = num_.low + (int)j;
    n.add_term(-k, num_.c[j] * a.pow(k));
  }
  std::vector<Binom> den;
  for (auto& b : den_) {
    CycNum ca = b.c * a.pow(b.m);
    n = n * LPoly::monomial(b.m, -ca.inverse());
    den.push_back({ca.inverse(), b.m});
  }
  return RatFn(n, den);
}

RatFn RatFn::project(long k, long n) const {
  LPoly p = num_;
  std::vector<Binom> den;
  for (auto& b : den_) {
    long L = std::lcm((long)b.m, n);
    long t = L / b.m;
    LPoly f;
    CycNum cj(1);
    for (long j = 0; j < t; ++j) {
      f.add_term((int)(b.m * j), cj);
      cj *= b.c;
    }
    p = p * f;
    den.push_back({b.c.pow(t), (int)L});
  }
  LPoly q;
  for (size_t j = 0; j < p.c.size(); ++j) {
    int e = p.low + (int)j;
    if (mod(e - k, n) == 0) q.add_term(e, p.c[j]);
  }
  return RatFn(q, den);
}

std::map<int, CycNum> RatFn::expand(int hi) const {
  std::map<int, CycNum> out;
  if (num_.is_zero()) return out;
  int len = hi - num_.low;
  if (len < 0) return out;
  std::vector<CycNum> h(len + 1, CycNum(0));
  h[0] = CycNum(1);
  for (auto& b : den_) {
    // multiply by 1/(1 - c x^m)
    for (int j = b.m; j <= len; ++j) h[j] += b.c * h[j - b.m];
  }
  for (int e = num_.low; e <= hi; ++e) {
    CycNum s;
    for (size_t j = 0; j < num_.c.size(); ++j) {
      int k = num_.low + (int)j;
      if (k > e) break;
      if (!num_.c[j].is_zero() && !h[e - k].is_zero()) s += num_.c[j] * h[e - k];
    }
    if (!s.is_zero()) out[e] = s;
  }
  return out;
}

std::string RatFn::to_string() const {
  std::ostringstream os;
  os << "(";
  bool first = true;
  for (size_t j = 0; j < num_.c.size(); ++j) {
    if (num_.c[j].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << num_.c[j].to_string() << ")*x^" << num_.low + (int)j;
  }
  if (first) os << "0";
  os << ")";
  for (auto& b : den_) os << "/(1 - (" << b.c.to_string() << ")*x^" << b.m << ")";
  return os.str();
}

RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b) {
  size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
  RatMatrix r(n, std::vector<RatFn>(m));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) {
      RatFn s;
      for (size_t t = 0; t < k; ++t)
        if (!a[i][t].is_zero() && !b[t][j].is_zero()) s = s + a[i][t] * b[t][j];
      r[i][j] = s;
    }
  return r;
}

bool is_identity(const RatMatrix& a) {
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j)
      if (a[i][j] != RatFn(CycNum(i == j ? 1 : 0))) return false;
  return true;
}

RatMatrix mat_subst_inverse(const RatMatrix& a, const CycNum& c) {
  RatMatrix r = a;
  for (auto& row : r)
    for (auto& e : row) e = e.subst_inverse(c);
  return r;
}

// ---------------------------------------------------------------- nodes, sigma, tau

const char* node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Kubota:
      return "kubota";
    case NodeKind::Dirichlet:
      return "dirichlet";
    default:
      return "none";
  }
}

NodeKind classify_node(const MdsConfig& cfg, int i) {
  if (cfg.M[i][i] == 0) return NodeKind::Dirichlet;
  auto P = mds_params(cfg);
  if (P.ni[i] == 1) return NodeKind::None;
  return P.kubota_ok(i) ? NodeKind::Kubota : NodeKind::None;
}

IntMatrix tau_apply(int i, const IntMatrix& M, long n) {
  int r = (int)M.size();
  if (i < 0 || i >= r) fail("InvalidArgument", "node index out of range");
  if (mod(M[i][i], n) != 0) fail("NotDirichletNode", "M_ii != 0 at node " + std::to_string(i + 1));
  auto e = [&](int a, int b) { return mod(M[a][b], n) != 0 ? 1L : 0L; };
  IntMatrix R = M;
  for (int h = 0; h < r; ++h)
    for (int j = 0; j < r; ++j) {
      long v;
      if (h == i && j == i)
        v = 0;
      else if (h == i || j == i)
        v = -M[h][j];
      else if (h == j)
        v = M[j][j] + e(j, i) * (M[j][i] + n / 2);
      else
        v = M[h][j] + e(h, i) * e(i, j) * (M[h][i] + M[i][j]);
      R[h][j] = mod(v, n);
    }
  return R;
}

Exps MonomialMap::image(const Exps& d) const {
  Exps r = d;
  long s = -d[i];
  for (size_t j = 0; j < d.size(); ++j)
    if ((int)j != i) s += shift[j] * d[j];
  r[i] = (int)s;
  return r;
}

CycNum MonomialMap::scalar(const Exps& d) const {
  CycNum s(1);
  for (size_t j = 0; j < d.size(); ++j)
    if (d[j]) s *= base[j].pow(d[j]);
  return s;
}

MonomialMap sigma_apply(NodeKind kind, int i, const MdsConfig& cfg) {
  int r = cfg.r();
  long n = cfg.n();
  MonomialMap m;
  m.i = i;
  m.shift.assign(r, 0);
  m.base.assign(r, CycNum(1));
  CycNum q(Rat(cfg.field->q()));
  if (kind == NodeKind::Kubota) {
    auto P = mds_params(cfg);
    if (!P.kubota_ok(i)) fail("MissingNij", "p_ij > 0 at node " + std::to_string(i + 1));
    CycNum g = gauss_sum(cfg.diag_char(i));
    m.base[i] = g * g / (q * q);
    for (int j = 0; j < r; ++j)
      if (j != i) {
        m.shift[j] = P.nij[i][j];
        m.base[j] = (q / g).pow(P.nij[i][j]);
      }
    return m;
  }
  if (kind != NodeKind::Dirichlet || mod(cfg.M[i][i], n) != 0)
    fail("NotDirichletNode", "M_ii != 0 at node " + std::to_string(i + 1));
  m.base[i] = q.inverse();
  for (int j = 0; j < r; ++j)
    if (j != i && cfg.M[i][j] != 0) {
      m.shift[j] = 1;
      m.base[j] = gauss_sum(cfg.chi.pow(cfg.M[i][j]));
    }
  return m;
}

// ---------------------------------------------------------------- scattering matrices

namespace {

struct KubotaData {
  long ni;
  Character psi;
  bool psi_neg;
  int delta;
  CycNum rho, c0, q, g;
  const Poly* pi;
};

KubotaData kubota_data(const MdsConfig& cfg, int i, const Poly* pi) {
  long q = cfg.field->q();
  if (q % 4 != 1) fail("Requires1Mod4", "the Kubota functional equation needs q = 1 mod 4");
  auto P = mds_params(cfg);
  if (P.ni[i] == 1) fail("InadmissibleDiagonal", "M_ii = n/2 at node " + std::to_string(i + 1));
  if (!P.kubota_ok(i)) fail("MissingNij", "p_ij > 0 at node " + std::to_string(i + 1));
  KubotaData k;
  k.ni = P.ni[i];
  k.psi = cfg.diag_char(i);
  k.psi_neg = k.psi.value_at_minus_one() != 0;
  k.delta = pi ? pi->deg() : 1;
  k.pi = pi;
  k.q = CycNum{Rat(q)};
  k.g = gauss_sum(k.psi);
  if (pi) {
    CycNum Q = ipow(q, k.delta);
    k.rho = Q.inverse();
    k.c0 = CycNum(1) - k.rho;
  } else {
    k.rho = k.q;
    k.c0 = CycNum(1) - k.q;
  }
  return k;
}

// Gamma * (1 - rho u^{n_i}) as Laurent polynomials in u.
std::vector<std::vector<LPoly>> kubota_gamma_hat(const KubotaData& D, long K) {
  long n = D.ni;
  std::vector<std::vector<LPoly>> G(n, std::vector<LPoly>(n));
  for (long k = 0; k < n; ++k) {
    if (mod(2 * k - K - 1, n) == 0) {
      LPoly p = LPoly::monomial((int)(1 - n));
      p.add_term(1, -D.rho);
      G[k][k] = p;
      continue;
    }
    G[k][k] = LPoly::monomial((int)(1 - mod(K + 1 - 2 * k, n)), D.c0);
    long l = mod(1 + K - k, n);
    bool neg = D.psi_neg && ((l * (1 + K) * D.delta) % 2 != 0);
    Character ch = D.psi.pow(mod(2 * k - K - 1, n));
    CycNum gs;
    if (D.pi) {
      Poly one = Poly::constant(D.pi->field(), 1);
      gs = ff_gauss_sum(one, *D.pi, ch) * D.rho;
    } else {
      gs = gauss_sum(ch);
    }
    LPoly p = LPoly::monomial(1, gs);
    p.add_term((int)(1 - n), -gs);
    G[k][l] = p.scaled(sign(neg));
  }
  return G;
}

}  // namespace

RatMatrix kubota_gamma_u(const MdsConfig& cfg, int i, long K, const Poly* pi) {
  auto D = kubota_data(cfg, i, pi);
  auto H = kubota_gamma_hat(D, K);
  RatMatrix R(D.ni, std::vector<RatFn>(D.ni));
  for (long k = 0; k < D.ni; ++k)
    for (long l = 0; l < D.ni; ++l)
      if (!H[k][l].is_zero()) R[k][l] = RatFn(H[k][l], {{D.rho, (int)D.ni}});
  return R;
}

ScatteringMatrix scattering_kubota(const MdsConfig& cfg, int i, long K, const Poly* pi) {
  auto D = kubota_data(cfg, i, pi);
  ScatteringMatrix S;
  S.kind = NodeKind::Kubota;
  S.local = pi != nullptr;
  S.delta = D.delta;
  S.size = D.ni;
  S.ni = D.ni;
  S.K = K;
  auto U = kubota_gamma_u(cfg, i, K, pi);
  CycNum a = (D.q / D.g).pow(D.delta);
  for (auto& row : U)
    for (auto& e : row) e = e.subst_power(a, D.delta);
  S.entries = U;
  return S;
}

namespace {

struct DirichletCtx {
  long v = 0, vi = 0, K = 0;
  bool b = false;
  CycNum omega = CycNum(1);
};

DirichletCtx dirichlet_ctx(const MdsConfig& cfg, int i, const Exps& k) {
  long n = cfg.n();
  int r = cfg.r();
  DirichletCtx c;
  bool xi_neg = cfg.xi().value_at_minus_one() != 0;
  bool chi_neg = cfg.chi.value_at_minus_one() != 0;
  long sgn = 0;
  for (int j = 0; j < r; ++j) {
    if (j == i) continue;
    c.v += (long)k[j] * cfg.M[j][i];
    if (j > i) c.vi += (long)k[j] * cfg.M[i][j];
    if (cfg.M[i][j] != 0) {
      c.K += k[j];
      if (xi_neg) sgn += (long)k[j] * (k[j] - 1) / 2;
      for (int h = 0; h < j; ++h)
        if (h != i && cfg.M[h][i] != 0 && chi_neg) sgn += (long)k[h] * k[j] * cfg.M[h][i];
    }
  }
  c.b = mod(c.v, n) == 0;
  c.omega = sign(sgn % 2 != 0);
  return c;
}

}  // namespace

RatMatrix dirichlet_theta_printed(long n, const CycNum& q, long K, bool b) {
  RatMatrix T(n, std::vector<RatFn>(n));
  for (long k = 0; k < n; ++k)
    for (long l = 0; l < n; ++l) {
      long j = mod(k + l - K + 1, n);
      if (!b) {
        if (j == 0) T[k][l] = RatFn::monomial(-1);
        continue;
      }
      RatFn den = RatFn::geometric(q.pow(n), (int)n);
      if (j == 0) {
        LPoly p = LPoly::monomial((int)(n - 1), q.pow(n - 1));
        p.add_term(-1, CycNum(-1));
        T[k][l] = RatFn(p) * den;
      } else {
        T[k][l] = RatFn::monomial((int)(j - 1), (q.inverse() - CycNum(1)) * q.pow(j)) * den;
      }
    }
  return T;
}

ScatteringMatrix scattering_dirichlet(const MdsConfig& cfg, int i, const Exps& k, const Poly* pi, bool raw_theta) {
  long n = cfg.n();
  if (mod(cfg.M[i][i], n) != 0) fail("NotDirichletNode", "M_ii != 0 at node " + std::to_string(i + 1));
  auto c = dirichlet_ctx(cfg, i, k);
  int delta = pi ? pi->deg() : 1;
  long q = cfg.field->q();
  CycNum Q = ipow(q, delta);
  ScatteringMatrix S;
  S.kind = NodeKind::Dirichlet;
  S.local = pi != nullptr;
  S.delta = delta;
  S.size = n;
  S.K = c.K;
  S.v = c.v;
  S.vi = c.vi;
  S.b = c.b;
  S.omega = c.omega;
  // R_b and the Theta entries, in X = x^delta
  RatFn R(CycNum(1));
  if (c.b) {
    LPoly num;
    if (pi) {
      num.add_term(1, Q);
      num.add_term(0, CycNum(-1));
      R = RatFn(num, {{CycNum(1), 1}});
    } else {
      num.add_term(1, CycNum(1));
      num.add_term(0, CycNum(-1));
      R = RatFn(num, {{Q, 1}});
    }
  }
  RatFn pre = pi ? RatFn::monomial(-1, Q.inverse()) : RatFn::monomial(-1);
  bool chi_neg = cfg.chi.value_at_minus_one() != 0;
  S.entries.assign(n, std::vector<RatFn>(n));
  for (long a = 0; a < n; ++a)
    for (long l = 0; l < n; ++l) {
      RatFn e = pre * R.project(a + l - c.K + 1, n);
      if (!raw_theta && chi_neg && ((c.v + c.vi) * (a + l) * delta) % 2 != 0) e = -e;
      S.entries[a][l] = e.subst_power(CycNum(1), delta);
    }
  if (!pi) {
    S.prefactor = c.omega * (c.b ? CycNum(1) : gauss_sum(cfg.chi.pow(mod(c.v, n))).inverse());
  } else {
    CycNum p = c.omega.pow(delta);
    if (!c.b) p *= (ext_gauss(cfg.chi.pow(mod(c.v, n)), delta) / Q).inverse();
    if ((delta + 1) * c.K % 2) p = -p;
    long de = residue_exponent(pi->derivative(), *pi, cfg.chi);
    p *= CycNum::zeta(n, mod(-de * (c.v + c.K * n / 2), n));
    S.prefactor = p;
  }
  return S;
}

RatMatrix expand_operator(const RatMatrix& G, long m, long n, long K) {
  if ((long)G.size() != m) fail("InvalidArgument", "matrix size differs from m");
  if (n % m != 0) fail("InvalidArgument", "m must divide n");
  for (long k = 0; k < m; ++k)
    for (long l = 0; l < m; ++l)
      if (!G[k][l].is_zero() && G[k][l].project(k + l - K, m) != G[k][l])
        fail("SupportViolation", "entry (" + std::to_string(k) + "," + std::to_string(l) + ") off its class");
  RatMatrix E(n, std::vector<RatFn>(n));
  for (long k = 0; k < n; ++k)
    for (long l = 0; l < n; ++l) {
      const RatFn& g = G[k % m][l % m];
      if (!g.is_zero()) E[k][l] = g.project(k + l - K, n);
    }
  return E;
}

RatMatrix kubota_expanded_printed(const MdsConfig& cfg, int i, long K) {
  auto D = kubota_data(cfg, i, nullptr);
  long n = cfg.n(), m = D.ni;
  long qq = cfg.field->q();
  RatMatrix E(n, std::vector<RatFn>(n));
  RatFn den = RatFn::geometric(ipow(qq, n / m), (int)n);
  for (long k = 0; k < n; ++k)
    for (long l = 0; l < n; ++l) {
      bool same = mod(k - l, m) == 0;
      bool anti = mod(l - (1 + K - k), m) == 0;
      if (same && anti) {
        if (mod(k + l - (1 + K - m), n) == 0) E[k][l] = RatFn::monomial((int)(1 - m));
        continue;
      }
      if (same) {
        long a = mod(n - m + 1 + K - k - l, n);
        long e = (n - m - a + mod(1 + K - k - l, m)) / m;
        E[k][l] = RatFn::monomial((int)(n - m + 1 - a), ipow(qq, e) * D.c0) * den;
      } else if (anti) {
        bool neg = D.psi_neg && ((l * (1 + K)) % 2 != 0);
        CycNum gs = gauss_sum(D.psi.pow(mod(2 * k - K - 1, m)));
        long a1 = mod(k + l - K - 1, n), a2 = mod(k + l - K - 1 + m, n);
        LPoly p = LPoly::monomial((int)(1 + a1), ipow(qq, a1 / m));
        p.add_term((int)(1 - m + a2), -ipow(qq, a2 / m));
        E[k][l] = RatFn(p.scaled(sign(neg) * gs)) * den;
      }
    }
  CycNum a = D.q / D.g;
  for (auto& row : E)
    for (auto& e : row) e = e.subst_power(a, 1);
  return E;
}

// ---------------------------------------------------------------- series sets

int SeriesSet::find(const IntMatrix& M) const {
  for (size_t o = 0; o < objects.size(); ++o)
    if (objects[o] == M) return (int)o;
  return -1;
}

std::optional<CycNum> SeriesSet::get(int o, const Exps& d) const {
  auto it = known[o].find(d);
  if (it == known[o].end()) return std::nullopt;
  return it->second;
}

CoeffTable SeriesSet::table(int o, int Dt) const {
  CoeffTable T{config(o), local, pi, Dt, {}};
  int r = (int)objects[o].size();
  Exps d(r, 0);
  while (true) {
    int s = 0;
    for (int x : d) s += x;
    if (s <= Dt) {
      CoeffEntry e;
      auto v = get(o, d);
      if (v) {
        e.value = *v;
        e.known = true;
      }
      T.entries[d] = e;
    }
    int i = 0;
    for (; i < r; ++i) {
      if (++d[i] <= Dt) break;
      d[i] = 0;
    }
    if (i == r) break;
  }
  return T;
}

std::string SeriesSet::to_json(int Dt) const {
  nlohmann::ordered_json j;
  j["mode"] = local ? "local" : "global";
  j["q"] = cfg.field->q();
  j["n"] = cfg.n();
  if (local) j["pi"] = pi.to_string();
  j["degree"] = Dt;
  auto arr = nlohmann::ordered_json::array();
  for (size_t o = 0; o < objects.size(); ++o) arr.push_back(nlohmann::ordered_json::parse(table((int)o, Dt).to_json()));
  j["objects"] = arr;
  return j.dump();
}

std::vector<IntMatrix> reflection_closure(const MdsConfig& cfg, int max_objects) {
  std::vector<IntMatrix> objs = {cfg.M};
  for (size_t o = 0; o < objs.size(); ++o) {
    for (int i = 0; i < cfg.r(); ++i) {
      if (objs[o][i][i] != 0) continue;
      auto M2 = tau_apply(i, objs[o], cfg.n());
      if (std::find(objs.begin(), objs.end(), M2) == objs.end()) {
        if ((int)objs.size() >= max_objects)
          fail("PossiblyInfiniteGroupoid", "more than " + std::to_string(max_objects) + " objects");
        objs.push_back(M2);
      }
    }
  }
  return objs;
}

// ---------------------------------------------------------------- slice systems

namespace {

constexpr long kStride = 1 << 20;

struct LinExpr {
  CycNum cst;
  std::map<long, CycNum> coef;
  int maxdeg = 0;

  void add(const LinExpr& o, const CycNum& s) {
    if (s.is_zero()) return;
    cst += o.cst * s;
    for (auto& [k, v] : o.coef) {
      auto& x = coef[k];
      x += v * s;
      if (x.is_zero()) coef.erase(k);
    }
    maxdeg = std::max(maxdeg, o.maxdeg);
  }
};

// One side of a slice: coefficients c(d) of the series in the slice variable,
// c~(d) = alpha(d) c(d), numerator N = den * c~ of degree <= B.
struct Side {
  int obj;
  int B;
  LPoly den;                   // in the slice variable, den(0) = 1
  std::vector<CycNum> alpha;   // alpha(d) for d <= hi
  std::vector<LinExpr> N;      // N_0 .. N_B
  std::vector<CycNum> h;       // 1/den series
};

class SliceBuilder {
 public:
  SliceBuilder(const SeriesSet& set, int i, Exps e, int hi) : set_(set), i_(i), e_(std::move(e)), hi_(hi) {
    esum_ = 0;
    for (size_t j = 0; j < e_.size(); ++j)
      if ((int)j != i_) esum_ += e_[j];
  }

  LinExpr var(int obj, int d) const {
    LinExpr L;
    Exps x = e_;
    x[i_] = d;
    L.maxdeg = esum_ + d;
    auto v = set_.get(obj, x);
    if (v)
      L.cst = *v;
    else
      L.coef[obj * kStride + d] = CycNum(1);
    return L;
  }

  void prepare(Side& s) const {
    int top = std::max(hi_, s.B);
    s.h.assign(top + 1, CycNum(0));
    s.h[0] = CycNum(1);
    for (int j = 1; j <= top; ++j) {
      CycNum t;
      for (int a = 1; a <= std::min(j, s.den.high()); ++a) {
        CycNum da = s.den.coeff(a);
        if (!da.is_zero() && !s.h[j - a].is_zero()) t -= da * s.h[j - a];
      }
      s.h[j] = t;
    }
    s.N.assign(s.B + 1, LinExpr());
    for (int j = 0; j <= s.B; ++j)
      for (int a = 0; a <= std::min(j, std::max(0, s.den.high())); ++a) {
        CycNum da = s.den.coeff(a);
        if (da.is_zero()) continue;
        s.N[j].add(var(s.obj, j - a), da * s.alpha[j - a]);
      }
  }

  // c(d) as a form in the unknowns, through the numerator for d > B.
  LinExpr value_form(const Side& s, int d) const {
    if (d <= s.B) return var(s.obj, d);
    LinExpr L;
    for (int j = 0; j <= s.B; ++j)
      if (!s.h[d - j].is_zero()) L.add(s.N[j], s.h[d - j]);
    LinExpr R;
    R.add(L, s.alpha[d].inverse());
    R.maxdeg = std::max(R.maxdeg, esum_ + d);
    return R;
  }

  // rows c(d) = value_form for known c(d), B < d <= hi
  void tail_rows(const Side& s, std::vector<LinExpr>& rows) const {
    for (int d = s.B + 1; d <= hi_; ++d) {
      LinExpr c = var(s.obj, d);
      if (!c.coef.empty()) continue;
      LinExpr f = value_form(s, d);
      f.add(c, CycNum(-1));
      f.maxdeg = std::max(f.maxdeg, esum_ + d);
      rows.push_back(f);
    }
  }

  int esum() const { return esum_; }

 private:
  const SeriesSet& set_;
  int i_;
  Exps e_;
  int hi_;
  int esum_;
};

struct SliceSystem {
  std::vector<Side> sides;
  std::vector<LinExpr> rows;
};

CycNum chi_sign(bool neg, long e) { return sign(neg && (mod(e, 2) != 0)); }

SliceSystem build_slice(const SeriesSet& set, int o, int i, const Exps& e, int hi, const SliceBuilder& sb) {
  MdsConfig cfg = set.config(o);
  long n = cfg.n();
  int r = cfg.r();
  long q = cfg.field->q();
  const Poly* pi = set.local ? &set.pi : nullptr;
  int delta = pi ? pi->deg() : 1;
  CycNum qc{Rat(q)};
  CycNum Q = ipow(q, delta);
  bool chi_neg = cfg.chi.value_at_minus_one() != 0;
  long vi = 0;
  for (int j = i + 1; j < r; ++j) vi += cfg.M[i][j] * (long)e[j];
  bool tneg = chi_neg && ((vi * delta) % 2 != 0);
  SliceSystem S;
  NodeKind kind = classify_node(cfg, i);
  if (kind == NodeKind::Kubota) {
    auto KD = kubota_data(cfg, i, pi);
    auto P = mds_params(cfg);
    long A = 0;
    for (int j = 0; j < r; ++j)
      if (j != i) A += P.nij[i][j] * (long)e[j];
    long ni = KD.ni;
    Side s;
    s.obj = o;
    s.B = (int)A + 1;
    s.den = LPoly::monomial(0);
    s.den.add_term((int)ni, -KD.rho);
    CycNum step = sign(tneg) * (KD.g / qc).pow(delta);
    int top = std::max(hi, s.B);
    s.alpha.resize(top + 1);
    s.alpha[0] = CycNum(1);
    for (int d = 1; d <= top; ++d) s.alpha[d] = s.alpha[d - 1] * step;
    sb.prepare(s);
    auto H = kubota_gamma_hat(KD, A);
    for (long k = 0; k < ni; ++k) {
      std::map<int, LinExpr> row;
      for (int j = (int)k; j <= s.B; j += (int)ni) {
        row[j].add(s.N[j], CycNum(1));
        row[j - (int)ni].add(s.N[j], -KD.rho);
      }
      for (long l = 0; l < ni; ++l) {
        const LPoly& G = H[k][l];
        if (G.is_zero()) continue;
        for (int j = (int)l; j <= s.B; j += (int)ni)
          for (size_t a = 0; a < G.c.size(); ++a) {
            if (G.c[a].is_zero()) continue;
            int ex = (int)A + G.low + (int)a - j;
            row[ex].add(s.N[j], -G.c[a]);
          }
      }
      for (auto& [ex, L] : row) S.rows.push_back(L);
    }
    sb.tail_rows(s, S.rows);
    S.sides.push_back(std::move(s));
    return S;
  }
  if (kind != NodeKind::Dirichlet) return S;
  auto c = dirichlet_ctx(cfg, i, e);
  int partner = set.find(tau_apply(i, cfg.M, n));
  if (partner < 0) fail("UnknownEntries", "reflected object is not in the series set");
  int Ks = (int)c.K - 1 + (c.b ? 1 : 0);
  CycNum Lam = c.omega.pow(delta);
  if (!pi) {
    if (!c.b) Lam *= gauss_sum(cfg.chi.pow(mod(c.v, n))).inverse();
    for (int j = 0; j < r; ++j)
      if (j != i && cfg.M[i][j] != 0 && e[j]) Lam *= gauss_sum(cfg.chi.pow(cfg.M[i][j])).pow(e[j]);
  } else {
    if (!c.b) Lam *= Q / ext_gauss(cfg.chi.pow(mod(c.v, n)), delta);
    for (int j = 0; j < r; ++j)
      if (j != i && cfg.M[i][j] != 0 && e[j]) Lam *= (ext_gauss(cfg.chi.pow(cfg.M[i][j]), delta) / Q).pow(e[j]);
    long de = residue_exponent(pi->derivative(), *pi, cfg.chi);
    Lam *= CycNum::zeta(n, mod(-de * (c.v + c.K * n / 2), n));
  }
  Lam *= chi_sign(chi_neg, c.v * delta * (c.K - 1));
  int top = std::max(hi, Ks);
  for (int side = 0; side < 2; ++side) {
    Side s;
    s.obj = side == 0 ? o : partner;
    s.B = Ks;
    s.den = LPoly::monomial(0);
    if (c.b) s.den.add_term(1, pi ? CycNum(-1) : -qc);
    s.alpha.resize(top + 1);
    s.alpha[0] = CycNum(1);
    for (int d = 1; d <= top; ++d) s.alpha[d] = s.alpha[d - 1] * sign(tneg);
    sb.prepare(s);
    S.sides.push_back(std::move(s));
  }
  for (int m = 0; m <= Ks; ++m) {
    CycNum f = Lam * (pi ? Q.pow(m) : qc.pow(m - Ks));
    LinExpr L;
    L.add(S.sides[0].N[m], CycNum(1));
    L.add(S.sides[1].N[Ks - m], -f);
    S.rows.push_back(L);
  }
  sb.tail_rows(S.sides[0], S.rows);
  if (partner != o) sb.tail_rows(S.sides[1], S.rows);
  return S;
}

// Reduced row echelon form over CycNum.
class Elim {
 public:
  // returns false if inconsistent
  bool run(const std::vector<LinExpr>& rows) {
    std::set<long> cols;
    for (auto& r : rows)
      for (auto& [k, v] : r.coef) cols.insert(k);
    for (auto& r : rows) {
      if (r.coef.empty()) {
        if (!r.cst.is_zero()) return false;
        continue;
      }
      // row as sum coef*x + cst = 0, reduce against existing pivots
      std::map<long, CycNum> a = r.coef;
      CycNum rhs = -r.cst;
      reduce(a, rhs);
      if (a.empty()) {
        if (!rhs.is_zero()) return false;
        continue;
      }
      long p = a.begin()->first;
      CycNum inv = a.begin()->second.inverse();
      for (auto& [k, v] : a) v *= inv;
      rhs *= inv;
      // back-substitute into existing pivot rows
      for (auto& [pk, pr] : piv_) {
        auto it = pr.a.find(p);
        if (it == pr.a.end()) continue;
        CycNum f = it->second;
        for (auto& [k, v] : a) {
          auto& x = pr.a[k];
          x -= f * v;
          if (x.is_zero()) pr.a.erase(k);
        }
        pr.rhs -= f * rhs;
      }
      piv_[p] = {a, rhs};
    }
    return true;
  }

  // value of a form if determined
  std::optional<CycNum> eval(const LinExpr& L) const {
    std::map<long, CycNum> a = L.coef;
    CycNum rhs = L.cst;
    // L = sum a_k x_k + cst; substitute pivots x_p = rhs_p - sum_{f} a_pf x_f
    std::map<long, CycNum> rest;
    for (auto& [k, v] : a) {
      auto it = piv_.find(k);
      if (it == piv_.end()) {
        auto& x = rest[k];
        x += v;
        if (x.is_zero()) rest.erase(k);
        continue;
      }
      rhs += v * it->second.rhs;
      for (auto& [f, w] : it->second.a) {
        if (f == k) continue;
        auto& x = rest[f];
        x -= v * w;
        if (x.is_zero()) rest.erase(f);
      }
    }
    if (!rest.empty()) return std::nullopt;
    return rhs;
  }

 private:
  struct PRow {
    std::map<long, CycNum> a;
    CycNum rhs;
  };
  std::map<long, PRow> piv_;

  void reduce(std::map<long, CycNum>& a, CycNum& rhs) const {
    bool again = true;
    while (again) {
      again = false;
      for (auto& [k, v] : a) {
        auto it = piv_.find(k);
        if (it == piv_.end()) continue;
        CycNum f = v;
        for (auto& [pk, pv] : it->second.a) {
          auto& x = a[pk];
          x -= f * pv;
        }
        rhs -= f * it->second.rhs;
        for (auto jt = a.begin(); jt != a.end();)
          jt = jt->second.is_zero() ? a.erase(jt) : std::next(jt);
        again = true;
        break;
      }
    }
  }
};

void for_each_slice(int r, int i, int cap, const std::function<void(const Exps&)>& fn) {
  Exps e(r, 0);
  while (true) {
    fn(e);
    int j = 0;
    for (; j < r; ++j) {
      if (j == i) continue;
      if (++e[j] <= cap) break;
      e[j] = 0;
    }
    if (j == r) break;
  }
}

}  // namespace

FeReport fe_verify(const SeriesSet& set, int o, int i, int D) {
  FeReport rep;
  MdsConfig cfg = set.config(o);
  NodeKind kind = classify_node(cfg, i);
  if (kind == NodeKind::None) fail("MissingNij", "node " + std::to_string(i + 1) + " has no functional equation");
  int r = cfg.r();
  for_each_slice(r, i, D, [&](const Exps& e) {
    int es = 0;
    for (int j = 0; j < r; ++j)
      if (j != i) es += e[j];
    if (es > D) return;
    SliceBuilder sb(set, i, e, D - es);
    auto S = build_slice(set, o, i, e, D - es, sb);
    ++rep.slices;
    for (auto& row : S.rows) {
      if (row.maxdeg > D) continue;
      if (!row.coef.empty()) {
        ++rep.undetermined;
        continue;
      }
      ++rep.checked;
      if (!row.cst.is_zero() && rep.ok) {
        rep.ok = false;
        rep.max_residual = row.cst;
        rep.detail = "nonzero residual on slice (" + exps_str(e) + ") of node " + std::to_string(i + 1);
      }
    }
  });
  return rep;
}

SolveResult fe_solve(const MdsConfig& cfg, bool local, const Poly& pi, const SolveOptions& opt) {
  cfg.validate();
  SolveResult res;
  SeriesSet& set = res.set;
  set.cfg = cfg;
  set.local = local;
  set.pi = pi;
  set.D = opt.D;
  set.objects = reflection_closure(cfg, opt.max_objects);
  set.known.assign(set.objects.size(), {});
  int r = cfg.r();
  int cap = opt.cap < 0 ? opt.D + 1 : opt.cap;
  if (local && (!pi.is_monic() || pi.deg() < 1 || !is_irreducible(pi)))
    fail("InvalidArgument", "pi must be a monic prime");
  long q = cfg.field->q();
  auto box = [&](const std::function<void(const Exps&)>& fn) {
    Exps d(r, 0);
    while (true) {
      fn(d);
      int j = 0;
      for (; j < r; ++j) {
        if (++d[j] <= cap) break;
        d[j] = 0;
      }
      if (j == r) break;
    }
  };
  // seeds
  for (size_t o = 0; o < set.objects.size(); ++o) {
    MdsConfig c = set.config((int)o);
    set.known[o][Exps(r, 0)] = CycNum(1);
    if (!opt.seed_closed_forms) continue;
    if (local) {
      long de = residue_exponent(pi.derivative(), pi, c.chi);
      box([&](const Exps& d) {
        std::optional<CycNum> W;
        try {
          W = local_closed_form(c, d, pi.deg());
        } catch (const Error&) {
          return;
        }
        if (!W) return;
        long s = 0;
        for (int j = 0; j < r; ++j) s += d[j] * c.M[j][j];
        set.known[o][d] = CycNum::zeta(c.n(), mod(de * s, c.n())) * *W;
      });
    } else {
      int maxd = 0;
      long long v = 1;
      while (maxd < cap && v * q <= opt.seed_bound) {
        v *= q;
        ++maxd;
      }
      if (maxd == 0) continue;
      GlobalEnumerator G(c, maxd);
      box([&](const Exps& d) {
        int s = 0;
        for (int x : d) s += x;
        if (s > maxd) return;
        auto val = G.sum(d);
        if (val) set.known[o][d] = *val;
      });
    }
  }
  auto target_missing = [&]() {
    std::vector<std::pair<int, Exps>> miss;
    for (size_t o = 0; o < set.objects.size(); ++o)
      box([&](const Exps& d) {
        int s = 0;
        for (int x : d) s += x;
        if (s <= opt.D && !set.known[o].count(d)) miss.emplace_back((int)o, d);
      });
    return miss;
  };
  bool changed = true;
  while (changed && res.sweeps < opt.max_sweeps) {
    changed = false;
    ++res.sweeps;
    for (size_t o = 0; o < set.objects.size(); ++o) {
      MdsConfig c = set.config((int)o);
      for (int i = 0; i < r; ++i) {
        if (classify_node(c, i) == NodeKind::None) continue;
        for_each_slice(r, i, cap, [&](const Exps& e) {
          SliceBuilder sb(set, i, e, cap);
          auto S = build_slice(set, (int)o, i, e, cap, sb);
          bool need = false;
          for (auto& s : S.sides)
            for (int d = 0; d <= cap && !need; ++d) {
              Exps x = e;
              x[i] = d;
              if (!set.known[s.obj].count(x)) need = true;
            }
          Elim el;
          if (!el.run(S.rows))
            fail("InconsistentSystem", "slice (" + exps_str(e) + ") of node " + std::to_string(i + 1) + " of object " +
                                           matrix_to_string(set.objects[o]));
          if (!need) return;
          for (auto& s : S.sides)
            for (int d = 0; d <= cap; ++d) {
              Exps x = e;
              x[i] = d;
              if (set.known[s.obj].count(x)) continue;
              auto v = el.eval(sb.value_form(s, d));
              if (v) {
                set.known[s.obj][x] = *v;
                changed = true;
              }
            }
        });
      }
    }
    if (target_missing().empty()) break;
  }
  res.missing = target_missing();
  res.converged = res.missing.empty();
  return res;
}

std::map<Exps, CycNum> rational_expand(const MultiPoly& num, const MultiPoly& den, int r, int D) {
  Exps zero(r, 0);
  auto it = den.terms.find(zero);
  if (it == den.terms.end() || it->second.is_zero()) fail("InvalidArgument", "denominator constant term must be invertible");
  CycNum inv = it->second.inverse();
  std::vector<Exps> tuples;
  Exps d(r, 0);
  while (true) {
    int s = 0;
    for (int x : d) s += x;
    if (s <= D) tuples.push_back(d);
    int j = 0;
    for (; j < r; ++j) {
      if (++d[j] <= D) break;
      d[j] = 0;
    }
    if (j == r) break;
  }
  std::sort(tuples.begin(), tuples.end(), [](const Exps& a, const Exps& b) {
    int sa = 0, sb = 0;
    for (int x : a) sa += x;
    for (int x : b) sb += x;
    return sa != sb ? sa < sb : a < b;
  });
  std::map<Exps, CycNum> R;
  for (auto& t : tuples) {
    CycNum v;
    auto nt = num.terms.find(t);
    if (nt != num.terms.end()) v = nt->second;
    for (auto& [e, c] : den.terms) {
      bool ok = e != zero;
      Exps rest(r);
      for (int j = 0; j < r && ok; ++j) {
        rest[j] = t[j] - e[j];
        if (rest[j] < 0) ok = false;
      }
      if (!ok) continue;
      auto rt = R.find(rest);
      if (rt != R.end()) v -= c * rt->second;
    }
    v *= inv;
    if (!v.is_zero()) R[t] = v;
  }
  return R;
}

bool rational_verify(const CoeffTable& table, const MultiPoly& num, const MultiPoly& den, int D) {
  int r = table.config.r();
  auto R = rational_expand(num, den, r, D);
  for (auto& [d, e] : table.entries) {
    int s = 0;
    for (int x : d) s += x;
    if (s > D || !e.known) continue;
    auto it = R.find(d);
    CycNum v = it == R.end() ? CycNum(0) : it->second;
    if (v != e.value) return false;
  }
  return true;
}

}  // namespace mdsfe
