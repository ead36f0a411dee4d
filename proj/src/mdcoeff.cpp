#include "mdsfe/mdcoeff.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "mdsfe/error.hpp"

namespace mdsfe {

namespace {

long mod(long a, long n) {
  a %= n;
  return a < 0 ? a + n : a;
}

Rat qpow(long q, long k) {
  Int r = 1;
  for (long i = 0; i < k; ++i) r *= q;
  return Rat(r);
}

// exponent of (f/g)_chi, -1 when zero; constants give 0
long rexp(const Poly& f, const Poly& g, const Character& chi) {
  if (g.deg() <= 0) return 0;
  return residue_exponent(f, g, chi);
}

long diag_exp(const Poly& f, const Character& chi) {
  if (f.deg() <= 0) return 0;
  return residue_exponent(f.derivative(), f, chi);
}

std::string exps_to_string(const Exps& d) {
  std::string s;
  for (size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s;
}

}  // namespace

IntMatrix parse_matrix(const std::string& text, long n) {
  IntMatrix M;
  std::stringstream rows(text);
  std::string row;
  while (std::getline(rows, row, ';')) {
    std::vector<long> cur;
    std::stringstream cells(row);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        size_t pos = 0;
        long v = std::stol(cell, &pos);
        if (cell.find_first_not_of(" \t", pos) != std::string::npos) fail("ParseError", "bad matrix entry '" + cell + "'");
        cur.push_back(n > 0 ? mod(v, n) : v);
      } catch (const std::logic_error&) {
        fail("ParseError", "bad matrix entry '" + cell + "'");
      }
    }
    M.push_back(cur);
  }
  if (M.empty()) fail("ParseError", "empty matrix");
  for (auto& r : M)
    if (r.size() != M.size()) fail("ParseError", "matrix is not square");
  return M;
}

std::string matrix_to_string(const IntMatrix& M) {
  std::string s;
  for (size_t i = 0; i < M.size(); ++i) {
    if (i) s += ";";
    for (size_t j = 0; j < M[i].size(); ++j) s += (j ? "," : "") + std::to_string(M[i][j]);
  }
  return s;
}

void MdsConfig::validate() const {
  long n = chi.n;
  if (n % 2) fail("InvalidConfig", "character order must be even");
  if ((field->q() - 1) % n) fail("OrderNotDividing", "n must divide q-1");
  if (chi.order() != n) fail("InvalidConfig", "character does not have exact order n");
  int r = (int)M.size();
  if (r == 0) fail("InvalidConfig", "empty matrix");
  for (int i = 0; i < r; ++i) {
    if ((int)M[i].size() != r) fail("InvalidConfig", "matrix is not square");
    for (int j = 0; j < r; ++j) {
      if (M[i][j] < 0 || M[i][j] >= n) fail("InvalidConfig", "matrix entries must lie in [0, n)");
      if (M[i][j] != M[j][i]) fail("InvalidConfig", "matrix is not symmetric");
    }
  }
}

MdsConfig MdsConfig::extend(int e) const {
  if (e == 1) return *this;
  auto E = Field::extension(field, e);
  return MdsConfig{E, chi.lift(E), M};
}

MdsConfig MdsConfig::with_matrix(IntMatrix M2) const {
  MdsConfig c{field, chi, std::move(M2)};
  for (auto& row : c.M)
    for (auto& v : row) v = mod(v, chi.n);
  return c;
}

CycNum MdsConfig::chi_minus_one() const { return CycNum(chi.value_at_minus_one() ? -1 : 1); }

MdsConfig make_config(long p, int e, long n, const IntMatrix& M) {
  auto F = Field::build(p, e);
  MdsConfig c{F, make_character(F, n), M};
  for (auto& row : c.M)
    for (auto& v : row) v = mod(v, n);
  c.validate();
  return c;
}

bool MdsParams::kubota_ok(int i) const {
  for (size_t j = 0; j < pij[i].size(); ++j)
    if ((int)j != i && pij[i][j] != 0) return false;
  return true;
}

MdsParams mds_params(const MdsConfig& cfg) { return mds_params(cfg.M, cfg.n()); }

MdsParams mds_params(const IntMatrix& M, long n) {
  int r = (int)M.size();
  MdsParams P;
  P.ni.resize(r);
  P.nij.assign(r, std::vector<long>(r, 0));
  P.oij = P.pij = P.nij;
  P.eij.assign(r, std::vector<int>(r, 0));
  for (int i = 0; i < r; ++i) {
    long c = M[i][i] + n / 2;
    long g = std::gcd(n, c);
    P.ni[i] = n / g;
    for (int j = 0; j < r; ++j) {
      if (i == j) continue;
      P.eij[i][j] = M[i][j] != 0;
      long p = mod(-M[i][j], g);
      long k = 0;
      while (k < P.ni[i] && mod(k * c + p + M[i][j], n) != 0) ++k;
      P.nij[i][j] = k;
      P.pij[i][j] = p;
      P.oij[i][j] = (-M[i][j] - k * c - p) / n;
    }
  }
  return P;
}

namespace {

struct ExtData {
  long Q;       // q^delta
  bool xi_neg;  // xi_E(-1) = -1
  long m1;      // exponent of chi_E(-1) in zeta_n
  int delta;
};

CycNum ext_gauss(const Character& psi, int delta) {
  CycNum g = gauss_sum(psi);
  if (delta == 1) return g;
  return -((-g).pow(delta));
}

[[noreturn]] void inadmissible(int i) {
  fail("InadmissibleDiagonal", "xi chi^{M_ii} is trivial at index " + std::to_string(i + 1));
}

// Prime-power value at T over the extension for the last slot: character psi of
// order ns, residue offset t (the value of n_21, 0 for a single entry).
CycNum last_slot(const Character& psi, long ns, long t, long dd, const ExtData& X) {
  bool neg = X.xi_neg && ((dd * (dd - 1) / 2) % 2);
  CycNum pre = CycNum(neg ? -1 : 1) / ext_gauss(psi, X.delta).pow(dd);
  if (dd % ns == 0) return pre * CycNum(qpow(X.Q, dd - dd / ns));
  if (dd % ns == (1 + t) % ns)
    return pre * CycNum(qpow(X.Q, dd - 1 - (dd - 1 - t) / ns)) * ext_gauss(psi.pow(t + 1), X.delta);
  return CycNum(0);
}

}  // namespace

std::optional<CycNum> local_closed_form(const MdsConfig& cfg, const Exps& d, int delta) {
  int r = cfg.r();
  if ((int)d.size() != r) fail("InvalidArgument", "exponent tuple has wrong length");
  std::vector<int> S;
  for (int i = 0; i < r; ++i) {
    if (d[i] < 0) fail("InvalidArgument", "negative exponent");
    if (d[i] > 0) S.push_back(i);
  }
  if (S.empty()) return CycNum(1);
  if (S.size() == 1 && d[S[0]] == 1) return CycNum(1);
  if (S.size() > 2) return std::nullopt;
  long n = cfg.n();
  ExtData X{1, false, 0, delta};
  for (int i = 0; i < delta; ++i) X.Q *= cfg.field->q();
  X.xi_neg = cfg.xi().value_at_minus_one() != 0 && (delta % 2);
  X.m1 = mod(cfg.chi.value_at_minus_one() * delta, n);
  auto P = mds_params(cfg);
  if (S.size() == 1) {
    int s = S[0];
    if (P.ni[s] == 1) inadmissible(s);
    return last_slot(cfg.diag_char(s), P.ni[s], 0, d[s], X);
  }
  int lin, last;
  if (d[S[0]] == 1 && d[S[1]] == 1) {
    lin = S[0];
    last = S[1];
  } else if (d[S[0]] == 1) {
    lin = S[0];
    last = S[1];
  } else if (d[S[1]] == 1) {
    lin = S[1];
    last = S[0];
  } else {
    return std::nullopt;
  }
  long dd = d[last];
  long n2 = P.ni[last], n21 = P.nij[last][lin], p21 = P.pij[last][lin];
  if (n2 == 1) inadmissible(last);
  if (p21 > 0 || n21 == n2 - 1) return CycNum(0);
  CycNum v = last_slot(cfg.diag_char(last), n2, n21, dd, X);
  // moving the last slot to position r
  if (lin > last && X.m1 && (dd * cfg.M[last][lin]) % 2) v = -v;
  return v;
}

CycNum coeff_local_base(const Poly& pi, const Exps& d, const MdsConfig& cfg) {
  if (!pi.is_monic() || pi.deg() < 1 || !is_irreducible(pi)) fail("InvalidArgument", "pi must be a monic prime");
  auto W = local_closed_form(cfg, d, pi.deg());
  if (!W) fail("NoClosedForm", "no closed form for exponents (" + exps_to_string(d) + ")");
  long s = 0;
  for (int i = 0; i < cfg.r(); ++i) s += d[i] * cfg.M[i][i];
  return CycNum::zeta(cfg.n(), mod(diag_exp(pi, cfg.chi) * s, cfg.n())) * *W;
}

CycNum coeff_squarefree(const std::vector<Poly>& f, const MdsConfig& cfg) {
  int r = cfg.r();
  if ((int)f.size() != r) fail("InvalidArgument", "tuple has wrong length");
  Poly prod = Poly::constant(cfg.field, 1);
  for (auto& x : f) prod = prod * x;
  if (!is_squarefree(prod)) fail("NotSquarefree", "product of the tuple is not squarefree");
  long n = cfg.n(), e = 0;
  for (int i = 0; i < r; ++i) {
    e += diag_exp(f[i], cfg.chi) * cfg.M[i][i];
    for (int j = i + 1; j < r; ++j) {
      if (!cfg.M[i][j]) continue;
      long x = rexp(f[i], f[j], cfg.chi);
      if (x < 0) return CycNum(0);
      e += x * cfg.M[i][j];
    }
  }
  return CycNum::zeta(n, mod(e, n));
}

CycNum coeff_general_lastvar(const std::vector<Poly>& f, const MdsConfig& cfg) {
  int r = cfg.r();
  if ((int)f.size() != r) fail("InvalidArgument", "tuple has wrong length");
  Poly prod = Poly::constant(cfg.field, 1);
  for (int i = 0; i + 1 < r; ++i) prod = prod * f[i];
  if (!is_squarefree(prod)) fail("NotSquarefree", "f_1...f_{r-1} is not squarefree");
  long n = cfg.n();
  const Poly& fr = f[r - 1];
  int R = r - 1;
  long e = 0;
  if (cfg.M[R][R] == 0) {
    for (int i = 0; i < R; ++i) e += diag_exp(f[i], cfg.chi) * cfg.M[i][i];
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j) {
        if (!cfg.M[i][j]) continue;
        long x = rexp(f[i], f[j], cfg.chi);
        if (x < 0) return CycNum(0);
        e += x * cfg.M[i][j];
      }
    return CycNum::zeta(n, mod(e, n));
  }
  auto P = mds_params(cfg);
  long nr = P.ni[R];
  if (nr == 1) inadmissible(R);
  Character psi = cfg.diag_char(R);
  for (int i = 0; i < R; ++i) {
    e += diag_exp(f[i], cfg.chi) * cfg.M[i][i];
    for (int j = i + 1; j < R; ++j) {
      if (!cfg.M[i][j]) continue;
      long x = rexp(f[i], f[j], cfg.chi);
      if (x < 0) return CycNum(0);
      e += x * cfg.M[i][j];
    }
    if (P.pij[R][i]) {
      long x = rexp(f[i], fr, cfg.chi);
      if (x < 0) return CycNum(0);
      e -= x * P.pij[R][i];
    }
  }
  Poly F = Poly::constant(cfg.field, 1);
  for (int i = 0; i < R; ++i) F = F * f[i].pow((int)P.nij[R][i]);
  long D = fr.deg();
  const auto& fac = fr.factorization();
  std::vector<int> k(fac.size(), 0);
  CycNum sum;
  long q = cfg.field->q();
  while (true) {
    Poly u = Poly::constant(cfg.field, 1);
    for (size_t t = 0; t < fac.size(); ++t) u = u * fac[t].first.pow(k[t]);
    sum += CycNum(qpow(q, (nr - 1) * u.deg())) * ff_gauss_sum(F, fr / u.pow((int)nr), psi);
    size_t t = 0;
    for (; t < fac.size(); ++t) {
      if ((k[t] + 1) * nr <= fac[t].second) {
        ++k[t];
        break;
      }
      k[t] = 0;
    }
    if (t == fac.size()) break;
  }
  bool neg = cfg.xi().value_at_minus_one() && ((D * (D - 1) / 2) % 2);
  return CycNum::zeta(n, mod(e, n)) * CycNum(neg ? -1 : 1) * sum / gauss_sum(psi).pow(D);
}

std::optional<CycNum> LocalBlocks::get(int delta, const Exps& d) {
  auto key = std::make_pair(delta, d);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  auto v = local_closed_form(cfg_, d, delta);
  cache_.emplace(key, v);
  return v;
}

void LocalBlocks::supply(int delta, const Exps& d, const CycNum& v) { cache_[std::make_pair(delta, d)] = v; }

CycNum coeff_assemble(const std::vector<Poly>& f, const MdsConfig& cfg, LocalBlocks* blocks) {
  int r = cfg.r();
  if ((int)f.size() != r) fail("InvalidArgument", "tuple has wrong length");
  LocalBlocks own(cfg);
  if (!blocks) blocks = &own;
  std::map<Poly, Exps> parts;
  for (int i = 0; i < r; ++i) {
    if (!f[i].is_monic()) fail("InvalidArgument", "polynomials must be monic");
    for (auto& [p, e] : f[i].factorization()) {
      auto& v = parts[p];
      if (v.empty()) v.assign(r, 0);
      v[i] = e;
    }
  }
  long n = cfg.n(), m1 = cfg.chi.value_at_minus_one();
  long e = 0;
  CycNum val(1);
  std::vector<std::pair<Poly, Exps>> list(parts.begin(), parts.end());
  for (auto& [p, d] : list) {
    auto W = blocks->get(p.deg(), d);
    if (!W) fail("UnknownLocalBlock", "no value for prime " + p.to_string() + " with exponents (" + exps_to_string(d) + ")");
    if (W->is_zero()) return CycNum(0);
    val *= *W;
    long s = 0;
    for (int i = 0; i < r; ++i) s += d[i] * cfg.M[i][i];
    e += diag_exp(p, cfg.chi) * s;
  }
  for (size_t s = 0; s < list.size(); ++s)
    for (size_t t = s + 1; t < list.size(); ++t) {
      const Exps& a = list[s].second;
      const Exps& b = list[t].second;
      long E1 = 0, E2 = 0;
      for (int i = 0; i < r; ++i)
        for (int j = i; j < r; ++j) {
          E1 += cfg.M[i][j] * a[i] * b[j];
          E2 += cfg.M[i][j] * b[i] * a[j];
        }
      if (!E1 && !E2) continue;
      long rho = residue_exponent(list[s].first, list[t].first, cfg.chi);
      e += rho * (E1 + E2);
      if ((list[s].first.deg() * list[t].first.deg()) % 2) e += m1 * E2;
    }
  return CycNum::zeta(n, mod(e, n)) * val;
}

std::string CoeffTable::to_json() const {
  nlohmann::ordered_json j;
  j["mode"] = local ? "local" : "global";
  j["q"] = config.field->q();
  j["n"] = config.n();
  j["M"] = matrix_to_string(config.M);
  if (local) j["pi"] = pi.to_string();
  j["degree"] = D;
  nlohmann::ordered_json ent = nlohmann::ordered_json::object();
  for (auto& [d, e] : entries) {
    std::string key = exps_to_string(d) + "|";
    for (size_t i = 0; i < d.size(); ++i) key += (i ? "," : "") + std::to_string(d[i] % config.n());
    nlohmann::ordered_json x;
    x["status"] = e.known ? "known" : "unknown";
    x["value"] = e.known ? nlohmann::ordered_json::parse(e.value.to_json()) : nlohmann::ordered_json();
    ent[key] = x;
  }
  j["entries"] = ent;
  return j.dump();
}

PolyTable::PolyTable(FieldPtr F, int D) : F_(std::move(F)), D_(D) {
  long q = F_->q();
  counts_.assign(D + 1, 1);
  for (int d = 1; d <= D; ++d) {
    counts_[d] = counts_[d - 1] * q;
    if (counts_[d] > enumeration_bound) fail("DegreeTooLarge", "q^d exceeds the enumeration bound");
  }
  start_.resize(D + 1);
  flat_.resize(D + 1);
  start_[0] = {0, 0};
  std::vector<std::vector<int>> maxp(D + 1);  // largest prime id per poly
  maxp[0] = {-1};
  std::vector<int> a, c;
  for (int d = 1; d <= D; ++d) {
    long long N = counts_[d];
    std::vector<std::vector<std::pair<int, int>>> tmp(N);
    std::vector<int> mp(N, -2);
    for (int pid = 0; pid < (int)primes_.size(); ++pid) {
      const Poly& P = primes_[pid];
      int b = P.deg();
      if (b >= d) break;
      int da = d - b;
      const auto& pc = P.coeffs();
      for (long long ia = 0; ia < counts_[da]; ++ia) {
        if (maxp[da][ia] > pid) continue;
        a.assign(da + 1, 0);
        long long x = ia;
        for (int k = 0; k < da; ++k) {
          a[k] = (int)(x % q);
          x /= q;
        }
        a[da] = 1;
        c.assign(d + 1, 0);
        for (int i = 0; i <= da; ++i) {
          if (!a[i]) continue;
          for (int j = 0; j <= b; ++j) c[i + j] = F_->add(c[i + j], F_->mul(a[i], pc[j]));
        }
        long long idx = 0;
        for (int k = d - 1; k >= 0; --k) idx = idx * q + c[k];
        auto fa = factors(da, ia);
        auto& out = tmp[idx];
        out.assign(fa.begin(), fa.end());
        if (!out.empty() && out.back().first == pid)
          out.back().second++;
        else
          out.emplace_back(pid, 1);
        mp[idx] = pid;
      }
    }
    for (long long idx = 0; idx < N; ++idx) {
      if (mp[idx] != -2) continue;
      int pid = (int)primes_.size();
      primes_.push_back(Poly::monic_from_index(F_, d, (long)idx));
      tmp[idx] = {{pid, 1}};
      mp[idx] = pid;
    }
    auto& st = start_[d];
    st.assign(N + 1, 0);
    size_t total = 0;
    for (long long idx = 0; idx < N; ++idx) total += tmp[idx].size();
    flat_[d].reserve(total);
    for (long long idx = 0; idx < N; ++idx) {
      st[idx] = (uint32_t)flat_[d].size();
      flat_[d].insert(flat_[d].end(), tmp[idx].begin(), tmp[idx].end());
    }
    st[N] = (uint32_t)flat_[d].size();
    maxp[d] = std::move(mp);
  }
}

GlobalEnumerator::GlobalEnumerator(const MdsConfig& cfg, int maxdeg, LocalBlocks* blocks)
    : cfg_(cfg), table_(cfg.field, maxdeg), own_blocks_(cfg), blocks_(blocks ? blocks : &own_blocks_) {
  if (maxdeg > 15 || cfg.r() > 12) fail("DegreeTooLarge", "enumeration limited to degree 15 and rank 12");
  for (int id = 0; id < table_.num_primes(); ++id) prime_diag_.push_back(diag_exp(table_.prime(id), cfg.chi));
  m1_ = cfg.chi.value_at_minus_one();
  block_vals_.push_back(CycNum(1));
}

int GlobalEnumerator::pair_residue(int a, int b) {
  unsigned long long key = ((unsigned long long)a << 32) | (unsigned)b;
  auto it = pair_cache_.find(key);
  if (it != pair_cache_.end()) return it->second;
  int v = (int)residue_exponent(table_.prime(a), table_.prime(b), cfg_.chi);
  pair_cache_.emplace(key, v);
  return v;
}

int GlobalEnumerator::block_id(int delta, const int* d) {
  int r = cfg_.r();
  unsigned long long key = (unsigned long long)delta;
  for (int i = 0; i < r; ++i) key = (key << 4) | (unsigned)d[i];
  auto it = block_ids_.find(key);
  if (it != block_ids_.end()) return it->second;
  auto v = blocks_->get(delta, Exps(d, d + r));
  int id;
  if (!v)
    id = -2;
  else if (v->is_zero())
    id = -1;
  else if (*v == CycNum(1))
    id = 0;
  else {
    id = (int)block_vals_.size();
    block_vals_.push_back(*v);
  }
  block_ids_.emplace(key, id);
  return id;
}

std::optional<CycNum> GlobalEnumerator::sum(const Exps& d) {
  int r = cfg_.r();
  long n = cfg_.n();
  if ((int)d.size() != r) fail("InvalidArgument", "degree tuple has wrong length");
  for (int x : d)
    if (x < 0 || x > table_.max_degree()) fail("DegreeTooLarge", "degree beyond the enumeration table");
  struct Ent {
    int pid, var, e;
  };
  std::vector<long long> idx(r, 0);
  std::vector<long long> plain(n, 0);
  std::map<std::vector<int>, std::vector<long long>> keyed;
  std::vector<Ent> ents;
  std::vector<int> bp, bd, ids;
  std::vector<int> bexp;  // r exponents per block
  const auto& M = cfg_.M;
  while (true) {
    ents.clear();
    for (int i = 0; i < r; ++i)
      for (auto& [pid, e] : table_.factors(d[i], idx[i])) ents.push_back({pid, i, e});
    std::sort(ents.begin(), ents.end(), [](const Ent& x, const Ent& y) { return x.pid < y.pid; });
    bp.clear();
    bexp.clear();
    for (auto& en : ents) {
      if (bp.empty() || bp.back() != en.pid) {
        bp.push_back(en.pid);
        bexp.resize(bexp.size() + r, 0);
      }
      bexp[(bp.size() - 1) * r + en.var] = en.e;
    }
    bool zero = false;
    long e = 0;
    ids.clear();
    int B = (int)bp.size();
    for (int s = 0; s < B && !zero; ++s) {
      const int* a = &bexp[(size_t)s * r];
      int id = block_id(table_.prime_degree(bp[s]), a);
      if (id == -2) return std::nullopt;
      if (id == -1) zero = true;
      if (id > 0) ids.push_back(id);
      long sd = 0;
      for (int i = 0; i < r; ++i) sd += a[i] * M[i][i];
      e += prime_diag_[bp[s]] * sd;
    }
    if (!zero) {
      for (int s = 0; s < B; ++s)
        for (int t = s + 1; t < B; ++t) {
          const int* a = &bexp[(size_t)s * r];
          const int* b = &bexp[(size_t)t * r];
          long E1 = 0, E2 = 0;
          for (int i = 0; i < r; ++i) {
            if (!a[i] && !b[i]) continue;
            for (int j = i; j < r; ++j) {
              E1 += M[i][j] * a[i] * b[j];
              E2 += M[i][j] * b[i] * a[j];
            }
          }
          if (!E1 && !E2) continue;
          e += (long)pair_residue(bp[s], bp[t]) * (E1 + E2);
          if (m1_ && (table_.prime_degree(bp[s]) * table_.prime_degree(bp[t])) % 2) e += m1_ * E2;
        }
      e = mod(e, n);
      if (ids.empty()) {
        plain[e]++;
      } else {
        std::sort(ids.begin(), ids.end());
        auto& v = keyed[ids];
        if (v.empty()) v.assign(n, 0);
        v[e]++;
      }
    }
    int i = 0;
    for (; i < r; ++i) {
      if (++idx[i] < table_.count(d[i])) break;
      idx[i] = 0;
    }
    if (i == r) break;
  }
  CycNum total = CycNum::from_exponent_counts(n, plain);
  for (auto& [key, cnt] : keyed) {
    CycNum v = CycNum::from_exponent_counts(n, cnt);
    for (int id : key) v *= *block_vals_[id];
    total += v;
  }
  return total;
}

CoeffTable series_truncate(const MdsConfig& cfg, bool local, const Poly& pi, int D, LocalBlocks* blocks,
                           long long global_bound, bool total_degree) {
  int r = cfg.r();
  CoeffTable T{cfg, local, pi, D, {}};
  LocalBlocks own(cfg);
  if (!blocks) blocks = &own;
  std::vector<Exps> tuples;
  Exps d(r, 0);
  while (true) {
    int s = 0;
    for (int x : d) s += x;
    if (!total_degree || s <= D) tuples.push_back(d);
    int i = 0;
    for (; i < r; ++i) {
      if (++d[i] <= D) break;
      d[i] = 0;
    }
    if (i == r) break;
  }
  if (local) {
    if (!pi.is_monic() || pi.deg() < 1 || !is_irreducible(pi)) fail("InvalidArgument", "pi must be a monic prime");
    long de = diag_exp(pi, cfg.chi);
    for (auto& t : tuples) {
      CoeffEntry en;
      auto W = blocks->get(pi.deg(), t);
      if (W) {
        long s = 0;
        for (int i = 0; i < r; ++i) s += t[i] * cfg.M[i][i];
        en.value = CycNum::zeta(cfg.n(), mod(de * s, cfg.n())) * *W;
        en.known = true;
      }
      T.entries[t] = en;
    }
    return T;
  }
  long q = cfg.field->q();
  auto fits = [&](int s) {
    long long v = 1;
    for (int i = 0; i < s; ++i) {
      v *= q;
      if (v > global_bound) return false;
    }
    return true;
  };
  int maxd = 0;
  while (maxd < D && fits(maxd + 1)) ++maxd;
  GlobalEnumerator G(cfg, maxd, blocks);
  for (auto& t : tuples) {
    CoeffEntry en;
    int s = 0, mx = 0;
    for (int x : t) {
      s += x;
      mx = std::max(mx, x);
    }
    if (fits(s) && mx <= maxd) {
      auto v = G.sum(t);
      if (v) {
        en.value = *v;
        en.known = true;
      }
    }
    T.entries[t] = en;
  }
  return T;
}

}  // namespace mdsfe
