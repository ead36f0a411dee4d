#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mdsfe/error.hpp"
#include "mdsfe/feq.hpp"
#include "mdsfe/groupoid.hpp"
#include "mdsfe/mdcoeff.hpp"
#include "mdsfe/nichols.hpp"
#include "oracles/oracles.hpp"

using namespace mdsfe;
using json = nlohmann::ordered_json;

namespace {

struct Common {
  long q = 5;
  long n = 4;
  std::string M = "0,1;1,0";
  int degree = 6;
  long cutoff = 0;
  int threads = 1;
  std::string json_path, csv_path, dot_path;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) fail("Usage", "cannot write " + path);
  f << text;
}

void emit(const Common& c, const std::string& text) {
  if (!c.json_path.empty()) write_file(c.json_path, text + "\n");
  else std::cout << text << "\n";
}

std::pair<long, int> prime_power(long q) {
  if (q < 2) fail("NotPrimePower", "q must be a prime power");
  long p = 0;
  for (long t = 2; t * t <= q; ++t)
    if (q % t == 0) {
      p = t;
      break;
    }
  if (!p) p = q;
  int e = 0;
  long x = q;
  while (x % p == 0) {
    x /= p;
    ++e;
  }
  if (x != 1) fail("NotPrimePower", std::to_string(q) + " is not a prime power");
  if (p == 2) fail("EvenCharacteristic", "q must be odd");
  return {p, e};
}

MdsConfig config_of(const Common& c) {
  auto [p, e] = prime_power(c.q);
  if (c.threads < 1) fail("Usage", "--threads must be positive");
  return make_config(p, e, c.n, parse_matrix(c.M, c.n));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

Poly prime_of(const MdsConfig& cfg, const std::string& text) {
  Poly pi = Poly::parse(cfg.field, text);
  if (!pi.is_monic() || !is_irreducible(pi)) fail("Usage", "--pi must be monic irreducible");
  return pi;
}

void each_tuple(int r, int D, const std::function<void(const Exps&)>& f) {
  Exps d(r, 0);
  for (;;) {
    f(d);
    int k = 0;
    while (k < r) {
      if (std::accumulate(d.begin(), d.end(), 0) < D) {
        ++d[k];
        break;
      }
      d[k] = 0;
      ++k;
    }
    if (k == r) return;
  }
}

BicharState bichar_of(const Common& c, const std::string& cartan, long N, long qexp) {
  if (cartan.empty()) return bichar_from_matrix(parse_matrix(c.M, c.n), c.n);
  if (cartan.size() < 2) fail("Usage", "--cartan takes a type and rank such as A2");
  return bichar_from_cartan(cartan[0], std::stoi(cartan.substr(1)), N, qexp);
}

MultiPoly multipoly_of(const json& arr) {
  MultiPoly p;
  for (auto& t : arr) {
    Exps e = t.at(0).get<Exps>();
    p.terms[e] += CycNum::from_json(t.at(1).dump());
  }
  return p;
}

int cmd_selftest(const std::vector<int>& only) {
  using namespace oracle;
  std::vector<std::pair<int, std::function<Outcome()>>> suites = {
      {1, gauss_sum_suite},
      {2, [] { return reciprocity_suite(); }},
      {3, gauss_lemma_suite},
      {4, intro_examples_suite},
      {5, scattering_inverse_suite},
      {6, fe_residual_suite},
      {7, solver_suite},
      {8, groupoid_suite},
      {9, bicharacter_suite},
      {10, cone_suite},
      {11, betti_suite},
      {12, kostant_suite},
      {13, verma_suite},
  };
  int failures = 0;
  for (auto& [id, run] : suites) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.fail(e.what());
    }
    std::printf("suite %2d: %s  [checks=%ld]%s%s\n", id, o.ok ? "PASS" : "FAIL", o.checked, o.ok ? "" : "  ",
                o.ok ? "" : o.detail.c_str());
    std::fflush(stdout);
    if (!o.ok) ++failures;
  }
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiple Dirichlet series, functional equations and Weyl groupoids"};
  app.require_subcommand(1);
  Common c;
  auto common = [&](CLI::App* s) {
    s->add_option("--q", c.q, "odd prime power");
    s->add_option("--n", c.n, "character order (even)");
    s->add_option("--M", c.M, "symmetric matrix \"a,b;c,d\"");
    s->add_option("--degree", c.degree, "total degree bound");
    s->add_option("--cutoff", c.cutoff, "enumeration bound");
    s->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
    s->add_option("--json", c.json_path, "write JSON here");
  };

  std::string f_list = "T", mode = "global", pi_text = "T", kind, source, candidate, cartan, type = "A";
  int node = 1, rank = 2;
  long N = 6, qexp = 2, gexp = 1, dmax = 6, jmax = 6, order = 3, s_param = 0;
  bool question = false;
  std::string only;

  auto* coeff = app.add_subcommand("coeff", "one coefficient a(f_1, ..., f_r)");
  common(coeff);
  coeff->add_option("--f", f_list, "polynomials separated by ';'");

  auto* series = app.add_subcommand("series", "truncated coefficient table");
  common(series);
  series->add_option("--mode", mode)->check(CLI::IsMember({"global", "local"}));
  series->add_option("--pi", pi_text, "prime for local mode");

  auto* fecheck = app.add_subcommand("fe-check", "functional-equation residuals of one node");
  common(fecheck);
  fecheck->add_option("--i", node, "node, 1-based");
  fecheck->add_option("--kind", kind)->check(CLI::IsMember({"kubota", "dirichlet"}));
  fecheck->add_option("--mode", mode)->check(CLI::IsMember({"global", "local"}));
  fecheck->add_option("--pi", pi_text);
  fecheck->add_option("--source", source, "enumerate (default) or solve")->check(CLI::IsMember({"enumerate", "solve"}));

  auto* solve = app.add_subcommand("solve", "solve all functional equations to a fixpoint");
  common(solve);
  solve->add_option("--mode", mode)->check(CLI::IsMember({"global", "local"}));
  solve->add_option("--pi", pi_text);
  solve->add_option("--out", c.json_path, "write JSON here");

  auto* ratver = app.add_subcommand("rational-verify", "check a rational-function candidate");
  common(ratver);
  ratver->add_option("--candidate", candidate, "JSON {num: [[exps, CycNum]...], den: [...]}")->required();
  ratver->add_option("--source", source, "solve (default) or enumerate")->check(CLI::IsMember({"enumerate", "solve"}));

  auto* groupoid = app.add_subcommand("groupoid", "enumerate the Weyl groupoid");
  common(groupoid);
  groupoid->add_option("--dot", c.dot_path, "write DOT here");
  groupoid->add_option("--cartan", cartan, "Cartan type and rank, e.g. A2");
  groupoid->add_option("--N", N, "order of the root of unity for --cartan");
  groupoid->add_option("--qexp", qexp, "v^2 = zeta_N^qexp for --cartan");
  groupoid->add_option("--gexp", gexp, "gene = zeta_N^gexp");

  auto* betti = app.add_subcommand("betti", "Betti numbers of the Nichols algebras of a groupoid");
  common(betti);
  betti->add_option("--csv", c.csv_path, "write CSV here");
  betti->add_option("--dmax", dmax);
  betti->add_option("--jmax", jmax);
  betti->add_option("--cartan", cartan);
  betti->add_option("--N", N);
  betti->add_option("--qexp", qexp);
  betti->add_option("--gexp", gexp);
  betti->add_flag("--question", question, "also report the generalized relation");

  auto* kostant = app.add_subcommand("kostant", "Weyl-orbit Betti pattern of the nilradical");
  common(kostant);
  kostant->add_option("--type", type);
  kostant->add_option("--rank", rank);

  auto* verma = app.add_subcommand("verma", "invariants of the small quantum sl_2 Verma module");
  common(verma);
  verma->add_option("--order", order, "odd order of v");
  verma->add_option("--s", s_param);

  auto* selftest = app.add_subcommand("selftest", "run the fixture suites");
  selftest->add_option("--only", only, "comma-separated suite numbers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*coeff) {
      auto cfg = config_of(c);
      std::vector<Poly> f;
      for (auto& t : split(f_list, ';')) f.push_back(Poly::parse(cfg.field, t));
      if ((int)f.size() != cfg.r()) fail("Usage", "need one polynomial per row of M");
      json out;
      try {
        out["value"] = json::parse(coeff_assemble(f, cfg).to_json());
        out["status"] = "known";
      } catch (const Error& e) {
        if (e.code() != "UnknownLocalBlock") throw;
        out["value"] = nullptr;
        out["status"] = "unknown";
      }
      emit(c, out.dump());
    } else if (*series) {
      auto cfg = config_of(c);
      bool local = mode == "local";
      Poly pi = prime_of(cfg, pi_text);
      auto T = series_truncate(cfg, local, pi, c.degree, nullptr, c.cutoff > 0 ? c.cutoff : 10000000);
      emit(c, T.to_json());
    } else if (*fecheck) {
      auto cfg = config_of(c);
      bool local = mode == "local";
      Poly pi = prime_of(cfg, pi_text);
      int i = node - 1;
      if (i < 0 || i >= cfg.r()) fail("Usage", "--i out of range");
      NodeKind k = classify_node(cfg, i);
      if (!kind.empty() && kind != node_kind_name(k))
        fail("KindMismatch", "node " + std::to_string(node) + " is " + node_kind_name(k));
      SeriesSet set;
      if (source == "solve") {
        SolveOptions opt;
        opt.D = c.degree;
        if (c.cutoff > 0) opt.seed_bound = c.cutoff;
        set = fe_solve(cfg, local, pi, opt).set;
      } else {
        set.cfg = cfg;
        set.local = local;
        set.pi = pi;
        set.D = c.degree;
        set.objects = reflection_closure(cfg);
        set.known.resize(set.objects.size());
        for (size_t o = 0; o < set.objects.size(); ++o) {
          auto T = series_truncate(set.config((int)o), local, pi, c.degree, nullptr,
                                   c.cutoff > 0 ? c.cutoff : 10000000);
          for (auto& [d, e] : T.entries)
            if (e.known) set.known[o][d] = e.value;
        }
      }
      auto rep = fe_verify(set, 0, i, c.degree);
      json out;
      out["ok"] = rep.ok;
      out["kind"] = node_kind_name(k);
      out["checked"] = rep.checked;
      out["undetermined"] = rep.undetermined;
      out["slices"] = rep.slices;
      out["residual"] = json::parse(rep.max_residual.to_json());
      out["detail"] = rep.detail;
      emit(c, out.dump());
      if (!rep.ok) return 1;
    } else if (*solve) {
      auto cfg = config_of(c);
      SolveOptions opt;
      opt.D = c.degree;
      if (c.cutoff > 0) opt.seed_bound = c.cutoff;
      auto res = fe_solve(cfg, mode == "local", prime_of(cfg, pi_text), opt);
      json out;
      out["converged"] = res.converged;
      out["sweeps"] = res.sweeps;
      auto miss = json::array();
      for (auto& [o, d] : res.missing) miss.push_back({{"object", o}, {"d", d}});
      out["missing"] = miss;
      out["series"] = json::parse(res.set.to_json(c.degree));
      emit(c, out.dump());
    } else if (*ratver) {
      auto cfg = config_of(c);
      std::ifstream f(candidate);
      if (!f) fail("Usage", "cannot read " + candidate);
      json cand = json::parse(f);
      auto num = multipoly_of(cand.at("num"));
      auto den = multipoly_of(cand.at("den"));
      CoeffTable T;
      if (source == "enumerate") {
        T = series_truncate(cfg, false, Poly::parse(cfg.field, "T"), c.degree, nullptr,
                            c.cutoff > 0 ? c.cutoff : 10000000);
      } else {
        SolveOptions opt;
        opt.D = c.degree;
        if (c.cutoff > 0) opt.seed_bound = c.cutoff;
        T = fe_solve(cfg, false, Poly::parse(cfg.field, "T"), opt).set.table(0, c.degree);
      }
      long known = 0;
      for (auto& [d, e] : T.entries) known += e.known;
      bool ok = rational_verify(T, num, den, c.degree);
      json out;
      out["ok"] = ok;
      out["degree"] = c.degree;
      out["known_entries"] = known;
      emit(c, out.dump());
      if (!ok) return 1;
    } else if (*groupoid) {
      auto s = bichar_of(c, cartan, N, qexp);
      auto g = groupoid_enumerate(s, gexp, c.cutoff > 0 ? c.cutoff : 100000);
      if (!c.dot_path.empty()) write_file(c.dot_path, g.to_dot());
      if (!c.json_path.empty()) write_file(c.json_path, g.to_json() + "\n");
      std::printf("objects %zu, edges %zu, bases %ld%s\n", g.objects.size(), g.edges.size(), g.base_count,
                  g.truncated ? " (truncated)" : "");
    } else if (*betti) {
      auto s = bichar_of(c, cartan, N, qexp);
      BettiOptions opt;
      if (c.cutoff > 0) opt.cutoff = c.cutoff;
      auto res = betti_solve(s, gexp, dmax, jmax, opt);
      int r = s.r();
      std::ostringstream csv;
      csv << "object,j";
      for (int k = 1; k <= r; ++k) csv << ",d" << k;
      csv << ",h\n";
      for (auto& t : res.tables)
        for (auto& [key, v] : t.entries) {
          csv << t.object << "," << key.first;
          for (long x : key.second) csv << "," << x;
          csv << "," << v << "\n";
        }
      if (!c.csv_path.empty()) write_file(c.csv_path, csv.str());
      else std::cout << csv.str();
      json out;
      out["objects"] = res.tables.size();
      auto objs = json::array();
      for (auto& M : res.graph.objects) objs.push_back(matrix_to_string(M));
      out["matrices"] = objs;
      bool ok = true;
      auto rel = json::array();
      for (int i = 0; i < r; ++i) {
        auto rep = betti_relations_check(res, i);
        ok = ok && rep.ok;
        json x = {{"node", i + 1}, {"ok", rep.ok}, {"checked", rep.checked}, {"skipped", rep.skipped}};
        if (!rep.ok) x["witness"] = rep.detail;
        if (question) {
          auto qr = betti_question_check(res, i);
          x["question"] = {{"holds", qr.holds}, {"fails", qr.fails}, {"skipped", qr.skipped}};
          if (qr.fails) x["question"]["first_failure"] = qr.first_failure;
        }
        rel.push_back(x);
      }
      out["relations"] = rel;
      if (!c.csv_path.empty() || !c.json_path.empty()) emit(c, out.dump());
      else std::cerr << out.dump() << "\n";
      if (!ok) return 1;
    } else if (*kostant) {
      if (type.size() != 1) fail("Usage", "--type is a single letter");
      auto W = kostant_oracle(type[0], rank);
      auto fe = kostant_fe_check(W, -6, 6);
      json out;
      out["type"] = type;
      out["rank"] = rank;
      out["weyl_order"] = W.elements.size();
      auto el = json::array();
      for (auto& e : W.elements) el.push_back({{"word", e.word}, {"length", e.length}, {"shift", e.shift}});
      out["elements"] = el;
      auto pat = json::array();
      for (auto& [key, v] : W.betti) pat.push_back({{"k", key.first}, {"beta", key.second}, {"dim", v}});
      out["betti"] = pat;
      out["fe_check"] = {{"ok", fe.ok}, {"checked", fe.checked}};
      emit(c, out.dump());
      if (!fe.ok) return 1;
    } else if (*verma) {
      auto rep = verma_check(order, s_param);
      json out;
      out["order"] = order;
      out["s"] = s_param;
      out["dim_E_invariants"] = rep.dim_e;
      out["dim_F_invariants"] = rep.dim_f;
      out["relations_ok"] = rep.relations_ok;
      if (!rep.relations_ok) out["detail"] = rep.detail;
      emit(c, out.dump());
      if (!rep.relations_ok) return 1;
    } else if (*selftest) {
      std::vector<int> ids;
      for (auto& t : split(only, ','))
        if (!t.empty()) ids.push_back(std::stoi(t));
      return cmd_selftest(ids);
    }
  } catch (const Error& e) {
    static const std::set<std::string> usage = {"Usage", "EvenCharacteristic", "NotPrimePower"};
    json err = {{"error", e.code()}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return usage.count(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    json err = {{"error", "Internal"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
