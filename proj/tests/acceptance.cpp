#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mdsfe/error.hpp"
#include "oracles/oracles.hpp"

using namespace mdsfe;

int main(int argc, char** argv) {
  struct Item {
    int id;
    const char* name;
    std::function<oracle::Outcome()> run;
  };
  std::vector<Item> items = {
      {1, "gauss sums (exact)", oracle::gauss_sum_suite},
      {2, "reciprocity, F_5, n=4, deg<=3 (exact)", [] { return oracle::reciprocity_suite(); }},
      {3, "Gauss-sum lemmas and Lambda counts (exact)", oracle::gauss_lemma_suite},
      {4, "intro examples (exact)", oracle::intro_examples_suite},
      {5, "scattering matrix inverse (exact)", oracle::scattering_inverse_suite},
      {6, "functional equation residuals through degree 8 (exact)", oracle::fe_residual_suite},
      {7, "solver vs closed form and enumeration (exact, <=300s)", oracle::solver_suite},
      {8, "groupoid fixtures (exact counts)", oracle::groupoid_suite},
      {9, "bicharacter identities on edges (exact)", oracle::bicharacter_suite},
      {10, "cone covering, 10^4 samples (exact membership)", oracle::cone_suite},
      {11, "Betti tables and bar-complex oracle (exact)", oracle::betti_suite},
      {12, "Kostant patterns (exact)", oracle::kostant_suite},
      {13, "Verma counterexample (exact)", oracle::verma_suite},
  };
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::stoi(argv[i]));
  int failures = 0;
  for (auto& it : items) {
    if (!only.empty() && std::find(only.begin(), only.end(), it.id) == only.end()) continue;
    auto t0 = std::chrono::steady_clock::now();
    oracle::Outcome o;
    try {
      o = it.run();
    } catch (const Error& e) {
      o.fail(std::string("error ") + e.what());
    } catch (const std::exception& e) {
      o.fail(std::string("exception ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d: %s  %s  [checks=%ld, %.1fs]%s%s\n", it.id, o.ok ? "PASS" : "FAIL", it.name, o.checked,
                secs, o.ok ? "" : "  ", o.ok ? "" : o.detail.c_str());
    std::fflush(stdout);
    if (!o.ok) ++failures;
  }
  return failures ? 1 : 0;
}
