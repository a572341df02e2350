// Acceptance suite: one check per release criterion, one PASS/FAIL line
// each, nonzero exit when anything fails.

#include <prlab/dovetail.hpp>
#include <prlab/fuel_vm.hpp>
#include <prlab/oracle.hpp>
#include <prlab/pr_algebra.hpp>
#include <prlab/pr_graph.hpp>
#include <prlab/reductions.hpp>

#include "dag_testing.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace prlab;

namespace {

using TargetTweak = prlab::detail::TargetTweak;

struct Criterion {
  int num;
  std::string name;
  std::function<bool(std::string&)> run;
};

bool expect(bool cond, std::string& detail, const std::string& msg) {
  if (!cond && detail.empty()) detail = msg;
  return cond;
}

// --- 1: bijectivity construction golden table -----------------------------

bool crit_bijective_golden(std::string& detail) {
  FnHandle f = table_fn("f", {nat(3), nat(2), nat(5), nat(5), nat(3), nat(40)},
                        [](const Nat& x) { return Nat(x + 100); });
  ReductionResult r = onto_to_bijective(f);
  const std::vector<std::uint64_t> expected = {6, 1, 4, 3, 10, 5, 7, 9, 11, 13, 80, 15};
  bool ok = true;
  for (std::size_t n = 0; n < expected.size(); ++n) {
    ok = expect(r.targets[0].at(n) == expected[n], detail,
                "h(" + std::to_string(n) + ") != " + std::to_string(expected[n])) &&
         ok;
  }
  return ok;
}

// --- 2: graph doubling golden ---------------------------------------------

bool crit_ff_graph_golden(std::string& detail) {
  ReductionResult r = ff_graph(table_fn("f", {nat(1), nat(1), nat(0), nat(4), nat(0), nat(4)},
                                        [](const Nat&) { return Nat(4); }));
  const FnHandle& g = r.targets[0];
  bool ok = expect(g.at(g.at(std::uint64_t{4})) == 0, detail, "g(g(4)) != 0");
  const std::vector<std::uint64_t> image = {1, 2, 3, 2, 5, 0, 7, 8, 9, 0, 11, 8};
  for (std::uint64_t m = 0; m <= 11; ++m) {
    ok = expect(g.at(m) == image[m], detail,
                "edge (" + std::to_string(m) + "," + std::to_string(image[m]) + ") missing") &&
         ok;
  }
  return ok;
}

// --- 3: normal-form golden -------------------------------------------------

bool crit_normal_form_golden(std::string& detail) {
  const char* text =
      "#inputs x1 x2\n#hole f\n"
      "z = q(x1, x2)\ny' = f(x1, z)\nv = p(z, x2)\ny = m(y', z, v)\n";
  AcyclicExpr dag = build_dag(parse_dag_file(text));
  NormalForm nf = normalize(dag);
  bool ok = expect(print_normal_form(nf) ==
                       "g(x1,x2) = <x1,q(x1,x2)>\n"
                       "h(x1,x2,y') = m(y',q(x1,x2),p(q(x1,x2),x2))\n",
                   detail, "normal form text mismatch");
  std::string formula = expand_expression(dag);
  ok = expect(formula == "m(f(x1,q(x1,x2)),q(x1,x2),p(q(x1,x2),x2))", detail,
              "expanded formula mismatch") &&
       ok;
  std::size_t occurrences = 0;
  for (std::size_t pos = formula.find("q(x1,x2)"); pos != std::string::npos;
       pos = formula.find("q(x1,x2)", pos + 1)) {
    ++occurrences;
  }
  ok = expect(occurrences == 3, detail, "q(x1,x2) must occur three times") && ok;
  return ok;
}

// --- 4: normalization soundness sweep ---------------------------------------

bool crit_normalization_sweep(std::string& detail) {
  std::mt19937_64 rng(20240901);
  FnRegistry reg = testing::panel_registry();
  for (int i = 0; i < 100; ++i) {
    EquationSystem sys = testing::random_system(rng, 8);
    AcyclicExpr dag = build_dag(sys);
    NormalForm nf = normalize(dag);
    for (const FnHandle& hole : testing::hole_panel(dag.hole_arity)) {
      if (dag.n_inputs() == 1) {
        for (std::uint64_t a = 0; a <= 12; ++a) {
          if (eval_dag(dag, reg, hole, {nat(a)}) != eval_normal_form(nf, reg, hole, {nat(a)})) {
            detail = "mismatch on dag " + std::to_string(i) + " at x=" + std::to_string(a);
            return false;
          }
        }
      } else {
        for (std::uint64_t a = 0; a <= 12; ++a) {
          for (std::uint64_t b = 0; b <= 12; ++b) {
            if (eval_dag(dag, reg, hole, {nat(a), nat(b)}) !=
                eval_normal_form(nf, reg, hole, {nat(a), nat(b)})) {
              detail = "mismatch on dag " + std::to_string(i) + " at (" + std::to_string(a) +
                       "," + std::to_string(b) + ")";
              return false;
            }
          }
        }
      }
    }
  }
  return true;
}

// --- 5: reduction catalogue suite -------------------------------------------

bool crit_catalogue_suite(std::string& detail) {
  SuiteConfig cfg;  // seed 7, window 64, fuel 20000, 200 + 200 cases
  std::vector<Verdict> verdicts = run_suite(catalogue_ids(), cfg);
  bool ok = true;
  for (const Verdict& v : verdicts) {
    ok = expect(v.cases_run >= 200, detail, v.id + " ran fewer than 200 cases") && ok;
    if (!v.pass()) {
      ok = expect(false, detail,
                  v.id + " violated its window law: " + v.failures.front().witness);
    }
  }
  return ok;
}

// --- 6: normal-form identity for the universal evaluator --------------------

bool crit_kleene_identity(std::string& detail) {
  CorpusSpec spec;
  spec.kind = CorpusKind::WhileDelay;
  spec.count = 100;
  spec.seed = 90210;
  spec.delay_min = 3;
  spec.delay_max = 10000;
  std::vector<CorpusCase> cases = gen_corpus(spec);
  std::mt19937_64 rng(5);
  for (const CorpusCase& c : cases) {
    const WhileProgram& p = *c.while_instance;
    RunOutcome direct = run_bounded(p, {nat(0)}, 200000);
    if (!expect(direct.halted() && *c.halting_step == direct.at_step, detail,
                "planted halting time is wrong for " + c.digest)) {
      return false;
    }
    HaltWatcher w(p, {nat(0)});
    auto t_min = w.halting_step(200000);
    if (!expect(t_min.has_value() && *t_min == direct.at_step, detail,
                "least halting fuel mismatch for " + c.digest)) {
      return false;
    }
    if (!expect(t_predicate(p, {nat(0)}, *t_min, TMode::AtMost) == 0 &&
                    (*t_min == 0 ||
                     t_predicate(p, {nat(0)}, *t_min - 1, TMode::AtMost) == 1),
                detail, "t_min is not minimal for " + c.digest)) {
      return false;
    }
    if (!expect(u_extract(p, {nat(0)}, *t_min) == direct.output, detail,
                "extraction differs from direct evaluation for " + c.digest)) {
      return false;
    }
    // fuel monotonicity at ten sampled fuels
    for (int s = 0; s < 10; ++s) {
      std::uint64_t fuel = rng() % 20000;
      RunOutcome r = run_bounded(p, {nat(0)}, fuel);
      bool should_halt = fuel >= *t_min;
      if (!expect(r.halted() == should_halt, detail, "fuel monotonicity broken")) return false;
      if (r.halted() &&
          !expect(r.output == direct.output && r.at_step == direct.at_step, detail,
                  "halting outcome changed with more fuel")) {
        return false;
      }
    }
  }
  return true;
}

// --- 7: dovetail schedule golden trace ---------------------------------------

bool crit_schedule_golden(std::string& detail) {
  const std::vector<std::pair<std::uint64_t, std::uint64_t>> expected = {
      {1, 1}, {1, 2}, {2, 1}, {1, 3}, {2, 2}, {3, 1}, {1, 4}, {2, 3}, {3, 2}, {4, 1}};
  for (std::size_t k = 0; k < expected.size(); ++k) {
    SchedulePoint sp = dovetail_schedule(k + 1);
    if (sp.machine != expected[k].first || sp.machine_step != expected[k].second) {
      detail = "global step " + std::to_string(k + 1) + " maps to (" +
               std::to_string(sp.machine) + "," + std::to_string(sp.machine_step) + ")";
      return false;
    }
  }
  return true;
}

// --- 8: frontier decidable branches ------------------------------------------

bool crit_frontier_branches(std::string& detail) {
  std::mt19937_64 rng(31337);
  // decide_hz_fg_finite against a scan of f(g(.)) where g cycles its
  // finite codomain
  for (int i = 0; i < 50; ++i) {
    std::uniform_int_distribution<int> szd(1, 6);
    int sz = szd(rng);
    std::vector<Nat> listing;
    for (int j = 0; j < sz; ++j) listing.push_back(nat(rng() % 40));
    std::vector<Nat> ftab;
    for (int j = 0; j < 48; ++j) ftab.push_back(nat(rng() % 3));
    FnHandle f = table_fn("f", ftab, [](const Nat&) { return Nat(1); });
    FnHandle g = native_unary("cycle", [listing](const Nat& y) {
      return listing[to_u64(y % static_cast<unsigned long>(listing.size()))];
    });
    bool scan = false;
    for (std::uint64_t y = 0; y <= 3 * static_cast<std::uint64_t>(sz); ++y) {
      if (f.at(g.at(y)) == 0) scan = true;
    }
    Decision d = decide_hz_fg_finite(f, listing);
    if (!expect((d == Decision::Yes) == scan, detail,
                "finite-codomain branch disagrees with the scan on case " +
                    std::to_string(i))) {
      return false;
    }
  }
  // decide_hz_hf_trivial against an exhaustive classification of h
  for (int i = 0; i < 50; ++i) {
    std::uniform_int_distribution<int> mode(0, 2);
    int m = mode(rng);
    FnHandle h = m == 0 ? constant_fn(1, Nat(0))
                 : m == 1 ? native_unary("pos", [](const Nat& x) { return Nat(x + 1); })
                          : native_unary("mix", [](const Nat& x) { return Nat(x % 2); });
    bool any_zero = false, any_nonzero = false;
    for (std::uint64_t x = 0; x <= 64; ++x) {
      (h.at(x) == 0 ? any_zero : any_nonzero) = true;
    }
    HClass cls = any_zero && any_nonzero ? HClass::Mixed
                 : any_zero              ? HClass::AlwaysZeroOnRange
                                         : HClass::NeverZeroOnRange;
    Decision d = decide_hz_hf_trivial(cls);
    Decision want = cls == HClass::Mixed ? Decision::Undecided
                    : cls == HClass::AlwaysZeroOnRange ? Decision::Yes
                                                       : Decision::No;
    if (!expect(d == want, detail, "trivial branch decision mismatch")) return false;
  }
  return true;
}

// --- 9: pairing and tupling laws ---------------------------------------------

bool crit_pairing_laws(std::string& detail) {
  for (std::uint64_t x = 0; x <= 500; ++x) {
    for (std::uint64_t y = 0; y <= 500; ++y) {
      auto [a, b] = unpair_nat(pair_nat(nat(x), nat(y)));
      if (a != x || b != y) {
        detail = "unpair(pair) failed at (" + std::to_string(x) + "," + std::to_string(y) + ")";
        return false;
      }
    }
  }
  for (std::uint64_t z = 0; z <= 125000; ++z) {
    auto [x, y] = unpair_nat(nat(z));
    if (pair_nat(x, y) != z) {
      detail = "pair(unpair) failed at " + std::to_string(z);
      return false;
    }
  }
  std::mt19937_64 rng(77);
  for (int i = 0; i < 200; ++i) {
    int n = 2 + static_cast<int>(rng() % 4);
    Tuple t;
    for (int j = 0; j < n; ++j) t.push_back(nat(rng() % 1000));
    Tuple rest(t.begin() + 1, t.end());
    if (tuple_encode(t) != pair_nat(t[0], tuple_encode(rest))) {
      detail = "tupling is not right-nested";
      return false;
    }
    if (tuple_decode(tuple_encode(t), n) != t) {
      detail = "tuple decode failed";
      return false;
    }
  }
  return true;
}

// --- 10: mutation sensitivity --------------------------------------------------

bool crit_mutation_sensitivity(std::string& detail) {
  SuiteConfig cfg;  // same corpus as criterion 5
  auto shift_by = [](std::uint64_t d) {
    return TargetTweak([d](const FnHandle& g) {
      FnHandle bad = g;
      bad.label = g.label + "_shifted";
      bad.eval = [g, d](const Tuple& args) { return Tuple{g.at(Nat(args[0] + d))}; };
      return bad;
    });
  };
  TargetTweak flip = [](const FnHandle& g) {
    FnHandle bad = g;
    bad.label = g.label + "_flipped";
    bad.eval = [g](const Tuple& args) { return Tuple{monus(Nat(1), g.at(args[0]))}; };
    return bad;
  };
  TargetTweak add_index = [](const FnHandle& g) {
    FnHandle bad = g;
    bad.eval = [g](const Tuple& args) { return Tuple{g.at(args[0]) + args[0]}; };
    return bad;
  };
  TargetTweak double_output = [](const FnHandle& g) {
    FnHandle bad = g;
    bad.eval = [g](const Tuple& args) { return Tuple{2 * g.at(args[0])}; };
    return bad;
  };

  const std::vector<std::pair<std::string, TargetTweak>> mutations = {
      {"hz_to_exactly_one_zero", shift_by(1)},
      {"no_zeros_to_exactly_one_zero", flip},
      {"hz_to_at_least_3", shift_by(3)},
      {"hz_to_equal_next", add_index},
      {"hz_to_nonzero_function", shift_by(1)},
      {"zero_fn_to_cod_1", shift_by(1)},
      {"hz_to_not_injective", shift_by(1)},
      {"onto_to_bijective", double_output},
      {"ff_graph", shift_by(1)},
      {"shp_to_has_zeros", shift_by(1)},
  };
  for (const auto& [id, tweak] : mutations) {
    Verdict v = run_row_with_tweak(id, tweak, cfg);
    if (v.pass()) {
      detail = "mutated " + id + " slipped through the suite";
      return false;
    }
    const Failure& f = v.failures.front();
    if (f.case_seed == 0 || f.instance_digest.empty()) {
      detail = "witness for mutated " + id + " is not replayable";
      return false;
    }
    // replay from (seed, id, window)
    Verdict again = run_row_with_tweak(id, tweak, cfg);
    if (again.pass() || again.failures.front().case_seed != f.case_seed) {
      detail = "witness for mutated " + id + " did not replay";
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "bijectivity construction golden table", crit_bijective_golden},
      {2, "graph-doubling golden example", crit_ff_graph_golden},
      {3, "normal-form golden example", crit_normal_form_golden},
      {4, "normalization soundness sweep", crit_normalization_sweep},
      {5, "reduction catalogue suite", crit_catalogue_suite},
      {6, "universal-evaluator extraction identity", crit_kleene_identity},
      {7, "dovetail schedule golden trace", crit_schedule_golden},
      {8, "frontier decidable branches", crit_frontier_branches},
      {9, "pairing and tupling laws", crit_pairing_laws},
      {10, "mutation sensitivity", crit_mutation_sensitivity},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::printf("%s criterion %2d: %s (%lld ms)%s%s\n", ok ? "PASS" : "FAIL", c.num,
                c.name.c_str(), static_cast<long long>(ms), detail.empty() ? "" : " -- ",
                detail.c_str());
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
