#include <prlab/pr_graph.hpp>

#include <doctest.h>

#include "dag_testing.hpp"

#include <random>

using namespace prlab;

namespace {

const char* kExampleDag =
    "#inputs x1 x2\n"
    "#hole f\n"
    "z = q(x1, x2)\n"
    "y' = f(x1, z)\n"
    "v = p(z, x2)\n"
    "y = m(y', z, v)\n";

AcyclicExpr example_dag() { return build_dag(parse_dag_file(kExampleDag)); }

FnRegistry example_registry() {
  FnRegistry reg;
  reg.emplace("q", pair_fn());
  reg.emplace("p", monus_fn());
  reg.emplace("m", native_fn("m", 3, 1, [](const Tuple& a) {
                return Tuple{a[0] + a[1] + a[2]};
              }));
  return reg;
}

}  // namespace

TEST_CASE("dag files parse and print") {
  EquationSystem sys = parse_dag_file(kExampleDag);
  CHECK(sys.inputs == std::vector<std::string>{"x1", "x2"});
  CHECK(sys.hole_name == "f");
  REQUIRE(sys.equations.size() == 4);
  CHECK(sys.equations[1].lhs == "y'");
  CHECK(sys.equations[3].args == std::vector<std::string>{"y'", "z", "v"});
  CHECK(parse_dag_file(print_dag_file(sys)).equations.size() == 4);
}

TEST_CASE("build_dag rejects malformed systems") {
  auto sys = parse_dag_file(kExampleDag);

  SUBCASE("two holes") {
    auto bad = sys;
    bad.equations[2].fn = "f";
    CHECK_THROWS_AS(build_dag(bad), DagError);
  }
  SUBCASE("no hole") {
    auto bad = sys;
    bad.equations[1].fn = "q";
    CHECK_THROWS_AS(build_dag(bad), DagError);
  }
  SUBCASE("unknown variable") {
    auto bad = sys;
    bad.equations[2].args[0] = "nope";
    CHECK_THROWS_AS(build_dag(bad), DagError);
  }
  SUBCASE("self reference") {
    auto bad = sys;
    bad.equations[2].args[0] = "v";
    CHECK_THROWS_AS(build_dag(bad), DagError);
  }
  SUBCASE("redefinition") {
    auto bad = sys;
    bad.equations[2].lhs = "z";
    CHECK_THROWS_AS(build_dag(bad), DagError);
  }
  SUBCASE("unused definition") {
    auto bad = sys;
    bad.equations[3].args = {"y'", "z", "z"};  // v becomes dead
    CHECK_THROWS_AS(build_dag(bad), DagError);
  }
  SUBCASE("missing hole directive in file") {
    CHECK_THROWS_AS(parse_dag_file("#inputs x1\ny = g(x1)\n"), DagError);
  }
  SUBCASE("final equation must define y in files") {
    CHECK_THROWS_AS(parse_dag_file("#inputs x1\n#hole f\nz = f(x1)\n"), DagError);
  }
}

TEST_CASE("classification of the worked example") {
  auto classes = classify_nodes(example_dag());
  CHECK(classes.at("z") == NodeClass::InpF);   // z = q(...)
  CHECK(classes.at("v") == NodeClass::Neither);  // v = p(...)
  CHECK(classes.at("y") == NodeClass::OutF);   // y = m(...)
  CHECK(classes.count("y'") == 0);             // the hole is not classified
}

TEST_CASE("trivial dag classifies to nothing") {
  auto dag = build_dag(parse_dag_file("#inputs x1\n#hole f\ny = f(x1)\n"));
  CHECK(classify_nodes(dag).empty());
}

TEST_CASE("chain classification matches reachability") {
  auto dag = build_dag(parse_dag_file(
      "#inputs x1\n#hole f\nu = succ(x1)\nw = f(u)\ny = succ(w)\n"));
  auto classes = classify_nodes(dag);
  CHECK(classes.at("u") == NodeClass::InpF);
  CHECK(classes.at("y") == NodeClass::OutF);
}

TEST_CASE("classification partition on random dags") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 60; ++i) {
    EquationSystem sys = testing::random_system(rng, 8);
    AcyclicExpr dag = build_dag(sys);
    auto classes = classify_nodes(dag);
    // independent reachability oracle
    int n = static_cast<int>(sys.equations.size());
    auto reaches_hole = [&](int start) {
      std::vector<int> stack = {start};
      std::vector<bool> seen(n, false);
      while (!stack.empty()) {
        int cur = stack.back();
        stack.pop_back();
        for (int u : dag.users[cur]) {
          if (u == dag.hole_eq) return true;
          if (!seen[u]) {
            seen[u] = true;
            stack.push_back(u);
          }
        }
      }
      return false;
    };
    auto reached_from_hole = [&](int target) {
      std::vector<int> stack = {dag.hole_eq};
      std::vector<bool> seen(n, false);
      while (!stack.empty()) {
        int cur = stack.back();
        stack.pop_back();
        for (int u : dag.users[cur]) {
          if (u == target) return true;
          if (!seen[u]) {
            seen[u] = true;
            stack.push_back(u);
          }
        }
      }
      return false;
    };
    for (int node = 0; node < n; ++node) {
      if (node == dag.hole_eq) continue;
      bool inp = reaches_hole(node);
      bool out = reached_from_hole(node);
      CHECK(!(inp && out));  // acyclicity forbids both
      NodeClass c = classes.at(sys.equations[node].lhs);
      if (inp) CHECK(c == NodeClass::InpF);
      else if (out) CHECK(c == NodeClass::OutF);
      else CHECK(c == NodeClass::Neither);
    }
  }
}

TEST_CASE("normal form of the worked example") {
  NormalForm nf = normalize(example_dag());
  CHECK(nf.hole_arity == 2);
  CHECK(print_normal_form(nf) ==
        "g(x1,x2) = <x1,q(x1,x2)>\n"
        "h(x1,x2,y') = m(y',q(x1,x2),p(q(x1,x2),x2))\n");
}

TEST_CASE("expansion duplicates shared subterms") {
  CHECK(expand_expression(example_dag()) ==
        "m(f(x1,q(x1,x2)),q(x1,x2),p(q(x1,x2),x2))");
  auto trivial = build_dag(parse_dag_file("#inputs x1\n#hole f\ny = f(x1)\n"));
  CHECK(expand_expression(trivial) == "f(x1)");
}

TEST_CASE("already-normal systems are fixpoints") {
  auto dag = build_dag(parse_dag_file(
      "#inputs x1 x2\n#hole f\ng1 = q(x1, x2)\ny' = f(x1, g1)\ny = m(x1, x2, y')\n"));
  NormalForm nf = normalize(dag);
  CHECK(print_term(nf.g_components[0], nf.input_names) == "x1");
  CHECK(print_term(nf.g_components[1], nf.input_names) == "q(x1,x2)");
  CHECK(print_term(nf.h_term, nf.input_names) == "m(x1,x2,y')");
}

TEST_CASE("evaluation of the worked example") {
  AcyclicExpr dag = example_dag();
  FnRegistry reg = example_registry();
  FnHandle mul = native_fn("mul", 2, 1, [](const Tuple& a) { return Tuple{a[0] * a[1]}; });
  // hand evaluation: z = pair(2,3) = 18, y' = 2*18 = 36, v = 18 monus 3 = 15,
  // y = 36 + 18 + 15 = 69
  CHECK(eval_dag(dag, reg, mul, {nat(2), nat(3)}) == 69);
  CHECK(eval_dag(dag, reg, constant_fn(2, Nat(0)), {nat(2), nat(3)}) == 33);
  NormalForm nf = normalize(dag);
  CHECK(eval_normal_form(nf, reg, mul, {nat(2), nat(3)}) == 69);
}

TEST_CASE("hole arity and identity are preserved") {
  NormalForm nf = normalize(example_dag());
  FnRegistry reg = example_registry();
  FnHandle g = normal_form_g(nf, reg);
  FnHandle h = normal_form_h(nf, reg);
  CHECK(g.out_arity == nf.hole_arity);
  CHECK(g.arity == 2);
  CHECK(h.arity == 3);
  Tuple mid = g({nat(2), nat(3)});
  REQUIRE(mid.size() == 2);
  CHECK(mid[0] == 2);
  CHECK(mid[1] == 18);
}

TEST_CASE("normalization preserves semantics on random dags") {
  std::mt19937_64 rng(99);
  FnRegistry reg = testing::panel_registry();
  for (int i = 0; i < 25; ++i) {
    EquationSystem sys = testing::random_system(rng, 8);
    AcyclicExpr dag = build_dag(sys);
    NormalForm nf = normalize(dag);
    CHECK(static_cast<int>(nf.g_components.size()) == dag.hole_arity);
    for (const FnHandle& hole : testing::hole_panel(dag.hole_arity)) {
      for (std::uint64_t a = 0; a <= 6; ++a) {
        if (dag.n_inputs() == 1) {
          CHECK(eval_dag(dag, reg, hole, {nat(a)}) ==
                eval_normal_form(nf, reg, hole, {nat(a)}));
        } else {
          for (std::uint64_t b = 0; b <= 6; b += 2) {
            CHECK(eval_dag(dag, reg, hole, {nat(a), nat(b)}) ==
                  eval_normal_form(nf, reg, hole, {nat(a), nat(b)}));
          }
        }
      }
    }
  }
}

TEST_CASE("existence condition scans lexicographically") {
  // y = f(x1) with the zero hole vanishes immediately
  auto trivial = build_dag(parse_dag_file("#inputs x1\n#hole f\ny = f(x1)\n"));
  NormalForm nf = normalize(trivial);
  FnRegistry reg = testing::panel_registry();
  auto w = existence_condition(nf, reg, constant_fn(1, Nat(0)), 10);
  REQUIRE(w.has_value());
  CHECK((*w)[0] == 0);

  // succ(f(x1)) with the zero hole is never zero
  auto never = build_dag(parse_dag_file("#inputs x1\n#hole f\nu = f(x1)\ny = succ(u)\n"));
  CHECK(!existence_condition(normalize(never), reg, constant_fn(1, Nat(0)), 10).has_value());

  // agreement with a direct scan of the dag evaluation
  auto dag = build_dag(parse_dag_file("#inputs x1\n#hole f\nu = f(x1)\ny = mns(u, x1)\n"));
  NormalForm dn = normalize(dag);
  FnHandle hole = successor_fn();
  auto found = existence_condition(dn, reg, hole, 20);
  std::optional<std::uint64_t> scan;
  for (std::uint64_t x = 0; x <= 20 && !scan; ++x) {
    if (eval_dag(dag, reg, hole, {nat(x)}) == 0) scan = x;
  }
  REQUIRE(found.has_value() == scan.has_value());
  if (scan) CHECK((*found)[0] == *scan);
}
