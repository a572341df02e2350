#include <prlab/loop_lang.hpp>

#include <doctest.h>

#include <random>
#include <set>

using namespace prlab;

namespace {

const char* kMonusText =
    "fn monus(2) {\n"
    "  x0 = x1\n"
    "  loop x2 {\n"
    "    clear x3\n"
    "    clear x4\n"
    "    loop x0 {\n"
    "      x3 = x4\n"
    "      inc x4\n"
    "    }\n"
    "    x0 = x3\n"
    "  }\n"
    "}\n";

// (a monus b) + (b monus a), built from two monus blocks.
const char* kEqText =
    "fn eqind(2) {\n"
    "  x5 = x1\n"
    "  loop x2 {\n"
    "    clear x3\n"
    "    clear x4\n"
    "    loop x5 {\n"
    "      x3 = x4\n"
    "      inc x4\n"
    "    }\n"
    "    x5 = x3\n"
    "  }\n"
    "  x6 = x2\n"
    "  loop x1 {\n"
    "    clear x3\n"
    "    clear x4\n"
    "    loop x6 {\n"
    "      x3 = x4\n"
    "      inc x4\n"
    "    }\n"
    "    x6 = x3\n"
    "  }\n"
    "  x0 = x5\n"
    "  loop x6 {\n"
    "    inc x0\n"
    "  }\n"
    "}\n";

std::uint64_t monus_oracle(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : 0; }

Nat run1(const LoopProgram& p, std::uint64_t a) { return eval_loop(p, {nat(a)}).value; }
Nat run2(const LoopProgram& p, std::uint64_t a, std::uint64_t b) {
  return eval_loop(p, {nat(a), nat(b)}).value;
}

std::vector<Stmt> random_body(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> nstmt(1, 5);
  std::uniform_int_distribution<int> var(0, 4);
  std::uniform_int_distribution<int> kind(0, depth > 0 ? 3 : 2);
  std::vector<Stmt> body;
  int n = nstmt(rng);
  for (int i = 0; i < n; ++i) {
    switch (kind(rng)) {
      case 0: body.push_back(Stmt::clear(var(rng))); break;
      case 1: body.push_back(Stmt::copy(var(rng), var(rng))); break;
      case 2: body.push_back(Stmt::inc(var(rng))); break;
      default: body.push_back(Stmt::loop(1 + var(rng) % 3, random_body(rng, depth - 1)));
    }
  }
  return body;
}

}  // namespace

TEST_CASE("parse produces the expected minimal ASTs") {
  LoopProgram zero = parse_loop("fn zero(1){ clear x0 }");
  CHECK(zero.name == "zero");
  CHECK(zero.arity == 1);
  REQUIRE(zero.body.size() == 1);
  CHECK(zero.body[0].kind == StmtKind::Clear);
  CHECK(zero.body[0].var == 0);

  LoopProgram id = parse_loop("fn id(1){ x0 = x1 }");
  REQUIRE(id.body.size() == 1);
  CHECK(id.body[0].kind == StmtKind::Copy);
  CHECK(id.body[0].var == 0);
  CHECK(id.body[0].src == 1);
}

TEST_CASE("monus program computes truncated subtraction") {
  LoopProgram monus = parse_loop(kMonusText);
  CHECK(run2(monus, 5, 3) == 2);
  CHECK(run2(monus, 3, 5) == 0);
  CHECK(run2(monus, 7, 7) == 0);
  for (std::uint64_t a = 0; a <= 12; ++a) {
    for (std::uint64_t b = 0; b <= 12; ++b) {
      CHECK(run2(monus, a, b) == monus_oracle(a, b));
    }
  }
}

TEST_CASE("equality indicator program vanishes exactly on the diagonal") {
  LoopProgram eq = parse_loop(kEqText);
  CHECK(run2(eq, 7, 7) == 0);
  CHECK(run2(eq, 7, 8) != 0);
  for (std::uint64_t a = 0; a <= 10; ++a) {
    for (std::uint64_t b = 0; b <= 10; ++b) {
      CHECK((run2(eq, a, b) == 0) == (a == b));
    }
  }
}

TEST_CASE("loop iteration count is latched at entry") {
  LoopProgram p = parse_loop("fn latch(1){ loop x1 { inc x1 inc x0 } }");
  for (std::uint64_t n = 0; n <= 25; ++n) {
    CHECK(run1(p, n) == n);
  }
}

TEST_CASE("evaluation is deterministic in value and cost") {
  LoopProgram monus = parse_loop(kMonusText);
  EvalResult a = eval_loop(monus, {nat(9), nat(4)});
  EvalResult b = eval_loop(monus, {nat(9), nat(4)});
  CHECK(a.value == b.value);
  CHECK(a.cost.steps == b.cost.steps);
}

TEST_CASE("step counting follows the cost model") {
  CHECK(eval_loop(parse_loop("fn f(0){ clear x0 }"), {}).cost.steps == 1);
  CHECK(eval_loop(parse_loop("fn f(0){}"), {}).cost.steps == 0);
  // loop entry costs one step, each body pass pays for its statements
  LoopProgram p = parse_loop("fn f(1){ loop x1 { inc x0 } }");
  for (std::uint64_t n = 0; n <= 6; ++n) {
    CHECK(eval_loop(p, {nat(n)}).cost.steps == 1 + n);
  }
}

TEST_CASE("canonical print round-trips") {
  LoopProgram monus = parse_loop(kMonusText);
  CHECK(print_loop(monus) == kMonusText);
  CHECK(parse_loop(print_loop(monus)) == monus);

  // sloppy whitespace prints to the same canonical text
  LoopProgram squished = parse_loop("fn monus(2){x0=x1 loop x2{clear x3 clear x4 "
                                    "loop x0{x3=x4 inc x4} x0=x3}}");
  CHECK(print_loop(squished) == kMonusText);
}

TEST_CASE("round-trip and print injectivity over generated programs") {
  std::mt19937_64 rng(42);
  std::set<std::string> texts;
  int distinct = 0;
  for (int i = 0; i < 80; ++i) {
    LoopProgram p{"gen" + std::to_string(i), 2, random_body(rng, 2)};
    std::string text = print_loop(p);
    LoopProgram q = parse_loop(text);
    CHECK(q == p);
    CHECK(print_loop(q) == text);  // print.parse is idempotent
    if (texts.insert(text).second) ++distinct;
  }
  // distinct ASTs print distinctly (names differ only when bodies repeat)
  CHECK(distinct == static_cast<int>(texts.size()));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_loop("fn f(1){ clear x0"), ParseError);
  CHECK_THROWS_AS(parse_loop("fn f(1){ while x1 { } }"), ParseError);
  CHECK_THROWS_AS(parse_loop("fn f(1){ bogus x0 }"), ParseError);
  CHECK_THROWS_AS(parse_loop("fn x1(1){ clear x0 }"), ParseError);
  try {
    parse_loop("fn f(1){\n  clear x0\n  junk\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
    CHECK(e.col >= 1);
  }
}

TEST_CASE("validate flags undeclared input-like reads as warnings") {
  Validation ok = validate_loop(parse_loop(kMonusText));
  CHECK(ok.ok());
  CHECK(ok.warnings.empty());

  Validation scratch = validate_loop(parse_loop("fn f(1){ x0 = x5 }"));
  CHECK(scratch.ok());  // reads as 0, a warning rather than a violation
  REQUIRE(scratch.warnings.size() == 1);
  CHECK(scratch.warnings[0].find("x5") != std::string::npos);

  Validation freeish = validate_loop(parse_loop("fn f(2){ loop x3 { inc x0 } }"));
  CHECK(freeish.ok());
  CHECK(freeish.warnings.size() == 1);
}

TEST_CASE("arity is enforced at evaluation time") {
  LoopProgram monus = parse_loop(kMonusText);
  CHECK_THROWS_AS(eval_loop(monus, {nat(1)}), std::invalid_argument);
}

TEST_CASE("every generated program terminates on a window of inputs") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 25; ++i) {
    LoopProgram p{"t" + std::to_string(i), 1, random_body(rng, 2)};
    for (std::uint64_t x = 0; x <= 8; ++x) {
      (void)eval_loop(p, {nat(x)});  // must return
    }
  }
}
