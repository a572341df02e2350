#include <prlab/fuel_vm.hpp>
#include <prlab/loop_lang.hpp>

#include <doctest.h>

#include <random>

using namespace prlab;

namespace {

const char* kDivergerText =
    "fn bot(1) {\n"
    "  inc x2\n"
    "  while x2 {\n"
    "    inc x2\n"
    "  }\n"
    "}\n";

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

WhileProgram identity_program() { return parse_while("fn id(1){ x0 = x1 }"); }

// Halts at exactly `steps` with output `out` (out <= steps).
WhileProgram delay_program(std::uint64_t steps, std::uint64_t out) {
  std::vector<Stmt> body;
  for (std::uint64_t i = 0; i < out; ++i) body.push_back(Stmt::inc(0));
  for (std::uint64_t i = out; i < steps; ++i) body.push_back(Stmt::inc(2));
  return WhileProgram{"delay", 1, std::move(body)};
}

}  // namespace

TEST_CASE("while grammar is a superset of the loop grammar") {
  WhileProgram monus = parse_while(kMonusText);
  CHECK(is_loop_only(monus));
  CHECK(to_loop(monus).has_value());
  WhileProgram bot = parse_while(kDivergerText);
  CHECK(!is_loop_only(bot));
  CHECK(!to_loop(bot).has_value());
  CHECK(print_while(bot) == kDivergerText);
}

TEST_CASE("canonical diverger never halts") {
  WhileProgram bot = parse_while(kDivergerText);
  RunOutcome r = run_bounded(bot, {nat(3)}, 1000000);
  CHECK(!r.halted());
  CHECK(r.fuel_used == 1000000);
}

TEST_CASE("run_bounded hits the exact halting boundary") {
  for (std::uint64_t s : {1ull, 2ull, 17ull, 137ull}) {
    WhileProgram p = delay_program(s, 1);
    RunOutcome under = run_bounded(p, {nat(0)}, s - 1);
    CHECK(!under.halted());
    RunOutcome at = run_bounded(p, {nat(0)}, s);
    REQUIRE(at.halted());
    CHECK(at.at_step == s);
    CHECK(at.output == 1);
  }
}

TEST_CASE("identity program halts quickly with its input") {
  RunOutcome r = run_bounded(identity_program(), {nat(7)}, 100);
  REQUIRE(r.halted());
  CHECK(r.output == 7);
  CHECK(r.at_step == 1);
}

TEST_CASE("fuel monotonicity") {
  WhileProgram p = delay_program(23, 4);
  RunOutcome base = run_bounded(p, {nat(9)}, 23);
  REQUIRE(base.halted());
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::uint64_t> fuel(23, 4000);
  for (int i = 0; i < 40; ++i) {
    RunOutcome r = run_bounded(p, {nat(9)}, fuel(rng));
    REQUIRE(r.halted());
    CHECK(r.output == base.output);
    CHECK(r.at_step == base.at_step);
  }
}

TEST_CASE("arity mismatches and undecodable indices behave as divergence") {
  WhileProgram id = identity_program();
  CHECK(!run_bounded(id, {nat(1), nat(2)}, 1000).halted());
  CHECK(!run_bounded(ProgramIndex{Nat(0)}, {nat(1)}, 1000).halted());
  CHECK(t_predicate(ProgramIndex{Nat(12345)}, {nat(0)}, 500, TMode::AtMost) == 1);
  CHECK(u_extract(ProgramIndex{Nat(12345)}, {nat(0)}, 500) == 0);
}

TEST_CASE("index encoding is the documented bijective numeral") {
  // fn zero(1) { clear x0 } canonical text, frozen against an
  // independent computation of the numeral.
  WhileProgram zero = parse_while("fn zero(1){ clear x0 }");
  CHECK(encode_program(zero).e.get_str() ==
        "18467507763310764105756912100565453074809823436853753011072871");

  CHECK(bytes_to_index("") == 0);
  CHECK(bytes_to_index("A") == 66);  // byte 65 -> digit 66
  CHECK(index_to_bytes(Nat(66)) == "A");
}

TEST_CASE("decode inverts encode on canonical programs") {
  for (const char* text : {kDivergerText, kMonusText, "fn zero(1){ clear x0 }"}) {
    WhileProgram p = parse_while(text);
    ProgramIndex e = encode_program(p);
    auto q = decode_program(e);
    REQUIRE(q.has_value());
    CHECK(*q == p);
    CHECK(encode_program(*q).e == e.e);
  }
  CHECK(!decode_program(ProgramIndex{Nat(0)}).has_value());
  // almost all indices are not programs
  std::mt19937_64 rng(3);
  int programs = 0;
  for (int i = 0; i < 200; ++i) {
    Nat e = nat(rng());
    if (decode_program(ProgramIndex{e})) ++programs;
  }
  CHECK(programs == 0);
}

TEST_CASE("distinct programs get distinct indices") {
  std::vector<WhileProgram> ps = {
      parse_while("fn a(1){ clear x0 }"), parse_while("fn b(1){ clear x0 }"),
      parse_while("fn a(1){ inc x0 }"), parse_while(kDivergerText),
      parse_while(kMonusText)};
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      CHECK(encode_program(ps[i]).e != encode_program(ps[j]).e);
    }
  }
}

TEST_CASE("t_predicate in both modes") {
  ProgramIndex id = encode_program(identity_program());
  CHECK(t_predicate(id, {nat(0)}, 0, TMode::AtMost) == 1);  // needs one step
  CHECK(t_predicate(id, {nat(0)}, 1, TMode::AtMost) == 0);
  CHECK(t_predicate(id, {nat(0)}, 5, TMode::AtMost) == 0);
  CHECK(t_predicate(id, {nat(0)}, 5, TMode::Exactly) == 1);
  CHECK(t_predicate(id, {nat(0)}, 1, TMode::Exactly) == 0);

  ProgramIndex bot = encode_program(parse_while(kDivergerText));
  for (std::uint64_t t : {0ull, 1ull, 50ull, 999ull}) {
    CHECK(t_predicate(bot, {nat(0)}, t, TMode::AtMost) == 1);
    CHECK(t_predicate(bot, {nat(0)}, t, TMode::Exactly) == 1);
  }
}

TEST_CASE("exactly-mode marks at most one step per computation") {
  std::vector<WhileProgram> ps = {identity_program(), delay_program(13, 2),
                                  parse_while(kDivergerText)};
  for (const WhileProgram& p : ps) {
    ProgramIndex e = encode_program(p);
    for (std::uint64_t x = 0; x <= 3; ++x) {
      int zeros = 0;
      for (std::uint64_t t = 0; t <= 200; ++t) {
        if (t_predicate(e, {nat(x)}, t, TMode::Exactly) == 0) ++zeros;
      }
      CHECK(zeros <= 1);
    }
  }
}

TEST_CASE("mode coherence: an exact hit implies at-most hits afterwards") {
  WhileProgram p = delay_program(29, 3);
  HaltWatcher w(p, {nat(0)});
  REQUIRE(w.halted_exactly_at(29));
  for (std::uint64_t t = 29; t <= 60; ++t) {
    HaltWatcher v(p, {nat(0)});
    CHECK(v.halted_by(t));
  }
}

TEST_CASE("u_extract returns the output once halted and 0 before") {
  ProgramIndex id = encode_program(identity_program());
  CHECK(u_extract(id, {nat(9)}, 100) == 9);
  CHECK(u_extract(id, {nat(9)}, 0) == 0);
  ProgramIndex bot = encode_program(parse_while(kDivergerText));
  CHECK(u_extract(bot, {nat(9)}, 2000) == 0);
}

TEST_CASE("normal-form identity: evaluation equals extraction at the least hit") {
  std::vector<WhileProgram> ps = {identity_program(), delay_program(97, 7),
                                  delay_program(5, 0)};
  WhileProgram monus = loop_to_while(parse_loop(kMonusText));
  for (Tuple args : {Tuple{nat(9), nat(2)}, Tuple{nat(2), nat(9)}}) {
    RunOutcome direct = run_bounded(monus, args, 100000);
    REQUIRE(direct.halted());
    HaltWatcher w(monus, args);
    auto t_min = w.halting_step(100000);
    REQUIRE(t_min.has_value());
    CHECK(u_extract(encode_program(monus), args, *t_min) == direct.output);
  }
  for (const WhileProgram& p : ps) {
    ProgramIndex e = encode_program(p);
    for (std::uint64_t x = 0; x <= 4; ++x) {
      RunOutcome direct = run_bounded(p, {nat(x)}, 100000);
      REQUIRE(direct.halted());
      HaltWatcher w(p, {nat(x)});
      auto t_min = w.halting_step(100000);
      REQUIRE(t_min.has_value());
      CHECK(*t_min == direct.at_step);
      CHECK(u_extract(e, {nat(x)}, *t_min) == direct.output);
      if (*t_min > 0) CHECK(u_extract(e, {nat(x)}, *t_min - 1) == 0);
    }
  }
}

TEST_CASE("loop programs embed with identical behavior and cost") {
  LoopProgram monus = parse_loop(kMonusText);
  WhileProgram embedded = loop_to_while(monus);
  for (std::uint64_t a = 0; a <= 20; ++a) {
    for (std::uint64_t b = 0; b <= 20; ++b) {
      EvalResult direct = eval_loop(monus, {nat(a), nat(b)});
      RunOutcome via_vm = run_bounded(embedded, {nat(a), nat(b)}, 1u << 20);
      REQUIRE(via_vm.halted());
      CHECK(via_vm.output == direct.value);
      CHECK(via_vm.at_step == direct.cost.steps);
    }
  }
}
