#pragma once

#include <prlab/loop_lang.hpp>
#include <prlab/nat.hpp>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace prlab {

// Cantor pairing, oriented so that pair(x, y) = (x+y)(x+y+1)/2 + y.
Nat pair_nat(const Nat& x, const Nat& y);
std::pair<Nat, Nat> unpair_nat(const Nat& z);

// Right-nested tupling: <x1, x2, ..., xn> = pair(x1, pair(x2, ...)).
// A singleton encodes as itself.
Nat tuple_encode(const Tuple& xs);
Tuple tuple_decode(const Nat& z, int n);

enum class Provenance { Loop, WhileFuelFamily, Native };

// A total function over naturals, possibly with several outputs.
// Evaluators must be pure; a handle backed by a loop program agrees with
// eval_loop everywhere.
struct FnHandle {
  int arity = 1;
  int out_arity = 1;
  std::function<Tuple(const Tuple&)> eval;
  std::shared_ptr<const LoopProgram> source;
  Provenance provenance = Provenance::Native;
  std::string label;

  Tuple operator()(const Tuple& args) const;
  // Single-output convenience forms.
  Nat at(const Nat& x) const;
  Nat at(std::uint64_t x) const;
  Nat at2(const Nat& x, const Nat& y) const;
};

FnHandle from_loop(LoopProgram p);
FnHandle native_unary(std::string label, std::function<Nat(const Nat&)> f);
FnHandle native_fn(std::string label, int arity, int out_arity,
                   std::function<Tuple(const Tuple&)> f);
FnHandle constant_fn(int arity, Nat value);
FnHandle projection_fn(int arity, int index);  // 1-based index
FnHandle identity_fn();
FnHandle successor_fn();
// Unary handle defined by an explicit value table, `beyond` elsewhere.
FnHandle table_fn(std::string label, std::vector<Nat> values,
                  std::function<Nat(const Nat&)> beyond);
// Wraps a unary handle with a memo table; the wrapped handle must be pure.
FnHandle memoized_unary(const FnHandle& f);

// outer(inner_1(xs), ..., inner_m(xs)). The inner output arities must sum
// to the outer arity and all inners must share one input arity. When every
// handle carries a loop source (single-output), a fused loop program is
// attached to the result.
FnHandle compose(const FnHandle& outer, const std::vector<FnHandle>& inners);

// g(ys) = f(fixed_prefix, ys). When f carries a loop source, the result
// carries a specialized program with the prefix inlined as inc chains.
FnHandle smn_specialize(const FnHandle& f, const Tuple& fixed_prefix);

// g(0) = 0, g(x+1) = g(x) + f(x), for unary f.
FnHandle prefix_sum(const FnHandle& f);

// FnHandle views of the base arithmetic.
FnHandle pair_fn();
FnHandle monus_fn();
FnHandle eq_indicator_fn();

}  // namespace prlab
