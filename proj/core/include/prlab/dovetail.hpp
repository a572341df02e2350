#pragma once

#include <prlab/fuel_vm.hpp>
#include <prlab/pr_algebra.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace prlab {

struct SchedulePoint {
  std::uint64_t machine;       // 1-based
  std::uint64_t machine_step;  // 1-based
};

// The triangular interleaving schedule: global steps 1,2,3,4,5,6,...
// visit (machine, machine step) (1,1),(1,2),(2,1),(1,3),(2,2),(3,1),...
SchedulePoint dovetail_schedule(std::uint64_t global_step);

struct SearchBudget {
  std::uint64_t max_global_steps = 0;
  std::optional<std::uint64_t> per_machine_cap;
};

struct SearchOutcome {
  bool found = false;
  Tuple witness;                 // [x] for haszeros, [a, b] for zeromore
  std::uint64_t global_step = 0; // when found
  SearchBudget budget;

  bool exhausted() const { return !found; }
};

// Scans x = 0, 1, 2, ... for the least zero of a unary total f.
SearchOutcome semidecide_haszeros(const FnHandle& f, const SearchBudget& budget);

// Scans for a pair (a, b) with h(a) = 0 and h(b) != 0 in a single pass.
SearchOutcome semidecide_zeromore(const FnHandle& h, const SearchBudget& budget);

struct HaltEmission {
  std::uint64_t machine;       // 1-based position in the input list
  std::uint64_t machine_step;  // halting step of that machine
  std::uint64_t global_step;   // schedule position of the halting step
  Nat output;
};

// Runs the triangular schedule over the given programs on fixed arguments,
// emitting each halting machine's output in schedule order.
std::vector<HaltEmission> semidecide_halt_family(const std::vector<ProgramIndex>& indices,
                                                 const Tuple& args,
                                                 const SearchBudget& budget);

enum class Decision { Yes, No, Undecided };

// Decision procedure for "does f have a zero on the (finite) codomain of g",
// given that codomain as an explicit listing.
Decision decide_hz_fg_finite(const FnHandle& f, const std::vector<Nat>& cod_listing);

enum class HClass { AlwaysZeroOnRange, NeverZeroOnRange, Mixed };

// Constant-answer branches of the post-composition problem. The caller
// supplies the classification; producing it is itself undecidable, which is
// why this function does not try.
Decision decide_hz_hf_trivial(HClass h_class);

// Exhaustive property evaluators over [0, N]; these back every window law
// in the reduction catalogue.
std::uint64_t count_zeros(const FnHandle& f, std::uint64_t n);
bool has_zero_within(const FnHandle& f, std::uint64_t n);
bool exactly_k_zeros(const FnHandle& f, std::uint64_t n, std::uint64_t k);
bool injective_within(const FnHandle& f, std::uint64_t n);
std::set<Nat> codomain_within(const FnHandle& f, std::uint64_t n);
bool equal_next_within(const FnHandle& f, std::uint64_t n);  // some f(x)=f(x+1), x<=n
bool equivalent_within(const FnHandle& f, const FnHandle& g, std::uint64_t n);
// Image of [0, n] is exactly the initial segment [0, f(n)].
bool onto_initial_segment(const FnHandle& f, std::uint64_t n);

}  // namespace prlab
