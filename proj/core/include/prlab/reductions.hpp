#pragma once

#include <prlab/dovetail.hpp>
#include <prlab/fuel_vm.hpp>
#include <prlab/pr_algebra.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace prlab {

enum class InstanceKind { PrUnary, ParRecIndex, ParRecPair };

struct ReductionSpec {
  std::string id;
  std::string source_problem;
  std::string target_problem;
  InstanceKind kind = InstanceKind::PrUnary;
  TMode mode = TMode::AtMost;  // halting-detector convention the row relies on
  std::string notes;
};

// A partial function target given natively, with run_bounded semantics:
// evaluation either halts within the fuel or reports still-running.
struct PartialFn {
  int arity = 1;
  std::string label;
  std::function<RunOutcome(const Tuple&, std::uint64_t fuel)> run;
};

// One evaluation of a window law: the source-side property and the
// target-side property, each computed by its own route, must agree.
struct WindowCheck {
  bool holds = false;
  std::string lhs;      // source-side value, printable
  std::string rhs;      // target-side value, printable
  std::string detail;   // law instantiation, human readable
  std::string witness;  // filled when the law fails
};

struct ReductionResult {
  ReductionSpec spec;
  std::vector<FnHandle> targets;            // total targets (possibly a pair)
  std::optional<WhileProgram> parrec_target;
  std::optional<PartialFn> partial_target;
  // Monotone window translator: source window -> the largest target
  // argument the law inspects.
  std::function<std::uint64_t(std::uint64_t)> target_window;
  // Evaluates the window law at source window N (fuel budget for the
  // partial-instance rows). Exact, exhaustive over the window.
  std::function<WindowCheck(std::uint64_t)> check;
  std::string provenance;
};

// --- constructions on a unary total instance f -------------------------

ReductionResult hz_to_exactly_one_zero(const FnHandle& f);
ReductionResult no_zeros_to_exactly_one_zero(const FnHandle& f);
// k-zero generalizations of the two constructions above: k-1 (resp. k)
// pinned zeros in front of the same markers.
ReductionResult hz_to_exactly_k_zeros(const FnHandle& f, std::uint64_t k);
ReductionResult no_zeros_to_exactly_k_zeros(const FnHandle& f, std::uint64_t k);
ReductionResult hz_to_at_least_k(const FnHandle& f, std::uint64_t k);
ReductionResult hz_to_equal_next(const FnHandle& f);
ReductionResult hz_to_nonzero_function(const FnHandle& f);
ReductionResult hz_to_equal_at_one_point(const FnHandle& f);
ReductionResult zero_fn_to_cod_k(const FnHandle& f, std::uint64_t k);
ReductionResult not_zero_fn_to_cod_k(const FnHandle& f, std::uint64_t k);  // k >= 2
ReductionResult fin_zeros_to_fin_cod(const FnHandle& f);
ReductionResult hz_to_not_injective(const FnHandle& f);
ReductionResult onto_to_bijective(const FnHandle& f);
ReductionResult hz_to_zero_more(const FnHandle& f);
ReductionResult ff_z2(const FnHandle& f);
ReductionResult ff_graph(const FnHandle& f);

// n-fold composition f(f(...f(x))), n >= 1.
FnHandle iterate(const FnHandle& f, std::uint64_t n);

// --- constructions on a program index ----------------------------------

ReductionResult shp_to_has_zeros(const ProgramIndex& e);
ReductionResult fin_dom_to_fin_zeros(const ProgramIndex& e);
ReductionResult fin_dom_to_almost_all_zeros(const ProgramIndex& e);
ReductionResult not_hp_to_equivalence(const ProgramIndex& e, const Nat& x);
ReductionResult inf_dom_to_onto(const ProgramIndex& e);
ReductionResult total_to_zero_equivalence(const ProgramIndex& e);

// --- frontier constructions ---------------------------------------------

// Pre-composition: the instance is probed only on the codomain of g.
ReductionResult hp_to_hz_fg(const ProgramIndex& e, const Tuple& xbar, const FnHandle& g);
// Post-composition: needs witnesses h(a)=0, h(b)!=0; searched for when
// not supplied.
ReductionResult hz_to_hz_hf(const FnHandle& f, const FnHandle& h,
                            std::optional<std::pair<Nat, Nat>> witnesses = std::nullopt,
                            std::uint64_t search_budget = 4096);
ReductionResult hp_to_hz_hfg(const ProgramIndex& e, const Tuple& xbar, const FnHandle& g,
                             const FnHandle& h, const Nat& a, const Nat& b);

// --- partial-target gadget catalogue ------------------------------------

struct GadgetParams {
  std::optional<ProgramIndex> e;
  std::optional<ProgramIndex> e2;
};

// name in { eoz_parrec, zero_fn_parrec, cod1_shp, cod1_not_shp, cod2_shp,
//           cod2_not_shp, inj_parrec, f0_eq_0 }
ReductionResult parrec_gadget(const std::string& name, const GadgetParams& params);

// --- catalogue -----------------------------------------------------------

struct ReductionInput {
  std::optional<FnHandle> f;
  std::optional<ProgramIndex> e;
  std::optional<ProgramIndex> e2;
  Nat x;  // extra argument for rows that need one
};

struct CatalogueRow {
  ReductionSpec spec;
  std::function<ReductionResult(const ReductionInput&)> build;
};

const std::vector<CatalogueRow>& catalogue();
std::vector<std::string> catalogue_ids();
const CatalogueRow* find_row(const std::string& id);

namespace detail {
// Rebuilds a catalogue row with every total target passed through `tweak`
// before the law closures are created. Lets the regression suite check
// that a perturbed gadget is caught by the window laws.
using TargetTweak = std::function<FnHandle(const FnHandle&)>;
ReductionResult build_with_target_tweak(const std::string& id, const ReductionInput& input,
                                        const TargetTweak& tweak);
}  // namespace detail

}  // namespace prlab
