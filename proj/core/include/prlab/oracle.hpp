#pragma once

#include <prlab/reductions.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace prlab {

enum class CorpusKind { ZeroPattern, RandomLoop, WhileDelay, WhileDiverger };

std::string corpus_kind_name(CorpusKind k);
std::optional<CorpusKind> corpus_kind_from_name(const std::string& name);

// One generated instance together with the facts planted at generation
// time. Facts are re-verified by direct evaluation before the case is
// accepted; generation fails loudly if a plant does not hold.
struct CorpusCase {
  CorpusKind kind = CorpusKind::ZeroPattern;
  std::uint64_t seed = 0;  // case-level seed; (suite seed, kind, position) derived
  std::optional<LoopProgram> loop_instance;
  std::optional<WhileProgram> while_instance;

  // planted facts
  std::vector<std::uint64_t> zero_positions;     // unary cases, within the window
  std::vector<Nat> window_codomain;              // unary cases
  std::optional<std::uint64_t> halting_step;     // program cases, probed at 0
  Nat halting_output;

  std::string digest;
  FnHandle handle;        // unary cases: memoized evaluator over the instance
  ProgramIndex index;     // program cases
  ProgramIndex partner;   // second instance for pair rows
};

struct CorpusSpec {
  CorpusKind kind = CorpusKind::ZeroPattern;
  int count = 1;
  std::uint64_t seed = 0;
  std::uint64_t window = 64;
  std::optional<std::vector<std::uint64_t>> pattern;  // fixed zero set, zero_pattern only
  int depth_cap = 3;                                  // random_loop
  std::uint64_t delay_min = 3;                        // while_delay halting-time range
  std::uint64_t delay_max = 4000;
};

std::vector<CorpusCase> gen_corpus(const CorpusSpec& spec);

struct Failure {
  std::string id;
  std::string instance_digest;
  std::string witness;
  std::uint64_t case_seed = 0;
};

struct Verdict {
  std::string id;
  int cases_run = 0;
  std::uint64_t window = 0;
  std::vector<Failure> failures;
  bool pass() const { return failures.empty(); }
};

struct SuiteConfig {
  std::uint64_t seed = 7;
  std::uint64_t window = 64;    // unary-instance laws
  std::uint64_t fuel = 20000;   // program-instance laws
  int pr_cases = 200;
  int parrec_cases = 200;
  int jobs = 1;
};

// Checks one catalogue row's window law on one case. The case kind must
// match the row's instance kind.
Verdict brute_check_reduction(const std::string& id, const CorpusCase& c, std::uint64_t window);

bool case_matches_row(const CorpusCase& c, InstanceKind kind);
ReductionInput input_for_case(const CorpusCase& c);

std::vector<Verdict> run_suite(const std::vector<std::string>& ids, const SuiteConfig& cfg);

// Reruns one row over its corpus with every total target perturbed by
// `tweak`, stopping at the first failure. Regression harness for the
// mutation-sensitivity requirement.
Verdict run_row_with_tweak(const std::string& id, const detail::TargetTweak& tweak,
                           const SuiteConfig& cfg);

// {suite, seed, window, cases, failures: [{id, instance_digest, witness}]}
std::string report_json(const std::string& suite_name, const SuiteConfig& cfg,
                        const std::vector<Verdict>& verdicts);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace prlab
