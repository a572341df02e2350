#pragma once

#include <prlab/loop_lang.hpp>
#include <prlab/nat.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace prlab {

// A possibly-partial register program: the loop language plus
// `while xN { ... }` (repeat while the guard is nonzero).
struct WhileProgram {
  std::string name;
  int arity = 0;
  std::vector<Stmt> body;
};

inline bool operator==(const WhileProgram& a, const WhileProgram& b) {
  return a.name == b.name && a.arity == b.arity && a.body == b.body;
}

WhileProgram parse_while(const std::string& text);
std::string print_while(const WhileProgram& p);
Validation validate_while(const WhileProgram& p);

WhileProgram loop_to_while(const LoopProgram& p);
// Membership test for the (recursive) set of loop-only programs.
bool is_loop_only(const WhileProgram& p);
std::optional<LoopProgram> to_loop(const WhileProgram& p);

// Program indices: the canonical text read as a bijective base-256
// numeral, least-significant byte first, digit = byte value + 1.
// The empty string maps to 0.
struct ProgramIndex {
  Nat e;
};

ProgramIndex encode_program(const WhileProgram& p);
std::optional<WhileProgram> decode_program(const ProgramIndex& ix);
Nat bytes_to_index(const std::string& bytes);
std::string index_to_bytes(const Nat& e);

struct RunOutcome {
  enum class Status { Halted, StillRunning };
  Status status = Status::StillRunning;
  Nat output;                     // meaningful when halted
  std::uint64_t at_step = 0;      // meaningful when halted
  std::uint64_t fuel_used = 0;
  std::uint64_t state_digest = 0; // meaningful when still running

  bool halted() const { return status == Status::Halted; }
};

// Single-stepping machine. One costed step is one Clear/Copy/Inc, one
// Loop entry (the iteration count is latched there), or one While guard
// test (initial and after every body pass).
class StepMachine {
 public:
  StepMachine(std::shared_ptr<const WhileProgram> prog, Tuple args);
  StepMachine(const WhileProgram& prog, Tuple args);

  // Executes one costed step; returns false if the machine had already halted.
  bool step();
  bool halted() const { return halted_; }
  std::uint64_t steps_done() const { return steps_; }
  const Nat& output() const { return regs_[0]; }
  std::uint64_t state_digest() const;

 private:
  struct Frame {
    enum class Kind { Seq, LoopCtl, WhileCtl };
    Kind kind;
    const std::vector<Stmt>* seq = nullptr;  // Seq
    std::size_t pos = 0;                     // Seq
    const Stmt* stmt = nullptr;              // LoopCtl / WhileCtl
    Nat remaining;                           // LoopCtl
  };

  void settle();
  Nat& reg(int r);

  std::shared_ptr<const WhileProgram> prog_;
  Tuple regs_;
  std::vector<Frame> control_;
  std::uint64_t steps_ = 0;
  bool halted_ = false;
};

// Simulates exactly min(fuel, halting time) steps. An index that does not
// decode, or an argument count that does not match the decoded arity,
// behaves as a diverging program.
RunOutcome run_bounded(const WhileProgram& p, const Tuple& args, std::uint64_t fuel);
RunOutcome run_bounded(const ProgramIndex& ix, const Tuple& args, std::uint64_t fuel);

enum class TMode { AtMost, Exactly };

// Step-bounded halting detector: 0 iff the computation halted (within
// <= t steps, or at exactly step t, per mode), 1 otherwise. Total.
int t_predicate(const ProgramIndex& ix, const Tuple& x, std::uint64_t t, TMode mode);
int t_predicate(const WhileProgram& p, const Tuple& x, std::uint64_t t, TMode mode);

// Output extractor: the result if the computation halted within t steps, 0 otherwise.
Nat u_extract(const ProgramIndex& ix, const Tuple& x, std::uint64_t t);
Nat u_extract(const WhileProgram& p, const Tuple& x, std::uint64_t t);

// Resumable simulation of one computation; queries advance it monotonically
// and never repeat work. Backs the step-bounded detectors used by the
// reduction targets, where one computation is probed at many fuel values.
class HaltWatcher {
 public:
  HaltWatcher();  // the never-halting watcher
  HaltWatcher(std::shared_ptr<const WhileProgram> prog, Tuple args);
  HaltWatcher(const WhileProgram& prog, Tuple args);
  HaltWatcher(const ProgramIndex& ix, Tuple args);

  bool halted_by(std::uint64_t t);
  bool halted_exactly_at(std::uint64_t t);
  // Least halting step if it is <= cap.
  std::optional<std::uint64_t> halting_step(std::uint64_t cap);
  Nat output_if_halted_by(std::uint64_t t);  // 0 when not halted

 private:
  void advance_to(std::uint64_t t);
  std::optional<StepMachine> machine_;  // empty = diverges by fiat
};

}  // namespace prlab
