#pragma once

#include <prlab/nat.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace prlab {

// Statement forms shared by the Loop language and its While extension.
// `var` is the written register (or the guard register for Loop/While),
// `src` is the source register of a copy.
enum class StmtKind { Clear, Copy, Inc, Loop, While };

struct Stmt {
  StmtKind kind = StmtKind::Clear;
  int var = 0;
  int src = 0;
  std::vector<Stmt> body;  // Loop / While only

  static Stmt clear(int v) { return {StmtKind::Clear, v, 0, {}}; }
  static Stmt copy(int dst, int src) { return {StmtKind::Copy, dst, src, {}}; }
  static Stmt inc(int v) { return {StmtKind::Inc, v, 0, {}}; }
  static Stmt loop(int v, std::vector<Stmt> b) {
    return {StmtKind::Loop, v, 0, std::move(b)};
  }
  static Stmt while_(int v, std::vector<Stmt> b) {
    return {StmtKind::While, v, 0, std::move(b)};
  }
};

bool operator==(const Stmt& a, const Stmt& b);

// A total register program: inputs in x1..xk, output in x0, every other
// register starts at 0. The body never contains a While statement.
struct LoopProgram {
  std::string name;
  int arity = 0;
  std::vector<Stmt> body;
};

inline bool operator==(const LoopProgram& a, const LoopProgram& b) {
  return a.name == b.name && a.arity == b.arity && a.body == b.body;
}

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, int line, int col)
      : std::runtime_error(msg + " at line " + std::to_string(line) +
                           ", column " + std::to_string(col)),
        line(line),
        col(col) {}
  int line;
  int col;
};

struct StepCount {
  std::uint64_t steps = 0;
};

struct EvalResult {
  Nat value;
  StepCount cost;
};

LoopProgram parse_loop(const std::string& text);
std::string print_loop(const LoopProgram& p);

struct Validation {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
};

Validation validate_loop(const LoopProgram& p);

// Runs the program on |args| == arity inputs. Always terminates.
// Cost model: one step per Clear/Copy/Inc, one per Loop entry.
EvalResult eval_loop(const LoopProgram& p, const Tuple& args);

// Largest register index mentioned anywhere in the body (-1 if none).
int max_register(const std::vector<Stmt>& body);

namespace detail {
struct ParsedProgram {
  std::string name;
  int arity = 0;
  std::vector<Stmt> body;
};
ParsedProgram parse_program_text(const std::string& text, bool allow_while);
std::string print_program_text(const std::string& name, int arity,
                               const std::vector<Stmt>& body);
bool contains_while(const std::vector<Stmt>& body);
// Returns the body with every register index shifted by `offset`.
std::vector<Stmt> shift_registers(const std::vector<Stmt>& body, int offset);
}  // namespace detail

}  // namespace prlab
