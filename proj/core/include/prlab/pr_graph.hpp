#pragma once

#include <prlab/pr_algebra.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace prlab {

// One equation `lhs = fn(args...)`; every arg is an input variable or a
// previously defined variable.
struct Equation {
  std::string lhs;
  std::string fn;
  std::vector<std::string> args;
};

struct EquationSystem {
  std::vector<std::string> inputs;  // in declaration order
  std::string hole_name;            // the distinguished function
  std::vector<Equation> equations;  // the last one defines the output
};

class DagError : public std::runtime_error {
 public:
  explicit DagError(const std::string& msg) : std::runtime_error(msg) {}
};

// .dag file format: `#inputs x1 x2 ...`, `#hole f`, then one equation per
// line, final line defining `y`.
EquationSystem parse_dag_file(const std::string& text);
std::string print_dag_file(const EquationSystem& sys);

// A closed term over the input variables, the hole's output, and fixed
// function applications.
struct Term {
  enum class Kind { Input, HoleOut, App };
  Kind kind = Kind::Input;
  int input = 0;  // index into input names
  std::string fn;
  std::vector<Term> args;

  static Term input_var(int i) {
    Term t;
    t.kind = Kind::Input;
    t.input = i;
    return t;
  }
  static Term hole_out() {
    Term t;
    t.kind = Kind::HoleOut;
    return t;
  }
  static Term app(std::string fn, std::vector<Term> args) {
    Term t;
    t.kind = Kind::App;
    t.fn = std::move(fn);
    t.args = std::move(args);
    return t;
  }
};

// Validated DAG view of an equation system with exactly one hole node.
struct AcyclicExpr {
  EquationSystem system;
  int hole_eq = -1;    // equation index applying the hole
  int output_eq = -1;  // last equation
  int hole_arity = 0;
  // args of each equation resolved: >= 0 input index, < 0 ~(equation index)
  std::vector<std::vector<int>> resolved;
  // consumers of each equation's variable (equation indices)
  std::vector<std::vector<int>> users;

  int n_inputs() const { return static_cast<int>(system.inputs.size()); }
};

AcyclicExpr build_dag(const EquationSystem& sys);

enum class NodeClass { InpF, OutF, Neither };

// Classification of every fixed-function node by reachability: InpF if it
// feeds an input of the hole, OutF if it is fed from the hole's output.
std::map<std::string, NodeClass> classify_nodes(const AcyclicExpr& dag);

struct NormalForm {
  std::vector<std::string> input_names;
  std::string hole_name;
  int hole_arity = 0;
  std::vector<Term> g_components;  // one per hole input port, over inputs only
  Term h_term;                     // over inputs and the hole output
};

// Rewrites the DAG into h(xs, f(g(xs))) by the three-step node-removal
// procedure: drop INP-f nodes that are not immediate predecessors of the
// hole, then OUT-f nodes, then NEITHER nodes, inlining each removed node
// into its consumers.
NormalForm normalize(const AcyclicExpr& dag);

// Fully inlined closed formula; shared subterms are duplicated.
std::string expand_expression(const AcyclicExpr& dag);

std::string print_term(const Term& t, const std::vector<std::string>& input_names);
// `g(x1,x2) = <x1,q(x1,x2)>` / `h(x1,x2,y') = ...`
std::string print_normal_form(const NormalForm& nf);

using FnRegistry = std::map<std::string, FnHandle>;

Nat eval_dag(const AcyclicExpr& dag, const FnRegistry& registry, const FnHandle& hole,
             const Tuple& args);
Nat eval_normal_form(const NormalForm& nf, const FnRegistry& registry, const FnHandle& hole,
                     const Tuple& args);

// Multifunction g and combiner h as evaluating handles.
FnHandle normal_form_g(const NormalForm& nf, const FnRegistry& registry);
FnHandle normal_form_h(const NormalForm& nf, const FnRegistry& registry);

// Scans xs in [0, window]^n in lexicographic order for the first witness of
// h(xs, hole(g(xs))) = 0.
std::optional<Tuple> existence_condition(const NormalForm& nf, const FnRegistry& registry,
                                         const FnHandle& hole, std::uint64_t window);

}  // namespace prlab
