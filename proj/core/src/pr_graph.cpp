#include <prlab/pr_graph.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

namespace prlab {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

struct LineParser {
  const std::string& s;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip_ws();
    if (i >= s.size() || !is_ident_start(s[i])) {
      throw DagError("expected identifier in '" + s + "'");
    }
    std::size_t start = i;
    while (i < s.size() && is_ident_char(s[i])) ++i;
    return s.substr(start, i - start);
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
};

// Internal rewriting term: like Term but with references to still-live
// equation nodes.
struct RTerm {
  enum class Kind { Input, HoleOut, NodeRef, App };
  Kind kind = Kind::Input;
  int idx = 0;  // input index or equation index
  std::string fn;
  std::vector<RTerm> args;
};

void substitute(RTerm& t, int node, const RTerm& replacement) {
  if (t.kind == RTerm::Kind::NodeRef && t.idx == node) {
    t = replacement;
    return;
  }
  for (RTerm& a : t.args) substitute(a, node, replacement);
}

Term freeze(const RTerm& t, const std::vector<RTerm>& defs) {
  switch (t.kind) {
    case RTerm::Kind::Input:
      return Term::input_var(t.idx);
    case RTerm::Kind::HoleOut:
      return Term::hole_out();
    case RTerm::Kind::NodeRef:
      return freeze(defs[t.idx], defs);
    case RTerm::Kind::App: {
      std::vector<Term> args;
      args.reserve(t.args.size());
      for (const RTerm& a : t.args) args.push_back(freeze(a, defs));
      return Term::app(t.fn, std::move(args));
    }
  }
  throw DagError("unreachable term kind");
}

Nat eval_term(const Term& t, const FnRegistry& registry, const Tuple& inputs,
              const Nat* hole_out) {
  switch (t.kind) {
    case Term::Kind::Input:
      return inputs[t.input];
    case Term::Kind::HoleOut:
      if (!hole_out) throw DagError("hole output used outside the combiner");
      return *hole_out;
    case Term::Kind::App: {
      auto it = registry.find(t.fn);
      if (it == registry.end()) throw DagError("unknown function name '" + t.fn + "'");
      const FnHandle& f = it->second;
      if (f.out_arity != 1) throw DagError("fixed function '" + t.fn + "' must be single-output");
      Tuple args;
      args.reserve(t.args.size());
      for (const Term& a : t.args) args.push_back(eval_term(a, registry, inputs, hole_out));
      return f(args)[0];
    }
  }
  throw DagError("unreachable term kind");
}

}  // namespace

EquationSystem parse_dag_file(const std::string& text) {
  EquationSystem sys;
  std::istringstream in(text);
  std::string line;
  bool saw_hole = false;
  while (std::getline(in, line)) {
    std::string trimmed = line;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) {
      trimmed.pop_back();
    }
    std::size_t first = trimmed.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    trimmed = trimmed.substr(first);
    if (trimmed[0] == '#') {
      std::vector<std::string> words = split_ws(trimmed);
      if (words[0] == "#inputs") {
        sys.inputs.assign(words.begin() + 1, words.end());
      } else if (words[0] == "#hole") {
        if (words.size() != 2) throw DagError("#hole expects one name");
        sys.hole_name = words[1];
        saw_hole = true;
      } else {
        throw DagError("unknown directive '" + words[0] + "'");
      }
      continue;
    }
    LineParser lp{trimmed};
    Equation eq;
    eq.lhs = lp.ident();
    if (!lp.eat('=')) throw DagError("expected '=' in '" + trimmed + "'");
    eq.fn = lp.ident();
    if (!lp.eat('(')) throw DagError("expected '(' in '" + trimmed + "'");
    if (!lp.eat(')')) {
      for (;;) {
        eq.args.push_back(lp.ident());
        if (lp.eat(')')) break;
        if (!lp.eat(',')) throw DagError("expected ',' or ')' in '" + trimmed + "'");
      }
    }
    if (!lp.done()) throw DagError("trailing characters in '" + trimmed + "'");
    sys.equations.push_back(std::move(eq));
  }
  if (!saw_hole) throw DagError("missing #hole directive");
  if (sys.equations.empty()) throw DagError("no equations");
  if (sys.equations.back().lhs != "y") {
    throw DagError("the final equation must define y");
  }
  return sys;
}

std::string print_dag_file(const EquationSystem& sys) {
  std::ostringstream out;
  out << "#inputs";
  for (const std::string& x : sys.inputs) out << ' ' << x;
  out << "\n#hole " << sys.hole_name << '\n';
  for (const Equation& eq : sys.equations) {
    out << eq.lhs << " = " << eq.fn << '(';
    for (std::size_t i = 0; i < eq.args.size(); ++i) {
      if (i) out << ", ";
      out << eq.args[i];
    }
    out << ")\n";
  }
  return out.str();
}

AcyclicExpr build_dag(const EquationSystem& sys) {
  if (sys.equations.empty()) throw DagError("no equations");
  if (sys.hole_name.empty()) throw DagError("no hole named");
  AcyclicExpr dag;
  dag.system = sys;
  std::map<std::string, int> input_index;
  for (int i = 0; i < static_cast<int>(sys.inputs.size()); ++i) {
    if (!input_index.emplace(sys.inputs[i], i).second) {
      throw DagError("duplicate input '" + sys.inputs[i] + "'");
    }
  }
  std::map<std::string, int> defined;  // variable -> equation index
  dag.resolved.resize(sys.equations.size());
  dag.users.resize(sys.equations.size());
  for (int i = 0; i < static_cast<int>(sys.equations.size()); ++i) {
    const Equation& eq = sys.equations[i];
    if (input_index.count(eq.lhs)) {
      throw DagError("'" + eq.lhs + "' redefines an input variable");
    }
    if (defined.count(eq.lhs)) {
      throw DagError("'" + eq.lhs + "' is defined twice");
    }
    for (const std::string& a : eq.args) {
      auto ii = input_index.find(a);
      if (ii != input_index.end()) {
        dag.resolved[i].push_back(ii->second);
        continue;
      }
      auto di = defined.find(a);
      if (di == defined.end()) {
        if (a == eq.lhs) throw DagError("cyclic reference through '" + a + "'");
        throw DagError("unknown variable '" + a + "' in the definition of '" + eq.lhs + "'");
      }
      dag.resolved[i].push_back(~di->second);
      dag.users[di->second].push_back(i);
    }
    if (eq.fn == sys.hole_name) {
      if (dag.hole_eq >= 0) {
        throw DagError("the hole '" + sys.hole_name + "' occurs more than once");
      }
      dag.hole_eq = i;
      dag.hole_arity = static_cast<int>(eq.args.size());
    }
    defined.emplace(eq.lhs, i);
  }
  if (dag.hole_eq < 0) throw DagError("the hole '" + sys.hole_name + "' does not occur");
  dag.output_eq = static_cast<int>(sys.equations.size()) - 1;
  for (int i = 0; i < static_cast<int>(sys.equations.size()); ++i) {
    if (i != dag.output_eq && dag.users[i].empty()) {
      throw DagError("the output of '" + sys.equations[i].lhs + "' is never used");
    }
  }
  return dag;
}

std::map<std::string, NodeClass> classify_nodes(const AcyclicExpr& dag) {
  int n = static_cast<int>(dag.system.equations.size());
  // feeds_hole: the node's output can reach an input of the hole.
  std::vector<bool> feeds_hole(n, false), from_hole(n, false);
  for (int i = n - 1; i >= 0; --i) {
    bool feeds = false;
    for (int u : dag.users[i]) {
      if (u == dag.hole_eq || (u != dag.hole_eq && feeds_hole[u])) feeds = true;
    }
    feeds_hole[i] = feeds;
  }
  for (int i = 0; i < n; ++i) {
    if (i == dag.hole_eq) continue;
    for (int r : dag.resolved[i]) {
      if (r < 0) {
        int src = ~r;
        if (src == dag.hole_eq || from_hole[src]) from_hole[i] = true;
      }
    }
  }
  std::map<std::string, NodeClass> out;
  for (int i = 0; i < n; ++i) {
    if (i == dag.hole_eq) continue;
    NodeClass c = NodeClass::Neither;
    if (feeds_hole[i]) c = NodeClass::InpF;
    else if (from_hole[i]) c = NodeClass::OutF;
    out.emplace(dag.system.equations[i].lhs, c);
  }
  return out;
}

NormalForm normalize(const AcyclicExpr& dag) {
  int n = static_cast<int>(dag.system.equations.size());
  std::vector<RTerm> defs(n);
  for (int i = 0; i < n; ++i) {
    RTerm t;
    t.kind = RTerm::Kind::App;
    t.fn = dag.system.equations[i].fn;
    for (int r : dag.resolved[i]) {
      RTerm a;
      if (r >= 0) {
        a.kind = RTerm::Kind::Input;
        a.idx = r;
      } else if (~r == dag.hole_eq) {
        a.kind = RTerm::Kind::HoleOut;
      } else {
        a.kind = RTerm::Kind::NodeRef;
        a.idx = ~r;
      }
      t.args.push_back(std::move(a));
    }
    defs[i] = std::move(t);
  }

  // Reachability classification, as in classify_nodes but by index.
  std::vector<bool> feeds_hole(n, false), from_hole(n, false);
  for (int i = n - 1; i >= 0; --i) {
    for (int u : dag.users[i]) {
      if (u == dag.hole_eq || feeds_hole[u]) feeds_hole[i] = true;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (i == dag.hole_eq) continue;
    for (int r : dag.resolved[i]) {
      if (r < 0 && (~r == dag.hole_eq || from_hole[~r])) from_hole[i] = true;
    }
  }
  std::vector<bool> immediate_pred(n, false);
  for (int r : dag.resolved[dag.hole_eq]) {
    if (r < 0) immediate_pred[~r] = true;
  }

  std::vector<bool> live(n, true);
  auto inline_node = [&](int u) {
    for (int i = 0; i < n; ++i) {
      if (!live[i] || i == u) continue;
      substitute(defs[i], u, defs[u]);
    }
    live[u] = false;
  };
  // Step 1: INP-f nodes that are not immediate predecessors of the hole.
  for (int i = 0; i < n; ++i) {
    if (live[i] && i != dag.hole_eq && feeds_hole[i] && !immediate_pred[i]) inline_node(i);
  }
  // Step 2: OUT-f nodes (the output equation itself is rewritten in place).
  for (int i = 0; i < n; ++i) {
    if (live[i] && i != dag.hole_eq && i != dag.output_eq && !feeds_hole[i] && from_hole[i]) {
      inline_node(i);
    }
  }
  // Step 3: NEITHER nodes.
  for (int i = 0; i < n; ++i) {
    if (live[i] && i != dag.hole_eq && i != dag.output_eq && !feeds_hole[i] && !from_hole[i]) {
      inline_node(i);
    }
  }

  NormalForm nf;
  nf.input_names = dag.system.inputs;
  nf.hole_name = dag.system.hole_name;
  nf.hole_arity = dag.hole_arity;
  for (const RTerm& a : defs[dag.hole_eq].args) {
    nf.g_components.push_back(freeze(a, defs));
  }
  if (dag.output_eq == dag.hole_eq) {
    nf.h_term = Term::hole_out();
  } else {
    nf.h_term = freeze(defs[dag.output_eq], defs);
  }
  return nf;
}

std::string expand_expression(const AcyclicExpr& dag) {
  int n = static_cast<int>(dag.system.equations.size());
  std::vector<RTerm> defs(n);
  for (int i = 0; i < n; ++i) {
    RTerm t;
    t.kind = RTerm::Kind::App;
    t.fn = dag.system.equations[i].fn;
    for (int r : dag.resolved[i]) {
      RTerm a;
      if (r >= 0) {
        a.kind = RTerm::Kind::Input;
        a.idx = r;
      } else {
        a.kind = RTerm::Kind::NodeRef;
        a.idx = ~r;
      }
      t.args.push_back(std::move(a));
    }
    defs[i] = std::move(t);
  }
  Term full = freeze(defs[dag.output_eq], defs);
  return print_term(full, dag.system.inputs);
}

std::string print_term(const Term& t, const std::vector<std::string>& input_names) {
  switch (t.kind) {
    case Term::Kind::Input:
      return input_names[t.input];
    case Term::Kind::HoleOut:
      return "y'";
    case Term::Kind::App: {
      std::string out = t.fn + "(";
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ",";
        out += print_term(t.args[i], input_names);
      }
      return out + ")";
    }
  }
  return "?";
}

std::string print_normal_form(const NormalForm& nf) {
  std::ostringstream out;
  auto join_inputs = [&nf]() {
    std::string s;
    for (std::size_t i = 0; i < nf.input_names.size(); ++i) {
      if (i) s += ",";
      s += nf.input_names[i];
    }
    return s;
  };
  out << "g(" << join_inputs() << ") = ";
  if (nf.g_components.size() == 1) {
    out << print_term(nf.g_components[0], nf.input_names);
  } else {
    out << '<';
    for (std::size_t i = 0; i < nf.g_components.size(); ++i) {
      if (i) out << ',';
      out << print_term(nf.g_components[i], nf.input_names);
    }
    out << '>';
  }
  out << '\n';
  out << "h(" << join_inputs() << ",y') = " << print_term(nf.h_term, nf.input_names) << '\n';
  return out.str();
}

Nat eval_dag(const AcyclicExpr& dag, const FnRegistry& registry, const FnHandle& hole,
             const Tuple& args) {
  if (static_cast<int>(args.size()) != dag.n_inputs()) {
    throw DagError("eval_dag: wrong number of inputs");
  }
  if (hole.arity != dag.hole_arity) {
    throw DagError("eval_dag: hole arity mismatch");
  }
  int n = static_cast<int>(dag.system.equations.size());
  Tuple values(n);
  for (int i = 0; i < n; ++i) {
    Tuple call_args;
    for (int r : dag.resolved[i]) {
      call_args.push_back(r >= 0 ? args[r] : values[~r]);
    }
    if (i == dag.hole_eq) {
      values[i] = hole(call_args)[0];
      continue;
    }
    auto it = registry.find(dag.system.equations[i].fn);
    if (it == registry.end()) {
      throw DagError("unknown function name '" + dag.system.equations[i].fn + "'");
    }
    if (it->second.out_arity != 1) {
      throw DagError("fixed function '" + dag.system.equations[i].fn + "' must be single-output");
    }
    values[i] = it->second(call_args)[0];
  }
  return values[dag.output_eq];
}

Nat eval_normal_form(const NormalForm& nf, const FnRegistry& registry, const FnHandle& hole,
                     const Tuple& args) {
  if (hole.arity != nf.hole_arity) throw DagError("eval_normal_form: hole arity mismatch");
  Tuple hole_args;
  hole_args.reserve(nf.g_components.size());
  for (const Term& t : nf.g_components) {
    hole_args.push_back(eval_term(t, registry, args, nullptr));
  }
  Nat y_prime = hole(hole_args)[0];
  return eval_term(nf.h_term, registry, args, &y_prime);
}

FnHandle normal_form_g(const NormalForm& nf, const FnRegistry& registry) {
  FnHandle h;
  h.arity = static_cast<int>(nf.input_names.size());
  h.out_arity = nf.hole_arity;
  h.label = "g";
  h.eval = [nf, registry](const Tuple& args) {
    Tuple out;
    out.reserve(nf.g_components.size());
    for (const Term& t : nf.g_components) out.push_back(eval_term(t, registry, args, nullptr));
    return out;
  };
  return h;
}

FnHandle normal_form_h(const NormalForm& nf, const FnRegistry& registry) {
  FnHandle h;
  h.arity = static_cast<int>(nf.input_names.size()) + 1;
  h.out_arity = 1;
  h.label = "h";
  h.eval = [nf, registry](const Tuple& args) {
    Tuple inputs(args.begin(), args.end() - 1);
    Nat y_prime = args.back();
    return Tuple{eval_term(nf.h_term, registry, inputs, &y_prime)};
  };
  return h;
}

std::optional<Tuple> existence_condition(const NormalForm& nf, const FnRegistry& registry,
                                         const FnHandle& hole, std::uint64_t window) {
  int n = static_cast<int>(nf.input_names.size());
  Tuple xs(n, Nat(0));
  for (;;) {
    if (eval_normal_form(nf, registry, hole, xs) == 0) return xs;
    // lexicographic successor with x1 most significant
    int i = n - 1;
    while (i >= 0 && xs[i] == window) {
      xs[i] = 0;
      --i;
    }
    if (i < 0) return std::nullopt;
    ++xs[i];
  }
}

}  // namespace prlab
