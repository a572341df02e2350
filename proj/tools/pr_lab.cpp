// pr-lab: command line workbench for loop/while programs, the reduction
// catalogue, acyclic expression normalization, and the verification suite.

#include <prlab/dovetail.hpp>
#include <prlab/fuel_vm.hpp>
#include <prlab/loop_lang.hpp>
#include <prlab/oracle.hpp>
#include <prlab/pr_graph.hpp>
#include <prlab/reductions.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using json = nlohmann::json;
using namespace prlab;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitExhausted = 2;
constexpr int kExitVerifyFail = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << text;
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

WhileProgram load_program(const std::string& path) {
  std::string text = read_file(path);
  if (has_suffix(path, ".loop")) return loop_to_while(parse_loop(text));
  return parse_while(text);
}

FnHandle load_unary_handle(const std::string& path) {
  std::string text = read_file(path);
  LoopProgram p = has_suffix(path, ".loop") ? parse_loop(text) : [&] {
    WhileProgram w = parse_while(text);
    auto lp = to_loop(w);
    if (!lp) {
      throw std::runtime_error("'" + path + "' contains while statements; a total instance is required");
    }
    return *lp;
  }();
  if (p.arity != 1) {
    throw std::runtime_error("'" + path + "' must be unary (arity 1) here");
  }
  return memoized_unary(from_loop(p));
}

FnRegistry load_registry(const std::vector<std::string>& paths) {
  FnRegistry reg;
  for (const std::string& p : paths) {
    LoopProgram lp = parse_loop(read_file(p));
    reg.emplace(lp.name, from_loop(lp));
  }
  return reg;
}

int cmd_parse(const std::string& in, bool as_json, const std::string& out) {
  std::string text = read_file(in);
  WhileProgram p = has_suffix(in, ".loop") ? loop_to_while(parse_loop(text)) : parse_while(text);
  Validation v = validate_while(p);
  if (as_json) {
    json j;
    j["name"] = p.name;
    j["arity"] = p.arity;
    j["loop_only"] = is_loop_only(p);
    j["canonical"] = print_while(p);
    j["violations"] = v.violations;
    j["warnings"] = v.warnings;
    emit(j.dump(2), out);
  } else {
    emit(print_while(p), out);
    for (const std::string& w : v.warnings) std::cerr << "warning: " << w << '\n';
    for (const std::string& e : v.violations) std::cerr << "violation: " << e << '\n';
  }
  return v.ok() ? kExitOk : kExitUsage;
}

int cmd_run(const std::string& in, const std::vector<std::uint64_t>& args,
            std::uint64_t budget, bool as_json, const std::string& out) {
  WhileProgram p = load_program(in);
  Tuple t;
  for (auto a : args) t.push_back(nat(a));
  if (is_loop_only(p)) {
    EvalResult r = eval_loop(*to_loop(p), t);
    if (as_json) {
      json j{{"status", "halted"}, {"value", r.value.get_str()}, {"steps", r.cost.steps}};
      emit(j.dump(2), out);
    } else {
      emit(r.value.get_str(), out);
    }
    return kExitOk;
  }
  RunOutcome r = run_bounded(p, t, budget);
  if (as_json) {
    json j;
    j["status"] = r.halted() ? "halted" : "still_running";
    j["fuel_used"] = r.fuel_used;
    if (r.halted()) {
      j["value"] = r.output.get_str();
      j["steps"] = r.at_step;
    }
    emit(j.dump(2), out);
  } else if (r.halted()) {
    emit(r.output.get_str(), out);
  } else {
    std::cerr << "still running after " << budget << " steps\n";
  }
  return r.halted() ? kExitOk : kExitExhausted;
}

int cmd_encode(const std::string& in, bool as_json, const std::string& out) {
  WhileProgram p = load_program(in);
  ProgramIndex ix = encode_program(p);
  if (as_json) {
    json j{{"name", p.name}, {"index", ix.e.get_str()}};
    emit(j.dump(2), out);
  } else {
    emit(ix.e.get_str(), out);
  }
  return kExitOk;
}

int cmd_reduce(const std::string& id, const std::string& in, std::uint64_t window,
               std::uint64_t budget, bool as_json, const std::string& out) {
  const CatalogueRow* row = find_row(id);
  if (!row) throw std::runtime_error("unknown reduction id '" + id + "'");
  ReductionInput input;
  if (row->spec.kind == InstanceKind::PrUnary) {
    input.f = load_unary_handle(in);
  } else {
    WhileProgram p = load_program(in);
    input.e = encode_program(p);
    input.e2 = input.e;
  }
  ReductionResult res = row->build(input);
  std::uint64_t w = row->spec.kind == InstanceKind::PrUnary ? window : budget;
  WindowCheck chk = res.check(w);
  if (as_json) {
    json j;
    j["id"] = res.spec.id;
    j["source_problem"] = res.spec.source_problem;
    j["target_problem"] = res.spec.target_problem;
    j["notes"] = res.spec.notes;
    j["window"] = w;
    j["target_window"] = res.target_window(w);
    j["law"] = {{"detail", chk.detail}, {"lhs", chk.lhs}, {"rhs", chk.rhs},
                {"holds", chk.holds}, {"witness", chk.witness}};
    if (res.parrec_target) j["target_program"] = print_while(*res.parrec_target);
    emit(j.dump(2), out);
  } else {
    std::ostringstream os;
    os << res.spec.id << ": " << res.spec.source_problem << " -> " << res.spec.target_problem
       << '\n'
       << "law: " << chk.detail << '\n'
       << "window " << w << " (target window " << res.target_window(w) << ")\n"
       << "lhs = " << chk.lhs << ", rhs = " << chk.rhs << " => "
       << (chk.holds ? "HOLDS" : "VIOLATED") << '\n';
    if (!chk.holds) os << "witness: " << chk.witness << '\n';
    emit(os.str(), out);
  }
  return chk.holds ? kExitOk : kExitVerifyFail;
}

int cmd_normalize(const std::string& in, const std::vector<std::string>& fns, bool as_json,
                  const std::string& out) {
  FnRegistry reg = load_registry(fns);
  AcyclicExpr dag = build_dag(parse_dag_file(read_file(in)));
  NormalForm nf = normalize(dag);
  if (as_json) {
    json j;
    j["hole"] = nf.hole_name;
    j["hole_arity"] = nf.hole_arity;
    json comps = json::array();
    for (const Term& t : nf.g_components) comps.push_back(print_term(t, nf.input_names));
    j["g"] = comps;
    j["h"] = print_term(nf.h_term, nf.input_names);
    emit(j.dump(2), out);
  } else {
    emit(print_normal_form(nf), out);
  }
  return kExitOk;
}

int cmd_expand(const std::string& in, bool as_json, const std::string& out) {
  AcyclicExpr dag = build_dag(parse_dag_file(read_file(in)));
  std::string formula = expand_expression(dag);
  if (as_json) {
    emit(json{{"formula", formula}}.dump(2), out);
  } else {
    emit(formula, out);
  }
  return kExitOk;
}

int cmd_classify(const std::string& in, bool as_json, const std::string& out) {
  AcyclicExpr dag = build_dag(parse_dag_file(read_file(in)));
  auto classes = classify_nodes(dag);
  auto name = [](NodeClass c) {
    switch (c) {
      case NodeClass::InpF: return "INP-f";
      case NodeClass::OutF: return "OUT-f";
      case NodeClass::Neither: return "NEITHER";
    }
    return "?";
  };
  if (as_json) {
    json j;
    for (const auto& [node, c] : classes) j[node] = name(c);
    emit(j.dump(2), out);
  } else {
    std::ostringstream os;
    for (const Equation& eq : dag.system.equations) {
      auto it = classes.find(eq.lhs);
      if (it == classes.end()) continue;  // the hole
      os << eq.lhs << " = " << eq.fn << "(...): " << name(it->second) << '\n';
    }
    emit(os.str(), out);
  }
  return kExitOk;
}

int cmd_search(const std::string& what, const std::string& in, std::uint64_t budget,
               bool as_json, const std::string& out) {
  FnHandle f = load_unary_handle(in);
  SearchBudget sb{budget, std::nullopt};
  SearchOutcome r;
  if (what == "haszeros") {
    r = semidecide_haszeros(f, sb);
  } else if (what == "zeromore") {
    r = semidecide_zeromore(f, sb);
  } else {
    throw std::runtime_error("unknown search kind '" + what + "' (haszeros | zeromore)");
  }
  if (as_json) {
    json j;
    j["found"] = r.found;
    j["budget"] = budget;
    if (r.found) {
      json w = json::array();
      for (const Nat& v : r.witness) w.push_back(v.get_str());
      j["witness"] = w;
      j["global_step"] = r.global_step;
    }
    emit(j.dump(2), out);
  } else if (r.found) {
    std::ostringstream os;
    for (std::size_t i = 0; i < r.witness.size(); ++i) {
      if (i) os << ' ';
      os << r.witness[i].get_str();
    }
    emit(os.str(), out);
  } else {
    std::cerr << "exhausted budget " << budget << '\n';
  }
  return r.found ? kExitOk : kExitExhausted;
}

int cmd_verify(const std::string& suite, const std::string& only_id, std::uint64_t seed,
               std::uint64_t window, std::uint64_t budget, int jobs, bool as_json,
               const std::string& out) {
  if (suite != "default") throw std::runtime_error("unknown suite '" + suite + "'");
  SuiteConfig cfg;
  cfg.seed = seed;
  cfg.window = window;
  cfg.fuel = budget;
  cfg.jobs = jobs;
  std::vector<std::string> ids = only_id.empty() ? catalogue_ids()
                                                 : std::vector<std::string>{only_id};
  std::vector<Verdict> verdicts = run_suite(ids, cfg);
  bool all_pass = true;
  std::ostringstream lines;
  for (const Verdict& v : verdicts) {
    all_pass = all_pass && v.pass();
    lines << (v.pass() ? "PASS" : "FAIL") << ' ' << v.id << " (" << v.cases_run
          << " cases, window " << v.window << ")";
    if (!v.pass()) lines << " first witness: " << v.failures.front().witness;
    lines << '\n';
  }
  std::string report = report_json(suite, cfg, verdicts);
  if (as_json) {
    emit(report, out);
  } else {
    std::cout << lines.str();
    if (!out.empty()) emit(report, out);
  }
  return all_pass ? kExitOk : kExitVerifyFail;
}

int cmd_corpus(const std::string& kind_name, int count, std::uint64_t seed,
               std::uint64_t window, bool as_json, const std::string& out) {
  auto kind = corpus_kind_from_name(kind_name);
  if (!kind) throw std::runtime_error("unknown corpus kind '" + kind_name + "'");
  CorpusSpec spec;
  spec.kind = *kind;
  spec.count = count;
  spec.seed = seed;
  spec.window = window;
  std::vector<CorpusCase> cases = gen_corpus(spec);
  json j = json::array();
  for (const CorpusCase& c : cases) {
    json e;
    e["kind"] = corpus_kind_name(c.kind);
    e["seed"] = c.seed;
    e["digest"] = c.digest;
    if (c.loop_instance) {
      e["zero_positions"] = c.zero_positions;
      e["file"] = "case_" + c.digest + ".loop";
    }
    if (c.while_instance) {
      if (c.halting_step) e["halting_step"] = *c.halting_step;
      e["file"] = "case_" + c.digest + ".whl";
    }
    j.push_back(e);
  }
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    for (const CorpusCase& c : cases) {
      std::string fname;
      std::string text;
      if (c.loop_instance) {
        fname = "case_" + c.digest + ".loop";
        text = print_loop(*c.loop_instance);
      } else {
        fname = "case_" + c.digest + ".whl";
        text = print_while(*c.while_instance);
      }
      std::ofstream f(std::filesystem::path(out) / fname, std::ios::binary);
      f << text;
    }
    std::ofstream facts(std::filesystem::path(out) / "facts.json", std::ios::binary);
    facts << j.dump(2);
    if (!as_json) std::cout << "wrote " << cases.size() << " cases to " << out << '\n';
  }
  if (as_json || out.empty()) std::cout << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for loop/while register programs and many-one reductions"};
  app.require_subcommand(1);

  std::string in, out, id, suite = "default", search_what, corpus_kind;
  std::vector<std::uint64_t> run_args;
  std::vector<std::string> fn_files;
  std::uint64_t window = 64, budget = 100000, fuel = 20000, seed = 7;
  int jobs = 1, corpus_count = 1;
  bool as_json = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_flag("--json", as_json, "machine readable output");
    cmd->add_option("--out", out, "write the result to this path");
  };

  auto* parse_cmd = app.add_subcommand("parse", "parse and validate a program");
  parse_cmd->add_option("--in", in, "program file (.loop or .whl)")->required();
  add_common(parse_cmd);

  auto* run_cmd = app.add_subcommand("run", "evaluate a program on arguments");
  run_cmd->add_option("--in", in, "program file")->required();
  run_cmd->add_option("--args", run_args, "input values");
  run_cmd->add_option("--budget", budget, "fuel for while programs");
  add_common(run_cmd);

  auto* encode_cmd = app.add_subcommand("encode", "print a program's index");
  encode_cmd->add_option("--in", in, "program file")->required();
  add_common(encode_cmd);

  auto* reduce_cmd = app.add_subcommand("reduce", "apply a catalogue reduction");
  reduce_cmd->add_option("--id", id, "catalogue id")->required();
  reduce_cmd->add_option("--in", in, "instance file")->required();
  reduce_cmd->add_option("--window", window, "window for unary-instance laws");
  reduce_cmd->add_option("--budget", fuel, "fuel for program-instance laws");
  add_common(reduce_cmd);

  auto* normalize_cmd = app.add_subcommand("normalize", "normal form of an acyclic expression");
  normalize_cmd->add_option("--in", in, "dag file")->required();
  normalize_cmd->add_option("fns", fn_files, "loop files for the fixed-function registry");
  add_common(normalize_cmd);

  auto* expand_cmd = app.add_subcommand("expand", "closed formula of an acyclic expression");
  expand_cmd->add_option("--in", in, "dag file")->required();
  expand_cmd->add_option("fns", fn_files, "loop files for the fixed-function registry");
  add_common(expand_cmd);

  auto* classify_cmd = app.add_subcommand("classify", "node classification of a dag");
  classify_cmd->add_option("--in", in, "dag file")->required();
  classify_cmd->add_option("fns", fn_files, "loop files for the fixed-function registry");
  add_common(classify_cmd);

  auto* search_cmd = app.add_subcommand("search", "bounded semi-decision search");
  search_cmd->add_option("what", search_what, "haszeros | zeromore")->required();
  search_cmd->add_option("--in", in, "unary loop program")->required();
  search_cmd->add_option("--budget", budget, "number of points to scan");
  add_common(search_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "run the reduction verification suite");
  verify_cmd->add_option("--suite", suite, "suite name (default)");
  verify_cmd->add_option("--id", id, "restrict to one catalogue id");
  verify_cmd->add_option("--seed", seed, "corpus seed");
  verify_cmd->add_option("--window", window, "window for unary-instance laws");
  verify_cmd->add_option("--budget", fuel, "fuel for program-instance laws");
  verify_cmd->add_option("--jobs", jobs, "worker threads");
  add_common(verify_cmd);

  auto* corpus_cmd = app.add_subcommand("corpus", "generate planted corpus cases");
  corpus_cmd->add_option("kind", corpus_kind,
                         "zero_pattern | random_loop | while_delay | while_diverger")
      ->required();
  corpus_cmd->add_option("count", corpus_count, "number of cases");
  corpus_cmd->add_option("--seed", seed, "generation seed");
  corpus_cmd->add_option("--window", window, "plant window");
  add_common(corpus_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (parse_cmd->parsed()) return cmd_parse(in, as_json, out);
    if (run_cmd->parsed()) return cmd_run(in, run_args, budget, as_json, out);
    if (encode_cmd->parsed()) return cmd_encode(in, as_json, out);
    if (reduce_cmd->parsed()) return cmd_reduce(id, in, window, fuel, as_json, out);
    if (normalize_cmd->parsed()) return cmd_normalize(in, fn_files, as_json, out);
    if (expand_cmd->parsed()) return cmd_expand(in, as_json, out);
    if (classify_cmd->parsed()) return cmd_classify(in, as_json, out);
    if (search_cmd->parsed()) return cmd_search(search_what, in, budget, as_json, out);
    if (verify_cmd->parsed())
      return cmd_verify(suite, id, seed, window, fuel, jobs, as_json, out);
    if (corpus_cmd->parsed())
      return cmd_corpus(corpus_kind, corpus_count, seed, window, as_json, out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DagError& e) {
    std::cerr << "dag error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
