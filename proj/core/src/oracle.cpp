#include <prlab/oracle.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace prlab {

namespace {

using json = nlohmann::json;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt, std::uint64_t i) {
  std::uint64_t h = seed ^ (salt * 0x9e3779b97f4a7c15ull);
  h ^= i + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

// --- zero-pattern loop programs -----------------------------------------

// Builds a loop program with zeros exactly at `zeros` (values 1 elsewhere).
// One shift-register pass computes x monus k for every k up to the largest
// zero, so evaluation stays linear in the argument.
LoopProgram build_zero_pattern_program(const std::vector<std::uint64_t>& zeros,
                                       std::uint64_t case_seed) {
  std::vector<std::uint64_t> zs = zeros;
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
  int zmax = zs.empty() ? 0 : static_cast<int>(zs.back());

  const int one = 2;
  const int counter = 3;
  auto shift_reg = [](int k) { return 3 + k; };  // x monus k, k >= 1
  const int sum = shift_reg(zmax) + 1;
  const int i1 = sum + 1;
  const int i2 = sum + 2;

  std::vector<Stmt> body;
  body.push_back(Stmt::inc(one));
  if (zmax >= 1) {
    std::vector<Stmt> pass;
    for (int k = zmax; k >= 2; --k) pass.push_back(Stmt::copy(shift_reg(k), shift_reg(k - 1)));
    pass.push_back(Stmt::copy(shift_reg(1), counter));
    pass.push_back(Stmt::inc(counter));
    body.push_back(Stmt::loop(1, std::move(pass)));
  }
  for (std::uint64_t z : zs) {
    if (z == 0) {
      body.push_back(Stmt::copy(i1, one));
      body.push_back(Stmt::loop(1, {Stmt::clear(i1)}));
      body.push_back(Stmt::loop(i1, {Stmt::inc(sum)}));
    } else {
      int a = shift_reg(static_cast<int>(z));
      // x monus (z-1): the shift register for z-1, or x itself when z = 1.
      int b = z == 1 ? 1 : shift_reg(static_cast<int>(z) - 1);
      body.push_back(Stmt::copy(i1, one));
      body.push_back(Stmt::loop(a, {Stmt::clear(i1)}));
      body.push_back(Stmt::clear(i2));
      body.push_back(Stmt::loop(b, {Stmt::copy(i2, one)}));
      body.push_back(Stmt::loop(i1, {Stmt::loop(i2, {Stmt::inc(sum)})}));
    }
  }
  body.push_back(Stmt::copy(0, one));
  body.push_back(Stmt::loop(sum, {Stmt::clear(0)}));
  return LoopProgram{"zp_" + std::to_string(case_seed & 0xffffff), 1, std::move(body)};
}

std::vector<std::uint64_t> pick_pattern(std::mt19937_64& rng, std::uint64_t window) {
  std::uniform_int_distribution<int> style(0, 9);
  std::uniform_int_distribution<std::uint64_t> pos(0, window);
  int s = style(rng);
  std::vector<std::uint64_t> zs;
  if (s == 0) {
    // no zeros
  } else if (s == 1) {
    for (std::uint64_t z = 0; z <= window; ++z) zs.push_back(z);  // identically zero
  } else if (s == 2) {
    zs = {0};
  } else if (s == 3) {
    zs = {window};
  } else {
    std::uniform_int_distribution<int> szd(1, 6);
    int sz = szd(rng);
    for (int i = 0; i < sz; ++i) zs.push_back(pos(rng));
  }
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
  return zs;
}

// --- random loop programs ------------------------------------------------

std::vector<Stmt> gen_random_body(std::mt19937_64& rng, int depth, int max_depth, int budget) {
  std::uniform_int_distribution<int> nstmt(depth == 0 ? 3 : 1, depth == 0 ? 9 : 4);
  std::uniform_int_distribution<int> var(0, 5);
  std::uniform_int_distribution<int> kind(0, depth < max_depth ? 4 : 3);
  std::vector<Stmt> body;
  int n = std::min(nstmt(rng), budget);
  for (int i = 0; i < n; ++i) {
    switch (kind(rng)) {
      case 0:
        body.push_back(Stmt::clear(var(rng)));
        break;
      case 1:
        body.push_back(Stmt::copy(var(rng), var(rng)));
        break;
      case 2:
      case 3:
        body.push_back(Stmt::inc(var(rng)));
        break;
      default: {
        int guard = 1 + var(rng) % 4;  // loop on x1..x4
        body.push_back(Stmt::loop(guard, gen_random_body(rng, depth + 1, max_depth, 4)));
        break;
      }
    }
  }
  return body;
}

std::optional<LoopProgram> try_random_loop(std::mt19937_64& rng, std::uint64_t window,
                                           int max_depth, std::uint64_t case_seed) {
  LoopProgram p{"rl_" + std::to_string(case_seed & 0xffffff), 1,
                gen_random_body(rng, 0, max_depth, 12)};
  std::uint64_t total = 0;
  for (std::uint64_t x = 0; x <= window; ++x) {
    EvalResult r = eval_loop(p, Tuple{nat(x)});
    total += r.cost.steps;
    if (total > 400000) return std::nullopt;  // too slow for suite use
  }
  return p;
}

// --- while programs -------------------------------------------------------

WhileProgram build_inc_chain_delay(std::uint64_t steps, std::uint64_t output,
                                   std::uint64_t case_seed) {
  std::vector<Stmt> body;
  for (std::uint64_t i = 0; i < output; ++i) body.push_back(Stmt::inc(0));
  for (std::uint64_t i = output; i < steps; ++i) body.push_back(Stmt::inc(2));
  return WhileProgram{"delay_" + std::to_string(case_seed & 0xffffff), 1, std::move(body)};
}

WhileProgram build_countdown_delay(std::uint64_t k, std::uint64_t output,
                                   std::uint64_t case_seed) {
  std::vector<Stmt> body;
  for (std::uint64_t i = 0; i < k; ++i) body.push_back(Stmt::inc(2));
  // predecessor of x2 via a shift pass, repeated until x2 reaches 0
  std::vector<Stmt> dec;
  dec.push_back(Stmt::clear(3));
  dec.push_back(Stmt::clear(4));
  dec.push_back(Stmt::loop(2, {Stmt::copy(3, 4), Stmt::inc(4)}));
  dec.push_back(Stmt::copy(2, 3));
  body.push_back(Stmt::while_(2, std::move(dec)));
  for (std::uint64_t i = 0; i < output; ++i) body.push_back(Stmt::inc(0));
  return WhileProgram{"cd_" + std::to_string(case_seed & 0xffffff), 1, std::move(body)};
}

WhileProgram build_even_halt(std::uint64_t case_seed) {
  std::vector<Stmt> body;
  body.push_back(Stmt::inc(2));  // one
  body.push_back(Stmt::loop(1, {Stmt::copy(4, 2), Stmt::loop(3, {Stmt::clear(4)}),
                                Stmt::copy(3, 4)}));
  body.push_back(Stmt::while_(3, {Stmt::inc(3)}));
  body.push_back(Stmt::copy(0, 1));
  return WhileProgram{"even_" + std::to_string(case_seed & 0xffffff), 1, std::move(body)};
}

WhileProgram build_diverger(int junk, std::uint64_t case_seed) {
  std::vector<Stmt> body;
  for (int i = 0; i < junk; ++i) body.push_back(Stmt::inc(4));
  body.push_back(Stmt::inc(2));
  body.push_back(Stmt::while_(2, {Stmt::inc(2)}));
  return WhileProgram{"div_" + std::to_string(case_seed & 0xffffff), 1, std::move(body)};
}

// Appends a visible output bump so the partner computes a different value
// wherever it halts.
WhileProgram perturb_output(const WhileProgram& p) {
  WhileProgram q = p;
  q.name = p.name + "_p";
  q.body.push_back(Stmt::inc(0));
  return q;
}

}  // namespace

std::string corpus_kind_name(CorpusKind k) {
  switch (k) {
    case CorpusKind::ZeroPattern: return "zero_pattern";
    case CorpusKind::RandomLoop: return "random_loop";
    case CorpusKind::WhileDelay: return "while_delay";
    case CorpusKind::WhileDiverger: return "while_diverger";
  }
  return "?";
}

std::optional<CorpusKind> corpus_kind_from_name(const std::string& name) {
  if (name == "zero_pattern") return CorpusKind::ZeroPattern;
  if (name == "random_loop") return CorpusKind::RandomLoop;
  if (name == "while_delay") return CorpusKind::WhileDelay;
  if (name == "while_diverger") return CorpusKind::WhileDiverger;
  return std::nullopt;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

std::vector<CorpusCase> gen_corpus(const CorpusSpec& spec) {
  std::vector<CorpusCase> cases;
  cases.reserve(spec.count);
  for (int i = 0; i < spec.count; ++i) {
    std::uint64_t case_seed = mix_seed(spec.seed, static_cast<std::uint64_t>(spec.kind), i);
    std::mt19937_64 rng(case_seed);
    CorpusCase c;
    c.kind = spec.kind;
    c.seed = case_seed;
    switch (spec.kind) {
      case CorpusKind::ZeroPattern: {
        std::vector<std::uint64_t> zs =
            spec.pattern ? *spec.pattern : pick_pattern(rng, spec.window);
        LoopProgram p = build_zero_pattern_program(zs, case_seed);
        c.loop_instance = p;
        c.handle = memoized_unary(from_loop(p));
        for (std::uint64_t x = 0; x <= spec.window; ++x) {
          Nat v = c.handle.at(x);
          bool planted = std::binary_search(zs.begin(), zs.end(), x);
          if ((v == 0) != planted) {
            throw std::logic_error("zero_pattern plant failed verification");
          }
          if (v == 0) c.zero_positions.push_back(x);
          c.window_codomain.push_back(v);
        }
        c.digest = fnv1a_hex(print_loop(p));
        break;
      }
      case CorpusKind::RandomLoop: {
        std::optional<LoopProgram> p;
        for (int attempt = 0; !p; ++attempt) {
          std::mt19937_64 sub(mix_seed(case_seed, 17, attempt));
          p = try_random_loop(sub, spec.window, std::max(1, spec.depth_cap - attempt / 4),
                              case_seed);
        }
        c.loop_instance = *p;
        c.handle = memoized_unary(from_loop(*p));
        for (std::uint64_t x = 0; x <= spec.window; ++x) {
          Nat v = c.handle.at(x);
          if (v == 0) c.zero_positions.push_back(x);
          c.window_codomain.push_back(v);
        }
        // The plant is the recorded scan itself; replay one point to confirm
        // determinism of the instance.
        if (eval_loop(*p, Tuple{nat(spec.window / 2)}).value != c.handle.at(spec.window / 2)) {
          throw std::logic_error("random_loop instance is not deterministic");
        }
        c.digest = fnv1a_hex(print_loop(*p));
        break;
      }
      case CorpusKind::WhileDelay: {
        std::uniform_int_distribution<int> style(0, 9);
        std::uniform_int_distribution<std::uint64_t> szd(spec.delay_min, spec.delay_max);
        std::uniform_int_distribution<std::uint64_t> outd(0, 9);
        int s = style(rng);
        WhileProgram p;
        if (s <= 4) {
          std::uint64_t steps = std::max<std::uint64_t>(1, szd(rng));
          std::uint64_t out = std::min(outd(rng), steps);
          p = build_inc_chain_delay(steps, out, case_seed);
        } else if (s <= 7) {
          std::uniform_int_distribution<std::uint64_t> kd(
              2, std::max<std::uint64_t>(3, std::min<std::uint64_t>(60, spec.delay_max / 64)));
          p = build_countdown_delay(kd(rng), outd(rng), case_seed);
        } else {
          p = build_even_halt(case_seed);
        }
        c.while_instance = p;
        c.index = encode_program(p);
        c.partner = (case_seed & 1) ? encode_program(perturb_output(p)) : c.index;
        RunOutcome probe = run_bounded(p, Tuple{nat(0)}, 30000);
        if (!probe.halted()) {
          throw std::logic_error("while_delay instance does not halt on the probe argument");
        }
        c.halting_step = probe.at_step;
        c.halting_output = probe.output;
        c.digest = fnv1a_hex(print_while(p));
        break;
      }
      case CorpusKind::WhileDiverger: {
        std::uniform_int_distribution<int> junk(0, 5);
        WhileProgram p = build_diverger(junk(rng), case_seed);
        c.while_instance = p;
        c.index = encode_program(p);
        c.partner = (case_seed & 1) ? encode_program(perturb_output(p)) : c.index;
        RunOutcome probe = run_bounded(p, Tuple{nat(0)}, 30000);
        if (probe.halted()) {
          throw std::logic_error("while_diverger instance halted");
        }
        c.digest = fnv1a_hex(print_while(p));
        break;
      }
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

bool case_matches_row(const CorpusCase& c, InstanceKind kind) {
  switch (kind) {
    case InstanceKind::PrUnary:
      return c.loop_instance.has_value();
    case InstanceKind::ParRecIndex:
    case InstanceKind::ParRecPair:
      return c.while_instance.has_value();
  }
  return false;
}

ReductionInput input_for_case(const CorpusCase& c) {
  ReductionInput in;
  if (c.loop_instance) in.f = c.handle;
  if (c.while_instance) {
    in.e = c.index;
    in.e2 = c.partner;
  }
  in.x = 0;
  return in;
}

Verdict brute_check_reduction(const std::string& id, const CorpusCase& c,
                              std::uint64_t window) {
  const CatalogueRow* row = find_row(id);
  if (!row) throw std::invalid_argument("unknown catalogue id '" + id + "'");
  if (!case_matches_row(c, row->spec.kind)) {
    throw std::invalid_argument("corpus case kind does not match row '" + id + "'");
  }
  Verdict v;
  v.id = id;
  v.window = window;
  v.cases_run = 1;
  ReductionResult res = row->build(input_for_case(c));
  WindowCheck chk = res.check(window);
  if (!chk.holds) {
    v.failures.push_back(Failure{
        id, c.digest,
        chk.witness + " [" + chk.detail + "; lhs=" + chk.lhs + " rhs=" + chk.rhs + "]",
        c.seed});
  }
  return v;
}

namespace {

struct SuitePools {
  std::vector<CorpusCase> pr;
  std::vector<CorpusCase> parrec;
};

SuitePools build_pools(const SuiteConfig& cfg) {
  SuitePools pools;
  CorpusSpec zp;
  zp.kind = CorpusKind::ZeroPattern;
  zp.count = (cfg.pr_cases * 3 + 4) / 5;
  zp.seed = cfg.seed;
  zp.window = cfg.window;
  CorpusSpec rl;
  rl.kind = CorpusKind::RandomLoop;
  rl.count = cfg.pr_cases - zp.count;
  rl.seed = cfg.seed;
  rl.window = cfg.window;
  pools.pr = gen_corpus(zp);
  auto rls = gen_corpus(rl);
  pools.pr.insert(pools.pr.end(), rls.begin(), rls.end());

  CorpusSpec wd;
  wd.kind = CorpusKind::WhileDelay;
  wd.count = (cfg.parrec_cases * 4 + 4) / 5;
  wd.seed = cfg.seed;
  wd.window = cfg.window;
  wd.delay_max = std::min<std::uint64_t>(4000, cfg.fuel / 4);
  CorpusSpec dv;
  dv.kind = CorpusKind::WhileDiverger;
  dv.count = cfg.parrec_cases - wd.count;
  dv.seed = cfg.seed;
  dv.window = cfg.window;
  pools.parrec = gen_corpus(wd);
  auto dvs = gen_corpus(dv);
  pools.parrec.insert(pools.parrec.end(), dvs.begin(), dvs.end());
  return pools;
}

}  // namespace

std::vector<Verdict> run_suite(const std::vector<std::string>& ids, const SuiteConfig& cfg) {
  SuitePools pools = build_pools(cfg);
  std::vector<Verdict> verdicts;
  for (const std::string& id : ids) {
    const CatalogueRow* row = find_row(id);
    if (!row) throw std::invalid_argument("unknown catalogue id '" + id + "'");
    Verdict v;
    v.id = id;
    v.window = row->spec.kind == InstanceKind::PrUnary ? cfg.window : cfg.fuel;
    verdicts.push_back(std::move(v));
  }

  auto run_case = [&](const CorpusCase& c, std::vector<Verdict>& sink) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const CatalogueRow* row = find_row(ids[i]);
      if (!case_matches_row(c, row->spec.kind)) continue;
      std::uint64_t w = row->spec.kind == InstanceKind::PrUnary ? cfg.window : cfg.fuel;
      ReductionResult res = row->build(input_for_case(c));
      WindowCheck chk = res.check(w);
      sink[i].cases_run += 1;
      if (!chk.holds) {
        sink[i].failures.push_back(Failure{
            ids[i], c.digest,
            chk.witness + " [" + chk.detail + "; lhs=" + chk.lhs + " rhs=" + chk.rhs + "]",
            c.seed});
      }
    }
  };

  std::vector<const CorpusCase*> all_cases;
  for (const CorpusCase& c : pools.pr) all_cases.push_back(&c);
  for (const CorpusCase& c : pools.parrec) all_cases.push_back(&c);

  int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    for (const CorpusCase* c : all_cases) run_case(*c, verdicts);
  } else {
    std::vector<std::vector<Verdict>> partial(jobs, verdicts);
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        for (std::size_t i = w; i < all_cases.size(); i += jobs) {
          run_case(*all_cases[i], partial[w]);
        }
      });
    }
    for (auto& t : workers) t.join();
    for (const auto& part : partial) {
      for (std::size_t i = 0; i < verdicts.size(); ++i) {
        verdicts[i].cases_run += part[i].cases_run;
        verdicts[i].failures.insert(verdicts[i].failures.end(), part[i].failures.begin(),
                                    part[i].failures.end());
      }
    }
    for (Verdict& v : verdicts) {
      std::sort(v.failures.begin(), v.failures.end(),
                [](const Failure& a, const Failure& b) { return a.case_seed < b.case_seed; });
    }
  }
  return verdicts;
}

Verdict run_row_with_tweak(const std::string& id, const detail::TargetTweak& tweak,
                           const SuiteConfig& cfg) {
  const CatalogueRow* row = find_row(id);
  if (!row) throw std::invalid_argument("unknown catalogue id '" + id + "'");
  SuitePools pools = build_pools(cfg);
  const auto& pool = row->spec.kind == InstanceKind::PrUnary ? pools.pr : pools.parrec;
  std::uint64_t w = row->spec.kind == InstanceKind::PrUnary ? cfg.window : cfg.fuel;
  Verdict v;
  v.id = id;
  v.window = w;
  for (const CorpusCase& c : pool) {
    if (!case_matches_row(c, row->spec.kind)) continue;
    ReductionResult res = detail::build_with_target_tweak(id, input_for_case(c), tweak);
    WindowCheck chk = res.check(w);
    v.cases_run += 1;
    if (!chk.holds) {
      v.failures.push_back(Failure{
          id, c.digest,
          chk.witness + " [" + chk.detail + "; lhs=" + chk.lhs + " rhs=" + chk.rhs + "]",
          c.seed});
      break;  // one replayable witness is enough
    }
  }
  return v;
}

std::string report_json(const std::string& suite_name, const SuiteConfig& cfg,
                        const std::vector<Verdict>& verdicts) {
  json report;
  report["suite"] = suite_name;
  report["seed"] = cfg.seed;
  report["window"] = cfg.window;
  int cases = 0;
  json failures = json::array();
  for (const Verdict& v : verdicts) {
    cases += v.cases_run;
    for (const Failure& f : v.failures) {
      failures.push_back({{"id", f.id},
                          {"instance_digest", f.instance_digest},
                          {"witness", f.witness},
                          {"case_seed", f.case_seed}});
    }
  }
  report["cases"] = cases;
  report["failures"] = failures;
  return report.dump(2);
}

}  // namespace prlab
