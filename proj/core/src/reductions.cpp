#include <prlab/reductions.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>

namespace prlab {

namespace {

using detail::TargetTweak;

std::uint64_t probe_u64(const Nat& t) {
  return fits_u64(t) ? to_u64(t) : ~std::uint64_t{0};
}

FnHandle maybe_tweak(FnHandle h, const TargetTweak* tw) {
  return tw ? (*tw)(h) : std::move(h);
}

std::string b2s(bool b) { return b ? "true" : "false"; }

WindowCheck agree_check(bool lhs, bool rhs, std::string detail) {
  WindowCheck c;
  c.lhs = b2s(lhs);
  c.rhs = b2s(rhs);
  c.detail = std::move(detail);
  c.holds = lhs == rhs;
  if (!c.holds) c.witness = "sides disagree";
  return c;
}

void require_shape(WindowCheck& c, bool ok, const std::string& what) {
  if (!ok && c.witness.empty()) c.witness = what;
  c.holds = c.holds && ok;
}

void require_unary(const FnHandle& f, const char* who) {
  if (f.arity != 1 || f.out_arity != 1) {
    throw std::invalid_argument(std::string(who) + ": instance must be unary");
  }
}

// Step-bounded halting detector of one fixed computation as a total handle.
FnHandle halting_detector(std::shared_ptr<HaltWatcher> w, TMode mode, std::string label) {
  return native_unary(std::move(label), [w, mode](const Nat& t) {
    std::uint64_t tt = probe_u64(t);
    bool zero = mode == TMode::AtMost ? w->halted_by(tt) : w->halted_exactly_at(tt);
    return Nat(zero ? 0 : 1);
  });
}

std::shared_ptr<HaltWatcher> watcher_for(const ProgramIndex& e, Tuple args) {
  return std::make_shared<HaltWatcher>(e, std::move(args));
}

// Per-argument watchers over one decoded program.
struct SimFamily {
  std::shared_ptr<const WhileProgram> prog;  // null: everything diverges

  explicit SimFamily(const ProgramIndex& e) {
    auto p = decode_program(e);
    if (p && p->arity == 1) prog = std::make_shared<const WhileProgram>(std::move(*p));
  }

  HaltWatcher& at(std::uint64_t x) {
    auto it = watchers.find(x);
    if (it == watchers.end()) {
      it = watchers.emplace(x, prog ? HaltWatcher(prog, Tuple{nat(x)}) : HaltWatcher()).first;
    }
    return it->second;
  }

  std::map<std::uint64_t, HaltWatcher> watchers;
};

std::string canonical_diverger_text() {
  return "fn diverge(1) {\n  inc x2\n  while x2 {\n    inc x2\n  }\n}\n";
}

// The instance program with its output forced to 0: halts exactly where the
// instance halts, and then always with value 0.
WhileProgram zeroed_program(const ProgramIndex& e) {
  std::optional<WhileProgram> p = decode_program(e);
  if (!p || p->arity != 1) p = parse_while(canonical_diverger_text());
  WhileProgram g = *p;
  g.name = g.name + "_zeroed";
  g.body.push_back(Stmt::clear(0));
  return g;
}

std::string fmt_count(std::uint64_t n) { return std::to_string(n); }

}  // namespace

// ---------------------------------------------------------------------------
// constructions on a unary total instance
// ---------------------------------------------------------------------------

namespace {

ReductionResult hz_to_exactly_one_zero_impl(const FnHandle& f, const TargetTweak* tw) {
  require_unary(f, "hz_to_exactly_one_zero");
  ReductionResult r;
  r.spec = {"hz_to_exactly_one_zero", "has_zeros", "exactly_one_zero",
            InstanceKind::PrUnary, TMode::AtMost,
            "marks the least zero of the instance"};
  FnHandle g = native_unary("first_zero_marker", [f](const Nat& x) {
    if (f.at(x) != 0) return Nat(1);
    for (Nat xp = 0; xp < x; ++xp) {
      if (f.at(xp) == 0) return Nat(1);  // an earlier zero exists
    }
    return Nat(0);
  });
  g = maybe_tweak(std::move(g), tw);
  r.targets = {g};
  r.target_window = [](std::uint64_t n) { return n; };
  r.check = [f, g](std::uint64_t n) {
    bool lhs = has_zero_within(f, n);
    bool rhs = exactly_k_zeros(g, n, 1);
    WindowCheck c = agree_check(lhs, rhs, "f has a zero in [0,N] iff g has exactly one");
    if (lhs) {
      std::uint64_t first = 0;
      while (f.at(first) != 0) ++first;
      require_shape(c, g.at(first) == 0, "g does not vanish at the least zero of f");
    }
    return c;
  };
  return r;
}

ReductionResult no_zeros_to_exactly_one_zero_impl(const FnHandle& f, const TargetTweak* tw) {
  require_unary(f, "no_zeros_to_exactly_one_zero");
  ReductionResult r;
  r.spec = {"no_zeros_to_exactly_one_zero", "no_zeros", "exactly_one_zero",
            InstanceKind::PrUnary, TMode::AtMost,
            "pins a zero at 0 and mirrors the zeros of f above it"};
  FnHandle g = native_unary("zero_mirror", [f](const Nat& x) {
    if (x == 0) return Nat(0);
    return Nat(f.at(Nat(x - 1)) == 0 ? 0 : 1);
  });
  g = maybe_tweak(std::move(g), tw);
  r.targets = {g};
  r.target_window = [](std::uint64_t n) { return n + 1; };
  r.check = [f, g](std::uint64_t n) {
    bool lhs = !has_zero_within(f, n);
    bool rhs = exactly_k_zeros(g, n + 1, 1);
    WindowCheck c =
        agree_check(lhs, rhs, "f has no zeros in [0,N] iff g has exactly one in [0,N+1]");
    require_shape(c, g.at(std::uint64_t{0}) == 0, "g(0) must be 0");
    return c;
  };
  return r;
}

ReductionResult hz_to_exactly_k_zeros_impl(const FnHandle& f, std::uint64_t k,
                                           const TargetTweak* tw) {
  require_unary(f, "hz_to_exactly_k_zeros");
  if (k < 1) throw std::invalid_argument("hz_to_exactly_k_zeros: k must be >= 1");
  ReductionResult r;
  r.spec = {"hz_to_exactly_" + std::to_string(k) + "_zeros", "has_zeros",
            "exactly_" + std::to_string(k) + "_zeros", InstanceKind::PrUnary, TMode::AtMost,
            "k-1 pinned zeros followed by the least-zero marker"};
  FnHandle g = native_unary("pinned_first_zero_marker", [f, k](const Nat& x) {
    if (x < static_cast<unsigned long>(k - 1)) return Nat(0);
    Nat m = x - static_cast<unsigned long>(k - 1);
    if (f.at(m) != 0) return Nat(1);
    for (Nat mp = 0; mp < m; ++mp) {
      if (f.at(mp) == 0) return Nat(1);
    }
    return Nat(0);
  });
  g = maybe_tweak(std::move(g), tw);
  r.targets = {g};
  r.target_window = [k](std::uint64_t n) { return n + k - 1; };
  r.check = [f, g, k](std::uint64_t n) {
    bool lhs = has_zero_within(f, n);
    bool rhs = exactly_k_zeros(g, n + k - 1, k);
    return agree_check(lhs, rhs,
                       "f has a zero in [0,N] iff g has exactly k zeros in [0,N+k-1]");
  };
  return r;
}

ReductionResult no_zeros_to_exactly_k_zeros_impl(const FnHandle& f, std::uint64_t k,
                                                 const TargetTweak* tw) {
  require_unary(f, "no_zeros_to_exactly_k_zeros");
  if (k < 1) throw std::invalid_argument("no_zeros_to_exactly_k_zeros: k must be >= 1");
  ReductionResult r;
  r.spec = {"no_zeros_to_exactly_" + std::to_string(k) + "_zeros", "no_zeros",
            "exactly_" + std::to_string(k) + "_zeros", InstanceKind::PrUnary, TMode::AtMost,
            "k pinned zeros, then a mirror of the zeros of f"};
  FnHandle g = native_unary("pinned_zero_mirror", [f, k](const Nat& x) {
    if (x < static_cast<unsigned long>(k)) return Nat(0);
    return Nat(f.at(Nat(x - static_cast<unsigned long>(k))) == 0 ? 0 : 1);
  });
  g = maybe_tweak(std::move(g), tw);
  r.targets = {g};
  r.target_window = [k](std::uint64_t n) { return n + k; };
  r.check = [f, g, k](std::uint64_t n) {
    bool lhs = !has_zero_within(f, n);
    bool rhs = exactly_k_zeros(g, n + k, k);
    return agree_check(lhs, rhs,
                       "f has no zeros in [0,N] iff g has exactly k zeros in [0,N+k]");
  };
  return r;
}

ReductionResult hz_to_at_least_k_impl(const FnHandle& f, std::uint64_t k,
                                      const TargetTweak* tw) {
  require_unary(f, "hz_to_at_least_k");
  if (k < 1) throw std::invalid_argument("hz_to_at_least_k: k must be >= 1");
  ReductionResult r;
  r.spec = {"hz_to_at_least_" + std::to_string(k), "has_zeros",
            "at_least_" + std::to_string(k) + "_zeros", InstanceKind::PrUnary, TMode::AtMost,
            "replicates every zero k times"};
  FnHandle g = native_unary("zero_replicator", [f, k](const Nat& m) {
    return f.at(Nat(m / static_cast<unsigned long>(k)));
  });
  g = maybe_tweak(std::move(g), tw);
  r.targets = {g};
  r.target_window = [k](std::uint64_t n) { return k * (n + 1) - 1; };
  r.check = [f, g, k](std::uint64_t n) {
    std::uint64_t zf = count_zeros(f, n);
    std::uint64_t zg = count_zeros(g, k * (n + 1) - 1);
    WindowCheck c;
    c.lhs = fmt_count(k * zf);
    c.rhs = fmt_count(zg);
    c.detail = "zero count of g on [0,k(N+1)-1] is k times that of f on [0,N]";
    c.holds = zg == k * zf;
    if (!c.holds) c.witness = "count mismatch";
    require_shape(c, (zf >= 1) == (zg >= k), "at-least-k biconditional");
    return c;
  };
  return r;
}

ReductionResult hz_to_equal_next_impl(const FnHandle& f, const TargetTweak* tw) {
  require_unary(f, "hz_to_equal_next");
  ReductionResult r;
  r.spec = {"hz_to_equal_next", "has_zeros", "equal_next", InstanceKind::PrUnary, TMode::AtMost,
            "prefix sums: a zero of f makes two consecutive values of g equal"};
  FnHandle g = maybe_tweak(prefix_sum(f), tw);
  r.targets = {g};
  r.target_window = [](std::uint64_t n) { return n + 1; };
  r.check = [f, g](std::uint64_t n) {
    bool lhs = has_zero_within(f, n);
    bool rhs = equal_next_within(g, n);
    WindowCheck c = agree_check(
        lhs, rhs, "f has a zero in [0,N] iff g(x)=g(x+1) for some x <= N");
    require_shape(c, g.at(std::uint64_t{0}) == 0, "g(0) must be 0");
    return c;
  };
  return r;
}

ReductionResult hz_to_nonzero_function_impl(const FnHandle& f, const TargetTweak* tw) {
  require_unary(f, "hz_to_nonzero_function");
  ReductionResult r;
  r.spec = {"hz_to_nonzero_function", "has_zeros", "not_zero_function", InstanceKind::PrUnary,
            TMode::AtMost, "flips the zero indicator: g = 1 monus f"};
  FnHandle g = native_unary("zero_indicator", [f](const Nat& x) { return monus(Nat(1), f.at(x)); });
  g = maybe_tweak(std::move(g), tw);
  r.targets = {g};
  r.target_window = [](std::uint64_t n) { return n; };
  r.check = [f, g](std::uint64_t n) {
    bool lhs = has_zero_within(f, n);
    // g is "not identically zero" on the window iff it has a nonzero value.
    bool rhs = false;
    for (std::uint64_t x = 0; x <= n; ++x) {
      if (g.at(x) != 0) rhs = true;
    }
    WindowCheck c =
        agree_check(lhs, rhs, "f has a zero in [0,N] iff g is not identically 0 there");
    bool pointwise = true;
    for (std::uint64_t x = 0; x <= n && pointwise; ++x) {
      pointwise = (g.at(x) == 0) == (f.at(x) != 0);
    }
    require_shape(c, pointwise, "g must be the pointwise zero indicator of f");
    return c;
  };
  return r;
}

ReductionResult hz_to_equal_at_one_point_impl(const FnHandle& f, const TargetTweak* tw) {
  require_unary(f, "hz_to_equal_at_one_point");
  ReductionResult r;
  r.spec = {"hz_to_equal_at_one_point", "has_zeros", "equal_at_one_point",
            InstanceKind::PrUnary, TMode::AtMost, "pairs the instance with the zero function"};
  FnHandle g = maybe_tweak(constant_fn(1, Nat(0)), tw);
  r.targets = {f, g};
  r.target_window = [](std::uint64_t n) { return n; };
  r.check = [f, g](std::uint64_t n) {
    bool lhs = has_zero_within(f, n);
    bool rhs = false;
    for (std::uint64_t y = 0; y <= n; ++y) {
      if (f.at(y) == g.at(y)) rhs = true;
    }
    return agree_check(lhs, rhs, "f has a zero in [0,N] iff f meets the zero function there");
  };
  return r;
}

ReductionResult zero_fn_to_cod_k_impl(const FnHandle& f, std::uint64_t k,
                                      const TargetTweak* tw) {
  require_unary(f, "zero_fn_to_cod_k");
  if (k < 1) throw std::invalid_argument("zero_fn_to_cod_k: k must be >= 1");
  ReductionResult r;
  r.spec = {"zero_fn_to_cod_" + std::to_string(k), "zero_function",
            "codomain_size_" + std::to_string(k), InstanceKind::PrUnary, TMode::AtMost,
            k == 1 ? "shifts f one slot up behind a pinned 0"
                   : "prefixes the identity staircase and scales f by k"};
  FnHandle g =
      k == 1 ? native_unary("cod1_shift", [f](const Nat& x) {
          if (x == 0) return Nat(0);
          return f.at(Nat(x - 1));
        })
             : native_unary("cod_staircase", [f, k](const Nat& x) {
                 if (x < static_cast<unsigned long>(k)) return x;
                 return Nat(static_cast<unsigned long>(k) * f.at(Nat(x - static_cast<unsigned long>(k))));
               });
  g = maybe_tweak(std::move(g), tw);
  r.targets = {g};
  r.target_window = [k](std::uint64_t n) { return n + k; };
  r.check = [f, g, k](std::uint64_t n) {
    bool lhs = count_zeros(f, n) == n + 1;  // f identically 0 on the window
    std::uint64_t cod = codomain_within(g, n + k).size();
    bool rhs = cod == k;
    WindowCheck c = agree_check(lhs, rhs, "f is 0 on [0,N] iff |cod(g on [0,N+k])| = k");
    c.rhs += " (|cod|=" + fmt_count(cod) + ")";
    return c;
  };
  return r;
}

ReductionResult not_zero_fn_to_cod_k_impl(const FnHandle& f, std::uint64_t k,
                                          const TargetTweak* tw) {
  require_unary(f, "not_zero_fn_to_cod_k");
  if (k < 2) throw std::invalid_argument("not_zero_fn_to_cod_k: k must be >= 2");
  ReductionResult r;
  r.spec = {"not_zero_fn_to_cod_" + std::to_string(k), "not_zero_function",
            "codomain_size_" + std::to_string(k), InstanceKind::PrUnary, TMode::AtMost,
            "each block of k slots shows 0..k-1 where f is nonzero and collapses to 0 where it vanishes"};
  FnHandle g = native_unary("block_fan", [f, k](const Nat& m) {
    Nat x = m / static_cast<unsigned long>(k);
    Nat i = m % static_cast<unsigned long>(k);
    return f.at(x) == 0 ? Nat(0) : i;
  });
  g = maybe_tweak(std::move(g), tw);
  r.targets = {g};
  r.target_window = [k](std::uint64_t n) { return k * (n + 1) - 1; };
  r.check = [f, g, k](std::uint64_t n) {
    bool lhs = false;
    for (std::uint64_t x = 0; x <= n; ++x) {
      if (f.at(x) != 0) lhs = true;
    }
    std::uint64_t cod = codomain_within(g, k * (n + 1) - 1).size();
    bool rhs = cod == k;
    WindowCheck c = agree_check(
        lhs, rhs, "f is nonzero somewhere on [0,N] iff |cod(g)| = k on the k-fold window");
    c.rhs += " (|cod|=" + fmt_count(cod) + ")";
    require_shape(c, lhs || cod == 1, "a vanished f must collapse the codomain to {0}");
    return c;
  };
  return r;
}

ReductionResult fin_zeros_to_fin_cod_impl(const FnHandle& f, const TargetTweak* tw) {
  require_unary(f, "fin_zeros_to_fin_cod");
  ReductionResult r;
  r.spec = {"fin_zeros_to_fin_cod", "finitely_many_zeros", "finite_codomain",
            InstanceKind::PrUnary, TMode::AtMost, "counts the zeros of f seen so far"};
  FnHandle g = native_unary("zero_counter", [f](const Nat& x) {
    Nat c = 0;
    for (Nat i = 0; i <= x; ++i) {
      if (f.at(i) == 0) ++c;
    }
    return c;
  });
  g = maybe_tweak(std::move(g), tw);
  r.targets = {g};
  r.target_window = [](std::uint64_t n) { return n; };
  r.check = [f, g](std::uint64_t n) {
    std::uint64_t zf = count_zeros(f, n);
    Nat top = g.at(n);
    WindowCheck c;
    c.lhs = fmt_count(zf);
    c.rhs = top.get_str();
    c.detail = "max of g on [0,N] equals the zero count of f on [0,N]";
    c.holds = top == static_cast<unsigned long>(zf);
    if (!c.holds) c.witness = "max mismatch";
    // The codomain is the integer interval [g(0), g(N)].
    std::uint64_t cod = codomain_within(g, n).size();
    std::uint64_t expected = zf - (f.at(std::uint64_t{0}) == 0 ? 1 : 0) + 1;
    require_shape(c, cod == expected, "codomain size must be the zero count above 0 plus one");
    bool monotone = true;
    Nat prev = g.at(std::uint64_t{0});
    for (std::uint64_t x = 1; x <= n && monotone; ++x) {
      Nat cur = g.at(x);
      monotone = cur >= prev && cur <= prev + 1;
      prev = cur;
    }
    require_shape(c, monotone, "g must be nondecreasing with unit steps");
    return c;
  };
  return r;
}

ReductionResult hz_to_not_injective_impl(const FnHandle& f, const TargetTweak* tw) {
  require_unary(f, "hz_to_not_injective");
  ReductionResult r;
  r.spec = {"hz_to_not_injective", "has_zeros", "not_injective", InstanceKind::PrUnary,
            TMode::AtMost, "collapses the successor of every zero of f onto 0"};
  FnHandle g = native_unary("collision_maker", [f](const Nat& x) {
    if (x == 0) return Nat(0);
    return f.at(Nat(x - 1)) != 0 ? x : Nat(0);
  });
  g = maybe_tweak(std::move(g), tw);
  r.targets = {g};
  r.target_window = [](std::uint64_t n) { return n + 1; };
  r.check = [f, g](std::uint64_t n) {
    bool lhs = !has_zero_within(f, n);
    bool rhs = injective_within(g, n + 1);
    WindowCheck c =
        agree_check(lhs, rhs, "f has no zeros in [0,N] iff g is injective on [0,N+1]");
    require_shape(c, g.at(std::uint64_t{0}) == 0, "g(0) must be 0");
    return c;
  };
  return r;
}

ReductionResult onto_to_bijective_impl(const FnHandle& f, const TargetTweak* tw) {
  require_unary(f, "onto_to_bijective");
  ReductionResult r;
  r.spec = {"onto_to_bijective", "onto", "bijective", InstanceKind::PrUnary, TMode::AtMost,
            "new values of g = f(n/2) go to the evens, repeats consume the odds in order"};
  struct State {
    FnHandle f;
    std::vector<Nat> h;
    std::set<Nat> seen;
    std::uint64_t next_odd = 1;
    const Nat& value_at(std::uint64_t n) {
      while (h.size() <= n) {
        Nat gv = f.at(std::uint64_t(h.size() / 2));
        if (seen.insert(gv).second) {
          h.push_back(2 * gv);
        } else {
          h.push_back(nat(next_odd));
          next_odd += 2;
        }
      }
      return h[n];
    }
  };
  auto st = std::make_shared<State>();
  st->f = f;
  FnHandle h = native_unary("bijectivizer", [st](const Nat& x) {
    return st->value_at(probe_u64(x));
  });
  h = maybe_tweak(std::move(h), tw);
  r.targets = {h};
  r.target_window = [](std::uint64_t n) { return 2 * n + 1; };
  r.check = [f, h](std::uint64_t n) {
    std::uint64_t w = 2 * n + 1;
    WindowCheck c;
    c.detail = "h is injective; its even values double the codomain of g = f(n/2)";
    bool inj = injective_within(h, w);
    std::set<Nat> g_cod;
    for (std::uint64_t i = 0; i <= w; ++i) g_cod.insert(f.at(i / 2));
    std::set<Nat> expected_evens;
    for (const Nat& v : g_cod) expected_evens.insert(2 * v);
    std::set<Nat> got_evens;
    std::uint64_t odd_count = 0;
    Nat max_odd = 0;
    for (std::uint64_t i = 0; i <= w; ++i) {
      Nat v = h.at(i);
      if (mpz_odd_p(v.get_mpz_t())) {
        ++odd_count;
        if (v > max_odd) max_odd = v;
      } else {
        got_evens.insert(v);
      }
    }
    c.lhs = "evens=" + fmt_count(expected_evens.size());
    c.rhs = "evens=" + fmt_count(got_evens.size()) + ",odds=" + fmt_count(odd_count);
    c.holds = inj && got_evens == expected_evens;
    if (!inj) c.witness = "h is not injective on the window";
    else if (got_evens != expected_evens) c.witness = "even image does not double the g codomain";
    // The odds are consumed in order 1, 3, 5, ...
    require_shape(c, odd_count == 0 || max_odd == nat(2 * odd_count - 1),
                  "odd values must be the first unused odd integers");
    return c;
  };
  return r;
}

ReductionResult hz_to_zero_more_impl(const FnHandle& f, const TargetTweak* tw) {
  require_unary(f, "hz_to_zero_more");
  ReductionResult r;
  r.spec = {"hz_to_zero_more", "has_zeros", "zero_and_more", InstanceKind::PrUnary,
            TMode::AtMost, "g always shows a nonzero value at 0 and mirrors zeros of f above"};
  FnHandle g = native_unary("zero_more", [f](const Nat& x) {
    if (x == 0) return Nat(1);
    return f.at(Nat(x - 1)) == 0 ? Nat(0) : Nat(1);
  });
  g = maybe_tweak(std::move(g), tw);
  r.targets = {g};
  r.target_window = [](std::uint64_t n) { return n + 1; };
  r.check = [f, g](std::uint64_t n) {
    bool lhs = has_zero_within(f, n);
    bool zero_seen = false, nonzero_seen = false;
    for (std::uint64_t x = 0; x <= n + 1; ++x) {
      if (g.at(x) == 0) zero_seen = true;
      else nonzero_seen = true;
    }
    bool rhs = zero_seen && nonzero_seen;
    WindowCheck c = agree_check(
        lhs, rhs, "f has a zero in [0,N] iff g takes both a zero and a nonzero value");
    require_shape(c, g.at(std::uint64_t{0}) == 1, "g(0) must be 1");
    return c;
  };
  return r;
}

ReductionResult ff_z2_impl(const FnHandle& f, const TargetTweak* tw) {
  require_unary(f, "ff_z2");
  ReductionResult r;
  r.spec = {"ff_z2", "has_zeros", "self_composition_two_zeros", InstanceKind::PrUnary,
            TMode::AtMost, "g(0)=0 and g(n)=f(n-1); zeros of f create second zeros of g(g(.))"};
  FnHandle g = native_unary("shifted_instance", [f](const Nat& x) {
    if (x == 0) return Nat(0);
    return f.at(Nat(x - 1));
  });
  g = maybe_tweak(std::move(g), tw);
  r.targets = {g};
  r.target_window = [](std::uint64_t n) { return n + 1; };
  r.check = [f, g](std::uint64_t n) {
    // Window-exact biconditional: either f vanishes somewhere on [0,N], or a
    // value chain f(x) -> f(f(x)-1) lands on a zero.
    bool lhs = false;
    for (std::uint64_t x = 0; x <= n && !lhs; ++x) {
      Nat v = f.at(x);
      if (v == 0) lhs = true;
      else if (f.at(Nat(v - 1)) == 0) lhs = true;
    }
    std::uint64_t zz = 0;
    for (std::uint64_t x = 0; x <= n + 1; ++x) {
      if (g.at(g.at(x)) == 0) ++zz;
    }
    bool rhs = zz >= 2;
    WindowCheck c = agree_check(
        lhs, rhs,
        "f reaches a zero in one or two steps on [0,N] iff g(g(.)) has two zeros on [0,N+1]");
    require_shape(c, g.at(g.at(std::uint64_t{0})) == 0, "g(g(0)) must be 0");
    return c;
  };
  return r;
}

ReductionResult ff_graph_impl(const FnHandle& f, const TargetTweak* tw) {
  require_unary(f, "ff_graph");
  ReductionResult r;
  r.spec = {"ff_graph", "has_zeros", "self_composition_has_zero", InstanceKind::PrUnary,
            TMode::AtMost,
            "doubles the graph: edges (2i,2i+1) and (2i+1,2f(i)); f(i)=0 yields g(g(2i))=0"};
  FnHandle g = native_unary("graph_doubler", [f](const Nat& m) {
    if (mpz_even_p(m.get_mpz_t())) return Nat(m + 1);
    return Nat(2 * f.at(Nat((m - 1) / 2)));
  });
  g = maybe_tweak(std::move(g), tw);
  r.targets = {g};
  r.target_window = [](std::uint64_t n) { return 2 * n + 1; };
  r.check = [f, g](std::uint64_t n) {
    bool lhs = has_zero_within(f, n);
    bool rhs = false;
    for (std::uint64_t x = 0; x <= 2 * n + 1 && !rhs; ++x) {
      if (g.at(g.at(x)) == 0) rhs = true;
    }
    WindowCheck c = agree_check(
        lhs, rhs, "f has a zero in [0,N] iff g(g(.)) vanishes on the doubled window");
    bool edges = true;
    for (std::uint64_t i = 0; i <= n && edges; ++i) {
      edges = g.at(2 * i) == nat(2 * i + 1) && g.at(2 * i + 1) == 2 * f.at(i);
    }
    require_shape(c, edges, "edge shape (2i,2i+1), (2i+1,2f(i)) violated");
    return c;
  };
  return r;
}

}  // namespace

ReductionResult hz_to_exactly_one_zero(const FnHandle& f) {
  return hz_to_exactly_one_zero_impl(f, nullptr);
}
ReductionResult no_zeros_to_exactly_one_zero(const FnHandle& f) {
  return no_zeros_to_exactly_one_zero_impl(f, nullptr);
}
ReductionResult hz_to_exactly_k_zeros(const FnHandle& f, std::uint64_t k) {
  return hz_to_exactly_k_zeros_impl(f, k, nullptr);
}
ReductionResult no_zeros_to_exactly_k_zeros(const FnHandle& f, std::uint64_t k) {
  return no_zeros_to_exactly_k_zeros_impl(f, k, nullptr);
}
ReductionResult hz_to_at_least_k(const FnHandle& f, std::uint64_t k) {
  return hz_to_at_least_k_impl(f, k, nullptr);
}
ReductionResult hz_to_equal_next(const FnHandle& f) { return hz_to_equal_next_impl(f, nullptr); }
ReductionResult hz_to_nonzero_function(const FnHandle& f) {
  return hz_to_nonzero_function_impl(f, nullptr);
}
ReductionResult hz_to_equal_at_one_point(const FnHandle& f) {
  return hz_to_equal_at_one_point_impl(f, nullptr);
}
ReductionResult zero_fn_to_cod_k(const FnHandle& f, std::uint64_t k) {
  return zero_fn_to_cod_k_impl(f, k, nullptr);
}
ReductionResult not_zero_fn_to_cod_k(const FnHandle& f, std::uint64_t k) {
  return not_zero_fn_to_cod_k_impl(f, k, nullptr);
}
ReductionResult fin_zeros_to_fin_cod(const FnHandle& f) {
  return fin_zeros_to_fin_cod_impl(f, nullptr);
}
ReductionResult hz_to_not_injective(const FnHandle& f) {
  return hz_to_not_injective_impl(f, nullptr);
}
ReductionResult onto_to_bijective(const FnHandle& f) {
  return onto_to_bijective_impl(f, nullptr);
}
ReductionResult hz_to_zero_more(const FnHandle& f) { return hz_to_zero_more_impl(f, nullptr); }
ReductionResult ff_z2(const FnHandle& f) { return ff_z2_impl(f, nullptr); }
ReductionResult ff_graph(const FnHandle& f) { return ff_graph_impl(f, nullptr); }

FnHandle iterate(const FnHandle& f, std::uint64_t n) {
  require_unary(f, "iterate");
  if (n == 0) throw std::invalid_argument("iterate: n must be >= 1");
  FnHandle h;
  h.arity = 1;
  h.out_arity = 1;
  h.label = f.label + "^(" + std::to_string(n) + ")";
  h.eval = [f, n](const Tuple& args) {
    Nat v = args[0];
    for (std::uint64_t i = 0; i < n; ++i) v = f.at(v);
    return Tuple{v};
  };
  return h;
}

// ---------------------------------------------------------------------------
// constructions on a program index
// ---------------------------------------------------------------------------

namespace {

ReductionResult shp_to_has_zeros_impl(const ProgramIndex& e, const TargetTweak* tw) {
  ReductionResult r;
  r.spec = {"shp_to_has_zeros", "self_halting", "has_zeros", InstanceKind::ParRecIndex,
            TMode::AtMost, "the step-bounded halting detector of the self-applied program"};
  auto w = watcher_for(e, Tuple{e.e});
  FnHandle target = maybe_tweak(halting_detector(w, TMode::AtMost, "self_halt_detector"), tw);
  r.targets = {target};
  r.target_window = [](std::uint64_t b) { return b; };
  r.check = [w, target](std::uint64_t b) {
    auto s = w->halting_step(b);
    std::optional<std::uint64_t> first_zero;
    bool persists = true;
    for (std::uint64_t t = 0; t <= b; ++t) {
      bool z = target.at(t) == 0;
      if (z && !first_zero) first_zero = t;
      if (first_zero && !z) persists = false;
    }
    WindowCheck c = agree_check(s.has_value(), first_zero.has_value(),
                                "the self-run halts within the budget iff the detector has a zero");
    if (s) {
      require_shape(c, first_zero && *first_zero == *s, "first zero must be the halting step");
      require_shape(c, persists, "zeros must persist beyond the halting step");
    }
    return c;
  };
  return r;
}

ReductionResult fin_dom_to_fin_zeros_impl(const ProgramIndex& e, const TargetTweak* tw,
                                          bool complement) {
  ReductionResult r;
  r.spec = {complement ? std::string("fin_dom_to_almost_all_zeros")
                       : std::string("fin_dom_to_fin_zeros"),
            "finite_domain",
            complement ? std::string("almost_all_zeros") : std::string("finitely_many_zeros"),
            InstanceKind::ParRecIndex, TMode::Exactly,
            "pair-codes (argument, halting step); each halting argument contributes once"};
  auto fam = std::make_shared<SimFamily>(e);
  FnHandle target = native_unary(
      complement ? "halt_census_complement" : "halt_census", [fam, complement](const Nat& m) {
        auto [x, t] = unpair_nat(m);
        bool zero = fam->at(probe_u64(x)).halted_exactly_at(probe_u64(t));
        if (complement) return Nat(zero ? 1 : 0);
        return Nat(zero ? 0 : 1);
      });
  target = maybe_tweak(std::move(target), tw);
  r.targets = {target};
  constexpr std::uint64_t kGrid = 40;
  r.target_window = [](std::uint64_t) { return to_u64(pair_nat(nat(kGrid), nat(kGrid))); };
  r.check = [fam, target, complement](std::uint64_t) {
    std::uint64_t m_max = to_u64(pair_nat(nat(kGrid), nat(kGrid)));
    // Independent route: enumerate arguments and their halting steps.
    std::uint64_t census = 0;
    for (std::uint64_t x = 0; to_u64(pair_nat(nat(x), nat(0))) <= m_max; ++x) {
      std::uint64_t t_cap = 0;
      while (to_u64(pair_nat(nat(x), nat(t_cap + 1))) <= m_max) ++t_cap;
      auto s = fam->at(x).halting_step(t_cap);
      if (s && to_u64(pair_nat(nat(x), nat(*s))) <= m_max) ++census;
    }
    std::uint64_t hits = 0;
    for (std::uint64_t m = 0; m <= m_max; ++m) {
      Nat v = target.at(m);
      if (complement ? v != 0 : v == 0) ++hits;
    }
    WindowCheck c;
    c.lhs = fmt_count(census);
    c.rhs = fmt_count(hits);
    c.detail = complement
                   ? "nonzero count over the pair window equals the halting census"
                   : "zero count over the pair window equals the halting census";
    c.holds = census == hits;
    if (!c.holds) c.witness = "census mismatch";
    return c;
  };
  return r;
}

ReductionResult not_hp_to_equivalence_impl(const ProgramIndex& e, const Nat& x,
                                           const TargetTweak* tw) {
  ReductionResult r;
  r.spec = {"not_hp_to_equivalence", "not_halting", "equivalence", InstanceKind::ParRecIndex,
            TMode::Exactly, "h spikes to 1 at the exact halting step; pair (h, zero function)"};
  auto w = std::make_shared<HaltWatcher>(e, Tuple{x});
  FnHandle h = native_unary("halting_spike", [w](const Nat& t) {
    return Nat(w->halted_exactly_at(probe_u64(t)) ? 1 : 0);
  });
  h = maybe_tweak(std::move(h), tw);
  FnHandle zero = constant_fn(1, Nat(0));
  r.targets = {h, zero};
  r.target_window = [](std::uint64_t b) { return b; };
  r.check = [w, h, zero](std::uint64_t b) {
    bool lhs = !w->halting_step(b).has_value();
    bool rhs = equivalent_within(h, zero, b);
    WindowCheck c = agree_check(
        lhs, rhs, "the run stays alive through the budget iff h matches the zero function");
    if (auto s = w->halting_step(b)) {
      require_shape(c, h.at(*s) == 1, "h must spike at the halting step");
    }
    return c;
  };
  return r;
}

ReductionResult inf_dom_to_onto_impl(const ProgramIndex& e, const TargetTweak* tw) {
  ReductionResult r;
  r.spec = {"inf_dom_to_onto", "infinite_domain", "onto", InstanceKind::ParRecIndex,
            TMode::Exactly, "counts pair-coded halting events below the argument"};
  auto fam = std::make_shared<SimFamily>(e);
  struct Census {
    std::shared_ptr<SimFamily> fam;
    std::vector<std::uint64_t> cum{0};  // cum[n] = qualifying m < n
    std::uint64_t value_at(std::uint64_t n) {
      while (cum.size() <= n) {
        std::uint64_t m = cum.size() - 1;
        auto [x, t] = unpair_nat(nat(m));
        cum.push_back(cum.back() +
                      (fam->at(probe_u64(x)).halted_exactly_at(probe_u64(t)) ? 1 : 0));
      }
      return cum[n];
    }
  };
  auto census = std::make_shared<Census>();
  census->fam = fam;
  FnHandle target = native_unary("halt_counter", [census](const Nat& n) {
    return nat(census->value_at(probe_u64(n)));
  });
  target = maybe_tweak(std::move(target), tw);
  r.targets = {target};
  constexpr std::uint64_t kOntoWindow = 600;
  r.target_window = [](std::uint64_t) { return kOntoWindow; };
  r.check = [target](std::uint64_t) {
    WindowCheck c;
    c.detail = "the counter starts at 0, climbs by unit steps, and covers [0, f(W)]";
    bool shape = target.at(std::uint64_t{0}) == 0;
    Nat prev = target.at(std::uint64_t{0});
    for (std::uint64_t x = 1; x <= kOntoWindow && shape; ++x) {
      Nat cur = target.at(x);
      shape = cur >= prev && cur <= prev + 1;
      prev = cur;
    }
    bool onto = onto_initial_segment(target, kOntoWindow);
    c.lhs = "unit-step staircase";
    c.rhs = std::string("f(W)=") + target.at(kOntoWindow).get_str();
    c.holds = shape && onto;
    if (!shape) c.witness = "counter shape violated";
    else if (!onto) c.witness = "image is not an initial segment";
    return c;
  };
  return r;
}

ReductionResult total_to_zero_equivalence_impl(const ProgramIndex& e, bool as_zero_fn_row) {
  ReductionResult r;
  if (as_zero_fn_row) {
    r.spec = {"zero_fn_parrec", "total", "zero_function", InstanceKind::ParRecIndex,
              TMode::AtMost, "runs the instance and forces the output to 0"};
  } else {
    r.spec = {"total_to_zero_equivalence", "total", "equivalence_with_zero",
              InstanceKind::ParRecIndex, TMode::AtMost,
              "runs the instance and forces the output to 0"};
  }
  WhileProgram g = zeroed_program(e);
  r.parrec_target = g;
  auto fam = std::make_shared<SimFamily>(e);
  auto gp = std::make_shared<const WhileProgram>(std::move(g));
  r.target_window = [](std::uint64_t b) { return b + 1; };
  constexpr std::uint64_t kProbe = 24;
  r.check = [fam, gp](std::uint64_t b) {
    WindowCheck c;
    c.detail = "the zeroed program halts with 0 exactly where the instance halts";
    std::uint64_t agree = 0;
    for (std::uint64_t x = 0; x <= kProbe; ++x) {
      auto s = fam->at(x).halting_step(b);
      RunOutcome out = run_bounded(*gp, Tuple{nat(x)}, b + 1);
      bool ok = s.has_value() == out.halted();
      if (ok && s) {
        ok = out.output == 0 && out.at_step == *s + 1;
      }
      if (!ok) {
        c.witness = "divergence at x=" + std::to_string(x);
        c.lhs = b2s(s.has_value());
        c.rhs = b2s(out.halted());
        c.holds = false;
        return c;
      }
      ++agree;
    }
    c.lhs = c.rhs = fmt_count(agree) + " probes agree";
    c.holds = true;
    return c;
  };
  return r;
}

}  // namespace

ReductionResult shp_to_has_zeros(const ProgramIndex& e) { return shp_to_has_zeros_impl(e, nullptr); }
ReductionResult fin_dom_to_fin_zeros(const ProgramIndex& e) {
  return fin_dom_to_fin_zeros_impl(e, nullptr, /*complement=*/false);
}
ReductionResult fin_dom_to_almost_all_zeros(const ProgramIndex& e) {
  return fin_dom_to_fin_zeros_impl(e, nullptr, /*complement=*/true);
}
ReductionResult not_hp_to_equivalence(const ProgramIndex& e, const Nat& x) {
  return not_hp_to_equivalence_impl(e, x, nullptr);
}
ReductionResult inf_dom_to_onto(const ProgramIndex& e) { return inf_dom_to_onto_impl(e, nullptr); }
ReductionResult total_to_zero_equivalence(const ProgramIndex& e) {
  return total_to_zero_equivalence_impl(e, /*as_zero_fn_row=*/false);
}

// ---------------------------------------------------------------------------
// frontier constructions
// ---------------------------------------------------------------------------

namespace {

ReductionResult hp_to_hz_fg_impl(const ProgramIndex& e, const Tuple& xbar, const FnHandle& g,
                                 const TargetTweak* tw) {
  require_unary(g, "hp_to_hz_fg");
  ReductionResult r;
  r.spec = {"hp_to_hz_fg", "halting", "has_zeros_precomposed", InstanceKind::ParRecIndex,
            TMode::AtMost, "the detector is probed only at points g produces"};
  auto w = std::make_shared<HaltWatcher>(e, xbar);
  FnHandle target = maybe_tweak(halting_detector(w, TMode::AtMost, "halt_detector"), tw);
  r.targets = {target};
  constexpr std::uint64_t kScan = 512;
  r.target_window = [](std::uint64_t) { return kScan; };
  r.check = [w, target, g](std::uint64_t) {
    std::uint64_t reach = 0;
    bool rhs = false;
    for (std::uint64_t y = 0; y <= kScan; ++y) {
      Nat gy = g.at(y);
      reach = std::max(reach, probe_u64(gy));
      if (target.at(gy) == 0) rhs = true;
    }
    bool lhs = w->halting_step(reach).has_value();
    return agree_check(lhs, rhs,
                       "the run halts within the reach of g iff the detector vanishes on im(g)");
  };
  return r;
}

ReductionResult hz_to_hz_hf_impl(const FnHandle& f, const FnHandle& h,
                                 std::optional<std::pair<Nat, Nat>> witnesses,
                                 std::uint64_t search_budget, const TargetTweak* tw) {
  require_unary(f, "hz_to_hz_hf");
  require_unary(h, "hz_to_hz_hf");
  if (!witnesses) {
    SearchOutcome found = semidecide_zeromore(h, SearchBudget{search_budget, std::nullopt});
    if (!found.found) {
      throw std::runtime_error(
          "hz_to_hz_hf: no (a, b) with h(a)=0, h(b)!=0 within the search budget");
    }
    witnesses = std::make_pair(found.witness[0], found.witness[1]);
  }
  Nat a = witnesses->first, b = witnesses->second;
  if (h.at(a) != 0 || h.at(b) == 0) {
    throw std::invalid_argument("hz_to_hz_hf: witnesses do not satisfy h(a)=0, h(b)!=0");
  }
  ReductionResult r;
  r.spec = {"hz_to_hz_hf", "has_zeros", "has_zeros_postcomposed", InstanceKind::PrUnary,
            TMode::AtMost, "rewrites the instance to output a on zeros and b elsewhere"};
  FnHandle fprime = native_unary("witness_selector", [f, a, b](const Nat& x) {
    return f.at(x) == 0 ? a : b;
  });
  fprime = maybe_tweak(std::move(fprime), tw);
  r.targets = {fprime};
  r.target_window = [](std::uint64_t n) { return n; };
  r.check = [f, fprime, h](std::uint64_t n) {
    bool lhs = has_zero_within(f, n);
    bool rhs = false;
    bool pointwise = true;
    for (std::uint64_t x = 0; x <= n; ++x) {
      bool hz = h.at(fprime.at(x)) == 0;
      if (hz) rhs = true;
      pointwise = pointwise && hz == (f.at(x) == 0);
    }
    WindowCheck c =
        agree_check(lhs, rhs, "f has a zero in [0,N] iff h after f' has one there");
    require_shape(c, pointwise, "h(f'(x)) must vanish exactly on the zeros of f");
    return c;
  };
  return r;
}

ReductionResult hp_to_hz_hfg_impl(const ProgramIndex& e, const Tuple& xbar, const FnHandle& g,
                                  const FnHandle& h, const Nat& a, const Nat& b,
                                  const TargetTweak* tw) {
  require_unary(g, "hp_to_hz_hfg");
  require_unary(h, "hp_to_hz_hfg");
  if (h.at(a) != 0 || h.at(b) == 0) {
    throw std::invalid_argument("hp_to_hz_hfg: need h(a)=0 and h(b)!=0");
  }
  ReductionResult r;
  r.spec = {"hp_to_hz_hfg", "halting", "has_zeros_sandwiched", InstanceKind::ParRecIndex,
            TMode::AtMost, "detector output renamed through the h-witnesses, probed on im(g)"};
  auto w = std::make_shared<HaltWatcher>(e, xbar);
  FnHandle tprime = native_unary("renamed_detector", [w, a, b](const Nat& t) {
    return w->halted_by(probe_u64(t)) ? a : b;
  });
  tprime = maybe_tweak(std::move(tprime), tw);
  r.targets = {tprime};
  constexpr std::uint64_t kScan = 512;
  r.target_window = [](std::uint64_t) { return kScan; };
  r.check = [w, tprime, g, h](std::uint64_t) {
    std::uint64_t reach = 0;
    bool rhs = false;
    for (std::uint64_t t = 0; t <= kScan; ++t) {
      Nat gt = g.at(t);
      reach = std::max(reach, probe_u64(gt));
      if (h.at(tprime.at(gt)) == 0) rhs = true;
    }
    bool lhs = w->halting_step(reach).has_value();
    return agree_check(
        lhs, rhs, "the run halts within the reach of g iff h(T'(g(t))) vanishes somewhere");
  };
  return r;
}

}  // namespace

ReductionResult hp_to_hz_fg(const ProgramIndex& e, const Tuple& xbar, const FnHandle& g) {
  return hp_to_hz_fg_impl(e, xbar, g, nullptr);
}
ReductionResult hz_to_hz_hf(const FnHandle& f, const FnHandle& h,
                            std::optional<std::pair<Nat, Nat>> witnesses,
                            std::uint64_t search_budget) {
  return hz_to_hz_hf_impl(f, h, std::move(witnesses), search_budget, nullptr);
}
ReductionResult hp_to_hz_hfg(const ProgramIndex& e, const Tuple& xbar, const FnHandle& g,
                             const FnHandle& h, const Nat& a, const Nat& b) {
  return hp_to_hz_hfg_impl(e, xbar, g, h, a, b, nullptr);
}

// ---------------------------------------------------------------------------
// partial-target gadgets
// ---------------------------------------------------------------------------

namespace {

// Gadget programs that must self-apply a real index cannot build that index
// in-language within any practical fuel, so their targets are native partial
// functions with explicit run_bounded semantics.
ReductionResult gadget_f0_eq_0(const ProgramIndex& e) {
  ReductionResult r;
  r.spec = {"f0_eq_0", "self_halting", "value_at_zero_is_zero", InstanceKind::ParRecIndex,
            TMode::AtMost, "defined (with value 0) everywhere once the self-run halts"};
  auto w = watcher_for(e, Tuple{e.e});
  PartialFn pf;
  pf.arity = 1;
  pf.label = "self_run_then_zero";
  pf.run = [w](const Tuple&, std::uint64_t fuel) {
    RunOutcome out;
    if (fuel > 0) {
      if (auto s = w->halting_step(fuel - 1)) {
        out.status = RunOutcome::Status::Halted;
        out.output = 0;
        out.at_step = *s + 1;
        out.fuel_used = *s + 1;
        return out;
      }
    }
    out.fuel_used = fuel;
    return out;
  };
  r.partial_target = pf;
  r.target_window = [](std::uint64_t b) { return b; };
  r.check = [w, pf](std::uint64_t b) {
    bool lhs = w->halting_step(b > 0 ? b - 1 : 0).has_value();
    RunOutcome at0 = pf.run(Tuple{nat(0)}, b);
    RunOutcome at7 = pf.run(Tuple{nat(7)}, b);
    bool rhs = at0.halted() && at0.output == 0;
    WindowCheck c = agree_check(lhs, rhs, "g(0)=0 within the budget iff the self-run halts");
    require_shape(c, at0.halted() == at7.halted(), "g must behave uniformly in its argument");
    return c;
  };
  return r;
}

ReductionResult gadget_cod1_shp(const ProgramIndex& e) {
  ReductionResult r;
  r.spec = {"cod1_shp", "self_halting", "codomain_size_1", InstanceKind::ParRecIndex,
            TMode::AtMost, "defined on arguments at least the self-run halting step, value 0"};
  auto w = watcher_for(e, Tuple{e.e});
  PartialFn pf;
  pf.arity = 1;
  pf.label = "tail_of_self_run";
  pf.run = [w](const Tuple& args, std::uint64_t fuel) {
    std::uint64_t t = probe_u64(args[0]);
    RunOutcome out;
    if (fuel >= t + 1 && w->halted_by(t)) {
      out.status = RunOutcome::Status::Halted;
      out.output = 0;
      out.at_step = t + 1;
      out.fuel_used = t + 1;
      return out;
    }
    out.fuel_used = fuel;
    return out;
  };
  r.partial_target = pf;
  constexpr std::uint64_t kProbe = 64;
  r.target_window = [](std::uint64_t) { return kProbe; };
  r.check = [w, pf](std::uint64_t b) {
    bool lhs = w->halting_step(kProbe).has_value();
    std::set<Nat> cod;
    for (std::uint64_t t = 0; t <= kProbe; ++t) {
      RunOutcome out = pf.run(Tuple{nat(t)}, b);
      if (out.halted()) cod.insert(out.output);
    }
    bool rhs = cod.size() == 1;
    WindowCheck c = agree_check(
        lhs, rhs, "the self-run halts within the probe window iff the codomain is {0}");
    require_shape(c, cod.empty() || (*cod.begin() == 0 && cod.size() == 1),
                  "every defined value must be 0");
    return c;
  };
  return r;
}

ReductionResult gadget_cod1_not_shp(const ProgramIndex& e) {
  ReductionResult r;
  r.spec = {"cod1_not_shp", "not_self_halting", "codomain_size_1", InstanceKind::ParRecIndex,
            TMode::AtMost, "total: 0 until the self-run has halted, 1 afterwards"};
  auto w = watcher_for(e, Tuple{e.e});
  FnHandle f = native_unary("settled_indicator", [w](const Nat& t) {
    if (t == 0) return Nat(0);
    return Nat(w->halted_by(probe_u64(t)) ? 1 : 0);
  });
  r.targets = {f};
  constexpr std::uint64_t kProbe = 64;
  r.target_window = [](std::uint64_t) { return kProbe; };
  r.check = [w, f](std::uint64_t) {
    bool lhs = !w->halting_step(kProbe).has_value();
    bool rhs = codomain_within(f, kProbe).size() == 1;
    return agree_check(lhs, rhs,
                       "the self-run stays alive through the probe window iff |cod| = 1");
  };
  return r;
}

ReductionResult gadget_cod2_shp(const ProgramIndex& e) {
  ReductionResult r;
  r.spec = {"cod2_shp", "self_halting", "codomain_size_2", InstanceKind::ParRecIndex,
            TMode::AtMost, "total: 0 until the self-run halted by step t-1, then 1"};
  auto w = watcher_for(e, Tuple{e.e});
  FnHandle f = native_unary("delayed_indicator", [w](const Nat& t) {
    if (t == 0) return Nat(0);
    return Nat(w->halted_by(probe_u64(t) - 1) ? 1 : 0);
  });
  r.targets = {f};
  constexpr std::uint64_t kProbe = 64;
  r.target_window = [](std::uint64_t) { return kProbe; };
  r.check = [w, f](std::uint64_t) {
    bool lhs = w->halting_step(kProbe - 1).has_value();
    bool rhs = codomain_within(f, kProbe).size() == 2;
    return agree_check(lhs, rhs, "the self-run halts inside the probe window iff |cod| = 2");
  };
  return r;
}

ReductionResult gadget_cod2_not_shp(const ProgramIndex& e) {
  ReductionResult r;
  r.spec = {"cod2_not_shp", "not_self_halting", "codomain_size_2", InstanceKind::ParRecIndex,
            TMode::AtMost, "total: pins {0,1}, adds 2 only after the self-run halts"};
  auto w = watcher_for(e, Tuple{e.e});
  FnHandle f = native_unary("pinned_pair_indicator", [w](const Nat& t) {
    if (t == 0) return Nat(0);
    if (t == 1) return Nat(1);
    return Nat(w->halted_by(probe_u64(t) - 2) ? 2 : 0);
  });
  r.targets = {f};
  constexpr std::uint64_t kProbe = 64;
  r.target_window = [](std::uint64_t) { return kProbe; };
  r.check = [w, f](std::uint64_t) {
    bool lhs = !w->halting_step(kProbe - 2).has_value();
    bool rhs = codomain_within(f, kProbe).size() == 2;
    return agree_check(lhs, rhs,
                       "the self-run stays alive inside the probe window iff |cod| = 2");
  };
  return r;
}

ReductionResult gadget_eoz_parrec(const ProgramIndex& e, const ProgramIndex& e2) {
  ReductionResult r;
  r.spec = {"eoz_parrec", "equivalence", "exactly_one_zero", InstanceKind::ParRecPair,
            TMode::AtMost, "h(0)=0; h(n)=0 once a disagreement is witnessed within n steps"};
  auto f1 = std::make_shared<SimFamily>(e);
  auto f2 = std::make_shared<SimFamily>(e2);
  FnHandle h = native_unary("disagreement_monitor", [f1, f2](const Nat& n) {
    if (n == 0) return Nat(0);
    std::uint64_t nn = probe_u64(n);
    for (std::uint64_t x = 0; x <= nn; ++x) {
      auto s1 = f1->at(x).halting_step(nn);
      auto s2 = f2->at(x).halting_step(nn);
      if (s1 && s2 &&
          f1->at(x).output_if_halted_by(nn) != f2->at(x).output_if_halted_by(nn)) {
        return Nat(0);
      }
    }
    return Nat(1);
  });
  r.targets = {h};
  constexpr std::uint64_t kProbe = 192;
  r.target_window = [](std::uint64_t) { return kProbe; };
  r.check = [f1, f2, h](std::uint64_t) {
    // Independent route: the least n witnessing a disagreement.
    std::optional<std::uint64_t> witness_step;
    for (std::uint64_t x = 0; x <= kProbe; ++x) {
      auto s1 = f1->at(x).halting_step(kProbe);
      auto s2 = f2->at(x).halting_step(kProbe);
      if (s1 && s2 &&
          f1->at(x).output_if_halted_by(kProbe) != f2->at(x).output_if_halted_by(kProbe)) {
        std::uint64_t n = std::max({x, *s1, *s2});
        witness_step = witness_step ? std::min(*witness_step, n) : n;
      }
    }
    bool lhs = !witness_step.has_value();  // no disagreement witnessed: equal so far
    bool rhs = exactly_k_zeros(h, kProbe, 1);
    WindowCheck c = agree_check(
        lhs, rhs, "no disagreement is witnessed in the window iff h has exactly one zero");
    require_shape(c, h.at(std::uint64_t{0}) == 0, "h(0) must be 0");
    if (witness_step) {
      require_shape(c, h.at(*witness_step) == 0, "h must vanish at the witness step");
    }
    return c;
  };
  return r;
}

// g(0)=0; for n>=1, run the instance on n-1 and halt with 0 only when the
// result is 0, diverging otherwise. Built in-language around the inlined
// instance body.
WhileProgram build_inj_gadget(const ProgramIndex& e) {
  std::optional<WhileProgram> p = decode_program(e);
  if (!p || p->arity != 1) p = parse_while(canonical_diverger_text());
  // x2: (n==0), x3: run flag, x5/x6: predecessor scratch, x7: sign of result
  std::vector<Stmt> body;
  body.push_back(Stmt::inc(2));
  body.push_back(Stmt::loop(1, {Stmt::clear(2)}));
  body.push_back(Stmt::inc(3));
  body.push_back(Stmt::loop(2, {Stmt::clear(3)}));
  body.push_back(Stmt::loop(1, {Stmt::copy(5, 6), Stmt::inc(6)}));
  int shift = 8;
  std::vector<Stmt> run;
  run.push_back(Stmt::copy(shift + 1, 5));
  auto inlined = detail::shift_registers(p->body, shift);
  run.insert(run.end(), inlined.begin(), inlined.end());
  run.push_back(Stmt::clear(7));
  run.push_back(Stmt::loop(shift, {Stmt::clear(7), Stmt::inc(7)}));
  run.push_back(Stmt::while_(7, {Stmt::inc(7)}));
  run.push_back(Stmt::clear(0));
  body.push_back(Stmt::loop(3, std::move(run)));
  return WhileProgram{"inj_gadget", 1, std::move(body)};
}

ReductionResult gadget_inj_parrec(const ProgramIndex& e) {
  ReductionResult r;
  r.spec = {"inj_parrec", "has_zeros", "not_injective", InstanceKind::ParRecIndex,
            TMode::AtMost, "defined exactly on 0 and the successors of zeros of the instance"};
  auto fam = std::make_shared<SimFamily>(e);
  auto gadget = std::make_shared<const WhileProgram>(build_inj_gadget(e));
  r.parrec_target = *gadget;
  constexpr std::uint64_t kProbe = 16;
  r.target_window = [](std::uint64_t b) { return 2 * b; };
  r.check = [fam, gadget](std::uint64_t b) {
    WindowCheck c;
    c.detail = "the gadget halts (with 0) exactly on 0 and after zeros of the instance";
    for (std::uint64_t n = 0; n <= kProbe; ++n) {
      bool expected;
      if (n == 0) {
        expected = true;
      } else {
        auto s = fam->at(n - 1).halting_step(b);
        expected = s.has_value() && fam->at(n - 1).output_if_halted_by(b) == 0;
      }
      RunOutcome out = run_bounded(*gadget, Tuple{nat(n)}, 2 * b);
      bool ok = out.halted() == expected && (!out.halted() || out.output == 0);
      if (!ok) {
        c.lhs = b2s(expected);
        c.rhs = b2s(out.halted());
        c.holds = false;
        c.witness = "domain mismatch at n=" + std::to_string(n);
        return c;
      }
    }
    c.lhs = c.rhs = "domains agree";
    c.holds = true;
    return c;
  };
  return r;
}

}  // namespace

ReductionResult parrec_gadget(const std::string& name, const GadgetParams& params) {
  auto need_e = [&]() -> const ProgramIndex& {
    if (!params.e) throw std::invalid_argument("parrec_gadget: missing index parameter");
    return *params.e;
  };
  if (name == "f0_eq_0") return gadget_f0_eq_0(need_e());
  if (name == "cod1_shp") return gadget_cod1_shp(need_e());
  if (name == "cod1_not_shp") return gadget_cod1_not_shp(need_e());
  if (name == "cod2_shp") return gadget_cod2_shp(need_e());
  if (name == "cod2_not_shp") return gadget_cod2_not_shp(need_e());
  if (name == "inj_parrec") return gadget_inj_parrec(need_e());
  if (name == "zero_fn_parrec") return total_to_zero_equivalence_impl(need_e(), true);
  if (name == "eoz_parrec") {
    if (!params.e || !params.e2) {
      throw std::invalid_argument("parrec_gadget: eoz_parrec needs two indices");
    }
    return gadget_eoz_parrec(*params.e, *params.e2);
  }
  throw std::invalid_argument("parrec_gadget: unknown name '" + name + "'");
}

// ---------------------------------------------------------------------------
// catalogue
// ---------------------------------------------------------------------------

namespace {

FnHandle default_frontier_g() {
  return native_unary("odd_stretch", [](const Nat& y) { return Nat(2 * y + 1); });
}

FnHandle parity_fn() {
  return native_unary("parity", [](const Nat& x) {
    return Nat(mpz_odd_p(x.get_mpz_t()) ? 1 : 0);
  });
}

const FnHandle& need_f(const ReductionInput& in) {
  if (!in.f) throw std::invalid_argument("catalogue row needs a unary instance");
  return *in.f;
}

const ProgramIndex& need_e(const ReductionInput& in) {
  if (!in.e) throw std::invalid_argument("catalogue row needs a program index");
  return *in.e;
}

using TweakedBuilder =
    std::function<ReductionResult(const ReductionInput&, const TargetTweak*)>;

const std::map<std::string, TweakedBuilder>& builders() {
  static const std::map<std::string, TweakedBuilder> table = [] {
    std::map<std::string, TweakedBuilder> t;
    t["shp_to_has_zeros"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return shp_to_has_zeros_impl(need_e(in), tw);
    };
    t["hz_to_exactly_one_zero"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return hz_to_exactly_one_zero_impl(need_f(in), tw);
    };
    t["no_zeros_to_exactly_one_zero"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return no_zeros_to_exactly_one_zero_impl(need_f(in), tw);
    };
    t["hz_to_at_least_3"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return hz_to_at_least_k_impl(need_f(in), 3, tw);
    };
    t["hz_to_exactly_3_zeros"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return hz_to_exactly_k_zeros_impl(need_f(in), 3, tw);
    };
    t["no_zeros_to_exactly_3_zeros"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return no_zeros_to_exactly_k_zeros_impl(need_f(in), 3, tw);
    };
    t["hz_to_equal_next"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return hz_to_equal_next_impl(need_f(in), tw);
    };
    t["hz_to_nonzero_function"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return hz_to_nonzero_function_impl(need_f(in), tw);
    };
    t["hz_to_equal_at_one_point"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return hz_to_equal_at_one_point_impl(need_f(in), tw);
    };
    t["fin_dom_to_fin_zeros"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return fin_dom_to_fin_zeros_impl(need_e(in), tw, false);
    };
    t["fin_dom_to_almost_all_zeros"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return fin_dom_to_fin_zeros_impl(need_e(in), tw, true);
    };
    t["zero_fn_to_cod_1"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return zero_fn_to_cod_k_impl(need_f(in), 1, tw);
    };
    t["zero_fn_to_cod_3"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return zero_fn_to_cod_k_impl(need_f(in), 3, tw);
    };
    t["not_zero_fn_to_cod_3"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return not_zero_fn_to_cod_k_impl(need_f(in), 3, tw);
    };
    t["fin_zeros_to_fin_cod"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return fin_zeros_to_fin_cod_impl(need_f(in), tw);
    };
    t["not_hp_to_equivalence"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return not_hp_to_equivalence_impl(need_e(in), in.x, tw);
    };
    t["hz_to_not_injective"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return hz_to_not_injective_impl(need_f(in), tw);
    };
    t["inf_dom_to_onto"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return inf_dom_to_onto_impl(need_e(in), tw);
    };
    t["onto_to_bijective"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return onto_to_bijective_impl(need_f(in), tw);
    };
    t["total_to_zero_equivalence"] = [](const ReductionInput& in, const TargetTweak*) {
      return total_to_zero_equivalence_impl(need_e(in), false);
    };
    t["hz_to_zero_more"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return hz_to_zero_more_impl(need_f(in), tw);
    };
    t["ff_z2"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return ff_z2_impl(need_f(in), tw);
    };
    t["ff_graph"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return ff_graph_impl(need_f(in), tw);
    };
    t["hp_to_hz_fg"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return hp_to_hz_fg_impl(need_e(in), Tuple{in.x}, default_frontier_g(), tw);
    };
    t["hz_to_hz_hf"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return hz_to_hz_hf_impl(need_f(in), parity_fn(), std::nullopt, 4096, tw);
    };
    t["hp_to_hz_hfg"] = [](const ReductionInput& in, const TargetTweak* tw) {
      return hp_to_hz_hfg_impl(need_e(in), Tuple{in.x}, default_frontier_g(), parity_fn(),
                               Nat(0), Nat(1), tw);
    };
    for (const char* gadget : {"f0_eq_0", "cod1_shp", "cod1_not_shp", "cod2_shp",
                               "cod2_not_shp", "inj_parrec", "zero_fn_parrec"}) {
      t[gadget] = [name = std::string(gadget)](const ReductionInput& in, const TargetTweak*) {
        GadgetParams gp;
        gp.e = need_e(in);
        return parrec_gadget(name, gp);
      };
    }
    t["eoz_parrec"] = [](const ReductionInput& in, const TargetTweak*) {
      GadgetParams gp;
      gp.e = need_e(in);
      if (!in.e2) throw std::invalid_argument("eoz_parrec needs a second index");
      gp.e2 = in.e2;
      return parrec_gadget("eoz_parrec", gp);
    };
    return t;
  }();
  return table;
}

}  // namespace

namespace {

InstanceKind kind_of_id(const std::string& id) {
  static const std::map<std::string, InstanceKind> kinds = {
      {"shp_to_has_zeros", InstanceKind::ParRecIndex},
      {"hz_to_exactly_one_zero", InstanceKind::PrUnary},
      {"no_zeros_to_exactly_one_zero", InstanceKind::PrUnary},
      {"hz_to_exactly_3_zeros", InstanceKind::PrUnary},
      {"no_zeros_to_exactly_3_zeros", InstanceKind::PrUnary},
      {"hz_to_at_least_3", InstanceKind::PrUnary},
      {"hz_to_equal_next", InstanceKind::PrUnary},
      {"hz_to_nonzero_function", InstanceKind::PrUnary},
      {"hz_to_equal_at_one_point", InstanceKind::PrUnary},
      {"fin_dom_to_fin_zeros", InstanceKind::ParRecIndex},
      {"fin_dom_to_almost_all_zeros", InstanceKind::ParRecIndex},
      {"zero_fn_to_cod_1", InstanceKind::PrUnary},
      {"zero_fn_to_cod_3", InstanceKind::PrUnary},
      {"not_zero_fn_to_cod_3", InstanceKind::PrUnary},
      {"fin_zeros_to_fin_cod", InstanceKind::PrUnary},
      {"not_hp_to_equivalence", InstanceKind::ParRecIndex},
      {"hz_to_not_injective", InstanceKind::PrUnary},
      {"inf_dom_to_onto", InstanceKind::ParRecIndex},
      {"onto_to_bijective", InstanceKind::PrUnary},
      {"total_to_zero_equivalence", InstanceKind::ParRecIndex},
      {"hz_to_zero_more", InstanceKind::PrUnary},
      {"ff_z2", InstanceKind::PrUnary},
      {"ff_graph", InstanceKind::PrUnary},
      {"hp_to_hz_fg", InstanceKind::ParRecIndex},
      {"hz_to_hz_hf", InstanceKind::PrUnary},
      {"hp_to_hz_hfg", InstanceKind::ParRecIndex},
      {"f0_eq_0", InstanceKind::ParRecIndex},
      {"cod1_shp", InstanceKind::ParRecIndex},
      {"cod1_not_shp", InstanceKind::ParRecIndex},
      {"cod2_shp", InstanceKind::ParRecIndex},
      {"cod2_not_shp", InstanceKind::ParRecIndex},
      {"inj_parrec", InstanceKind::ParRecIndex},
      {"zero_fn_parrec", InstanceKind::ParRecIndex},
      {"eoz_parrec", InstanceKind::ParRecPair},
  };
  return kinds.at(id);
}

}  // namespace

const std::vector<CatalogueRow>& catalogue() {
  static const std::vector<CatalogueRow> rows = [] {
    std::vector<CatalogueRow> out;
    for (const auto& [id, builder] : builders()) {
      CatalogueRow row;
      row.spec.id = id;
      row.spec.kind = kind_of_id(id);
      row.build = [b = builder](const ReductionInput& in) { return b(in, nullptr); };
      out.push_back(std::move(row));
    }
    return out;
  }();
  return rows;
}

std::vector<std::string> catalogue_ids() {
  std::vector<std::string> ids;
  for (const CatalogueRow& row : catalogue()) ids.push_back(row.spec.id);
  return ids;
}

const CatalogueRow* find_row(const std::string& id) {
  for (const CatalogueRow& row : catalogue()) {
    if (row.spec.id == id) return &row;
  }
  return nullptr;
}

namespace detail {

ReductionResult build_with_target_tweak(const std::string& id, const ReductionInput& input,
                                        const TargetTweak& tweak) {
  auto it = builders().find(id);
  if (it == builders().end()) {
    throw std::invalid_argument("unknown catalogue id '" + id + "'");
  }
  return it->second(input, &tweak);
}

}  // namespace detail

}  // namespace prlab
