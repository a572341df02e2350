#include <prlab/pr_algebra.hpp>

#include <map>
#include <stdexcept>

namespace prlab {

Nat pair_nat(const Nat& x, const Nat& y) {
  Nat s = x + y;
  return s * (s + 1) / 2 + y;
}

std::pair<Nat, Nat> unpair_nat(const Nat& z) {
  // s = floor((sqrt(8z+1) - 1) / 2) recovers the diagonal.
  Nat d = 8 * z + 1;
  Nat r;
  mpz_sqrt(r.get_mpz_t(), d.get_mpz_t());
  Nat s = (r - 1) / 2;
  Nat base = s * (s + 1) / 2;
  Nat y = z - base;
  Nat x = s - y;
  return {x, y};
}

Nat tuple_encode(const Tuple& xs) {
  if (xs.empty()) throw std::invalid_argument("tuple_encode: empty tuple");
  Nat acc = xs.back();
  for (auto it = xs.rbegin() + 1; it != xs.rend(); ++it) {
    acc = pair_nat(*it, acc);
  }
  return acc;
}

Tuple tuple_decode(const Nat& z, int n) {
  if (n < 1) throw std::invalid_argument("tuple_decode: n must be >= 1");
  Tuple out;
  Nat rest = z;
  for (int i = 0; i < n - 1; ++i) {
    auto [x, y] = unpair_nat(rest);
    out.push_back(x);
    rest = y;
  }
  out.push_back(rest);
  return out;
}

Tuple FnHandle::operator()(const Tuple& args) const {
  if (static_cast<int>(args.size()) != arity) {
    throw std::invalid_argument("FnHandle '" + label + "': expected " +
                                std::to_string(arity) + " arguments, got " +
                                std::to_string(args.size()));
  }
  Tuple out = eval(args);
  if (static_cast<int>(out.size()) != out_arity) {
    throw std::logic_error("FnHandle '" + label + "': evaluator produced " +
                           std::to_string(out.size()) + " outputs, declared " +
                           std::to_string(out_arity));
  }
  return out;
}

Nat FnHandle::at(const Nat& x) const { return (*this)(Tuple{x})[0]; }
Nat FnHandle::at(std::uint64_t x) const { return at(nat(x)); }
Nat FnHandle::at2(const Nat& x, const Nat& y) const { return (*this)(Tuple{x, y})[0]; }

FnHandle from_loop(LoopProgram p) {
  auto src = std::make_shared<const LoopProgram>(std::move(p));
  FnHandle h;
  h.arity = src->arity;
  h.out_arity = 1;
  h.label = src->name;
  h.source = src;
  h.provenance = Provenance::Loop;
  h.eval = [src](const Tuple& args) { return Tuple{eval_loop(*src, args).value}; };
  return h;
}

FnHandle native_unary(std::string label, std::function<Nat(const Nat&)> f) {
  FnHandle h;
  h.arity = 1;
  h.out_arity = 1;
  h.label = std::move(label);
  h.eval = [f = std::move(f)](const Tuple& args) { return Tuple{f(args[0])}; };
  return h;
}

FnHandle native_fn(std::string label, int arity, int out_arity,
                   std::function<Tuple(const Tuple&)> f) {
  FnHandle h;
  h.arity = arity;
  h.out_arity = out_arity;
  h.label = std::move(label);
  h.eval = std::move(f);
  return h;
}

FnHandle constant_fn(int arity, Nat value) {
  FnHandle h;
  h.arity = arity;
  h.out_arity = 1;
  h.label = "const_" + value.get_str();
  h.eval = [value](const Tuple&) { return Tuple{value}; };
  return h;
}

FnHandle projection_fn(int arity, int index) {
  if (index < 1 || index > arity) throw std::invalid_argument("projection_fn: bad index");
  FnHandle h;
  h.arity = arity;
  h.out_arity = 1;
  h.label = "proj_" + std::to_string(index) + "_of_" + std::to_string(arity);
  h.eval = [index](const Tuple& args) { return Tuple{args[index - 1]}; };
  return h;
}

FnHandle identity_fn() { return projection_fn(1, 1); }

FnHandle successor_fn() {
  return native_unary("succ", [](const Nat& x) { return Nat(x + 1); });
}

FnHandle table_fn(std::string label, std::vector<Nat> values,
                  std::function<Nat(const Nat&)> beyond) {
  FnHandle h;
  h.arity = 1;
  h.out_arity = 1;
  h.label = std::move(label);
  h.eval = [values = std::move(values), beyond = std::move(beyond)](const Tuple& args) {
    const Nat& x = args[0];
    if (x < static_cast<unsigned long>(values.size())) {
      return Tuple{values[to_u64(x)]};
    }
    return Tuple{beyond(x)};
  };
  return h;
}

FnHandle memoized_unary(const FnHandle& f) {
  if (f.arity != 1 || f.out_arity != 1) {
    throw std::invalid_argument("memoized_unary: handle must be unary");
  }
  FnHandle h = f;
  auto cache = std::make_shared<std::map<Nat, Nat>>();
  h.eval = [inner = f.eval, cache](const Tuple& args) {
    auto it = cache->find(args[0]);
    if (it != cache->end()) return Tuple{it->second};
    Tuple out = inner(args);
    cache->emplace(args[0], out[0]);
    return out;
  };
  return h;
}

namespace {

// Appends `count` inc statements on register `reg`.
void emit_constant(std::vector<Stmt>& out, int reg, const Nat& value) {
  for (Nat i = 0; i < value; ++i) out.push_back(Stmt::inc(reg));
}

constexpr unsigned long kMaxInlineConstant = 1ul << 20;

}  // namespace

FnHandle compose(const FnHandle& outer, const std::vector<FnHandle>& inners) {
  if (inners.empty()) throw std::invalid_argument("compose: no inner functions");
  int total_out = 0;
  int in_arity = inners.front().arity;
  for (const FnHandle& g : inners) {
    total_out += g.out_arity;
    if (g.arity != in_arity) {
      throw std::invalid_argument("compose: inner functions must share one input arity");
    }
  }
  if (total_out != outer.arity) {
    throw std::invalid_argument("compose: inner output arities must sum to the outer arity");
  }

  FnHandle h;
  h.arity = in_arity;
  h.out_arity = outer.out_arity;
  h.label = outer.label + "_compose";
  h.eval = [outer, inners](const Tuple& args) {
    Tuple mid;
    for (const FnHandle& g : inners) {
      Tuple part = g(args);
      mid.insert(mid.end(), part.begin(), part.end());
    }
    return outer(mid);
  };

  bool fusable = outer.source != nullptr;
  for (const FnHandle& g : inners) fusable = fusable && g.source != nullptr && g.out_arity == 1;
  if (fusable) {
    // Inline every program into a fresh register region; regions are only
    // written after being copied into, so scratch registers start at 0.
    std::vector<Stmt> body;
    int next_free = in_arity + 1;
    std::vector<int> inner_out;
    for (const FnHandle& g : inners) {
      const LoopProgram& gp = *g.source;
      int base = next_free;
      next_free = base + std::max(max_register(gp.body), gp.arity) + 1;
      for (int j = 1; j <= gp.arity; ++j) body.push_back(Stmt::copy(base + j, j));
      auto shifted = detail::shift_registers(gp.body, base);
      body.insert(body.end(), shifted.begin(), shifted.end());
      inner_out.push_back(base);
    }
    const LoopProgram& op = *outer.source;
    int base = next_free;
    for (int j = 1; j <= op.arity; ++j) body.push_back(Stmt::copy(base + j, inner_out[j - 1]));
    auto shifted = detail::shift_registers(op.body, base);
    body.insert(body.end(), shifted.begin(), shifted.end());
    body.push_back(Stmt::copy(0, base));
    std::string name = op.name + "_fused";
    LoopProgram fused{std::move(name), in_arity, std::move(body)};
    h.source = std::make_shared<const LoopProgram>(std::move(fused));
    h.provenance = Provenance::Loop;
  }
  return h;
}

FnHandle smn_specialize(const FnHandle& f, const Tuple& fixed_prefix) {
  int j = static_cast<int>(fixed_prefix.size());
  if (j >= f.arity) {
    throw std::invalid_argument("smn_specialize: prefix must be shorter than the arity");
  }
  FnHandle h;
  h.arity = f.arity - j;
  h.out_arity = f.out_arity;
  h.label = f.label + "[" + std::to_string(j) + " fixed]";
  h.eval = [f, fixed_prefix](const Tuple& args) {
    Tuple full = fixed_prefix;
    full.insert(full.end(), args.begin(), args.end());
    return f(full);
  };

  if (f.source) {
    bool emittable = true;
    for (const Nat& c : fixed_prefix) {
      if (!fits_u64(c) || to_u64(c) > kMaxInlineConstant) emittable = false;
    }
    if (emittable) {
      const LoopProgram& fp = *f.source;
      int base = h.arity + 1;
      std::vector<Stmt> body;
      for (int i = 0; i < j; ++i) emit_constant(body, base + 1 + i, fixed_prefix[i]);
      for (int i = 1; i <= h.arity; ++i) body.push_back(Stmt::copy(base + j + i, i));
      auto shifted = detail::shift_registers(fp.body, base);
      body.insert(body.end(), shifted.begin(), shifted.end());
      body.push_back(Stmt::copy(0, base));
      LoopProgram spec{fp.name + "_spec", h.arity, std::move(body)};
      h.source = std::make_shared<const LoopProgram>(std::move(spec));
      h.provenance = Provenance::Loop;
    }
  }
  return h;
}

FnHandle prefix_sum(const FnHandle& f) {
  if (f.arity != 1 || f.out_arity != 1) {
    throw std::invalid_argument("prefix_sum: handle must be unary");
  }
  FnHandle h;
  h.arity = 1;
  h.out_arity = 1;
  h.label = "prefix_sum(" + f.label + ")";
  h.eval = [f](const Tuple& args) {
    if (!fits_u64(args[0])) {
      throw std::invalid_argument("prefix_sum: argument too large to sum");
    }
    std::uint64_t x = to_u64(args[0]);
    Nat acc = 0;
    for (std::uint64_t i = 0; i < x; ++i) acc += f.at(i);
    return Tuple{acc};
  };
  return h;
}

FnHandle pair_fn() {
  return native_fn("pair", 2, 1,
                   [](const Tuple& a) { return Tuple{pair_nat(a[0], a[1])}; });
}

FnHandle monus_fn() {
  return native_fn("monus", 2, 1, [](const Tuple& a) { return Tuple{monus(a[0], a[1])}; });
}

FnHandle eq_indicator_fn() {
  return native_fn("eq_indicator", 2, 1,
                   [](const Tuple& a) { return Tuple{eq_indicator(a[0], a[1])}; });
}

}  // namespace prlab
