#include <prlab/dovetail.hpp>

#include <stdexcept>

namespace prlab {

SchedulePoint dovetail_schedule(std::uint64_t global_step) {
  if (global_step == 0) throw std::invalid_argument("dovetail_schedule: steps start at 1");
  // Rounds have lengths 1, 2, 3, ...; round r covers global steps
  // (r-1)r/2 + 1 .. r(r+1)/2 and visits (1, r), (2, r-1), ..., (r, 1).
  std::uint64_t r = 1;
  std::uint64_t base = 0;  // steps before round r
  while (base + r < global_step) {
    base += r;
    ++r;
  }
  std::uint64_t j = global_step - base;  // 1-based position inside the round
  return SchedulePoint{j, r - j + 1};
}

SearchOutcome semidecide_haszeros(const FnHandle& f, const SearchBudget& budget) {
  if (f.arity != 1) throw std::invalid_argument("semidecide_haszeros: f must be unary");
  SearchOutcome out;
  out.budget = budget;
  for (std::uint64_t x = 0; x < budget.max_global_steps; ++x) {
    if (f.at(x) == 0) {
      out.found = true;
      out.witness = {nat(x)};
      out.global_step = x + 1;
      return out;
    }
  }
  return out;
}

SearchOutcome semidecide_zeromore(const FnHandle& h, const SearchBudget& budget) {
  if (h.arity != 1) throw std::invalid_argument("semidecide_zeromore: h must be unary");
  SearchOutcome out;
  out.budget = budget;
  std::optional<Nat> zero_at, nonzero_at;
  for (std::uint64_t x = 0; x < budget.max_global_steps; ++x) {
    if (h.at(x) == 0) {
      if (!zero_at) zero_at = nat(x);
    } else if (!nonzero_at) {
      nonzero_at = nat(x);
    }
    if (zero_at && nonzero_at) {
      out.found = true;
      out.witness = {*zero_at, *nonzero_at};
      out.global_step = x + 1;
      return out;
    }
  }
  return out;
}

std::vector<HaltEmission> semidecide_halt_family(const std::vector<ProgramIndex>& indices,
                                                 const Tuple& args,
                                                 const SearchBudget& budget) {
  std::vector<std::optional<StepMachine>> machines;
  machines.reserve(indices.size());
  for (const ProgramIndex& ix : indices) {
    std::optional<WhileProgram> p = decode_program(ix);
    if (p && static_cast<int>(args.size()) == p->arity) {
      machines.emplace_back(StepMachine(*p, args));
    } else {
      machines.emplace_back(std::nullopt);  // treated as diverging
    }
  }
  std::vector<bool> emitted(machines.size(), false);
  std::vector<HaltEmission> out;
  for (std::uint64_t k = 1; k <= budget.max_global_steps; ++k) {
    SchedulePoint sp = dovetail_schedule(k);
    if (sp.machine > machines.size()) continue;
    if (budget.per_machine_cap && sp.machine_step > *budget.per_machine_cap) continue;
    auto& m = machines[sp.machine - 1];
    if (!m || emitted[sp.machine - 1]) continue;
    if (!m->halted()) m->step();
    if (m->halted()) {
      emitted[sp.machine - 1] = true;
      out.push_back(HaltEmission{sp.machine, m->steps_done(), k, m->output()});
    }
  }
  return out;
}

Decision decide_hz_fg_finite(const FnHandle& f, const std::vector<Nat>& cod_listing) {
  if (f.arity != 1) throw std::invalid_argument("decide_hz_fg_finite: f must be unary");
  for (const Nat& y : cod_listing) {
    if (f.at(y) == 0) return Decision::Yes;
  }
  return Decision::No;
}

Decision decide_hz_hf_trivial(HClass h_class) {
  switch (h_class) {
    case HClass::AlwaysZeroOnRange:
      return Decision::Yes;
    case HClass::NeverZeroOnRange:
      return Decision::No;
    case HClass::Mixed:
      return Decision::Undecided;
  }
  return Decision::Undecided;
}

std::uint64_t count_zeros(const FnHandle& f, std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t x = 0; x <= n; ++x) {
    if (f.at(x) == 0) ++c;
  }
  return c;
}

bool has_zero_within(const FnHandle& f, std::uint64_t n) {
  for (std::uint64_t x = 0; x <= n; ++x) {
    if (f.at(x) == 0) return true;
  }
  return false;
}

bool exactly_k_zeros(const FnHandle& f, std::uint64_t n, std::uint64_t k) {
  return count_zeros(f, n) == k;
}

bool injective_within(const FnHandle& f, std::uint64_t n) {
  std::set<Nat> seen;
  for (std::uint64_t x = 0; x <= n; ++x) {
    if (!seen.insert(f.at(x)).second) return false;
  }
  return true;
}

std::set<Nat> codomain_within(const FnHandle& f, std::uint64_t n) {
  std::set<Nat> out;
  for (std::uint64_t x = 0; x <= n; ++x) out.insert(f.at(x));
  return out;
}

bool equal_next_within(const FnHandle& f, std::uint64_t n) {
  Nat prev = f.at(std::uint64_t{0});
  for (std::uint64_t x = 1; x <= n + 1; ++x) {
    Nat cur = f.at(x);
    if (cur == prev) return true;
    prev = cur;
  }
  return false;
}

bool equivalent_within(const FnHandle& f, const FnHandle& g, std::uint64_t n) {
  for (std::uint64_t x = 0; x <= n; ++x) {
    if (f.at(x) != g.at(x)) return false;
  }
  return true;
}

bool onto_initial_segment(const FnHandle& f, std::uint64_t n) {
  std::set<Nat> image = codomain_within(f, n);
  Nat top = f.at(n);
  if (!fits_u64(top)) return false;
  std::uint64_t k = to_u64(top);
  if (image.size() != k + 1) return false;
  for (std::uint64_t v = 0; v <= k; ++v) {
    if (!image.count(nat(v))) return false;
  }
  return true;
}

}  // namespace prlab
