#include <prlab/fuel_vm.hpp>

namespace prlab {

WhileProgram parse_while(const std::string& text) {
  detail::ParsedProgram p = detail::parse_program_text(text, /*allow_while=*/true);
  return WhileProgram{std::move(p.name), p.arity, std::move(p.body)};
}

std::string print_while(const WhileProgram& p) {
  return detail::print_program_text(p.name, p.arity, p.body);
}

Validation validate_while(const WhileProgram& p) {
  Validation v = validate_loop(LoopProgram{p.name, p.arity, p.body});
  // The while construct is legal here.
  std::erase(v.violations, "while statement in a loop program");
  return v;
}

WhileProgram loop_to_while(const LoopProgram& p) {
  return WhileProgram{p.name, p.arity, p.body};
}

bool is_loop_only(const WhileProgram& p) { return !detail::contains_while(p.body); }

std::optional<LoopProgram> to_loop(const WhileProgram& p) {
  if (!is_loop_only(p)) return std::nullopt;
  return LoopProgram{p.name, p.arity, p.body};
}

Nat bytes_to_index(const std::string& bytes) {
  Nat e = 0;
  for (auto it = bytes.rbegin(); it != bytes.rend(); ++it) {
    e *= 256;
    e += static_cast<unsigned char>(*it) + 1;
  }
  return e;
}

std::string index_to_bytes(const Nat& e) {
  std::string bytes;
  Nat v = e;
  while (v > 0) {
    --v;
    Nat digit = v % 256;
    bytes.push_back(static_cast<char>(to_u64(digit)));
    v /= 256;
  }
  return bytes;
}

ProgramIndex encode_program(const WhileProgram& p) {
  return ProgramIndex{bytes_to_index(print_while(p))};
}

std::optional<WhileProgram> decode_program(const ProgramIndex& ix) {
  if (ix.e <= 0) return std::nullopt;
  std::string text = index_to_bytes(ix.e);
  try {
    return parse_while(text);
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

StepMachine::StepMachine(std::shared_ptr<const WhileProgram> prog, Tuple args)
    : prog_(std::move(prog)), regs_(std::move(args)) {
  regs_.insert(regs_.begin(), Nat(0));  // x0
  control_.push_back(Frame{Frame::Kind::Seq, &prog_->body, 0, nullptr, Nat(0)});
  settle();
}

StepMachine::StepMachine(const WhileProgram& prog, Tuple args)
    : StepMachine(std::make_shared<const WhileProgram>(prog), std::move(args)) {}

Nat& StepMachine::reg(int r) {
  if (r >= static_cast<int>(regs_.size())) regs_.resize(r + 1, Nat(0));
  return regs_[r];
}

// Pops exhausted sequences and dispatches pending loop iterations, none of
// which consume fuel. Stops at the next costed step or at the halt state.
void StepMachine::settle() {
  while (!control_.empty()) {
    Frame& top = control_.back();
    switch (top.kind) {
      case Frame::Kind::Seq:
        if (top.pos >= top.seq->size()) {
          control_.pop_back();
          continue;
        }
        return;  // a statement is pending
      case Frame::Kind::LoopCtl:
        if (top.remaining == 0) {
          control_.pop_back();
          continue;
        }
        --top.remaining;
        control_.push_back(Frame{Frame::Kind::Seq, &top.stmt->body, 0, nullptr, Nat(0)});
        continue;
      case Frame::Kind::WhileCtl:
        return;  // the guard re-test is a costed step
    }
  }
  halted_ = true;
}

bool StepMachine::step() {
  if (halted_) return false;
  Frame& top = control_.back();
  if (top.kind == Frame::Kind::WhileCtl) {
    const Stmt* s = top.stmt;
    ++steps_;
    if (reg(s->var) != 0) {
      control_.push_back(Frame{Frame::Kind::Seq, &s->body, 0, nullptr, Nat(0)});
    } else {
      control_.pop_back();
    }
    settle();
    return true;
  }
  const Stmt& s = (*top.seq)[top.pos++];
  switch (s.kind) {
    case StmtKind::Clear:
      reg(s.var) = 0;
      ++steps_;
      break;
    case StmtKind::Copy: {
      Nat v = reg(s.src);  // reg() may grow the register file
      reg(s.var) = std::move(v);
      ++steps_;
      break;
    }
    case StmtKind::Inc:
      ++reg(s.var);
      ++steps_;
      break;
    case StmtKind::Loop: {
      ++steps_;
      Nat count = reg(s.var);  // latched at entry
      control_.push_back(Frame{Frame::Kind::LoopCtl, nullptr, 0, &s, std::move(count)});
      break;
    }
    case StmtKind::While: {
      ++steps_;
      if (reg(s.var) != 0) {
        control_.push_back(Frame{Frame::Kind::WhileCtl, nullptr, 0, &s, Nat(0)});
        control_.push_back(Frame{Frame::Kind::Seq, &s.body, 0, nullptr, Nat(0)});
      }
      break;
    }
  }
  settle();
  return true;
}

std::uint64_t StepMachine::state_digest() const {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(steps_);
  for (const Nat& r : regs_) {
    mix(mpz_sizeinbase(r.get_mpz_t(), 2));
    mix(mpz_get_ui(r.get_mpz_t()));
  }
  for (const Frame& f : control_) {
    mix(static_cast<std::uint64_t>(f.kind));
    mix(f.pos);
  }
  return h;
}

RunOutcome run_bounded(const WhileProgram& p, const Tuple& args, std::uint64_t fuel) {
  if (static_cast<int>(args.size()) != p.arity) {
    RunOutcome out;  // arity mismatch behaves as divergence
    out.fuel_used = fuel;
    return out;
  }
  StepMachine m(p, args);
  while (!m.halted() && m.steps_done() < fuel) m.step();
  RunOutcome out;
  if (m.halted()) {
    out.status = RunOutcome::Status::Halted;
    out.output = m.output();
    out.at_step = m.steps_done();
    out.fuel_used = m.steps_done();
  } else {
    out.status = RunOutcome::Status::StillRunning;
    out.fuel_used = fuel;
    out.state_digest = m.state_digest();
  }
  return out;
}

RunOutcome run_bounded(const ProgramIndex& ix, const Tuple& args, std::uint64_t fuel) {
  std::optional<WhileProgram> p = decode_program(ix);
  if (!p) {
    RunOutcome out;
    out.fuel_used = fuel;
    return out;
  }
  return run_bounded(*p, args, fuel);
}

int t_predicate(const WhileProgram& p, const Tuple& x, std::uint64_t t, TMode mode) {
  HaltWatcher w(p, x);
  return mode == TMode::AtMost ? (w.halted_by(t) ? 0 : 1)
                               : (w.halted_exactly_at(t) ? 0 : 1);
}

int t_predicate(const ProgramIndex& ix, const Tuple& x, std::uint64_t t, TMode mode) {
  HaltWatcher w(ix, x);
  return mode == TMode::AtMost ? (w.halted_by(t) ? 0 : 1)
                               : (w.halted_exactly_at(t) ? 0 : 1);
}

Nat u_extract(const WhileProgram& p, const Tuple& x, std::uint64_t t) {
  HaltWatcher w(p, x);
  return w.output_if_halted_by(t);
}

Nat u_extract(const ProgramIndex& ix, const Tuple& x, std::uint64_t t) {
  HaltWatcher w(ix, x);
  return w.output_if_halted_by(t);
}

HaltWatcher::HaltWatcher() = default;

HaltWatcher::HaltWatcher(std::shared_ptr<const WhileProgram> prog, Tuple args) {
  if (prog && static_cast<int>(args.size()) == prog->arity) {
    machine_.emplace(std::move(prog), std::move(args));
  }
}

HaltWatcher::HaltWatcher(const WhileProgram& prog, Tuple args)
    : HaltWatcher(std::make_shared<const WhileProgram>(prog), std::move(args)) {}

HaltWatcher::HaltWatcher(const ProgramIndex& ix, Tuple args) {
  std::optional<WhileProgram> p = decode_program(ix);
  if (p && static_cast<int>(args.size()) == p->arity) {
    machine_.emplace(std::make_shared<const WhileProgram>(std::move(*p)), std::move(args));
  }
}

void HaltWatcher::advance_to(std::uint64_t t) {
  if (!machine_) return;
  while (!machine_->halted() && machine_->steps_done() < t) machine_->step();
}

bool HaltWatcher::halted_by(std::uint64_t t) {
  if (!machine_) return false;
  advance_to(t);
  return machine_->halted() && machine_->steps_done() <= t;
}

bool HaltWatcher::halted_exactly_at(std::uint64_t t) {
  return halted_by(t) && machine_->steps_done() == t;
}

std::optional<std::uint64_t> HaltWatcher::halting_step(std::uint64_t cap) {
  if (!halted_by(cap)) return std::nullopt;
  return machine_->steps_done();
}

Nat HaltWatcher::output_if_halted_by(std::uint64_t t) {
  if (!halted_by(t)) return Nat(0);
  return machine_->output();
}

}  // namespace prlab
