#include <prlab/loop_lang.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

namespace prlab {

bool operator==(const Stmt& a, const Stmt& b) {
  return a.kind == b.kind && a.var == b.var &&
         (a.kind != StmtKind::Copy || a.src == b.src) && a.body == b.body;
}

namespace {

constexpr int kMaxRegisterIndex = 1 << 20;

enum class Tok { Fn, Clear, Inc, Loop, While, Ident, Var, Nat, LParen, RParen, LBrace, RBrace, Eq, End };

struct Token {
  Tok kind;
  std::string text;
  std::uint64_t value = 0;  // Nat / Var index
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      bump();
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= text_.size()) {
      tok_.kind = Tok::End;
      tok_.text.clear();
      return;
    }
    char c = text_[pos_];
    if (c == '(') { single(Tok::LParen); return; }
    if (c == ')') { single(Tok::RParen); return; }
    if (c == '{') { single(Tok::LBrace); return; }
    if (c == '}') { single(Tok::RBrace); return; }
    if (c == '=') { single(Tok::Eq); return; }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        num.push_back(text_[pos_]);
        bump();
      }
      tok_.kind = Tok::Nat;
      tok_.text = num;
      tok_.value = parse_nat(num);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        word.push_back(text_[pos_]);
        bump();
      }
      tok_.text = word;
      if (word == "fn") tok_.kind = Tok::Fn;
      else if (word == "clear") tok_.kind = Tok::Clear;
      else if (word == "inc") tok_.kind = Tok::Inc;
      else if (word == "loop") tok_.kind = Tok::Loop;
      else if (word == "while") tok_.kind = Tok::While;
      else if (is_var(word)) {
        tok_.kind = Tok::Var;
        tok_.value = parse_nat(word.substr(1));
      } else {
        tok_.kind = Tok::Ident;
      }
      return;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", line_, col_);
  }

  void single(Tok k) {
    tok_.kind = k;
    tok_.text = std::string(1, text_[pos_]);
    bump();
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  static bool is_var(const std::string& w) {
    if (w.size() < 2 || w[0] != 'x') return false;
    return std::all_of(w.begin() + 1, w.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  }

  std::uint64_t parse_nat(const std::string& digits) const {
    if (digits.size() > 19) {
      throw ParseError("number literal too large", line_, col_);
    }
    return std::stoull(digits);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& text, bool allow_while) : lex_(text), allow_while_(allow_while) {}

  detail::ParsedProgram parse() {
    expect(Tok::Fn, "expected 'fn'");
    Token name = lex_.take();
    if (name.kind == Tok::Var) {
      throw ParseError("program name must not look like a register", name.line, name.col);
    }
    if (name.kind != Tok::Ident) {
      throw ParseError("expected program name", name.line, name.col);
    }
    expect(Tok::LParen, "expected '('");
    Token ar = lex_.take();
    if (ar.kind != Tok::Nat) {
      throw ParseError("expected arity", ar.line, ar.col);
    }
    if (ar.value > kMaxRegisterIndex) {
      throw ParseError("arity declaration out of range", ar.line, ar.col);
    }
    expect(Tok::RParen, "expected ')'");
    expect(Tok::LBrace, "expected '{'");
    detail::ParsedProgram p;
    p.name = name.text;
    p.arity = static_cast<int>(ar.value);
    p.body = parse_block();
    Token end = lex_.take();
    if (end.kind != Tok::End) {
      throw ParseError("trailing input after program", end.line, end.col);
    }
    return p;
  }

 private:
  std::vector<Stmt> parse_block() {
    std::vector<Stmt> stmts;
    for (;;) {
      const Token& t = lex_.peek();
      switch (t.kind) {
        case Tok::RBrace:
          lex_.take();
          return stmts;
        case Tok::Clear: {
          lex_.take();
          stmts.push_back(Stmt::clear(parse_var()));
          break;
        }
        case Tok::Inc: {
          lex_.take();
          stmts.push_back(Stmt::inc(parse_var()));
          break;
        }
        case Tok::Var: {
          int dst = parse_var();
          expect(Tok::Eq, "expected '=' in copy statement");
          stmts.push_back(Stmt::copy(dst, parse_var()));
          break;
        }
        case Tok::Loop: {
          lex_.take();
          int guard = parse_var();
          expect(Tok::LBrace, "expected '{' after loop");
          stmts.push_back(Stmt::loop(guard, parse_block()));
          break;
        }
        case Tok::While: {
          Token w = lex_.take();
          if (!allow_while_) {
            throw ParseError("'while' is not part of the loop language", w.line, w.col);
          }
          int guard = parse_var();
          expect(Tok::LBrace, "expected '{' after while");
          stmts.push_back(Stmt::while_(guard, parse_block()));
          break;
        }
        case Tok::End:
          throw ParseError("unexpected end of input, missing '}'", t.line, t.col);
        default:
          throw ParseError("unexpected token '" + t.text + "'", t.line, t.col);
      }
    }
  }

  int parse_var() {
    Token t = lex_.take();
    if (t.kind != Tok::Var) {
      throw ParseError("expected register (xN)", t.line, t.col);
    }
    if (t.value > kMaxRegisterIndex) {
      throw ParseError("register index out of range", t.line, t.col);
    }
    return static_cast<int>(t.value);
  }

  void expect(Tok k, const char* msg) {
    Token t = lex_.take();
    if (t.kind != k) throw ParseError(msg, t.line, t.col);
  }

  Lexer lex_;
  bool allow_while_;
};

void print_block(std::ostringstream& out, const std::vector<Stmt>& body, int depth) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  for (const Stmt& s : body) {
    switch (s.kind) {
      case StmtKind::Clear:
        out << pad << "clear x" << s.var << '\n';
        break;
      case StmtKind::Copy:
        out << pad << 'x' << s.var << " = x" << s.src << '\n';
        break;
      case StmtKind::Inc:
        out << pad << "inc x" << s.var << '\n';
        break;
      case StmtKind::Loop:
      case StmtKind::While:
        out << pad << (s.kind == StmtKind::Loop ? "loop" : "while") << " x" << s.var << " {\n";
        print_block(out, s.body, depth + 1);
        out << pad << "}\n";
        break;
    }
  }
}

struct RegisterSet {
  std::vector<bool> bits;
  bool test(int r) const { return r < static_cast<int>(bits.size()) && bits[r]; }
  void set(int r) {
    if (r >= static_cast<int>(bits.size())) bits.resize(r + 1, false);
    bits[r] = true;
  }
};

void scan_free_reads(const std::vector<Stmt>& body, RegisterSet& written,
                     RegisterSet& free_reads) {
  auto note_read = [&](int r) {
    if (!written.test(r)) free_reads.set(r);
  };
  for (const Stmt& s : body) {
    switch (s.kind) {
      case StmtKind::Clear:
        written.set(s.var);
        break;
      case StmtKind::Copy:
        note_read(s.src);
        written.set(s.var);
        break;
      case StmtKind::Inc:
        // incrementing a fresh register is the usual constant idiom, not an
        // input-like read
        written.set(s.var);
        break;
      case StmtKind::Loop:
      case StmtKind::While:
        note_read(s.var);
        scan_free_reads(s.body, written, free_reads);
        break;
    }
  }
}

class LoopEvaluator {
 public:
  explicit LoopEvaluator(Tuple args) : regs_(std::move(args)) {
    regs_.insert(regs_.begin(), Nat(0));  // x0
  }

  void run(const std::vector<Stmt>& body) {
    for (const Stmt& s : body) {
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
          for (Nat i = 0; i < count; ++i) run(s.body);
          break;
        }
        case StmtKind::While:
          throw std::logic_error("while statement inside a loop program");
      }
    }
  }

  Nat& reg(int r) {
    if (r >= static_cast<int>(regs_.size())) regs_.resize(r + 1, Nat(0));
    return regs_[r];
  }

  Tuple regs_;
  std::uint64_t steps_ = 0;
};

}  // namespace

namespace detail {

ParsedProgram parse_program_text(const std::string& text, bool allow_while) {
  return Parser(text, allow_while).parse();
}

std::string print_program_text(const std::string& name, int arity,
                               const std::vector<Stmt>& body) {
  std::ostringstream out;
  out << "fn " << name << '(' << arity << ") {\n";
  print_block(out, body, 1);
  out << "}\n";
  return out.str();
}

bool contains_while(const std::vector<Stmt>& body) {
  for (const Stmt& s : body) {
    if (s.kind == StmtKind::While) return true;
    if (!s.body.empty() && contains_while(s.body)) return true;
  }
  return false;
}

std::vector<Stmt> shift_registers(const std::vector<Stmt>& body, int offset) {
  std::vector<Stmt> out;
  out.reserve(body.size());
  for (const Stmt& s : body) {
    Stmt t = s;
    t.var += offset;
    if (s.kind == StmtKind::Copy) t.src += offset;
    if (!s.body.empty()) t.body = shift_registers(s.body, offset);
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace detail

LoopProgram parse_loop(const std::string& text) {
  detail::ParsedProgram p = detail::parse_program_text(text, /*allow_while=*/false);
  return LoopProgram{std::move(p.name), p.arity, std::move(p.body)};
}

std::string print_loop(const LoopProgram& p) {
  return detail::print_program_text(p.name, p.arity, p.body);
}

Validation validate_loop(const LoopProgram& p) {
  Validation v;
  if (p.arity < 0) v.violations.push_back("negative arity");
  if (p.name.empty()) v.violations.push_back("empty program name");
  if (detail::contains_while(p.body)) {
    v.violations.push_back("while statement in a loop program");
  }
  if (max_register(p.body) > kMaxRegisterIndex) {
    v.violations.push_back("register index out of range");
  }
  // Reads of registers above the declared inputs that happen before any
  // write look like undeclared inputs; they evaluate as 0 by convention.
  RegisterSet written, free_reads;
  for (int i = 0; i <= p.arity; ++i) written.set(i);
  scan_free_reads(p.body, written, free_reads);
  for (int r = 0; r < static_cast<int>(free_reads.bits.size()); ++r) {
    if (free_reads.bits[r]) {
      v.warnings.push_back("x" + std::to_string(r) +
                           " is read before it is written and is not a declared input");
    }
  }
  return v;
}

EvalResult eval_loop(const LoopProgram& p, const Tuple& args) {
  if (static_cast<int>(args.size()) != p.arity) {
    throw std::invalid_argument("eval_loop: expected " + std::to_string(p.arity) +
                                " arguments, got " + std::to_string(args.size()));
  }
  LoopEvaluator ev(args);
  ev.run(p.body);
  return EvalResult{ev.regs_[0], StepCount{ev.steps_}};
}

int max_register(const std::vector<Stmt>& body) {
  int m = -1;
  for (const Stmt& s : body) {
    m = std::max(m, s.var);
    if (s.kind == StmtKind::Copy) m = std::max(m, s.src);
    if (!s.body.empty()) m = std::max(m, max_register(s.body));
  }
  return m;
}

}  // namespace prlab
