#include "seplog/parser.hpp"

#include <cctype>
#include <map>
#include <optional>

namespace seplog {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

enum class Tok {
  Ident,
  Int,
  KwVars,
  KwSkip,
  KwIf,
  KwThen,
  KwElse,
  KwWhile,
  KwInvariant,
  KwDo,
  KwCons,
  KwFree,
  KwEmp,
  KwTrue,
  KwFalse,
  KwExists,
  KwForall,
  KwNil,
  KwEps,
  KwRev,
  Assign,      // :=
  Semi,        // ;
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Comma,
  Dot,
  Plus,
  Minus,
  StarStar,    // ** multiplication
  Star,        // *  separating conjunction
  Equal,
  BangEqual,
  Bang,
  AmpAmp,
  PipePipe,
  FatArrow,    // =>
  MapsTo,      // |->
  Squig,       // ~>
  WandOp,      // -*
  Turnstile,   // |-
  PlusPlus,    // ++
  Eof,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::KwVars: return "'vars'";
    case Tok::KwSkip: return "'skip'";
    case Tok::KwIf: return "'if'";
    case Tok::KwThen: return "'then'";
    case Tok::KwElse: return "'else'";
    case Tok::KwWhile: return "'while'";
    case Tok::KwInvariant: return "'invariant'";
    case Tok::KwDo: return "'do'";
    case Tok::KwCons: return "'cons'";
    case Tok::KwFree: return "'free'";
    case Tok::KwEmp: return "'emp'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::KwExists: return "'exists'";
    case Tok::KwForall: return "'forall'";
    case Tok::KwNil: return "'nil'";
    case Tok::KwEps: return "'eps'";
    case Tok::KwRev: return "'rev'";
    case Tok::Assign: return "':='";
    case Tok::Semi: return "';'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::StarStar: return "'**'";
    case Tok::Star: return "'*'";
    case Tok::Equal: return "'='";
    case Tok::BangEqual: return "'!='";
    case Tok::Bang: return "'!'";
    case Tok::AmpAmp: return "'&&'";
    case Tok::PipePipe: return "'||'";
    case Tok::FatArrow: return "'=>'";
    case Tok::MapsTo: return "'|->'";
    case Tok::Squig: return "'~>'";
    case Tok::WandOp: return "'-*'";
    case Tok::Turnstile: return "'|-'";
    case Tok::PlusPlus: return "'++'";
    case Tok::Eof: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::int64_t value = 0;
  SourcePos pos;
};

const std::map<std::string, Tok, std::less<>> kKeywords = {
    {"vars", Tok::KwVars},     {"skip", Tok::KwSkip},
    {"if", Tok::KwIf},         {"then", Tok::KwThen},
    {"else", Tok::KwElse},     {"while", Tok::KwWhile},
    {"invariant", Tok::KwInvariant}, {"do", Tok::KwDo},
    {"cons", Tok::KwCons},     {"free", Tok::KwFree},
    {"emp", Tok::KwEmp},       {"true", Tok::KwTrue},
    {"false", Tok::KwFalse},   {"exists", Tok::KwExists},
    {"forall", Tok::KwForall}, {"nil", Tok::KwNil},
    {"eps", Tok::KwEps},       {"rev", Tok::KwRev},
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  auto peek = [&](std::size_t off = 0) -> char {
    return i + off < text.size() ? text[i + off] : '\0';
  };
  while (i < text.size()) {
    char c = text[i];
    SourcePos pos{line, col};
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && peek(1) == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t n = 0;
      std::int64_t v = 0;
      while (std::isdigit(static_cast<unsigned char>(peek(n)))) {
        int d = peek(n) - '0';
        if (v > (INT64_MAX - d) / 10)
          throw ParseError(pos, "integer literal does not fit in 64 bits");
        v = v * 10 + d;
        ++n;
      }
      out.push_back({Tok::Int, std::string(text.substr(i, n)), v, pos});
      advance(n);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t n = 0;
      while (std::isalnum(static_cast<unsigned char>(peek(n))) || peek(n) == '_') ++n;
      while (peek(n) == '\'') ++n;
      std::string word(text.substr(i, n));
      auto kw = kKeywords.find(word);
      if (kw != kKeywords.end())
        out.push_back({kw->second, word, 0, pos});
      else
        out.push_back({Tok::Ident, word, 0, pos});
      advance(n);
      continue;
    }
    auto two = [&](char a, char b) { return c == a && peek(1) == b; };
    if (c == '|' && peek(1) == '-' && peek(2) == '>') {
      out.push_back({Tok::MapsTo, "|->", 0, pos});
      advance(3);
    } else if (two('|', '|')) {
      out.push_back({Tok::PipePipe, "||", 0, pos});
      advance(2);
    } else if (two('|', '-')) {
      out.push_back({Tok::Turnstile, "|-", 0, pos});
      advance(2);
    } else if (two(':', '=')) {
      out.push_back({Tok::Assign, ":=", 0, pos});
      advance(2);
    } else if (two('-', '*')) {
      out.push_back({Tok::WandOp, "-*", 0, pos});
      advance(2);
    } else if (two('*', '*')) {
      out.push_back({Tok::StarStar, "**", 0, pos});
      advance(2);
    } else if (two('=', '>')) {
      out.push_back({Tok::FatArrow, "=>", 0, pos});
      advance(2);
    } else if (two('!', '=')) {
      out.push_back({Tok::BangEqual, "!=", 0, pos});
      advance(2);
    } else if (two('&', '&')) {
      out.push_back({Tok::AmpAmp, "&&", 0, pos});
      advance(2);
    } else if (two('~', '>')) {
      out.push_back({Tok::Squig, "~>", 0, pos});
      advance(2);
    } else if (two('+', '+')) {
      out.push_back({Tok::PlusPlus, "++", 0, pos});
      advance(2);
    } else {
      Tok k;
      switch (c) {
        case ';': k = Tok::Semi; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '[': k = Tok::LBracket; break;
        case ']': k = Tok::RBracket; break;
        case '{': k = Tok::LBrace; break;
        case '}': k = Tok::RBrace; break;
        case ',': k = Tok::Comma; break;
        case '.': k = Tok::Dot; break;
        case '+': k = Tok::Plus; break;
        case '-': k = Tok::Minus; break;
        case '*': k = Tok::Star; break;
        case '=': k = Tok::Equal; break;
        case '!': k = Tok::Bang; break;
        default:
          throw ParseError(pos, std::string("unexpected character '") + c + "'");
      }
      out.push_back({k, std::string(1, c), 0, pos});
      advance(1);
    }
  }
  out.push_back({Tok::Eof, "", 0, {line, col}});
  return out;
}

// Backtracking marker; the parser records the furthest failure for the
// final diagnostic.
struct Fail {};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  Program program() {
    Program p;
    expect(Tok::KwVars);
    while (at(Tok::Ident)) {
      std::string name = cur().text;
      if (std::find(p.variables.begin(), p.variables.end(), name) != p.variables.end())
        throw ParseError(cur().pos, "duplicate variable declaration '" + name + "'");
      p.variables.push_back(name);
      ++i_;
    }
    expect(Tok::Semi);
    p.precondition = annotation();
    Block body = block_items();
    expect(Tok::Eof);
    if (body.items.empty() || !body.items.back().is_annotation())
      throw ParseError(cur().pos, "program must end with a postcondition assertion");
    p.postcondition = body.items.back().annotation();
    body.items.pop_back();
    p.body = std::move(body);
    check_declared(p.body, p.variables);
    return p;
  }

  AssertionPtr assertion_text() {
    AssertionPtr a = assertion();
    expect(Tok::Eof);
    return infer_sorts(a);
  }

  CommandPtr command_text() {
    lenient_semi_ = true;
    CommandPtr c = command();
    expect(Tok::Eof);
    return c;
  }

  std::pair<AssertionPtr, AssertionPtr> entailment_text() {
    AssertionPtr lhs = assertion();
    expect(Tok::Turnstile);
    AssertionPtr rhs = assertion();
    expect(Tok::Eof);
    return {infer_sorts(lhs), infer_sorts(rhs)};
  }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;
  std::size_t far_ = 0;
  std::string far_msg_;
  bool lenient_semi_ = false;

  void end_command() {
    if (accept(Tok::Semi)) return;
    if (lenient_semi_ && at(Tok::Eof)) return;
    report("expected ';'");
  }

  const Token& cur() const { return toks_[i_]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    ++i_;
    return true;
  }

  [[noreturn]] void fail(const std::string& msg) {
    if (i_ >= far_) {
      far_ = i_;
      far_msg_ = msg;
    }
    throw Fail{};
  }

  void expect(Tok k) {
    if (!accept(k)) report(std::string("expected ") + tok_name(k));
  }

  [[noreturn]] void report(const std::string& msg) {
    // Non-speculative failure: surface the diagnostic right away.
    std::string full = msg + ", found " + tok_name(cur().kind);
    if (i_ >= far_ || far_msg_.empty()) throw ParseError(cur().pos, full);
    throw ParseError(toks_[far_].pos, far_msg_ + ", found " + tok_name(toks_[far_].kind));
  }

  template <typename F>
  auto speculate(F&& f) -> std::optional<decltype(f())> {
    std::size_t save = i_;
    try {
      return f();
    } catch (const Fail&) {
      i_ = save;
      return std::nullopt;
    }
  }

  // ---- programs and commands ----

  AssertionPtr annotation() {
    expect(Tok::LBrace);
    AssertionPtr a;
    try {
      a = assertion();
    } catch (const Fail&) {
      report("invalid assertion");
    }
    expect(Tok::RBrace);
    return infer_sorts(a);
  }

  Block block_items() {
    Block b;
    while (true) {
      SourcePos pos = cur().pos;
      if (at(Tok::LBrace)) {
        b.items.push_back(Block::Item{annotation(), pos});
      } else if (at(Tok::RParen) || at(Tok::Eof)) {
        break;
      } else {
        b.items.push_back(Block::Item{command(), pos});
      }
    }
    return b;
  }

  Block paren_block() {
    expect(Tok::LParen);
    Block b = block_items();
    expect(Tok::RParen);
    return b;
  }

  CommandPtr command() {
    SourcePos pos = cur().pos;
    if (accept(Tok::KwSkip)) {
      end_command();
      return cmd_skip(pos);
    }
    if (accept(Tok::KwFree)) {
      expect(Tok::LParen);
      AExprPtr addr = aexpr_or_report();
      expect(Tok::RParen);
      end_command();
      return cmd_free(addr, pos);
    }
    if (accept(Tok::KwIf)) {
      BExprPtr cond = bexpr_or_report();
      expect(Tok::KwThen);
      Block then_body = paren_block();
      expect(Tok::KwElse);
      Block else_body = paren_block();
      return cmd_if(cond, std::move(then_body), std::move(else_body), pos);
    }
    if (accept(Tok::KwWhile)) {
      BExprPtr cond = bexpr_or_report();
      if (!at(Tok::KwInvariant))
        throw ParseError(cur().pos, "while loop is missing its invariant annotation");
      ++i_;
      AssertionPtr inv = annotation();
      expect(Tok::KwDo);
      Block body = paren_block();
      return cmd_while(cond, inv, std::move(body), pos);
    }
    if (accept(Tok::LBracket)) {
      AExprPtr addr = aexpr_or_report();
      expect(Tok::RBracket);
      expect(Tok::Assign);
      AExprPtr value = aexpr_or_report();
      end_command();
      return cmd_mutate(addr, value, pos);
    }
    if (at(Tok::Ident)) {
      std::string target = cur().text;
      ++i_;
      expect(Tok::Assign);
      if (accept(Tok::KwCons)) {
        expect(Tok::LParen);
        std::vector<AExprPtr> fields;
        fields.push_back(aexpr_or_report());
        while (accept(Tok::Comma)) fields.push_back(aexpr_or_report());
        expect(Tok::RParen);
        end_command();
        return cmd_alloc(target, std::move(fields), pos);
      }
      if (accept(Tok::LBracket)) {
        AExprPtr addr = aexpr_or_report();
        expect(Tok::RBracket);
        end_command();
        return cmd_lookup(target, addr, pos);
      }
      AExprPtr value = aexpr_or_report();
      end_command();
      return cmd_assign(target, value, pos);
    }
    report("expected a command");
  }

  void check_declared(const Block& b, const std::vector<std::string>& declared) {
    auto is_declared = [&](const std::string& v) {
      return std::find(declared.begin(), declared.end(), v) != declared.end();
    };
    auto check_expr_vars = [&](const auto& node, SourcePos pos) {
      std::set<std::string> vs;
      collect_vars(node, vs);
      for (const auto& v : vs)
        if (!is_declared(v)) throw ParseError(pos, "undeclared variable '" + v + "'");
    };
    for (const auto& item : b.items) {
      if (!item.is_command()) continue;
      const Command& c = *item.command();
      std::visit(overloaded{
                     [](const Command::Skip&) {},
                     [&](const Command::Assign& a) {
                       if (!is_declared(a.target))
                         throw ParseError(c.pos, "undeclared variable '" + a.target + "'");
                       check_expr_vars(*a.value, c.pos);
                     },
                     [&](const Command::If& f) {
                       check_expr_vars(*f.cond, c.pos);
                       check_declared(*f.then_body, declared);
                       check_declared(*f.else_body, declared);
                     },
                     [&](const Command::While& w) {
                       check_expr_vars(*w.cond, c.pos);
                       check_declared(*w.body, declared);
                     },
                     [&](const Command::Alloc& a) {
                       if (!is_declared(a.target))
                         throw ParseError(c.pos, "undeclared variable '" + a.target + "'");
                       for (const auto& f : a.fields) check_expr_vars(*f, c.pos);
                     },
                     [&](const Command::Lookup& l) {
                       if (!is_declared(l.target))
                         throw ParseError(c.pos, "undeclared variable '" + l.target + "'");
                       check_expr_vars(*l.address, c.pos);
                     },
                     [&](const Command::Mutate& m) {
                       check_expr_vars(*m.address, c.pos);
                       check_expr_vars(*m.value, c.pos);
                     },
                     [&](const Command::Free& f) { check_expr_vars(*f.address, c.pos); },
                 },
                 c.node);
    }
  }

  AExprPtr aexpr_or_report() {
    try {
      return aexpr();
    } catch (const Fail&) {
      report("invalid arithmetic expression");
    }
  }

  BExprPtr bexpr_or_report() {
    try {
      return bexpr();
    } catch (const Fail&) {
      report("invalid boolean expression");
    }
  }

  // ---- arithmetic expressions ----

  AExprPtr aexpr() {
    AExprPtr l = amul();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      ABinOp op = at(Tok::Plus) ? ABinOp::Add : ABinOp::Sub;
      ++i_;
      l = abin(op, l, amul());
    }
    return l;
  }

  AExprPtr amul() {
    AExprPtr l = afactor();
    while (accept(Tok::StarStar)) l = mul(l, afactor());
    return l;
  }

  AExprPtr afactor() {
    if (at(Tok::Int)) {
      std::int64_t v = cur().value;
      ++i_;
      return lit(v);
    }
    if (accept(Tok::KwNil)) return nil_expr();
    if (at(Tok::Ident)) {
      std::string name = cur().text;
      ++i_;
      return var(std::move(name));
    }
    if (accept(Tok::Minus)) {
      AExprPtr f = afactor();
      if (const auto* l = std::get_if<AExpr::Lit>(&f->node)) return lit(-l->value);
      return sub(lit(0), f);
    }
    if (accept(Tok::LParen)) {
      AExprPtr inner = aexpr();
      if (!accept(Tok::RParen)) fail("expected ')'");
      return inner;
    }
    fail("expected an arithmetic expression");
  }

  // ---- boolean expressions ----

  BExprPtr bexpr() { return bimp(); }

  BExprPtr bimp() {
    BExprPtr l = bor_();
    if (accept(Tok::FatArrow)) return seplog::bimp(l, bimp());
    return l;
  }

  BExprPtr bor_() {
    BExprPtr l = band_();
    while (accept(Tok::PipePipe)) l = bor(l, band_());
    return l;
  }

  BExprPtr band_() {
    BExprPtr l = bunary();
    while (accept(Tok::AmpAmp)) l = band(l, bunary());
    return l;
  }

  BExprPtr bunary() {
    if (accept(Tok::Bang)) return bnot(bunary());
    return batom();
  }

  BExprPtr batom() {
    if (accept(Tok::KwTrue)) return btrue();
    if (accept(Tok::KwFalse)) return bfalse();
    if (at(Tok::LParen)) {
      // Either a parenthesized boolean or a parenthesized arithmetic
      // operand of a relation; try the relational reading first.
      auto rel = speculate([&] { return brelation(); });
      if (rel) return *rel;
      expect(Tok::LParen);
      BExprPtr inner;
      try {
        inner = bexpr();
      } catch (const Fail&) {
        report("invalid boolean expression");
      }
      if (!accept(Tok::RParen)) fail("expected ')'");
      return inner;
    }
    return brelation();
  }

  BExprPtr brelation() {
    AExprPtr l = aexpr();
    if (accept(Tok::Equal)) return beq(l, aexpr());
    if (accept(Tok::BangEqual)) return bneq(l, aexpr());
    fail("expected '=' or '!=' after expression");
  }

  // ---- sequence expressions ----

  SeqExprPtr seqexpr() {
    SeqExprPtr l = seqcons();
    if (accept(Tok::PlusPlus)) return seq_concat(l, seqexpr());
    return l;
  }

  SeqExprPtr seqcons() {
    if (accept(Tok::KwEps)) return seq_empty();
    if (accept(Tok::KwRev)) {
      if (!accept(Tok::LParen)) fail("expected '(' after rev");
      SeqExprPtr s = seqexpr();
      if (!accept(Tok::RParen)) fail("expected ')'");
      return seq_rev(s);
    }
    if (at(Tok::LParen)) {
      // Parenthesized aexp heading a cons, or a parenthesized sequence.
      auto headed = speculate([&]() -> SeqExprPtr {
        AExprPtr e = aexpr();
        if (!accept(Tok::Dot)) fail("expected '.'");
        return seq_cons(e, seqcons());
      });
      if (headed) return *headed;
      expect(Tok::LParen);
      SeqExprPtr inner = seqexpr();
      if (!accept(Tok::RParen)) fail("expected ')'");
      return inner;
    }
    AExprPtr e = aexpr();
    if (accept(Tok::Dot)) return seq_cons(e, seqcons());
    if (const auto* v = std::get_if<AExpr::Var>(&e->node)) return seq_var(v->name);
    fail("expected a sequence expression");
  }

  bool seq_ahead() {
    // An equation's right side is a sequence when it opens with a sequence
    // keyword or an aexp followed by '.' or '++'.
    if (at(Tok::KwEps) || at(Tok::KwRev)) return true;
    auto probe = speculate([&]() -> bool {
      aexpr();
      if (!(at(Tok::Dot) || at(Tok::PlusPlus))) fail("");
      return true;
    });
    return probe.has_value();
  }

  // ---- assertions ----

  AssertionPtr assertion() { return squant(); }

  AssertionPtr squant() {
    if (at(Tok::KwExists) || at(Tok::KwForall)) {
      bool universal = at(Tok::KwForall);
      ++i_;
      std::vector<std::string> names;
      if (!at(Tok::Ident)) fail("expected a variable name after quantifier");
      names.push_back(cur().text);
      ++i_;
      while (accept(Tok::Comma)) {
        if (!at(Tok::Ident)) fail("expected a variable name");
        names.push_back(cur().text);
        ++i_;
      }
      if (!accept(Tok::Dot)) fail("expected '.' after quantifier variables");
      AssertionPtr body = squant();
      for (auto it = names.rbegin(); it != names.rend(); ++it)
        body = universal ? forall(*it, VarSort::Int, body) : exists(*it, VarSort::Int, body);
      return body;
    }
    return simp();
  }

  AssertionPtr simp() {
    AssertionPtr l = sor();
    if (accept(Tok::FatArrow)) return aimp(l, simp());
    return l;
  }

  AssertionPtr sor() {
    AssertionPtr l = sand();
    while (accept(Tok::PipePipe)) l = aor(l, sand());
    return l;
  }

  AssertionPtr sand() {
    AssertionPtr l = swand();
    while (accept(Tok::AmpAmp)) l = aand(l, swand());
    return l;
  }

  AssertionPtr swand() {
    AssertionPtr l = ssep();
    if (accept(Tok::WandOp)) return wand(l, swand());
    return l;
  }

  AssertionPtr ssep() {
    AssertionPtr l = sunary();
    if (accept(Tok::Star)) return sep_conj(l, ssep());
    return l;
  }

  AssertionPtr sunary() {
    if (accept(Tok::Bang)) return anot(sunary());
    return satom();
  }

  AssertionPtr satom() {
    if (accept(Tok::KwEmp)) return emp();
    if (accept(Tok::KwTrue)) return pure(btrue());
    if (accept(Tok::KwFalse)) return pure(bfalse());
    if (at(Tok::KwEps) || at(Tok::KwRev)) {
      SeqExprPtr l = seqexpr();
      if (!accept(Tok::Equal)) fail("expected '=' after sequence expression");
      return seq_eq(l, seqexpr());
    }
    if (at(Tok::LParen)) {
      auto rel = speculate([&] { return srelation(); });
      if (rel) return *rel;
      // A sequence equation whose left side opens with a parenthesis.
      auto seqrel = speculate([&]() -> AssertionPtr {
        SeqExprPtr ls = seqexpr();
        if (!accept(Tok::Equal)) fail("expected '='");
        return seq_eq(ls, seqexpr());
      });
      if (seqrel) return *seqrel;
      expect(Tok::LParen);
      AssertionPtr inner;
      try {
        inner = assertion();
      } catch (const Fail&) {
        report("invalid assertion");
      }
      if (!accept(Tok::RParen)) fail("expected ')'");
      return inner;
    }
    return srelation();
  }

  AssertionPtr srelation() {
    std::size_t start = i_;
    AExprPtr l = aexpr();
    if (at(Tok::Dot) || at(Tok::PlusPlus)) {
      // The left side was really a sequence; reparse it as one.
      i_ = start;
      SeqExprPtr ls = seqexpr();
      if (!accept(Tok::Equal)) fail("expected '=' after sequence expression");
      return seq_eq(ls, seqexpr());
    }
    if (accept(Tok::MapsTo)) {
      std::vector<AExprPtr> cells;
      cells.push_back(aexpr());
      while (accept(Tok::Comma)) cells.push_back(aexpr());
      return points_to_cells(l, cells);
    }
    if (at(Tok::Squig)) {
      ++i_;
      if (accept(Tok::LBracket)) {
        SeqExprPtr s = seqexpr();
        if (!accept(Tok::RBracket)) fail("expected ']'");
        return listrep(s, l, aexpr());
      }
      std::vector<AExprPtr> cells;
      cells.push_back(aexpr());
      while (accept(Tok::Comma)) cells.push_back(aexpr());
      AssertionPtr result;
      for (std::size_t k = cells.size(); k-- > 0;) {
        AExprPtr addr = k == 0 ? l : add(l, lit(static_cast<std::int64_t>(k)));
        AssertionPtr one = sep_conj(points_to(addr, cells[k]), pure(btrue()));
        result = result ? sep_conj(one, result) : one;
      }
      return result;
    }
    if (accept(Tok::Equal)) {
      if (seq_ahead()) {
        SeqExprPtr rs = seqexpr();
        if (const auto* v = std::get_if<AExpr::Var>(&l->node))
          return seq_eq(seq_var(v->name), rs);
        fail("left side of a sequence equation must be a sequence");
      }
      return pure(beq(l, aexpr()));
    }
    if (accept(Tok::BangEqual)) return pure(bneq(l, aexpr()));
    fail("expected '|->', '~>', '=' or '!=' after expression");
  }

  // ---- quantifier sort inference ----

  static bool occurs_seq(const Assertion& a, const std::string& name);
  static bool occurs_int(const Assertion& a, const std::string& name);

  AssertionPtr infer_sorts(const AssertionPtr& a) {
    if (!a) return a;
    return std::visit(
        overloaded{
            [&](const Assertion::Pure&) { return a; },
            [&](const Assertion::Emp&) { return a; },
            [&](const Assertion::PointsTo&) { return a; },
            [&](const Assertion::SepConj& s) {
              return sep_conj(infer_sorts(s.lhs), infer_sorts(s.rhs));
            },
            [&](const Assertion::Wand& w) { return wand(infer_sorts(w.lhs), infer_sorts(w.rhs)); },
            [&](const Assertion::Bin& b) {
              return abin(b.op, infer_sorts(b.lhs), infer_sorts(b.rhs));
            },
            [&](const Assertion::Not& n) { return anot(infer_sorts(n.arg)); },
            [&](const Assertion::Quant& q) {
              AssertionPtr body = infer_sorts(q.body);
              bool as_seq = occurs_seq(*body, q.var);
              bool as_int = occurs_int(*body, q.var);
              if (as_seq && as_int)
                throw ParseError({}, "variable '" + q.var +
                                         "' is used both as an integer and as a sequence");
              VarSort sort = as_seq ? VarSort::Seq : VarSort::Int;
              return q.universal ? forall(q.var, sort, body) : exists(q.var, sort, body);
            },
            [&](const Assertion::ListRep&) { return a; },
            [&](const Assertion::SeqEq&) { return a; },
        },
        a->node);
  }
};

bool Parser::occurs_seq(const Assertion& a, const std::string& name) {
  std::set<std::string> iv, sv;
  free_vars(a, iv, sv);
  return sv.count(name) > 0;
}

bool Parser::occurs_int(const Assertion& a, const std::string& name) {
  std::set<std::string> iv, sv;
  free_vars(a, iv, sv);
  return iv.count(name) > 0;
}

}  // namespace

Program parse_program(std::string_view text) {
  Parser p(text);
  try {
    return p.program();
  } catch (const Fail&) {
    throw ParseError({}, "invalid program");
  }
}

AssertionPtr parse_assertion(std::string_view text) {
  Parser p(text);
  try {
    return p.assertion_text();
  } catch (const Fail&) {
    throw ParseError({}, "invalid assertion");
  }
}

CommandPtr parse_command(std::string_view text) {
  Parser p(text);
  try {
    return p.command_text();
  } catch (const Fail&) {
    throw ParseError({}, "invalid command");
  }
}

std::pair<AssertionPtr, AssertionPtr> parse_entailment(std::string_view text) {
  Parser p(text);
  try {
    return p.entailment_text();
  } catch (const Fail&) {
    throw ParseError({}, "invalid entailment query");
  }
}

}  // namespace seplog
