#include "seplog/printer.hpp"

#include <sstream>

namespace seplog {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Arithmetic precedence: 0 add/sub, 1 mul, 2 unary minus, 3 atom.

bool is_unary_minus(const AExpr& e) {
  const auto* b = std::get_if<AExpr::Bin>(&e.node);
  if (!b || b->op != ABinOp::Sub) return false;
  const auto* l = std::get_if<AExpr::Lit>(&b->lhs->node);
  return l && l->value == 0 && !std::holds_alternative<AExpr::Lit>(b->rhs->node);
}

int alevel(const AExpr& e) {
  if (std::holds_alternative<AExpr::Lit>(e.node) || std::holds_alternative<AExpr::Var>(e.node))
    return 3;
  if (is_unary_minus(e)) return 2;
  return std::get<AExpr::Bin>(e.node).op == ABinOp::Mul ? 1 : 0;
}

std::string render_aexpr(const AExpr& e, int min_level) {
  std::string out;
  if (is_unary_minus(e)) {
    out = "-" + render_aexpr(*std::get<AExpr::Bin>(e.node).rhs, 3);
  } else {
    out = std::visit(
        overloaded{
            [](const AExpr::Lit& l) {
              std::string s = std::to_string(l.value);
              return l.value < 0 ? "(" + s + ")" : s;
            },
            [](const AExpr::Var& v) { return v.name; },
            [](const AExpr::Bin& b) {
              switch (b.op) {
                case ABinOp::Add:
                  return render_aexpr(*b.lhs, 0) + " + " + render_aexpr(*b.rhs, 1);
                case ABinOp::Sub:
                  return render_aexpr(*b.lhs, 0) + " - " + render_aexpr(*b.rhs, 1);
                case ABinOp::Mul:
                default:
                  return render_aexpr(*b.lhs, 1) + " ** " + render_aexpr(*b.rhs, 2);
              }
            },
        },
        e.node);
  }
  if (alevel(e) < min_level) out = "(" + out + ")";
  return out;
}

// Boolean precedence: 0 =>, 1 ||, 2 &&, 3 !, 4 atom.

bool is_neq(const BExpr& e) {
  const auto* n = std::get_if<BExpr::Not>(&e.node);
  return n && std::holds_alternative<BExpr::Eq>(n->arg->node);
}

int blevel(const BExpr& e) {
  return std::visit(overloaded{
                        [](const BExpr::True&) { return 4; },
                        [](const BExpr::False&) { return 4; },
                        [](const BExpr::Eq&) { return 4; },
                        [&](const BExpr::Not&) { return is_neq(e) ? 4 : 3; },
                        [](const BExpr::Bin& b) {
                          switch (b.op) {
                            case BBinOp::Imp:
                              return 0;
                            case BBinOp::Or:
                              return 1;
                            case BBinOp::And:
                            default:
                              return 2;
                          }
                        },
                    },
                    e.node);
}

std::string render_bexpr(const BExpr& e, int min_level) {
  std::string out;
  if (is_neq(e)) {
    const auto& q = std::get<BExpr::Eq>(std::get<BExpr::Not>(e.node).arg->node);
    out = render_aexpr(*q.lhs, 0) + " != " + render_aexpr(*q.rhs, 0);
  } else {
    out = std::visit(
        overloaded{
            [](const BExpr::True&) { return std::string("true"); },
            [](const BExpr::False&) { return std::string("false"); },
            [](const BExpr::Eq& q) {
              return render_aexpr(*q.lhs, 0) + " = " + render_aexpr(*q.rhs, 0);
            },
            [](const BExpr::Not& n) { return "!" + render_bexpr(*n.arg, 3); },
            [](const BExpr::Bin& b) {
              switch (b.op) {
                case BBinOp::Imp:
                  return render_bexpr(*b.lhs, 1) + " => " + render_bexpr(*b.rhs, 0);
                case BBinOp::Or:
                  return render_bexpr(*b.lhs, 1) + " || " + render_bexpr(*b.rhs, 2);
                case BBinOp::And:
                default:
                  return render_bexpr(*b.lhs, 2) + " && " + render_bexpr(*b.rhs, 3);
              }
            },
        },
        e.node);
  }
  if (blevel(e) < min_level) out = "(" + out + ")";
  return out;
}

// Sequence precedence: 0 ++, 1 cons, 2 atom.

int slevel(const SeqExpr& s) {
  return std::visit(overloaded{
                        [](const SeqExpr::Empty&) { return 2; },
                        [](const SeqExpr::Var&) { return 2; },
                        [](const SeqExpr::Cons&) { return 1; },
                        [](const SeqExpr::Concat&) { return 0; },
                        [](const SeqExpr::Rev&) { return 2; },
                    },
                    s.node);
}

std::string render_seq(const SeqExpr& s, int min_level) {
  std::string out = std::visit(
      overloaded{
          [](const SeqExpr::Empty&) { return std::string("eps"); },
          [](const SeqExpr::Var& v) { return v.name; },
          [](const SeqExpr::Cons& c) {
            return render_aexpr(*c.head, 0) + " . " + render_seq(*c.tail, 1);
          },
          [](const SeqExpr::Concat& c) {
            return render_seq(*c.lhs, 1) + " ++ " + render_seq(*c.rhs, 0);
          },
          [](const SeqExpr::Rev& r) { return "rev(" + render_seq(*r.arg, 0) + ")"; },
      },
      s.node);
  if (slevel(s) < min_level) out = "(" + out + ")";
  return out;
}

// Assertion precedence: 0 quantifier, 1 =>, 2 ||, 3 &&, 4 -*, 5 *, 6 !, 7 atom.

bool is_pure_neq(const Assertion& a) {
  const auto* p = std::get_if<Assertion::Pure>(&a.node);
  return p && is_neq(*p->cond);
}

int level(const Assertion& a) {
  return std::visit(overloaded{
                        [&](const Assertion::Pure& p) { return blevel(*p.cond) >= 4 ? 7 : -1; },
                        [](const Assertion::Emp&) { return 7; },
                        [](const Assertion::PointsTo&) { return 7; },
                        [](const Assertion::SepConj&) { return 5; },
                        [](const Assertion::Wand&) { return 4; },
                        [](const Assertion::Bin& b) {
                          switch (b.op) {
                            case LBinOp::Imp:
                              return 1;
                            case LBinOp::Or:
                              return 2;
                            case LBinOp::And:
                            default:
                              return 3;
                          }
                        },
                        [](const Assertion::Not&) { return 6; },
                        [](const Assertion::Quant&) { return 0; },
                        [](const Assertion::ListRep&) { return 7; },
                        [](const Assertion::SeqEq&) { return 7; },
                    },
                    a.node);
}

std::string render_assertion(const Assertion& a, int min_level) {
  std::string out = std::visit(
      overloaded{
          [&](const Assertion::Pure& p) {
            // Compound boolean structure under Pure prints through the
            // boolean renderer; only atomic forms re-parse as Pure nodes.
            return render_bexpr(*p.cond, 4);
          },
          [](const Assertion::Emp&) { return std::string("emp"); },
          [](const Assertion::PointsTo& p) {
            return render_aexpr(*p.address, 0) + " |-> " + render_aexpr(*p.value, 0);
          },
          [](const Assertion::SepConj& s) {
            return render_assertion(*s.lhs, 6) + " * " + render_assertion(*s.rhs, 5);
          },
          [](const Assertion::Wand& w) {
            return render_assertion(*w.lhs, 5) + " -* " + render_assertion(*w.rhs, 4);
          },
          [](const Assertion::Bin& b) {
            switch (b.op) {
              case LBinOp::Imp:
                return render_assertion(*b.lhs, 2) + " => " + render_assertion(*b.rhs, 1);
              case LBinOp::Or:
                return render_assertion(*b.lhs, 2) + " || " + render_assertion(*b.rhs, 3);
              case LBinOp::And:
              default:
                return render_assertion(*b.lhs, 3) + " && " + render_assertion(*b.rhs, 4);
            }
          },
          [](const Assertion::Not& n) { return "!" + render_assertion(*n.arg, 6); },
          [](const Assertion::Quant& q) {
            std::string head = q.universal ? "forall " : "exists ";
            // Runs of same-kind binders collapse into one binder list.
            const Assertion* body = q.body.get();
            std::string names = q.var;
            while (const auto* inner = std::get_if<Assertion::Quant>(&body->node)) {
              if (inner->universal != q.universal) break;
              names += ", " + inner->var;
              body = inner->body.get();
            }
            return head + names + " . " + render_assertion(*body, 0);
          },
          [](const Assertion::ListRep& l) {
            return render_aexpr(*l.head, 0) + " ~>[" + render_seq(*l.contents, 0) + "] " +
                   render_aexpr(*l.end, 0);
          },
          [](const Assertion::SeqEq& s) {
            return render_seq(*s.lhs, 0) + " = " + render_seq(*s.rhs, 0);
          },
      },
      a.node);
  int lv = level(a);
  if (is_pure_neq(a)) lv = 7;
  if (lv < min_level) out = "(" + out + ")";
  return out;
}

std::string indent_str(int n) { return std::string(static_cast<std::size_t>(n) * 2, ' '); }

std::string render_block(const Block& b, int indent);

std::string render_command(const Command& c, int indent) {
  return std::visit(
      overloaded{
          [](const Command::Skip&) { return std::string("skip"); },
          [](const Command::Assign& a) { return a.target + " := " + render_aexpr(*a.value, 0); },
          [&](const Command::If& i) {
            std::string out = "if " + render_bexpr(*i.cond, 0) + " then (\n";
            out += render_block(*i.then_body, indent + 1);
            out += indent_str(indent) + ") else (\n";
            out += render_block(*i.else_body, indent + 1);
            out += indent_str(indent) + ")";
            return out;
          },
          [&](const Command::While& w) {
            std::string out = "while " + render_bexpr(*w.cond, 0);
            if (w.invariant) out += " invariant { " + render_assertion(*w.invariant, 0) + " }";
            out += " do (\n";
            out += render_block(*w.body, indent + 1);
            out += indent_str(indent) + ")";
            return out;
          },
          [](const Command::Alloc& a) {
            std::string out = a.target + " := cons(";
            for (std::size_t i = 0; i < a.fields.size(); ++i) {
              if (i) out += ", ";
              out += render_aexpr(*a.fields[i], 0);
            }
            return out + ")";
          },
          [](const Command::Lookup& l) {
            return l.target + " := [" + render_aexpr(*l.address, 0) + "]";
          },
          [](const Command::Mutate& m) {
            return "[" + render_aexpr(*m.address, 0) + "] := " + render_aexpr(*m.value, 0);
          },
          [](const Command::Free& f) { return "free(" + render_aexpr(*f.address, 0) + ")"; },
      },
      c.node);
}

std::string render_block(const Block& b, int indent) {
  std::string out;
  for (const auto& item : b.items) {
    out += indent_str(indent);
    if (item.is_command()) {
      out += render_command(*item.command(), indent);
      if (is_atomic(*item.command())) out += ";";
    } else {
      out += "{ " + render_assertion(*item.annotation(), 0) + " }";
    }
    out += "\n";
  }
  return out;
}

}  // namespace

std::string render(const AExpr& e) { return render_aexpr(e, 0); }
std::string render(const BExpr& e) { return render_bexpr(e, 0); }
std::string render(const SeqExpr& s) { return render_seq(s, 0); }
std::string render(const Assertion& a) { return render_assertion(a, 0); }
std::string render(const Command& c) { return render_command(c, 0); }
std::string render(const Block& b, int indent) { return render_block(b, indent); }

std::string render(const Program& p) {
  std::ostringstream out;
  out << "vars";
  for (const auto& v : p.variables) out << " " << v;
  out << ";\n";
  out << "{ " << render(*p.precondition) << " }\n";
  out << render_block(p.body, 0);
  out << "{ " << render(*p.postcondition) << " }\n";
  return out.str();
}

}  // namespace seplog
