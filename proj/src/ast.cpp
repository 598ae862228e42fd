#include "seplog/ast.hpp"

#include <algorithm>

namespace seplog {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

AExprPtr lit(std::int64_t v) { return std::make_shared<AExpr>(AExpr{AExpr::Lit{v}}); }
AExprPtr var(std::string name) {
  return std::make_shared<AExpr>(AExpr{AExpr::Var{std::move(name)}});
}
AExprPtr abin(ABinOp op, AExprPtr lhs, AExprPtr rhs) {
  return std::make_shared<AExpr>(AExpr{AExpr::Bin{op, std::move(lhs), std::move(rhs)}});
}
AExprPtr add(AExprPtr l, AExprPtr r) { return abin(ABinOp::Add, std::move(l), std::move(r)); }
AExprPtr sub(AExprPtr l, AExprPtr r) { return abin(ABinOp::Sub, std::move(l), std::move(r)); }
AExprPtr mul(AExprPtr l, AExprPtr r) { return abin(ABinOp::Mul, std::move(l), std::move(r)); }
AExprPtr nil_expr() { return lit(0); }

BExprPtr btrue() { return std::make_shared<BExpr>(BExpr{BExpr::True{}}); }
BExprPtr bfalse() { return std::make_shared<BExpr>(BExpr{BExpr::False{}}); }
BExprPtr beq(AExprPtr lhs, AExprPtr rhs) {
  return std::make_shared<BExpr>(BExpr{BExpr::Eq{std::move(lhs), std::move(rhs)}});
}
BExprPtr bneq(AExprPtr lhs, AExprPtr rhs) { return bnot(beq(std::move(lhs), std::move(rhs))); }
BExprPtr bnot(BExprPtr arg) { return std::make_shared<BExpr>(BExpr{BExpr::Not{std::move(arg)}}); }
BExprPtr bbin(BBinOp op, BExprPtr lhs, BExprPtr rhs) {
  return std::make_shared<BExpr>(BExpr{BExpr::Bin{op, std::move(lhs), std::move(rhs)}});
}
BExprPtr band(BExprPtr l, BExprPtr r) { return bbin(BBinOp::And, std::move(l), std::move(r)); }
BExprPtr bor(BExprPtr l, BExprPtr r) { return bbin(BBinOp::Or, std::move(l), std::move(r)); }
BExprPtr bimp(BExprPtr l, BExprPtr r) { return bbin(BBinOp::Imp, std::move(l), std::move(r)); }

SeqExprPtr seq_empty() { return std::make_shared<SeqExpr>(SeqExpr{SeqExpr::Empty{}}); }
SeqExprPtr seq_var(std::string name) {
  return std::make_shared<SeqExpr>(SeqExpr{SeqExpr::Var{std::move(name)}});
}
SeqExprPtr seq_cons(AExprPtr head, SeqExprPtr tail) {
  return std::make_shared<SeqExpr>(SeqExpr{SeqExpr::Cons{std::move(head), std::move(tail)}});
}
SeqExprPtr seq_concat(SeqExprPtr lhs, SeqExprPtr rhs) {
  return std::make_shared<SeqExpr>(SeqExpr{SeqExpr::Concat{std::move(lhs), std::move(rhs)}});
}
SeqExprPtr seq_rev(SeqExprPtr arg) {
  return std::make_shared<SeqExpr>(SeqExpr{SeqExpr::Rev{std::move(arg)}});
}

AssertionPtr pure(BExprPtr cond) {
  return std::make_shared<Assertion>(Assertion{Assertion::Pure{std::move(cond)}});
}
AssertionPtr emp() { return std::make_shared<Assertion>(Assertion{Assertion::Emp{}}); }
AssertionPtr points_to(AExprPtr address, AExprPtr value) {
  return std::make_shared<Assertion>(
      Assertion{Assertion::PointsTo{std::move(address), std::move(value)}});
}
AssertionPtr points_to_cells(AExprPtr address, const std::vector<AExprPtr>& values) {
  if (values.empty()) return emp();
  AssertionPtr result;
  for (std::size_t i = values.size(); i-- > 0;) {
    AExprPtr cell = i == 0 ? address : add(address, lit(static_cast<std::int64_t>(i)));
    AssertionPtr one = points_to(cell, values[i]);
    result = result ? sep_conj(one, result) : one;
  }
  return result;
}
AssertionPtr sep_conj(AssertionPtr lhs, AssertionPtr rhs) {
  return std::make_shared<Assertion>(
      Assertion{Assertion::SepConj{std::move(lhs), std::move(rhs)}});
}
AssertionPtr wand(AssertionPtr lhs, AssertionPtr rhs) {
  return std::make_shared<Assertion>(Assertion{Assertion::Wand{std::move(lhs), std::move(rhs)}});
}
AssertionPtr abin(LBinOp op, AssertionPtr lhs, AssertionPtr rhs) {
  return std::make_shared<Assertion>(
      Assertion{Assertion::Bin{op, std::move(lhs), std::move(rhs)}});
}
AssertionPtr aand(AssertionPtr l, AssertionPtr r) { return abin(LBinOp::And, std::move(l), std::move(r)); }
AssertionPtr aor(AssertionPtr l, AssertionPtr r) { return abin(LBinOp::Or, std::move(l), std::move(r)); }
AssertionPtr aimp(AssertionPtr l, AssertionPtr r) { return abin(LBinOp::Imp, std::move(l), std::move(r)); }
AssertionPtr anot(AssertionPtr arg) {
  return std::make_shared<Assertion>(Assertion{Assertion::Not{std::move(arg)}});
}
AssertionPtr exists(std::string v, VarSort sort, AssertionPtr body) {
  return std::make_shared<Assertion>(
      Assertion{Assertion::Quant{false, std::move(v), sort, std::move(body)}});
}
AssertionPtr forall(std::string v, VarSort sort, AssertionPtr body) {
  return std::make_shared<Assertion>(
      Assertion{Assertion::Quant{true, std::move(v), sort, std::move(body)}});
}
AssertionPtr listrep(SeqExprPtr contents, AExprPtr head, AExprPtr end) {
  return std::make_shared<Assertion>(
      Assertion{Assertion::ListRep{std::move(contents), std::move(head), std::move(end)}});
}
AssertionPtr seq_eq(SeqExprPtr lhs, SeqExprPtr rhs) {
  return std::make_shared<Assertion>(Assertion{Assertion::SeqEq{std::move(lhs), std::move(rhs)}});
}
AssertionPtr assertion_true() { return pure(btrue()); }
AssertionPtr points_to_any(AExprPtr address) {
  std::set<std::string> used;
  collect_vars(*address, used);
  std::string v = "v";
  while (used.count(v)) v += "'";
  return exists(v, VarSort::Int, points_to(std::move(address), var(v)));
}

CommandPtr cmd_skip(SourcePos pos) {
  return std::make_shared<Command>(Command{Command::Skip{}, pos});
}
CommandPtr cmd_assign(std::string target, AExprPtr value, SourcePos pos) {
  return std::make_shared<Command>(Command{Command::Assign{std::move(target), std::move(value)}, pos});
}
CommandPtr cmd_if(BExprPtr cond, Block then_body, Block else_body, SourcePos pos) {
  return std::make_shared<Command>(
      Command{Command::If{std::move(cond), std::make_shared<Block>(std::move(then_body)),
                          std::make_shared<Block>(std::move(else_body))},
              pos});
}
CommandPtr cmd_while(BExprPtr cond, AssertionPtr invariant, Block body, SourcePos pos) {
  return std::make_shared<Command>(
      Command{Command::While{std::move(cond), std::move(invariant),
                             std::make_shared<Block>(std::move(body))},
              pos});
}
CommandPtr cmd_alloc(std::string target, std::vector<AExprPtr> fields, SourcePos pos) {
  return std::make_shared<Command>(
      Command{Command::Alloc{std::move(target), std::move(fields)}, pos});
}
CommandPtr cmd_lookup(std::string target, AExprPtr address, SourcePos pos) {
  return std::make_shared<Command>(
      Command{Command::Lookup{std::move(target), std::move(address)}, pos});
}
CommandPtr cmd_mutate(AExprPtr address, AExprPtr value, SourcePos pos) {
  return std::make_shared<Command>(
      Command{Command::Mutate{std::move(address), std::move(value)}, pos});
}
CommandPtr cmd_free(AExprPtr address, SourcePos pos) {
  return std::make_shared<Command>(Command{Command::Free{std::move(address)}, pos});
}

Block block_of(std::vector<CommandPtr> commands) {
  Block b;
  for (auto& c : commands) b.items.push_back(Block::Item{std::move(c), {}});
  return b;
}

bool is_atomic(const Command& c) {
  return !std::holds_alternative<Command::If>(c.node) &&
         !std::holds_alternative<Command::While>(c.node);
}

// ---- structural equality ----

bool equal(const AExpr& a, const AExpr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const AExpr::Lit& x) { return x.value == std::get<AExpr::Lit>(b.node).value; },
          [&](const AExpr::Var& x) { return x.name == std::get<AExpr::Var>(b.node).name; },
          [&](const AExpr::Bin& x) {
            const auto& y = std::get<AExpr::Bin>(b.node);
            return x.op == y.op && equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
          },
      },
      a.node);
}

bool equal(const BExpr& a, const BExpr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const BExpr::True&) { return true; },
          [&](const BExpr::False&) { return true; },
          [&](const BExpr::Eq& x) {
            const auto& y = std::get<BExpr::Eq>(b.node);
            return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
          },
          [&](const BExpr::Not& x) { return equal(*x.arg, *std::get<BExpr::Not>(b.node).arg); },
          [&](const BExpr::Bin& x) {
            const auto& y = std::get<BExpr::Bin>(b.node);
            return x.op == y.op && equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
          },
      },
      a.node);
}

bool equal(const SeqExpr& a, const SeqExpr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const SeqExpr::Empty&) { return true; },
          [&](const SeqExpr::Var& x) { return x.name == std::get<SeqExpr::Var>(b.node).name; },
          [&](const SeqExpr::Cons& x) {
            const auto& y = std::get<SeqExpr::Cons>(b.node);
            return equal(*x.head, *y.head) && equal(*x.tail, *y.tail);
          },
          [&](const SeqExpr::Concat& x) {
            const auto& y = std::get<SeqExpr::Concat>(b.node);
            return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
          },
          [&](const SeqExpr::Rev& x) { return equal(*x.arg, *std::get<SeqExpr::Rev>(b.node).arg); },
      },
      a.node);
}

bool equal(const Assertion& a, const Assertion& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Assertion::Pure& x) {
            return equal(*x.cond, *std::get<Assertion::Pure>(b.node).cond);
          },
          [&](const Assertion::Emp&) { return true; },
          [&](const Assertion::PointsTo& x) {
            const auto& y = std::get<Assertion::PointsTo>(b.node);
            return equal(*x.address, *y.address) && equal(*x.value, *y.value);
          },
          [&](const Assertion::SepConj& x) {
            const auto& y = std::get<Assertion::SepConj>(b.node);
            return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
          },
          [&](const Assertion::Wand& x) {
            const auto& y = std::get<Assertion::Wand>(b.node);
            return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
          },
          [&](const Assertion::Bin& x) {
            const auto& y = std::get<Assertion::Bin>(b.node);
            return x.op == y.op && equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
          },
          [&](const Assertion::Not& x) {
            return equal(*x.arg, *std::get<Assertion::Not>(b.node).arg);
          },
          [&](const Assertion::Quant& x) {
            const auto& y = std::get<Assertion::Quant>(b.node);
            return x.universal == y.universal && x.var == y.var && x.sort == y.sort &&
                   equal(*x.body, *y.body);
          },
          [&](const Assertion::ListRep& x) {
            const auto& y = std::get<Assertion::ListRep>(b.node);
            return equal(*x.contents, *y.contents) && equal(*x.head, *y.head) &&
                   equal(*x.end, *y.end);
          },
          [&](const Assertion::SeqEq& x) {
            const auto& y = std::get<Assertion::SeqEq>(b.node);
            return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
          },
      },
      a.node);
}

bool equal(const Command& a, const Command& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Command::Skip&) { return true; },
          [&](const Command::Assign& x) {
            const auto& y = std::get<Command::Assign>(b.node);
            return x.target == y.target && equal(*x.value, *y.value);
          },
          [&](const Command::If& x) {
            const auto& y = std::get<Command::If>(b.node);
            return equal(*x.cond, *y.cond) && equal(*x.then_body, *y.then_body) &&
                   equal(*x.else_body, *y.else_body);
          },
          [&](const Command::While& x) {
            const auto& y = std::get<Command::While>(b.node);
            if (static_cast<bool>(x.invariant) != static_cast<bool>(y.invariant)) return false;
            if (x.invariant && !equal(*x.invariant, *y.invariant)) return false;
            return equal(*x.cond, *y.cond) && equal(*x.body, *y.body);
          },
          [&](const Command::Alloc& x) {
            const auto& y = std::get<Command::Alloc>(b.node);
            if (x.target != y.target || x.fields.size() != y.fields.size()) return false;
            for (std::size_t i = 0; i < x.fields.size(); ++i)
              if (!equal(*x.fields[i], *y.fields[i])) return false;
            return true;
          },
          [&](const Command::Lookup& x) {
            const auto& y = std::get<Command::Lookup>(b.node);
            return x.target == y.target && equal(*x.address, *y.address);
          },
          [&](const Command::Mutate& x) {
            const auto& y = std::get<Command::Mutate>(b.node);
            return equal(*x.address, *y.address) && equal(*x.value, *y.value);
          },
          [&](const Command::Free& x) {
            return equal(*x.address, *std::get<Command::Free>(b.node).address);
          },
      },
      a.node);
}

bool equal(const Block& a, const Block& b) {
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    const auto& x = a.items[i];
    const auto& y = b.items[i];
    if (x.value.index() != y.value.index()) return false;
    if (x.is_command()) {
      if (!equal(*x.command(), *y.command())) return false;
    } else if (!equal(*x.annotation(), *y.annotation())) {
      return false;
    }
  }
  return true;
}

bool equal(const Program& a, const Program& b) {
  return a.variables == b.variables && equal(*a.precondition, *b.precondition) &&
         equal(*a.postcondition, *b.postcondition) && equal(a.body, b.body);
}

// ---- collectors ----

void collect_vars(const AExpr& e, std::set<std::string>& out) {
  std::visit(overloaded{
                 [](const AExpr::Lit&) {},
                 [&](const AExpr::Var& v) { out.insert(v.name); },
                 [&](const AExpr::Bin& b) {
                   collect_vars(*b.lhs, out);
                   collect_vars(*b.rhs, out);
                 },
             },
             e.node);
}

void collect_vars(const BExpr& e, std::set<std::string>& out) {
  std::visit(overloaded{
                 [](const BExpr::True&) {},
                 [](const BExpr::False&) {},
                 [&](const BExpr::Eq& q) {
                   collect_vars(*q.lhs, out);
                   collect_vars(*q.rhs, out);
                 },
                 [&](const BExpr::Not& n) { collect_vars(*n.arg, out); },
                 [&](const BExpr::Bin& b) {
                   collect_vars(*b.lhs, out);
                   collect_vars(*b.rhs, out);
                 },
             },
             e.node);
}

void collect_vars(const SeqExpr& s, std::set<std::string>& int_vars,
                  std::set<std::string>& seq_vars) {
  std::visit(overloaded{
                 [](const SeqExpr::Empty&) {},
                 [&](const SeqExpr::Var& v) { seq_vars.insert(v.name); },
                 [&](const SeqExpr::Cons& c) {
                   collect_vars(*c.head, int_vars);
                   collect_vars(*c.tail, int_vars, seq_vars);
                 },
                 [&](const SeqExpr::Concat& c) {
                   collect_vars(*c.lhs, int_vars, seq_vars);
                   collect_vars(*c.rhs, int_vars, seq_vars);
                 },
                 [&](const SeqExpr::Rev& r) { collect_vars(*r.arg, int_vars, seq_vars); },
             },
             s.node);
}

void collect_vars(const Command& c, std::set<std::string>& out) {
  std::visit(overloaded{
                 [](const Command::Skip&) {},
                 [&](const Command::Assign& a) {
                   out.insert(a.target);
                   collect_vars(*a.value, out);
                 },
                 [&](const Command::If& i) {
                   collect_vars(*i.cond, out);
                   collect_vars(*i.then_body, out);
                   collect_vars(*i.else_body, out);
                 },
                 [&](const Command::While& w) {
                   collect_vars(*w.cond, out);
                   collect_vars(*w.body, out);
                 },
                 [&](const Command::Alloc& a) {
                   out.insert(a.target);
                   for (const auto& f : a.fields) collect_vars(*f, out);
                 },
                 [&](const Command::Lookup& l) {
                   out.insert(l.target);
                   collect_vars(*l.address, out);
                 },
                 [&](const Command::Mutate& m) {
                   collect_vars(*m.address, out);
                   collect_vars(*m.value, out);
                 },
                 [&](const Command::Free& f) { collect_vars(*f.address, out); },
             },
             c.node);
}

void collect_vars(const Block& b, std::set<std::string>& out) {
  for (const auto& item : b.items)
    if (item.is_command()) collect_vars(*item.command(), out);
}

void collect_literals(const AExpr& e, std::set<std::int64_t>& out) {
  std::visit(overloaded{
                 [&](const AExpr::Lit& l) { out.insert(l.value); },
                 [](const AExpr::Var&) {},
                 [&](const AExpr::Bin& b) {
                   collect_literals(*b.lhs, out);
                   collect_literals(*b.rhs, out);
                 },
             },
             e.node);
}

namespace {
void collect_literals_bexpr(const BExpr& e, std::set<std::int64_t>& out) {
  std::visit(overloaded{
                 [](const BExpr::True&) {},
                 [](const BExpr::False&) {},
                 [&](const BExpr::Eq& q) {
                   collect_literals(*q.lhs, out);
                   collect_literals(*q.rhs, out);
                 },
                 [&](const BExpr::Not& n) { collect_literals_bexpr(*n.arg, out); },
                 [&](const BExpr::Bin& b) {
                   collect_literals_bexpr(*b.lhs, out);
                   collect_literals_bexpr(*b.rhs, out);
                 },
             },
             e.node);
}

void collect_literals_seq(const SeqExpr& s, std::set<std::int64_t>& out) {
  std::visit(overloaded{
                 [](const SeqExpr::Empty&) {},
                 [](const SeqExpr::Var&) {},
                 [&](const SeqExpr::Cons& c) {
                   collect_literals(*c.head, out);
                   collect_literals_seq(*c.tail, out);
                 },
                 [&](const SeqExpr::Concat& c) {
                   collect_literals_seq(*c.lhs, out);
                   collect_literals_seq(*c.rhs, out);
                 },
                 [&](const SeqExpr::Rev& r) { collect_literals_seq(*r.arg, out); },
             },
             s.node);
}
}  // namespace

void collect_literals(const Assertion& a, std::set<std::int64_t>& out) {
  std::visit(overloaded{
                 [&](const Assertion::Pure& p) { collect_literals_bexpr(*p.cond, out); },
                 [](const Assertion::Emp&) {},
                 [&](const Assertion::PointsTo& p) {
                   collect_literals(*p.address, out);
                   collect_literals(*p.value, out);
                 },
                 [&](const Assertion::SepConj& s) {
                   collect_literals(*s.lhs, out);
                   collect_literals(*s.rhs, out);
                 },
                 [&](const Assertion::Wand& w) {
                   collect_literals(*w.lhs, out);
                   collect_literals(*w.rhs, out);
                 },
                 [&](const Assertion::Bin& b) {
                   collect_literals(*b.lhs, out);
                   collect_literals(*b.rhs, out);
                 },
                 [&](const Assertion::Not& n) { collect_literals(*n.arg, out); },
                 [&](const Assertion::Quant& q) { collect_literals(*q.body, out); },
                 [&](const Assertion::ListRep& l) {
                   collect_literals_seq(*l.contents, out);
                   collect_literals(*l.head, out);
                   collect_literals(*l.end, out);
                 },
                 [&](const Assertion::SeqEq& s) {
                   collect_literals_seq(*s.lhs, out);
                   collect_literals_seq(*s.rhs, out);
                 },
             },
             a.node);
}

void free_vars(const Assertion& a, std::set<std::string>& int_vars,
               std::set<std::string>& seq_vars) {
  std::visit(
      overloaded{
          [&](const Assertion::Pure& p) { collect_vars(*p.cond, int_vars); },
          [](const Assertion::Emp&) {},
          [&](const Assertion::PointsTo& p) {
            collect_vars(*p.address, int_vars);
            collect_vars(*p.value, int_vars);
          },
          [&](const Assertion::SepConj& s) {
            free_vars(*s.lhs, int_vars, seq_vars);
            free_vars(*s.rhs, int_vars, seq_vars);
          },
          [&](const Assertion::Wand& w) {
            free_vars(*w.lhs, int_vars, seq_vars);
            free_vars(*w.rhs, int_vars, seq_vars);
          },
          [&](const Assertion::Bin& b) {
            free_vars(*b.lhs, int_vars, seq_vars);
            free_vars(*b.rhs, int_vars, seq_vars);
          },
          [&](const Assertion::Not& n) { free_vars(*n.arg, int_vars, seq_vars); },
          [&](const Assertion::Quant& q) {
            std::set<std::string> inner_int, inner_seq;
            free_vars(*q.body, inner_int, inner_seq);
            if (q.sort == VarSort::Int)
              inner_int.erase(q.var);
            else
              inner_seq.erase(q.var);
            int_vars.insert(inner_int.begin(), inner_int.end());
            seq_vars.insert(inner_seq.begin(), inner_seq.end());
          },
          [&](const Assertion::ListRep& l) {
            collect_vars(*l.contents, int_vars, seq_vars);
            collect_vars(*l.head, int_vars);
            collect_vars(*l.end, int_vars);
          },
          [&](const Assertion::SeqEq& s) {
            collect_vars(*s.lhs, int_vars, seq_vars);
            collect_vars(*s.rhs, int_vars, seq_vars);
          },
      },
      a.node);
}

}  // namespace seplog
