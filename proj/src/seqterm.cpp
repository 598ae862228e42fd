#include "seqterm.hpp"

#include <algorithm>

#include "seplog/printer.hpp"

namespace seplog::detail {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

SeqCanon seq_canon(const SeqExpr& s) {
  return std::visit(
      overloaded{
          [](const SeqExpr::Empty&) { return SeqCanon{}; },
          [](const SeqExpr::Var& v) { return SeqCanon{SeqItem::variable(v.name)}; },
          [](const SeqExpr::Cons& c) {
            SeqCanon out{SeqItem::element(to_poly(*c.head))};
            SeqCanon tail = seq_canon(*c.tail);
            out.insert(out.end(), tail.begin(), tail.end());
            return out;
          },
          [](const SeqExpr::Concat& c) {
            SeqCanon out = seq_canon(*c.lhs);
            SeqCanon rhs = seq_canon(*c.rhs);
            out.insert(out.end(), rhs.begin(), rhs.end());
            return out;
          },
          [](const SeqExpr::Rev& r) { return seq_reverse(seq_canon(*r.arg)); },
      },
      s.node);
}

SeqCanon seq_reverse(SeqCanon s) {
  std::reverse(s.begin(), s.end());
  for (auto& item : s)
    if (item.kind == SeqItem::Kind::Var) item.reversed = !item.reversed;
  return s;
}

SeqExprPtr seq_uncanon(const SeqCanon& s) {
  SeqExprPtr out;
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    if (it->kind == SeqItem::Kind::Elem) {
      out = seq_cons(from_poly(it->elem), out ? out : seq_empty());
    } else {
      SeqExprPtr v = seq_var(it->var);
      if (it->reversed) v = seq_rev(v);
      out = out ? seq_concat(v, out) : v;
    }
  }
  return out ? out : seq_empty();
}

bool seq_canon_mentions(const SeqCanon& s, const std::string& var) {
  for (const auto& item : s)
    if (item.kind == SeqItem::Kind::Var && item.var == var) return true;
  return false;
}

SeqCanon seq_subst_var(const SeqCanon& s, const std::string& var, const SeqCanon& repl) {
  SeqCanon out;
  for (const auto& item : s) {
    if (item.kind == SeqItem::Kind::Var && item.var == var) {
      SeqCanon piece = item.reversed ? seq_reverse(repl) : repl;
      out.insert(out.end(), piece.begin(), piece.end());
    } else {
      out.push_back(item);
    }
  }
  return out;
}

SeqCanon seq_subst_int(const SeqCanon& s, const std::string& var, const Poly& repl) {
  SeqCanon out = s;
  for (auto& item : out)
    if (item.kind == SeqItem::Kind::Elem) item.elem = subst_poly(item.elem, var, repl);
  return out;
}

std::string to_string(const SeqCanon& s) { return render(*seq_uncanon(s)); }

}  // namespace seplog::detail
