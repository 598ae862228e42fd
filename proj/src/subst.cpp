#include "seplog/subst.hpp"

namespace seplog {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::set<std::string> replacement_vars(const Substitution& s) {
  std::set<std::string> out;
  for (const auto& [_, e] : s) collect_vars(*e, out);
  return out;
}

}  // namespace

std::string fresh_name(std::string base, const std::set<std::string>& avoid) {
  while (avoid.count(base)) base += "'";
  return base;
}

SeqExprPtr seq_literal(const std::vector<std::int64_t>& values) {
  SeqExprPtr s = seq_empty();
  for (auto it = values.rbegin(); it != values.rend(); ++it) s = seq_cons(lit(*it), s);
  return s;
}

AExprPtr subst(const AExprPtr& e, const Substitution& s) {
  return std::visit(overloaded{
                        [&](const AExpr::Lit&) { return e; },
                        [&](const AExpr::Var& v) {
                          for (const auto& [k, r] : s)
                            if (k == v.name) return r;
                          return e;
                        },
                        [&](const AExpr::Bin& b) {
                          return abin(b.op, subst(b.lhs, s), subst(b.rhs, s));
                        },
                    },
                    e->node);
}

BExprPtr subst(const BExprPtr& e, const Substitution& s) {
  return std::visit(
      overloaded{
          [&](const BExpr::True&) { return e; },
          [&](const BExpr::False&) { return e; },
          [&](const BExpr::Eq& q) { return beq(subst(q.lhs, s), subst(q.rhs, s)); },
          [&](const BExpr::Not& n) { return bnot(subst(n.arg, s)); },
          [&](const BExpr::Bin& b) { return bbin(b.op, subst(b.lhs, s), subst(b.rhs, s)); },
      },
      e->node);
}

SeqExprPtr subst(const SeqExprPtr& e, const Substitution& s) {
  return std::visit(
      overloaded{
          [&](const SeqExpr::Empty&) { return e; },
          [&](const SeqExpr::Var&) { return e; },
          [&](const SeqExpr::Cons& c) { return seq_cons(subst(c.head, s), subst(c.tail, s)); },
          [&](const SeqExpr::Concat& c) {
            return seq_concat(subst(c.lhs, s), subst(c.rhs, s));
          },
          [&](const SeqExpr::Rev& r) { return seq_rev(subst(r.arg, s)); },
      },
      e->node);
}

AssertionPtr subst(const AssertionPtr& a, const Substitution& s) {
  if (s.empty()) return a;
  return std::visit(
      overloaded{
          [&](const Assertion::Pure& p) { return pure(subst(p.cond, s)); },
          [&](const Assertion::Emp&) { return a; },
          [&](const Assertion::PointsTo& p) {
            return points_to(subst(p.address, s), subst(p.value, s));
          },
          [&](const Assertion::SepConj& c) { return sep_conj(subst(c.lhs, s), subst(c.rhs, s)); },
          [&](const Assertion::Wand& w) { return wand(subst(w.lhs, s), subst(w.rhs, s)); },
          [&](const Assertion::Bin& b) { return abin(b.op, subst(b.lhs, s), subst(b.rhs, s)); },
          [&](const Assertion::Not& n) { return anot(subst(n.arg, s)); },
          [&](const Assertion::Quant& q) {
            // Integer and sequence variables live in separate namespaces:
            // an Int binder shadows and can capture only integer names.
            Substitution inner;
            for (const auto& pair : s)
              if (!(pair.first == q.var && q.sort == VarSort::Int)) inner.push_back(pair);
            if (inner.empty()) return a;
            std::string bound = q.var;
            AssertionPtr body = q.body;
            if (q.sort == VarSort::Int && replacement_vars(inner).count(bound)) {
              std::set<std::string> avoid = replacement_vars(inner);
              std::set<std::string> iv, sv;
              free_vars(*body, iv, sv);
              avoid.insert(iv.begin(), iv.end());
              avoid.insert(sv.begin(), sv.end());
              for (const auto& [k, _] : inner) avoid.insert(k);
              std::string renamed = fresh_name(bound + "'", avoid);
              body = subst(body, Substitution{{bound, var(renamed)}});
              bound = renamed;
            }
            AssertionPtr new_body = subst(body, inner);
            return q.universal ? forall(bound, q.sort, new_body)
                               : exists(bound, q.sort, new_body);
          },
          [&](const Assertion::ListRep& l) {
            return listrep(subst(l.contents, s), subst(l.head, s), subst(l.end, s));
          },
          [&](const Assertion::SeqEq& q) { return seq_eq(subst(q.lhs, s), subst(q.rhs, s)); },
      },
      a->node);
}

SeqExprPtr subst_seq(const SeqExprPtr& e, const SeqSubstitution& s) {
  return std::visit(overloaded{
                        [&](const SeqExpr::Empty&) { return e; },
                        [&](const SeqExpr::Var& v) {
                          for (const auto& [k, r] : s)
                            if (k == v.name) return r;
                          return e;
                        },
                        [&](const SeqExpr::Cons& c) {
                          return seq_cons(c.head, subst_seq(c.tail, s));
                        },
                        [&](const SeqExpr::Concat& c) {
                          return seq_concat(subst_seq(c.lhs, s), subst_seq(c.rhs, s));
                        },
                        [&](const SeqExpr::Rev& r) { return seq_rev(subst_seq(r.arg, s)); },
                    },
                    e->node);
}

AssertionPtr subst_seq(const AssertionPtr& a, const SeqSubstitution& s) {
  if (s.empty()) return a;
  return std::visit(
      overloaded{
          [&](const Assertion::Pure&) { return a; },
          [&](const Assertion::Emp&) { return a; },
          [&](const Assertion::PointsTo&) { return a; },
          [&](const Assertion::SepConj& c) {
            return sep_conj(subst_seq(c.lhs, s), subst_seq(c.rhs, s));
          },
          [&](const Assertion::Wand& w) { return wand(subst_seq(w.lhs, s), subst_seq(w.rhs, s)); },
          [&](const Assertion::Bin& b) {
            return abin(b.op, subst_seq(b.lhs, s), subst_seq(b.rhs, s));
          },
          [&](const Assertion::Not& n) { return anot(subst_seq(n.arg, s)); },
          [&](const Assertion::Quant& q) {
            SeqSubstitution inner;
            for (const auto& pair : s)
              if (!(pair.first == q.var && q.sort == VarSort::Seq)) inner.push_back(pair);
            if (inner.empty()) return a;
            std::string bound = q.var;
            AssertionPtr body = q.body;
            // A replacement sequence may mention the bound name either as a
            // sequence variable (Seq binder) or inside an element expression
            // (Int binder); both need renaming.
            std::set<std::string> repl_int, repl_seq;
            for (const auto& [_, e] : inner) collect_vars(*e, repl_int, repl_seq);
            bool captured = (q.sort == VarSort::Seq && repl_seq.count(bound)) ||
                            (q.sort == VarSort::Int && repl_int.count(bound));
            if (captured) {
              std::set<std::string> avoid = repl_int;
              avoid.insert(repl_seq.begin(), repl_seq.end());
              std::set<std::string> iv, sv;
              free_vars(*body, iv, sv);
              avoid.insert(iv.begin(), iv.end());
              avoid.insert(sv.begin(), sv.end());
              for (const auto& [k, _] : inner) avoid.insert(k);
              std::string renamed = fresh_name(bound + "'", avoid);
              if (q.sort == VarSort::Seq)
                body = subst_seq(body, SeqSubstitution{{bound, seq_var(renamed)}});
              else
                body = subst(body, Substitution{{bound, var(renamed)}});
              bound = renamed;
            }
            AssertionPtr new_body = subst_seq(body, inner);
            return q.universal ? forall(bound, q.sort, new_body)
                               : exists(bound, q.sort, new_body);
          },
          [&](const Assertion::ListRep& l) {
            return listrep(subst_seq(l.contents, s), l.head, l.end);
          },
          [&](const Assertion::SeqEq& q) {
            return seq_eq(subst_seq(q.lhs, s), subst_seq(q.rhs, s));
          },
      },
      a->node);
}

}  // namespace seplog
