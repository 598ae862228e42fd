#include "seplog/symbolic.hpp"

#include <algorithm>
#include <sstream>

#include "poly.hpp"
#include "seplog/assertions.hpp"
#include "seplog/errors.hpp"
#include "seplog/printer.hpp"
#include "seplog/subst.hpp"
#include "seqterm.hpp"

namespace seplog {

using detail::Mono;
using detail::Poly;
using detail::SeqCanon;
using detail::SeqItem;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ---------------------------------------------------------------------------
// Pure closure: solved equalities, residual equations, disequalities, and
// their sequence counterparts.
// ---------------------------------------------------------------------------

struct Closure {
  std::map<std::string, Poly> bindings;  // values mention no bound variable
  std::vector<Poly> residuals;           // poly == 0, sign-normalized
  std::vector<Poly> diseqs;              // poly != 0, sign-normalized
  std::map<std::string, SeqCanon> seq_bindings;
  std::vector<std::pair<SeqCanon, SeqCanon>> seq_residuals;
  bool inconsistent = false;

  Poly reduce(Poly p) const {
    for (const auto& [v, r] : bindings)
      if (detail::poly_mentions(p, v)) p = detail::subst_poly(p, v, r);
    return p;
  }

  SeqCanon reduce_seq(SeqCanon s) const {
    for (const auto& [v, r] : seq_bindings)
      if (detail::seq_canon_mentions(s, v)) s = detail::seq_subst_var(s, v, r);
    for (auto& item : s)
      if (item.kind == SeqItem::Kind::Elem) item.elem = reduce(item.elem);
    return s;
  }

  bool entails_eq(const Poly& a, const Poly& b) const {
    Poly d = reduce(a - b);
    if (d.is_zero()) return true;
    if (d.is_constant()) return false;
    Poly n = detail::normalize_sign(d);
    return std::find(residuals.begin(), residuals.end(), n) != residuals.end();
  }

  bool entails_neq(const Poly& a, const Poly& b) const {
    Poly d = reduce(a - b);
    if (d.is_constant()) return !d.is_zero();
    Poly n = detail::normalize_sign(d);
    return std::find(diseqs.begin(), diseqs.end(), n) != diseqs.end();
  }

  void assert_eq(const Poly& a, const Poly& b) { assert_zero(reduce(a - b)); }

  void assert_zero(Poly d) {
    if (inconsistent) return;
    d = reduce(d);
    if (d.is_zero()) return;
    if (d.is_constant()) {
      inconsistent = true;
      return;
    }
    // Solve for a variable occurring linearly with a unit coefficient and
    // nowhere else in the equation.
    for (const auto& [m, c] : d.terms) {
      if (m.size() != 1 || (c != 1 && c != -1)) continue;
      const std::string& v = m[0];
      bool elsewhere = false;
      for (const auto& [m2, _] : d.terms)
        if (&m2 != &m && std::find(m2.begin(), m2.end(), v) != m2.end()) elsewhere = true;
      if (elsewhere) continue;
      Poly rest = d;
      rest.terms.erase(m);
      Poly value = c == 1 ? detail::neg(rest) : rest;
      solve_binding(v, value);
      return;
    }
    Poly n = detail::normalize_sign(d);
    if (std::find(diseqs.begin(), diseqs.end(), n) != diseqs.end()) {
      inconsistent = true;
      return;
    }
    if (std::find(residuals.begin(), residuals.end(), n) == residuals.end())
      residuals.push_back(n);
  }

  void assert_neq(const Poly& a, const Poly& b) {
    if (inconsistent) return;
    Poly d = reduce(a - b);
    if (d.is_constant()) {
      if (d.is_zero()) inconsistent = true;
      return;
    }
    Poly n = detail::normalize_sign(d);
    if (std::find(residuals.begin(), residuals.end(), n) != residuals.end()) {
      inconsistent = true;
      return;
    }
    if (std::find(diseqs.begin(), diseqs.end(), n) == diseqs.end()) diseqs.push_back(n);
  }

  void solve_binding(const std::string& v, Poly value) {
    value = reduce(value);
    if (detail::poly_mentions(value, v)) {
      Poly d = Poly::variable(v) - value;
      Poly n = detail::normalize_sign(d);
      if (std::find(residuals.begin(), residuals.end(), n) == residuals.end())
        residuals.push_back(n);
      return;
    }
    for (auto& [u, r] : bindings)
      if (detail::poly_mentions(r, v)) r = detail::subst_poly(r, v, value);
    for (auto& [u, r] : seq_bindings)
      for (auto& item : r)
        if (item.kind == SeqItem::Kind::Elem) item.elem = detail::subst_poly(item.elem, v, value);
    bindings[v] = std::move(value);
    reassert_residuals();
  }

  void reassert_residuals() {
    auto eqs = std::move(residuals);
    residuals.clear();
    auto nes = std::move(diseqs);
    diseqs.clear();
    auto seqs = std::move(seq_residuals);
    seq_residuals.clear();
    for (auto& d : eqs) assert_zero(d);
    for (auto& d : nes) assert_neq(d, Poly::constant(0));
    for (auto& [l, r] : seqs) assert_seq_eq(l, r);
  }

  static bool item_identical(const SeqItem& a, const SeqItem& b) { return a == b; }

  void assert_seq_eq(SeqCanon l, SeqCanon r) {
    if (inconsistent) return;
    l = reduce_seq(std::move(l));
    r = reduce_seq(std::move(r));
    // Peel provably matching items from both ends; a front (or back)
    // element of one side must equal the corresponding element of the
    // other, and a shared variable run cancels.
    auto peelable = [&](const SeqItem& a, const SeqItem& b, bool* needs_eq) {
      *needs_eq = false;
      if (item_identical(a, b)) return true;
      if (a.kind == SeqItem::Kind::Elem && b.kind == SeqItem::Kind::Elem) {
        *needs_eq = true;
        return true;
      }
      return false;
    };
    bool progress = true;
    while (progress) {
      progress = false;
      bool needs_eq = false;
      while (!l.empty() && !r.empty() && peelable(l.front(), r.front(), &needs_eq)) {
        if (needs_eq) assert_eq(l.front().elem, r.front().elem);
        l.erase(l.begin());
        r.erase(r.begin());
        progress = true;
      }
      while (!l.empty() && !r.empty() && peelable(l.back(), r.back(), &needs_eq)) {
        if (needs_eq) assert_eq(l.back().elem, r.back().elem);
        l.pop_back();
        r.pop_back();
        progress = true;
      }
      if (inconsistent) return;
    }
    if (l.empty() && r.empty()) return;
    auto all_vars = [](const SeqCanon& s) {
      for (const auto& item : s)
        if (item.kind != SeqItem::Kind::Var) return false;
      return true;
    };
    if (l.empty() || r.empty()) {
      const SeqCanon& rest = l.empty() ? r : l;
      if (!all_vars(rest)) {
        inconsistent = true;
        return;
      }
      std::vector<std::string> names;
      for (const auto& item : rest) names.push_back(item.var);
      for (const auto& n : names) solve_seq_binding(n, {});
      return;
    }
    if (l.size() == 1 && l[0].kind == SeqItem::Kind::Var &&
        !detail::seq_canon_mentions(r, l[0].var)) {
      solve_seq_binding(l[0].var, l[0].reversed ? detail::seq_reverse(r) : r);
      return;
    }
    if (r.size() == 1 && r[0].kind == SeqItem::Kind::Var &&
        !detail::seq_canon_mentions(l, r[0].var)) {
      solve_seq_binding(r[0].var, r[0].reversed ? detail::seq_reverse(l) : l);
      return;
    }
    seq_residuals.emplace_back(std::move(l), std::move(r));
  }

  void solve_seq_binding(const std::string& v, SeqCanon value) {
    value = reduce_seq(std::move(value));
    if (detail::seq_canon_mentions(value, v)) {
      seq_residuals.push_back({SeqCanon{SeqItem::variable(v)}, std::move(value)});
      return;
    }
    for (auto& [u, r] : seq_bindings)
      if (detail::seq_canon_mentions(r, v)) r = detail::seq_subst_var(r, v, value);
    seq_bindings[v] = std::move(value);
    auto seqs = std::move(seq_residuals);
    seq_residuals.clear();
    for (auto& [l, r] : seqs) assert_seq_eq(l, r);
  }

  bool entails_seq_eq(SeqCanon l, SeqCanon r) const {
    l = reduce_seq(std::move(l));
    r = reduce_seq(std::move(r));
    auto peel = [&](SeqCanon& a, SeqCanon& b) {
      bool progress = true;
      while (progress) {
        progress = false;
        while (!a.empty() && !b.empty() && item_matches(a.front(), b.front())) {
          a.erase(a.begin());
          b.erase(b.begin());
          progress = true;
        }
        while (!a.empty() && !b.empty() && item_matches(a.back(), b.back())) {
          a.pop_back();
          b.pop_back();
          progress = true;
        }
      }
    };
    SeqCanon a = l, b = r;
    peel(a, b);
    if (a.empty() && b.empty()) return true;
    for (const auto& [x, y] : seq_residuals) {
      if (pair_matches(a, b, x, y) || pair_matches(b, a, x, y)) return true;
      SeqCanon ra = detail::seq_reverse(a), rb = detail::seq_reverse(b);
      if (pair_matches(ra, rb, x, y) || pair_matches(rb, ra, x, y)) return true;
    }
    return false;
  }

  bool item_matches(const SeqItem& a, const SeqItem& b) const {
    if (a == b) return true;
    return a.kind == SeqItem::Kind::Elem && b.kind == SeqItem::Kind::Elem &&
           entails_eq(a.elem, b.elem);
  }

  bool pair_matches(const SeqCanon& a, const SeqCanon& b, const SeqCanon& x,
                    const SeqCanon& y) const {
    auto list_eq = [&](const SeqCanon& u, const SeqCanon& v) {
      if (u.size() != v.size()) return false;
      for (std::size_t i = 0; i < u.size(); ++i)
        if (!item_matches(u[i], v[i])) return false;
      return true;
    };
    return list_eq(a, x) && list_eq(b, y);
  }
};

// ---------------------------------------------------------------------------
// Internal spatial atoms.
// ---------------------------------------------------------------------------

struct IAtom {
  bool is_cell = true;
  Poly addr, value;     // cell
  SeqCanon contents;    // segment
  Poly head, end;

  static IAtom cell(Poly a, Poly v) {
    IAtom out;
    out.is_cell = true;
    out.addr = std::move(a);
    out.value = std::move(v);
    return out;
  }
  static IAtom segment(SeqCanon c, Poly h, Poly e) {
    IAtom out;
    out.is_cell = false;
    out.contents = std::move(c);
    out.head = std::move(h);
    out.end = std::move(e);
    return out;
  }
};

IAtom to_internal(const SpatialAtom& a) {
  if (a.kind == SpatialAtom::Kind::PointsTo)
    return IAtom::cell(detail::to_poly(*a.address), detail::to_poly(*a.value));
  return IAtom::segment(detail::seq_canon(*a.contents), detail::to_poly(*a.head),
                        detail::to_poly(*a.end));
}

SpatialAtom from_internal(const IAtom& a) {
  if (a.is_cell) return SpatialAtom::cell(detail::from_poly(a.addr), detail::from_poly(a.value));
  return SpatialAtom::segment(detail::seq_uncanon(a.contents), detail::from_poly(a.head),
                              detail::from_poly(a.end));
}

void reduce_atom(IAtom& a, const Closure& cl) {
  if (a.is_cell) {
    a.addr = cl.reduce(a.addr);
    a.value = cl.reduce(a.value);
  } else {
    a.contents = cl.reduce_seq(a.contents);
    a.head = cl.reduce(a.head);
    a.end = cl.reduce(a.end);
  }
}

bool has_element(const SeqCanon& s) {
  for (const auto& item : s)
    if (item.kind == SeqItem::Kind::Elem) return true;
  return false;
}

std::string atom_str(const IAtom& a) {
  if (a.is_cell) return detail::to_string(a.addr) + " |-> " + detail::to_string(a.value);
  return detail::to_string(a.head) + " ~>[" + detail::to_string(a.contents) + "] " +
         detail::to_string(a.end);
}

// ---------------------------------------------------------------------------
// Normal form.
// ---------------------------------------------------------------------------

struct NormState {
  Closure cl;
  std::vector<IAtom> atoms;
};

// Returns false when contradictory.
bool build_norm(const SymbolicHeap& h, NormState& out) {
  for (const auto& p : h.pure) {
    switch (p.kind) {
      case PureAtom::Kind::Eq:
        out.cl.assert_eq(detail::to_poly(*p.lhs), detail::to_poly(*p.rhs));
        break;
      case PureAtom::Kind::Neq:
        out.cl.assert_neq(detail::to_poly(*p.lhs), detail::to_poly(*p.rhs));
        break;
      case PureAtom::Kind::SeqEq:
        out.cl.assert_seq_eq(detail::seq_canon(*p.seq_lhs), detail::seq_canon(*p.seq_rhs));
        break;
    }
    if (out.cl.inconsistent) return false;
  }
  for (const auto& s : h.spatial) out.atoms.push_back(to_internal(s));

  // Dissolve determined segments until stable.
  bool changed = true;
  while (changed && !out.cl.inconsistent) {
    changed = false;
    for (auto& a : out.atoms) reduce_atom(a, out.cl);
    for (std::size_t i = 0; i < out.atoms.size(); ++i) {
      IAtom& a = out.atoms[i];
      if (a.is_cell) continue;
      if (a.contents.empty()) {
        out.cl.assert_eq(a.head, a.end);
        out.atoms.erase(out.atoms.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
      if (out.cl.entails_eq(a.head, a.end)) {
        if (has_element(a.contents)) {
          out.cl.inconsistent = true;
          break;
        }
        out.cl.assert_seq_eq(a.contents, {});
        out.atoms.erase(out.atoms.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  if (out.cl.inconsistent) return false;

  // Derived disequalities: every cell address and provably nonempty segment
  // head denotes an allocated location; all such locations are distinct and
  // none is nil.
  std::vector<Poly> owners;
  for (const auto& a : out.atoms) {
    if (a.is_cell) {
      owners.push_back(a.addr);
    } else if (has_element(a.contents) || out.cl.entails_neq(a.head, a.end)) {
      out.cl.assert_neq(a.head, a.end);
      owners.push_back(a.head);
    }
  }
  for (const auto& o : owners) out.cl.assert_neq(o, Poly::constant(0));
  for (std::size_t i = 0; i < owners.size(); ++i)
    for (std::size_t j = i + 1; j < owners.size(); ++j) out.cl.assert_neq(owners[i], owners[j]);
  if (out.cl.inconsistent) return false;
  for (auto& a : out.atoms) reduce_atom(a, out.cl);
  return true;
}

// Split p == 0 into a readable lhs = rhs pair: positive terms left,
// negated negative terms right.
std::pair<AExprPtr, AExprPtr> split_poly(const Poly& p) {
  Poly pos, neg_part;
  for (const auto& [m, c] : p.terms) {
    if (c > 0)
      pos.terms[m] = c;
    else
      neg_part.terms[m] = -c;
  }
  if (pos.terms.empty()) return {detail::from_poly(neg_part), lit(0)};
  return {detail::from_poly(pos), detail::from_poly(neg_part)};
}

std::vector<PureAtom> emit_pure(const Closure& cl) {
  std::vector<PureAtom> out;
  for (const auto& [v, r] : cl.bindings) out.push_back(PureAtom::eq(var(v), detail::from_poly(r)));
  for (const auto& d : cl.residuals) {
    auto [l, r] = split_poly(d);
    out.push_back(PureAtom::eq(l, r));
  }
  for (const auto& d : cl.diseqs) {
    auto [l, r] = split_poly(d);
    out.push_back(PureAtom::neq(l, r));
  }
  for (const auto& [v, r] : cl.seq_bindings)
    out.push_back(PureAtom::seqs(seq_var(v), detail::seq_uncanon(r)));
  for (const auto& [l, r] : cl.seq_residuals)
    out.push_back(PureAtom::seqs(detail::seq_uncanon(l), detail::seq_uncanon(r)));
  return out;
}

SymbolicHeap rebuild(const NormState& n,
                     const std::vector<std::pair<std::string, VarSort>>& existentials) {
  SymbolicHeap out;
  out.existentials = existentials;
  out.pure = emit_pure(n.cl);
  for (const auto& a : n.atoms) out.spatial.push_back(from_internal(a));
  return out;
}

std::set<std::string> heap_names(const SymbolicHeap& h) {
  std::set<std::string> out;
  for (const auto& [n, _] : h.existentials) out.insert(n);
  auto add_expr = [&](const AExprPtr& e) {
    if (e) collect_vars(*e, out);
  };
  auto add_seq = [&](const SeqExprPtr& s) {
    if (!s) return;
    std::set<std::string> iv, sv;
    collect_vars(*s, iv, sv);
    out.insert(iv.begin(), iv.end());
    out.insert(sv.begin(), sv.end());
  };
  for (const auto& p : h.pure) {
    add_expr(p.lhs);
    add_expr(p.rhs);
    add_seq(p.seq_lhs);
    add_seq(p.seq_rhs);
  }
  for (const auto& s : h.spatial) {
    add_expr(s.address);
    add_expr(s.value);
    add_expr(s.head);
    add_expr(s.end);
    add_seq(s.contents);
  }
  return out;
}

// Rename existentials that clash with `taken`; every final name is added
// to `taken`.
SymbolicHeap rename_apart(const SymbolicHeap& h, std::set<std::string>& taken) {
  SymbolicHeap out = h;
  for (auto& [name, sort] : out.existentials) {
    if (!taken.count(name)) {
      taken.insert(name);
      continue;
    }
    std::string renamed = fresh_name(name + "'", taken);
    taken.insert(renamed);
    if (sort == VarSort::Int) {
      Substitution s{{name, var(renamed)}};
      for (auto& p : out.pure) {
        if (p.lhs) p.lhs = subst(p.lhs, s);
        if (p.rhs) p.rhs = subst(p.rhs, s);
        if (p.seq_lhs) p.seq_lhs = subst(p.seq_lhs, s);
        if (p.seq_rhs) p.seq_rhs = subst(p.seq_rhs, s);
      }
      for (auto& sp : out.spatial) {
        if (sp.address) sp.address = subst(sp.address, s);
        if (sp.value) sp.value = subst(sp.value, s);
        if (sp.head) sp.head = subst(sp.head, s);
        if (sp.end) sp.end = subst(sp.end, s);
        if (sp.contents) sp.contents = subst(sp.contents, s);
      }
    } else {
      SeqSubstitution s{{name, seq_var(renamed)}};
      for (auto& p : out.pure) {
        if (p.seq_lhs) p.seq_lhs = subst_seq(p.seq_lhs, s);
        if (p.seq_rhs) p.seq_rhs = subst_seq(p.seq_rhs, s);
      }
      for (auto& sp : out.spatial)
        if (sp.contents) sp.contents = subst_seq(sp.contents, s);
    }
    name = renamed;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Translation.
// ---------------------------------------------------------------------------

namespace {

void pure_atoms_of(const BExpr& b, bool positive, std::vector<PureAtom>& out) {
  std::visit(
      overloaded{
          [&](const BExpr::True&) {
            if (!positive) out.push_back(PureAtom::eq(lit(0), lit(1)));
          },
          [&](const BExpr::False&) {
            if (positive) out.push_back(PureAtom::eq(lit(0), lit(1)));
          },
          [&](const BExpr::Eq& q) {
            out.push_back(positive ? PureAtom::eq(q.lhs, q.rhs) : PureAtom::neq(q.lhs, q.rhs));
          },
          [&](const BExpr::Not& n) { pure_atoms_of(*n.arg, !positive, out); },
          [&](const BExpr::Bin& bin) {
            if (positive && bin.op == BBinOp::And) {
              pure_atoms_of(*bin.lhs, true, out);
              pure_atoms_of(*bin.rhs, true, out);
              return;
            }
            if (!positive && bin.op == BBinOp::Or) {
              pure_atoms_of(*bin.lhs, false, out);
              pure_atoms_of(*bin.rhs, false, out);
              return;
            }
            throw FragmentError(
                "disjunctive or conditional pure conditions are outside the symbolic fragment");
          },
      },
      b.node);
}

struct Translator {
  SymbolicHeap heap;
  std::set<std::string> bound;

  void walk(const Assertion& a) {
    std::visit(
        overloaded{
            [&](const Assertion::Pure& p) { pure_atoms_of(*p.cond, true, heap.pure); },
            [&](const Assertion::Emp&) {},
            [&](const Assertion::PointsTo& p) {
              heap.spatial.push_back(SpatialAtom::cell(p.address, p.value));
            },
            [&](const Assertion::SepConj& c) {
              walk(*c.lhs);
              walk(*c.rhs);
            },
            [&](const Assertion::Wand&) {
              throw FragmentError("-* is outside the symbolic fragment");
            },
            [&](const Assertion::Bin& b) {
              switch (b.op) {
                case LBinOp::And: {
                  bool lf = is_heap_free(*b.lhs);
                  bool rf = is_heap_free(*b.rhs);
                  if (!lf && !rf)
                    throw FragmentError(
                        "classical conjunction of two heap-constraining assertions is outside "
                        "the symbolic fragment; use * to assert separation");
                  walk(*b.lhs);
                  walk(*b.rhs);
                  return;
                }
                case LBinOp::Or:
                  throw FragmentError("disjunction is outside the symbolic fragment");
                case LBinOp::Imp:
                default:
                  throw FragmentError("implication is outside the symbolic fragment");
              }
            },
            [&](const Assertion::Not& n) {
              const auto* p = std::get_if<Assertion::Pure>(&n.arg->node);
              if (!p) throw FragmentError("negation is outside the symbolic fragment");
              pure_atoms_of(*p->cond, false, heap.pure);
            },
            [&](const Assertion::Quant& q) {
              if (q.universal)
                throw FragmentError("universal quantification is outside the symbolic fragment");
              std::string name = q.var;
              AssertionPtr body = q.body;
              if (bound.count(name)) {
                std::string renamed = fresh_name(name + "'", bound);
                if (q.sort == VarSort::Int)
                  body = subst(body, Substitution{{name, var(renamed)}});
                else
                  body = subst_seq(body, SeqSubstitution{{name, seq_var(renamed)}});
                name = renamed;
              }
              bound.insert(name);
              heap.existentials.emplace_back(name, q.sort);
              walk(*body);
            },
            [&](const Assertion::ListRep& l) {
              heap.spatial.push_back(SpatialAtom::segment(l.contents, l.head, l.end));
            },
            [&](const Assertion::SeqEq& s) { heap.pure.push_back(PureAtom::seqs(s.lhs, s.rhs)); },
        },
        a.node);
  }
};

}  // namespace

std::vector<PureAtom> pure_atoms(const BExpr& b, bool positive) {
  std::vector<PureAtom> out;
  pure_atoms_of(b, positive, out);
  return out;
}

std::set<std::string> names_of(const SymbolicHeap& h) { return heap_names(h); }

SymbolicHeap to_symbolic(const Assertion& a) {
  Translator t;
  std::set<std::string> iv, sv;
  free_vars(a, iv, sv);
  t.bound.insert(iv.begin(), iv.end());
  t.bound.insert(sv.begin(), sv.end());
  t.walk(a);
  return t.heap;
}

AssertionPtr from_symbolic(const SymbolicHeap& h) {
  AssertionPtr spatial;
  for (const auto& s : h.spatial) {
    AssertionPtr atom = s.kind == SpatialAtom::Kind::PointsTo
                            ? points_to(s.address, s.value)
                            : listrep(s.contents, s.head, s.end);
    spatial = spatial ? sep_conj(spatial, atom) : atom;
  }
  if (!spatial) spatial = emp();
  AssertionPtr cond;
  for (const auto& p : h.pure) {
    AssertionPtr atom;
    switch (p.kind) {
      case PureAtom::Kind::Eq: atom = pure(beq(p.lhs, p.rhs)); break;
      case PureAtom::Kind::Neq: atom = pure(bneq(p.lhs, p.rhs)); break;
      case PureAtom::Kind::SeqEq: atom = seq_eq(p.seq_lhs, p.seq_rhs); break;
    }
    cond = cond ? aand(cond, atom) : atom;
  }
  AssertionPtr body = cond ? aand(spatial, cond) : spatial;
  for (auto it = h.existentials.rbegin(); it != h.existentials.rend(); ++it)
    body = exists(it->first, it->second, body);
  return body;
}

std::string to_string(const SymbolicHeap& h) { return render(*from_symbolic(h)); }

SymbolicHeap subst_heap(const SymbolicHeap& h, const std::string& name, const AExprPtr& e) {
  SymbolicHeap out = h;
  Substitution s{{name, e}};
  for (auto& p : out.pure) {
    if (p.lhs) p.lhs = subst(p.lhs, s);
    if (p.rhs) p.rhs = subst(p.rhs, s);
    if (p.seq_lhs) p.seq_lhs = subst(p.seq_lhs, s);
    if (p.seq_rhs) p.seq_rhs = subst(p.seq_rhs, s);
  }
  for (auto& sp : out.spatial) {
    if (sp.address) sp.address = subst(sp.address, s);
    if (sp.value) sp.value = subst(sp.value, s);
    if (sp.head) sp.head = subst(sp.head, s);
    if (sp.end) sp.end = subst(sp.end, s);
    if (sp.contents) sp.contents = subst(sp.contents, s);
  }
  return out;
}

std::optional<SymbolicHeap> normalize(const SymbolicHeap& h) {
  NormState n;
  if (!build_norm(h, n)) return std::nullopt;
  return rebuild(n, h.existentials);
}

SeqExprPtr seq_normalize(const SeqExprPtr& s) {
  return detail::seq_uncanon(detail::seq_canon(*s));
}

std::string to_string(const TraceNode& t, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  std::string out = pad + "[" + t.rule + "] " + t.detail + "\n";
  for (const auto& c : t.children) out += to_string(c, indent + 1);
  return out;
}

// ---------------------------------------------------------------------------
// Entailment proof search.
// ---------------------------------------------------------------------------

namespace {

struct QPure {
  PureAtom::Kind kind;
  Poly l, r;
  SeqCanon sl, sr;
};

struct SearchState {
  Closure facts;
  std::vector<IAtom> ps;
  std::vector<IAtom> qs;
  std::vector<QPure> qp;
  std::map<std::string, Poly> theta_int;
  std::map<std::string, SeqCanon> theta_seq;
  std::vector<TraceNode> log;
};

struct Engine {
  EntailConfig cfg;
  std::set<std::string> ex_int, ex_seq;  // right-side existentials
  std::set<std::string> names;           // all names, for fresh skolems
  std::vector<std::pair<std::string, VarSort>> lhs_ex;  // skolems, for remainders
  int budget = 0;
  bool depth_hit = false;
  bool allow_remainder = false;
  std::string fail_reason;
  // Set on success.
  SearchState final_state;

  std::string fresh(const std::string& base, VarSort sort) {
    std::string n = fresh_name(base, names);
    names.insert(n);
    lhs_ex.emplace_back(n, sort);
    return n;
  }

  bool unbound_int(const std::string& v, const SearchState& st) const {
    return ex_int.count(v) && !st.theta_int.count(v);
  }
  bool unbound_seq(const std::string& v, const SearchState& st) const {
    return ex_seq.count(v) && !st.theta_seq.count(v);
  }

  Poly apply_theta(Poly p, const SearchState& st) const {
    for (const auto& [v, r] : st.theta_int)
      if (detail::poly_mentions(p, v)) p = detail::subst_poly(p, v, r);
    return st.facts.reduce(p);
  }

  SeqCanon apply_theta_seq(SeqCanon s, const SearchState& st) const {
    for (const auto& [v, r] : st.theta_seq)
      if (detail::seq_canon_mentions(s, v)) s = detail::seq_subst_var(s, v, r);
    SeqCanon out;
    for (auto& item : s) {
      if (item.kind == SeqItem::Kind::Elem) item.elem = apply_theta(item.elem, st);
      out.push_back(item);
    }
    return st.facts.reduce_seq(out);
  }

  bool theta_grounded(const Poly& p, const SearchState& st) const {
    for (const auto& v : detail::poly_vars(p))
      if (unbound_int(v, st)) return false;
    return true;
  }

  // Match a right-side term against a left-side one: either provably equal,
  // or solvable by binding one unbound existential.
  bool unify_poly(const Poly& pattern, const Poly& target, SearchState& st,
                  std::string* note = nullptr) const {
    Poly d = apply_theta(pattern, st) - st.facts.reduce(target);
    d = st.facts.reduce(d);
    if (d.is_zero()) return true;
    if (!d.is_constant()) {
      Poly n = detail::normalize_sign(d);
      if (std::find(st.facts.residuals.begin(), st.facts.residuals.end(), n) !=
          st.facts.residuals.end())
        return true;
    }
    for (const auto& [m, c] : d.terms) {
      if (m.size() != 1 || (c != 1 && c != -1)) continue;
      const std::string& v = m[0];
      if (!unbound_int(v, st)) continue;
      bool elsewhere = false;
      for (const auto& [m2, _] : d.terms)
        if (&m2 != &m && std::find(m2.begin(), m2.end(), v) != m2.end()) elsewhere = true;
      if (elsewhere) continue;
      Poly rest = d;
      rest.terms.erase(m);
      Poly value = c == 1 ? detail::neg(rest) : rest;
      if (!theta_grounded(value, st)) continue;
      st.theta_int[v] = value;
      if (note) *note = v + " := " + detail::to_string(value);
      return true;
    }
    return false;
  }

  bool unify_seq(const SeqCanon& pattern, const SeqCanon& target, SearchState& st,
                 std::string* note = nullptr) const {
    SeqCanon p = apply_theta_seq(pattern, st);
    SeqCanon t = st.facts.reduce_seq(target);
    auto rigid = [&](const SeqItem& item) {
      return item.kind == SeqItem::Kind::Elem ||
             !unbound_seq(item.var, st);
    };
    auto match_rigid = [&](const SeqItem& a, const SeqItem& b) {
      if (a.kind == SeqItem::Kind::Elem && b.kind == SeqItem::Kind::Elem)
        return st.facts.entails_eq(a.elem, b.elem);
      return a == b;
    };
    while (!p.empty() && !t.empty() && rigid(p.front()) && match_rigid(p.front(), t.front())) {
      p.erase(p.begin());
      t.erase(t.begin());
    }
    while (!p.empty() && !t.empty() && rigid(p.back()) && match_rigid(p.back(), t.back())) {
      p.pop_back();
      t.pop_back();
    }
    if (p.empty() && t.empty()) return true;
    if (p.empty()) return false;
    if (p.size() == 1 && p[0].kind == SeqItem::Kind::Var && unbound_seq(p[0].var, st)) {
      SeqCanon value = p[0].reversed ? detail::seq_reverse(t) : t;
      st.theta_seq[p[0].var] = value;
      if (note) *note = p[0].var + " := " + detail::to_string(value);
      return true;
    }
    if (t.empty()) {
      for (const auto& item : p)
        if (item.kind != SeqItem::Kind::Var || !unbound_seq(item.var, st)) return false;
      for (const auto& item : p) st.theta_seq[item.var] = {};
      if (note) *note = "empty sequence";
      return true;
    }
    // Without peeled anchors on both sides a variable's extent is not
    // forced; give up rather than guess.
    return false;
  }

  bool discharge_pure(SearchState& st) {
    for (std::size_t i = 0; i < st.qp.size(); ++i) {
      QPure& ob = st.qp[i];
      switch (ob.kind) {
        case PureAtom::Kind::Eq: {
          std::string note;
          if (!unify_poly(ob.l - ob.r, Poly::constant(0), st, &note)) {
            fail_reason = "pure obligation not provable: " +
                          detail::to_string(apply_theta(ob.l, st)) +
                          " = " + detail::to_string(apply_theta(ob.r, st));
            return false;
          }
          st.log.push_back({"pure", detail::to_string(apply_theta(ob.l, st)) + " = " +
                                        detail::to_string(apply_theta(ob.r, st)) +
                                        (note.empty() ? "" : " with " + note),
                            {}});
          break;
        }
        case PureAtom::Kind::Neq: {
          Poly l = apply_theta(ob.l, st), r = apply_theta(ob.r, st);
          if (!theta_grounded(l, st) || !theta_grounded(r, st) || !st.facts.entails_neq(l, r)) {
            fail_reason = "pure obligation not provable: " + detail::to_string(l) +
                          " != " + detail::to_string(r);
            return false;
          }
          st.log.push_back(
              {"pure", detail::to_string(l) + " != " + detail::to_string(r), {}});
          break;
        }
        case PureAtom::Kind::SeqEq: {
          SeqCanon l = apply_theta_seq(ob.sl, st);
          SeqCanon r = apply_theta_seq(ob.sr, st);
          auto has_ex = [&](const SeqCanon& s) {
            for (const auto& item : s)
              if (item.kind == SeqItem::Kind::Var && unbound_seq(item.var, st)) return true;
            return false;
          };
          bool ok;
          std::string note;
          if (!has_ex(l) && !has_ex(r))
            ok = st.facts.entails_seq_eq(l, r);
          else if (!has_ex(r))
            ok = unify_seq(l, r, st, &note);
          else if (!has_ex(l))
            ok = unify_seq(r, l, st, &note);
          else
            ok = false;
          if (!ok) {
            fail_reason = "sequence obligation not provable: " + detail::to_string(l) + " = " +
                          detail::to_string(r);
            return false;
          }
          st.log.push_back({"pure-seq", detail::to_string(l) + " = " + detail::to_string(r) +
                                            (note.empty() ? "" : " with " + note),
                            {}});
          break;
        }
      }
    }
    return true;
  }

  // Expose the first cell of a provably nonempty left-side segment.
  bool unfold(SearchState& st, std::size_t index, std::string* note) {
    IAtom seg = st.ps[index];
    if (seg.is_cell) return false;
    bool elem_headed =
        !seg.contents.empty() && seg.contents.front().kind == SeqItem::Kind::Elem;
    bool lone_var = seg.contents.size() == 1 && seg.contents[0].kind == SeqItem::Kind::Var &&
                    !seg.contents[0].reversed;
    if (!elem_headed && !lone_var) return false;
    if (!elem_headed && !st.facts.entails_neq(seg.head, seg.end)) return false;
    st.ps.erase(st.ps.begin() + static_cast<std::ptrdiff_t>(index));
    Poly first_value;
    SeqCanon rest;
    if (elem_headed) {
      first_value = seg.contents.front().elem;
      rest.assign(seg.contents.begin() + 1, seg.contents.end());
      st.facts.assert_neq(seg.head, seg.end);
    } else {
      std::string a = fresh(seg.contents[0].var + "_h", VarSort::Int);
      std::string tail = fresh(seg.contents[0].var + "_t", VarSort::Seq);
      first_value = Poly::variable(a);
      rest = {SeqItem::variable(tail)};
      SeqCanon unfolded{SeqItem::element(first_value), SeqItem::variable(tail)};
      st.facts.assert_seq_eq(seg.contents, unfolded);
    }
    st.facts.assert_neq(seg.head, Poly::constant(0));
    st.ps.push_back(IAtom::cell(seg.head, first_value));
    if (rest.empty()) {
      // A single node: the link field holds the end address directly.
      st.ps.push_back(IAtom::cell(seg.head + Poly::constant(1), seg.end));
    } else {
      std::string link = fresh("p", VarSort::Int);
      st.ps.push_back(IAtom::cell(seg.head + Poly::constant(1), Poly::variable(link)));
      st.ps.push_back(IAtom::segment(rest, Poly::variable(link), seg.end));
    }
    if (st.facts.inconsistent) return false;
    for (auto& a : st.ps) reduce_atom(a, st.facts);
    if (note) *note = atom_str(seg);
    return true;
  }

  bool search(SearchState st) {
    if (st.facts.inconsistent) {
      st.log.push_back({"ex-falso", "contradictory antecedent", {}});
      final_state = std::move(st);
      return true;
    }
    if (st.qs.empty()) {
      if (!allow_remainder && !st.ps.empty()) {
        fail_reason = "unconsumed spatial atoms on the left: " + atom_str(st.ps.front());
        return false;
      }
      if (!discharge_pure(st)) return false;
      st.log.push_back({st.ps.empty() ? "emp" : "frame",
                        st.ps.empty() ? "both sides fully consumed"
                                      : std::to_string(st.ps.size()) + " atom(s) framed",
                        {}});
      final_state = std::move(st);
      return true;
    }
    if (++budget > cfg.max_depth) {
      depth_hit = true;
      return false;
    }

    for (std::size_t qi = 0; qi < st.qs.size(); ++qi) {
      const IAtom q = st.qs[qi];
      if (q.is_cell) {
        for (std::size_t pi = 0; pi < st.ps.size(); ++pi) {
          if (!st.ps[pi].is_cell) continue;
          SearchState next = st;
          std::string n1, n2;
          if (!unify_poly(q.addr, st.ps[pi].addr, next, &n1)) continue;
          if (!unify_poly(q.value, st.ps[pi].value, next, &n2)) continue;
          std::string detail_str = atom_str(st.ps[pi]);
          if (!n1.empty()) detail_str += ", " + n1;
          if (!n2.empty()) detail_str += ", " + n2;
          next.log.push_back({"match-cell", detail_str, {}});
          next.ps.erase(next.ps.begin() + static_cast<std::ptrdiff_t>(pi));
          next.qs.erase(next.qs.begin() + static_cast<std::ptrdiff_t>(qi));
          if (search(std::move(next))) return true;
        }
        // Unfold a segment that can expose the wanted cell.
        for (std::size_t pi = 0; pi < st.ps.size(); ++pi) {
          if (st.ps[pi].is_cell) continue;
          Poly addr = apply_theta(q.addr, st);
          if (theta_grounded(addr, st)) {
            const Poly& h = st.ps[pi].head;
            if (!st.facts.entails_eq(addr, h) &&
                !st.facts.entails_eq(addr, h + Poly::constant(1)))
              continue;
          }
          SearchState next = st;
          std::string note;
          if (!unfold(next, pi, &note)) continue;
          next.log.push_back({"unfold-segment", note, {}});
          if (search(std::move(next))) return true;
        }
      } else {
        // Exact segment match.
        for (std::size_t pi = 0; pi < st.ps.size(); ++pi) {
          if (st.ps[pi].is_cell) continue;
          SearchState next = st;
          std::string n1, n2, n3;
          if (!unify_poly(q.head, st.ps[pi].head, next, &n1)) continue;
          if (!unify_poly(q.end, st.ps[pi].end, next, &n2)) continue;
          if (!unify_seq(q.contents, st.ps[pi].contents, next, &n3)) continue;
          std::string detail_str = atom_str(st.ps[pi]);
          for (const auto& n : {n1, n2, n3})
            if (!n.empty()) detail_str += ", " + n;
          next.log.push_back({"match-segment", detail_str, {}});
          next.ps.erase(next.ps.begin() + static_cast<std::ptrdiff_t>(pi));
          next.qs.erase(next.qs.begin() + static_cast<std::ptrdiff_t>(qi));
          if (search(std::move(next))) return true;
        }
        // Empty segment: equal endpoints, empty contents.
        {
          Poly h = apply_theta(q.head, st), e = apply_theta(q.end, st);
          if (theta_grounded(h, st) && theta_grounded(e, st) && st.facts.entails_eq(h, e)) {
            SearchState next = st;
            std::string note;
            if (unify_seq(q.contents, {}, next, &note)) {
              next.log.push_back({"fold-empty",
                                  detail::to_string(h) + " = " + detail::to_string(e) +
                                      (note.empty() ? "" : ", " + note),
                                  {}});
              next.qs.erase(next.qs.begin() + static_cast<std::ptrdiff_t>(qi));
              if (search(std::move(next))) return true;
            }
          }
        }
        // Fold one node into the segment: head cell pair + shorter segment.
        for (std::size_t pi = 0; pi < st.ps.size(); ++pi) {
          if (!st.ps[pi].is_cell) continue;
          for (std::size_t pj = 0; pj < st.ps.size(); ++pj) {
            if (pj == pi || !st.ps[pj].is_cell) continue;
            if (!st.facts.entails_eq(st.ps[pj].addr, st.ps[pi].addr + Poly::constant(1)))
              continue;
            Poly end = apply_theta(q.end, st);
            if (!theta_grounded(end, st)) continue;
            if (!st.facts.entails_neq(st.ps[pi].addr, end)) continue;
            SearchState next = st;
            std::string n1;
            if (!unify_poly(q.head, st.ps[pi].addr, next, &n1)) continue;
            SeqCanon contents = apply_theta_seq(q.contents, next);
            SeqCanon rest_pattern;
            std::string n2;
            if (!contents.empty() && contents.front().kind == SeqItem::Kind::Elem) {
              if (!unify_poly(contents.front().elem, st.ps[pi].value, next, &n2)) continue;
              rest_pattern.assign(contents.begin() + 1, contents.end());
            } else if (contents.size() == 1 && contents[0].kind == SeqItem::Kind::Var &&
                       !contents[0].reversed && unbound_seq(contents[0].var, next)) {
              std::string tail = fresh(contents[0].var + "_t", VarSort::Seq);
              ex_seq.insert(tail);
              next.theta_seq[contents[0].var] = {SeqItem::element(st.ps[pi].value),
                                                 SeqItem::variable(tail)};
              n2 = contents[0].var + " := " +
                   detail::to_string(SeqCanon{SeqItem::element(st.ps[pi].value),
                                              SeqItem::variable(tail)});
              rest_pattern = {SeqItem::variable(tail)};
            } else {
              continue;
            }
            Poly link = st.ps[pj].value;
            std::string detail_str = "node " + atom_str(st.ps[pi]);
            for (const auto& n : {n1, n2})
              if (!n.empty()) detail_str += ", " + n;
            next.log.push_back({"fold-segment", detail_str, {}});
            IAtom shorter = IAtom::segment(rest_pattern, link, q.end);
            // Remove the two consumed cells (larger index first).
            std::size_t a = std::max(pi, pj), b = std::min(pi, pj);
            next.ps.erase(next.ps.begin() + static_cast<std::ptrdiff_t>(a));
            next.ps.erase(next.ps.begin() + static_cast<std::ptrdiff_t>(b));
            next.qs[qi] = shorter;
            if (search(std::move(next))) return true;
          }
        }
        // Unfold a left-side segment with the same head to enable folding.
        for (std::size_t pi = 0; pi < st.ps.size(); ++pi) {
          if (st.ps[pi].is_cell) continue;
          Poly h = apply_theta(q.head, st);
          if (theta_grounded(h, st) && !st.facts.entails_eq(h, st.ps[pi].head)) continue;
          if (st.facts.entails_eq(st.ps[pi].head, apply_theta(q.head, st)) &&
              st.facts.entails_eq(st.ps[pi].end, apply_theta(q.end, st)))
            continue;  // the exact-match move already covers this
          SearchState next = st;
          std::string note;
          if (!unfold(next, pi, &note)) continue;
          next.log.push_back({"unfold-segment", note, {}});
          if (search(std::move(next))) return true;
        }
      }
    }
    if (fail_reason.empty())
      fail_reason = "no applicable rule for " + atom_str(st.qs.front());
    return false;
  }
};

struct Prepared {
  Engine engine;
  SearchState initial;
  bool lhs_inconsistent = false;
  bool ok = false;
  std::string error;
};

Prepared prepare(const SymbolicHeap& p, const SymbolicHeap& q, const EntailConfig& cfg) {
  Prepared out;
  out.engine.cfg = cfg;

  // Logical variables are renamed apart: the left side's existentials
  // become fresh skolem constants, the right side's become unification
  // variables. A bound name is kept when nothing else uses it.
  std::set<std::string> taken;
  for (const SymbolicHeap* h : {&p, &q}) {
    std::set<std::string> free = heap_names(*h);
    for (const auto& [n, _] : h->existentials) free.erase(n);
    taken.insert(free.begin(), free.end());
  }
  SymbolicHeap ps = rename_apart(p, taken);
  SymbolicHeap qs = rename_apart(q, taken);

  out.engine.names = taken;
  for (const auto& [n, sort] : ps.existentials) out.engine.lhs_ex.emplace_back(n, sort);
  for (const auto& [n, sort] : qs.existentials) {
    if (sort == VarSort::Int)
      out.engine.ex_int.insert(n);
    else
      out.engine.ex_seq.insert(n);
  }

  NormState norm;
  if (!build_norm(ps, norm)) {
    out.lhs_inconsistent = true;
    out.ok = true;
    return out;
  }
  out.initial.facts = std::move(norm.cl);
  out.initial.ps = std::move(norm.atoms);
  for (const auto& atom : qs.spatial) out.initial.qs.push_back(to_internal(atom));
  for (const auto& atom : qs.pure) {
    QPure ob;
    ob.kind = atom.kind;
    if (atom.kind == PureAtom::Kind::SeqEq) {
      ob.sl = detail::seq_canon(*atom.seq_lhs);
      ob.sr = detail::seq_canon(*atom.seq_rhs);
    } else {
      ob.l = detail::to_poly(*atom.lhs);
      ob.r = detail::to_poly(*atom.rhs);
    }
    out.initial.qp.push_back(std::move(ob));
  }
  out.ok = true;
  return out;
}

}  // namespace

EntailResult entails(const SymbolicHeap& p, const SymbolicHeap& q, const EntailConfig& cfg) {
  EntailResult result;
  Prepared prep = prepare(p, q, cfg);
  result.trace.rule = "entails";
  result.trace.detail = to_string(p) + "  |-  " + to_string(q);
  if (prep.lhs_inconsistent) {
    result.status = EntailResult::Status::Proven;
    result.trace.children.push_back({"ex-falso", "contradictory antecedent", {}});
    return result;
  }
  if (prep.engine.search(std::move(prep.initial))) {
    result.status = EntailResult::Status::Proven;
    result.trace.children = std::move(prep.engine.final_state.log);
    return result;
  }
  if (prep.engine.depth_hit) {
    result.status = EntailResult::Status::DepthExceeded;
    result.reason = "proof search exceeded the depth bound of " +
                    std::to_string(cfg.max_depth) + " rule applications";
    return result;
  }
  result.status = EntailResult::Status::NotProven;
  result.reason = prep.engine.fail_reason;
  return result;
}

FrameResult frame(const SymbolicHeap& p, const SymbolicHeap& footprint,
                  const EntailConfig& cfg) {
  FrameResult result;
  Prepared prep = prepare(p, footprint, cfg);
  prep.engine.allow_remainder = true;
  result.trace.rule = "frame";
  result.trace.detail = to_string(p) + "  \\  " + to_string(footprint);
  if (prep.lhs_inconsistent) {
    // A contradictory heap supports any footprint with an empty remainder.
    result.found = true;
    result.remainder.pure.push_back(PureAtom::eq(lit(0), lit(1)));
    result.trace.children.push_back({"ex-falso", "contradictory antecedent", {}});
    return result;
  }
  if (!prep.engine.search(std::move(prep.initial))) {
    result.reason = prep.engine.depth_hit ? "proof search exceeded the depth bound"
                                          : prep.engine.fail_reason;
    return result;
  }
  const SearchState& fin = prep.engine.final_state;
  result.found = true;
  result.trace.children = fin.log;
  NormState n;
  n.cl = fin.facts;
  n.atoms = fin.ps;
  std::vector<std::pair<std::string, VarSort>> ex = prep.engine.lhs_ex;
  result.remainder = rebuild(n, ex);
  for (const auto& [v, val] : fin.theta_int)
    result.witnesses[v] = detail::from_poly(val);
  return result;
}

}  // namespace seplog
