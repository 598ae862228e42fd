#include "seplog/verifier.hpp"

#include "seplog/errors.hpp"
#include "seplog/printer.hpp"

namespace seplog {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::set<std::string> modified_vars(const Command& c) {
  std::set<std::string> out;
  std::visit(overloaded{
                 [](const Command::Skip&) {},
                 [&](const Command::Assign& a) { out.insert(a.target); },
                 [&](const Command::If& f) {
                   auto t = modified_vars(*f.then_body);
                   auto e = modified_vars(*f.else_body);
                   out.insert(t.begin(), t.end());
                   out.insert(e.begin(), e.end());
                 },
                 [&](const Command::While& w) { out = modified_vars(*w.body); },
                 [&](const Command::Alloc& a) { out.insert(a.target); },
                 [&](const Command::Lookup& l) { out.insert(l.target); },
                 [](const Command::Mutate&) {},
                 [](const Command::Free&) {},
             },
             c.node);
  return out;
}

std::set<std::string> modified_vars(const Block& b) {
  std::set<std::string> out;
  for (const auto& item : b.items) {
    if (!item.is_command()) continue;
    auto m = modified_vars(*item.command());
    out.insert(m.begin(), m.end());
  }
  return out;
}

std::set<std::string> free_assertion_vars(const Assertion& a) {
  std::set<std::string> iv, sv;
  free_vars(a, iv, sv);
  iv.insert(sv.begin(), sv.end());
  return iv;
}

// ---------------------------------------------------------------------------
// Forward symbolic execution.
// ---------------------------------------------------------------------------

namespace {

// Floyd-style update of `target`: the previous value moves into a fresh
// ghost; `value` is expressed over the pre-state.
SymbolicHeap floyd_assign(const SymbolicHeap& pre, const std::string& target,
                          const AExprPtr& value, GhostNames& ghosts, std::string* ghost_used) {
  std::set<std::string> names = names_of(pre);
  std::set<std::string> value_vars;
  collect_vars(*value, value_vars);
  if (!names.count(target) && !value_vars.count(target)) {
    SymbolicHeap post = pre;
    post.pure.push_back(PureAtom::eq(var(target), value));
    return post;
  }
  std::string ghost = ghosts.make(target);
  if (ghost_used) *ghost_used = ghost;
  SymbolicHeap post = subst_heap(pre, target, var(ghost));
  post.existentials.emplace_back(ghost, VarSort::Int);
  post.pure.push_back(PureAtom::eq(var(target), subst(value, Substitution{{target, var(ghost)}})));
  return post;
}

// Frame out the single cell at `address`; on success returns the remainder
// and the cell's content.
bool expose_cell(const SymbolicHeap& pre, const AExprPtr& address, GhostNames& ghosts,
                 const CheckConfig& cfg, SymbolicHeap* remainder, AExprPtr* content,
                 std::string* why_not, TraceNode* trace) {
  std::string v = ghosts.make("v");
  SymbolicHeap footprint;
  footprint.existentials.emplace_back(v, VarSort::Int);
  footprint.spatial.push_back(SpatialAtom::cell(address, var(v)));
  FrameResult fr = frame(pre, footprint, EntailConfig{cfg.max_depth});
  if (!fr.found) {
    *why_not = "cannot prove that " + render(address) + " is allocated: " + fr.reason;
    return false;
  }
  auto it = fr.witnesses.find(v);
  *content = it != fr.witnesses.end() ? it->second : var(v);
  *remainder = std::move(fr.remainder);
  if (trace) *trace = fr.trace;
  return true;
}

}  // namespace

SymExecResult sym_exec(const Command& c, const SymbolicHeap& pre, GhostNames& ghosts,
                       const CheckConfig& cfg) {
  for (const auto& n : names_of(pre)) ghosts.reserve(n);
  SymExecResult result;
  std::visit(
      overloaded{
          [&](const Command::Skip&) {
            result.ok = true;
            result.post = pre;
            result.trace = {"skip", "", {}};
          },
          [&](const Command::Assign& a) {
            std::string ghost;
            result.post = floyd_assign(pre, a.target, a.value, ghosts, &ghost);
            result.ok = true;
            result.trace = {"assign", a.target + (ghost.empty() ? "" : " saved as " + ghost), {}};
          },
          [&](const Command::Alloc& a) {
            std::set<std::string> names = names_of(pre);
            std::set<std::string> field_vars;
            for (const auto& f : a.fields) collect_vars(*f, field_vars);
            SymbolicHeap post = pre;
            std::vector<AExprPtr> fields = a.fields;
            std::string ghost;
            if (names.count(a.target) || field_vars.count(a.target)) {
              ghost = ghosts.make(a.target);
              post = subst_heap(pre, a.target, var(ghost));
              post.existentials.emplace_back(ghost, VarSort::Int);
              for (auto& f : fields) f = subst(f, Substitution{{a.target, var(ghost)}});
            }
            for (std::size_t i = 0; i < fields.size(); ++i) {
              AExprPtr addr = i == 0 ? var(a.target)
                                     : add(var(a.target), lit(static_cast<std::int64_t>(i)));
              post.spatial.push_back(SpatialAtom::cell(addr, fields[i]));
            }
            result.ok = true;
            result.post = std::move(post);
            result.trace = {"alloc",
                            a.target + " gets a fresh " + std::to_string(a.fields.size()) +
                                "-cell block" + (ghost.empty() ? "" : ", old value " + ghost),
                            {}};
          },
          [&](const Command::Lookup& l) {
            SymbolicHeap remainder;
            AExprPtr content;
            TraceNode ft;
            if (!expose_cell(pre, l.address, ghosts, cfg, &remainder, &content, &result.fault,
                             &ft)) {
              result.ok = false;
              return;
            }
            SymbolicHeap exposed = remainder;
            exposed.spatial.push_back(SpatialAtom::cell(l.address, content));
            std::string ghost;
            result.post = floyd_assign(exposed, l.target, content, ghosts, &ghost);
            result.ok = true;
            result.trace = {"lookup",
                            l.target + " := contents of " + render(l.address) + " = " +
                                render(content),
                            {ft}};
          },
          [&](const Command::Mutate& m) {
            SymbolicHeap remainder;
            AExprPtr content;
            TraceNode ft;
            if (!expose_cell(pre, m.address, ghosts, cfg, &remainder, &content, &result.fault,
                             &ft)) {
              result.ok = false;
              return;
            }
            remainder.spatial.push_back(SpatialAtom::cell(m.address, m.value));
            result.ok = true;
            result.post = std::move(remainder);
            result.trace = {"mutate", render(m.address) + " now holds " + render(m.value), {ft}};
          },
          [&](const Command::Free& f) {
            SymbolicHeap remainder;
            AExprPtr content;
            TraceNode ft;
            if (!expose_cell(pre, f.address, ghosts, cfg, &remainder, &content, &result.fault,
                             &ft)) {
              result.ok = false;
              return;
            }
            result.ok = true;
            result.post = std::move(remainder);
            result.trace = {"free", render(f.address) + " released", {ft}};
          },
          [&](const Command::If&) {
            throw Error("sym_exec applies to atomic commands only");
          },
          [&](const Command::While&) {
            throw Error("sym_exec applies to atomic commands only");
          },
      },
      c.node);
  return result;
}

// ---------------------------------------------------------------------------
// Backward rules.
// ---------------------------------------------------------------------------

AssertionPtr wp(const Command& c, const AssertionPtr& post) {
  return std::visit(
      overloaded{
          [&](const Command::Skip&) { return post; },
          [&](const Command::Assign& a) {
            return subst(post, Substitution{{a.target, a.value}});
          },
          [&](const Command::Mutate& m) {
            return sep_conj(points_to_any(m.address),
                            wand(points_to(m.address, m.value), post));
          },
          [&](const Command::Lookup& l) {
            std::set<std::string> avoid = free_assertion_vars(*post);
            collect_vars(*l.address, avoid);
            avoid.insert(l.target);
            std::string x1 = fresh_name(l.target + "'", avoid);
            AssertionPtr cell = points_to(l.address, var(x1));
            return exists(x1, VarSort::Int,
                          sep_conj(cell, wand(cell, subst(post, Substitution{{l.target, var(x1)}}))));
          },
          [&](const Command::Alloc& a) {
            std::set<std::string> avoid = free_assertion_vars(*post);
            for (const auto& f : a.fields) collect_vars(*f, avoid);
            avoid.insert(a.target);
            std::string x1 = fresh_name(a.target + "'", avoid);
            return forall(x1, VarSort::Int,
                          wand(points_to_cells(var(x1), a.fields),
                               subst(post, Substitution{{a.target, var(x1)}})));
          },
          [&](const Command::Free& f) {
            return sep_conj(points_to_any(f.address), post);
          },
          [&](const Command::If&) -> AssertionPtr {
            throw Error("wp applies to atomic commands only");
          },
          [&](const Command::While&) -> AssertionPtr {
            throw Error("wp applies to atomic commands only");
          },
      },
      c.node);
}

// ---------------------------------------------------------------------------
// Outline checking.
// ---------------------------------------------------------------------------

bool CheckReport::all_proven() const {
  for (const auto& r : results)
    if (r.verdict != ObligationResult::Verdict::Proven) return false;
  return true;
}

std::size_t CheckReport::proven_count() const {
  std::size_t n = 0;
  for (const auto& r : results)
    if (r.verdict == ObligationResult::Verdict::Proven) ++n;
  return n;
}

bool CheckReport::resource_limited() const {
  for (const auto& r : results)
    if (r.resource_limited) return true;
  return false;
}

const char* kind_name(Obligation::Kind k) {
  switch (k) {
    case Obligation::Kind::TripleStep: return "triple-step";
    case Obligation::Kind::Implication: return "implication";
    case Obligation::Kind::InvariantEntry: return "invariant-entry";
    case Obligation::Kind::InvariantPreserve: return "invariant-preserve";
    case Obligation::Kind::PostFromInvariant: return "post-from-invariant";
  }
  return "?";
}

const char* verdict_name(ObligationResult::Verdict v) {
  switch (v) {
    case ObligationResult::Verdict::Proven: return "proven";
    case ObligationResult::Verdict::NotProven: return "not_proven";
    case ObligationResult::Verdict::Error: return "error";
  }
  return "?";
}

namespace {

void collect_annotation_names(const Block& b, std::set<std::string>& out) {
  for (const auto& item : b.items) {
    if (item.is_annotation()) {
      auto names = free_assertion_vars(*item.annotation());
      out.insert(names.begin(), names.end());
      continue;
    }
    const Command& c = *item.command();
    collect_vars(c, out);
    if (const auto* f = std::get_if<Command::If>(&c.node)) {
      collect_annotation_names(*f->then_body, out);
      collect_annotation_names(*f->else_body, out);
    } else if (const auto* w = std::get_if<Command::While>(&c.node)) {
      if (w->invariant) {
        auto names = free_assertion_vars(*w->invariant);
        out.insert(names.begin(), names.end());
      }
      collect_annotation_names(*w->body, out);
    }
  }
}

struct OutlineChecker {
  CheckConfig cfg;
  GhostNames ghosts;
  CheckReport report;
  bool stopped = false;
  Obligation::Kind pending = Obligation::Kind::Implication;
  std::vector<SymbolicHeap> frontier;

  void error_at(Obligation::Kind kind, SourcePos pos, const std::string& what,
                const std::string& diag) {
    ObligationResult r;
    r.obligation = {kind, pos, what, ""};
    r.verdict = ObligationResult::Verdict::Error;
    r.diagnostic = diag;
    report.results.push_back(std::move(r));
    if (cfg.on_result) cfg.on_result(report.results.back());
    stopped = true;
  }

  void emit_entail(const SymbolicHeap& from, const SymbolicHeap& to, Obligation ob) {
    EntailResult r = entails(from, to, EntailConfig{cfg.max_depth});
    ObligationResult res;
    ob.antecedent = to_string(from);
    res.obligation = std::move(ob);
    if (r.proven()) {
      res.verdict = ObligationResult::Verdict::Proven;
      res.trace = std::move(r.trace);
    } else {
      res.verdict = ObligationResult::Verdict::NotProven;
      res.diagnostic = r.reason;
      res.resource_limited = r.status == EntailResult::Status::DepthExceeded;
    }
    report.results.push_back(std::move(res));
    if (cfg.on_result) cfg.on_result(report.results.back());
  }

  void annotation(const AssertionPtr& a, SourcePos pos) {
    SymbolicHeap target;
    try {
      target = to_symbolic(*a);
    } catch (const FragmentError& e) {
      error_at(pending, pos, "{ " + render(a) + " }", e.what());
      return;
    }
    for (const auto& h : frontier)
      emit_entail(h, target, {pending, pos, "{ " + render(a) + " }", ""});
    frontier = {std::move(target)};
    pending = Obligation::Kind::Implication;
  }

  std::vector<SymbolicHeap> with_condition(const std::vector<SymbolicHeap>& heaps,
                                           const std::vector<PureAtom>& atoms) {
    std::vector<SymbolicHeap> out = heaps;
    for (auto& h : out) h.pure.insert(h.pure.end(), atoms.begin(), atoms.end());
    return out;
  }

  void command(const Command& c) {
    if (is_atomic(c)) {
      for (auto& h : frontier) {
        SymExecResult r = sym_exec(c, h, ghosts, cfg);
        if (!r.ok) {
          error_at(Obligation::Kind::TripleStep, c.pos, render(c),
                   "possible abort: " + r.fault);
          return;
        }
        h = std::move(r.post);
      }
      pending = Obligation::Kind::TripleStep;
      return;
    }
    if (const auto* f = std::get_if<Command::If>(&c.node)) {
      std::vector<PureAtom> then_cond, else_cond;
      try {
        then_cond = pure_atoms(*f->cond, true);
        else_cond = pure_atoms(*f->cond, false);
      } catch (const FragmentError& e) {
        error_at(Obligation::Kind::TripleStep, c.pos, render(*f->cond), e.what());
        return;
      }
      std::vector<SymbolicHeap> merged;
      std::vector<SymbolicHeap> entry = frontier;
      frontier = with_condition(entry, then_cond);
      run_block(*f->then_body);
      if (stopped) return;
      merged = frontier;
      frontier = with_condition(entry, else_cond);
      run_block(*f->else_body);
      if (stopped) return;
      merged.insert(merged.end(), frontier.begin(), frontier.end());
      frontier = std::move(merged);
      pending = Obligation::Kind::TripleStep;
      return;
    }
    const auto& w = std::get<Command::While>(c.node);
    if (!w.invariant) {
      error_at(Obligation::Kind::InvariantEntry, c.pos, render(*w.cond),
               "while loop is missing its invariant annotation");
      return;
    }
    SymbolicHeap inv;
    std::vector<PureAtom> cond_true, cond_false;
    try {
      inv = to_symbolic(*w.invariant);
      cond_true = pure_atoms(*w.cond, true);
      cond_false = pure_atoms(*w.cond, false);
    } catch (const FragmentError& e) {
      error_at(Obligation::Kind::InvariantEntry, c.pos, "{ " + render(w.invariant) + " }",
               e.what());
      return;
    }
    for (const auto& h : frontier)
      emit_entail(h, inv, {Obligation::Kind::InvariantEntry, c.pos,
                           "{ " + render(w.invariant) + " }", ""});
    SymbolicHeap inv_and_cond = inv;
    inv_and_cond.pure.insert(inv_and_cond.pure.end(), cond_true.begin(), cond_true.end());
    frontier = {std::move(inv_and_cond)};
    pending = Obligation::Kind::Implication;
    run_block(*w.body);
    if (stopped) return;
    for (const auto& h : frontier)
      emit_entail(h, inv, {Obligation::Kind::InvariantPreserve, c.pos,
                           "{ " + render(w.invariant) + " }", ""});
    SymbolicHeap after = inv;
    after.pure.insert(after.pure.end(), cond_false.begin(), cond_false.end());
    frontier = {std::move(after)};
    pending = Obligation::Kind::PostFromInvariant;
  }

  void run_block(const Block& b) {
    for (const auto& item : b.items) {
      if (stopped) return;
      if (item.is_annotation())
        annotation(item.annotation(), item.pos);
      else
        command(*item.command());
    }
  }
};

}  // namespace

CheckReport check_triple(const AssertionPtr& pre, const Block& body, const AssertionPtr& post,
                         const CheckConfig& cfg) {
  std::set<std::string> names = free_assertion_vars(*pre);
  {
    auto pn = free_assertion_vars(*post);
    names.insert(pn.begin(), pn.end());
    collect_annotation_names(body, names);
  }
  OutlineChecker ck{cfg, GhostNames(std::move(names)), {}, false,
                    Obligation::Kind::Implication, {}};
  SourcePos start{1, 1};
  try {
    ck.frontier = {to_symbolic(*pre)};
  } catch (const FragmentError& e) {
    ck.error_at(Obligation::Kind::Implication, start, "{ " + render(pre) + " }", e.what());
    return std::move(ck.report);
  }
  ck.run_block(body);
  if (!ck.stopped) {
    SourcePos end = body.items.empty() ? start : body.items.back().pos;
    try {
      SymbolicHeap target = to_symbolic(*post);
      for (const auto& h : ck.frontier)
        ck.emit_entail(h, target, {ck.pending, end, "{ " + render(post) + " }", ""});
    } catch (const FragmentError& e) {
      ck.error_at(ck.pending, end, "{ " + render(post) + " }", e.what());
    }
  }
  return std::move(ck.report);
}

CheckReport check_outline(const Program& p, const CheckConfig& cfg) {
  return check_triple(p.precondition, p.body, p.postcondition, cfg);
}

}  // namespace seplog
