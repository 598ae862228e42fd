// Model-level soundness of the prover and the symbolic executor on
// randomized inputs: anything proven must hold in every enumerated model.

#include <doctest.h>

#include "generators.hpp"
#include "seplog/assertions.hpp"
#include "seplog/printer.hpp"
#include "seplog/semantics.hpp"
#include "seplog/symbolic.hpp"
#include "seplog/verifier.hpp"

using namespace seplog;

namespace {

// Literals and arithmetic kept small so quantifier witnesses stay inside
// the finite checking domain; the prover itself is not given the domain.
AExprPtr tiny_aexpr(testgen::Rng& rng, const std::vector<std::string>& vars, int depth) {
  using namespace testgen;
  if (depth <= 0 || coin(rng, 0.5)) {
    if (!vars.empty() && coin(rng)) return var(pick(rng, vars));
    return lit(pick_int(rng, 0, 2));
  }
  AExprPtr l = tiny_aexpr(rng, vars, depth - 1);
  AExprPtr r = tiny_aexpr(rng, vars, depth - 1);
  switch (pick_int(rng, 0, 2)) {
    case 0: return add(l, r);
    case 1: return sub(l, r);
    default: return mul(l, r);
  }
}

// Random assertions inside the symbolic fragment.
AssertionPtr gen_fragment(testgen::Rng& rng, const std::vector<std::string>& vars, int depth,
                          int& fresh) {
  using namespace testgen;
  if (depth <= 0 || coin(rng, 0.3)) {
    switch (pick_int(rng, 0, 4)) {
      case 0: return emp();
      case 1: return points_to(tiny_aexpr(rng, vars, 1), tiny_aexpr(rng, vars, 1));
      case 2: return pure(beq(tiny_aexpr(rng, vars, 1), tiny_aexpr(rng, vars, 1)));
      case 3: return pure(bneq(tiny_aexpr(rng, vars, 1), tiny_aexpr(rng, vars, 1)));
      default:
        return listrep(coin(rng) ? seq_literal({pick_int(rng, 0, 2)}) : seq_literal({}),
                       tiny_aexpr(rng, vars, 1), tiny_aexpr(rng, vars, 1));
    }
  }
  switch (pick_int(rng, 0, 2)) {
    case 0:
      return sep_conj(gen_fragment(rng, vars, depth - 1, fresh),
                      gen_fragment(rng, vars, depth - 1, fresh));
    case 1: {
      AssertionPtr cond = coin(rng)
                              ? pure(beq(tiny_aexpr(rng, vars, 1), tiny_aexpr(rng, vars, 1)))
                              : pure(bneq(tiny_aexpr(rng, vars, 1), tiny_aexpr(rng, vars, 1)));
      return aand(gen_fragment(rng, vars, depth - 1, fresh), cond);
    }
    default: {
      std::string q = "w" + std::to_string(fresh++);
      auto inner = vars;
      inner.push_back(q);
      return exists(q, VarSort::Int,
                    sep_conj(gen_fragment(rng, inner, depth - 1, fresh),
                             pure(beq(var(q), tiny_aexpr(rng, vars, 1)))));
    }
  }
}

DomainConfig wide_domain() {
  DomainConfig cfg;
  for (std::int64_t v = -9; v <= 9; ++v) cfg.values.push_back(v);
  cfg.locations = {1, 2, 3, 4};
  cfg.max_seq_len = 2;
  return cfg;
}

}  // namespace

TEST_CASE("whatever entails proves holds in every small model") {
  testgen::Rng rng(31415);
  std::vector<std::string> vars{"x", "y"};
  DomainConfig cfg = wide_domain();
  int proven = 0;
  for (int i = 0; i < 1500; ++i) {
    int fresh = 0;
    AssertionPtr p = gen_fragment(rng, vars, 2, fresh);
    AssertionPtr q = gen_fragment(rng, vars, 2, fresh);
    SymbolicHeap hp, hq;
    try {
      hp = to_symbolic(*p);
      hq = to_symbolic(*q);
    } catch (const FragmentError&) {
      continue;
    }
    if (!entails(hp, hq).proven()) continue;
    ++proven;
    for (std::int64_t xv = 0; xv <= 3; ++xv)
      for (std::int64_t yv = 0; yv <= 3; ++yv) {
        Store store{{"x", xv}, {"y", yv}};
        std::vector<Heap> models;
        try {
          models = models_of(*p, store, cfg);
        } catch (const FragmentError&) {
          break;  // a heap-free left side has no finite model set
        }
        for (const Heap& h : models) {
          INFO(render(*p) << "  |-  " << render(*q) << "  on store " << store_literal(store)
                          << " heap " << heap_literal(h));
          CHECK(sat(*q, State{store, h}, cfg));
        }
      }
  }
  // the generator must actually exercise the prover
  CHECK(proven > 200);
}

TEST_CASE("whatever sym_exec computes holds after every concrete run") {
  testgen::Rng rng(27182);
  std::vector<std::string> vars{"x", "y"};
  DomainConfig cfg = wide_domain();
  int executed = 0;
  for (int i = 0; i < 1500; ++i) {
    int fresh = 0;
    AssertionPtr pre = gen_fragment(rng, vars, 2, fresh);
    CommandPtr c = testgen::gen_command(rng, vars, 0);
    if (!is_atomic(*c)) continue;
    SymbolicHeap hp;
    try {
      hp = to_symbolic(*pre);
    } catch (const FragmentError&) {
      continue;
    }
    GhostNames ghosts(names_of(hp));
    for (const auto& v : vars) ghosts.reserve(v);
    SymExecResult r = sym_exec(*c, hp, ghosts);
    if (!r.ok) continue;  // a fault is a refusal, never a claim
    ++executed;
    AssertionPtr post = from_symbolic(r.post);
    for (std::int64_t xv = 0; xv <= 3; ++xv)
      for (std::int64_t yv = 0; yv <= 3; ++yv) {
        Store store{{"x", xv}, {"y", yv}};
        std::vector<Heap> models;
        try {
          models = models_of(*pre, store, cfg);
        } catch (const FragmentError&) {
          break;
        }
        for (const Heap& h : models) {
          ExecResult run = exec(*c, State{store, h}, ExecConfig{100, 1});
          INFO("{" << render(*pre) << "} " << render(*c) << " on store "
                   << store_literal(store) << " heap " << heap_literal(h));
          REQUIRE(run.finished());
          DomainConfig post_cfg = DomainConfig::defaults_for(run.final_state, *post);
          post_cfg.max_seq_len = 2;
          CHECK(sat(*post, run.final_state, post_cfg));
        }
      }
  }
  CHECK(executed > 400);
}

TEST_CASE("proven sequence reasoning is denotation-correct") {
  // From a random sequence fact, every provable sequence goal must hold
  // under arbitrary concrete instantiations of the variables.
  testgen::Rng rng(16180);
  std::vector<std::string> ivars{"a", "b"};
  std::vector<std::string> svars{"alpha", "beta"};
  Store store{{"a", 3}, {"b", 5}};
  int proven = 0;
  for (int i = 0; i < 800; ++i) {
    SeqExprPtr f1 = testgen::gen_seq(rng, ivars, svars, 3);
    SeqExprPtr f2 = testgen::gen_seq(rng, ivars, svars, 3);
    SeqExprPtr g1 = testgen::gen_seq(rng, ivars, svars, 3);
    SeqExprPtr g2 = testgen::gen_seq(rng, ivars, svars, 3);
    SymbolicHeap fact, goal;
    fact.pure.push_back(PureAtom::seqs(f1, f2));
    goal.pure.push_back(PureAtom::seqs(g1, g2));
    if (!entails(fact, goal).proven()) continue;
    ++proven;
    for (int k = 0; k < 30; ++k) {
      SeqSubstitution inst;
      for (const auto& v : svars) {
        std::vector<std::int64_t> lits(
            static_cast<std::size_t>(testgen::pick_int(rng, 0, 3)));
        for (auto& x : lits) x = testgen::pick_int(rng, 0, 5);
        inst.emplace_back(v, seq_literal(lits));
      }
      auto denote = [&](const SeqExprPtr& s) {
        return seq_denote(*subst_seq(s, inst), store);
      };
      // only instantiations that satisfy the fact matter
      if (denote(f1) != denote(f2)) continue;
      INFO(render(f1) << " = " << render(f2) << "  entails  " << render(g1) << " = "
                      << render(g2));
      CHECK(denote(g1) == denote(g2));
    }
  }
  CHECK(proven > 30);
}
