#include <doctest.h>

#include "generators.hpp"
#include "seplog/parser.hpp"
#include "seplog/printer.hpp"
#include "seplog/semantics.hpp"

using namespace seplog;

TEST_CASE("expression evaluation") {
  Store s{{"x", 2}, {"y", 4}, {"z", 6}};
  CHECK(eval_aexpr(s, *mul(var("x"), add(var("y"), var("z")))) == 20);
  CHECK(eval_aexpr({}, *add(lit(0), lit(0))) == 0);
  CHECK(eval_aexpr({{"x", 10}}, *add(var("x"), lit(1))) == 11);
  CHECK_THROWS_AS(eval_aexpr({}, *var("x")), EvalError);
}

TEST_CASE("overflow is reported, never wrapped") {
  Store s{{"big", INT64_MAX}};
  CHECK_THROWS_AS(eval_aexpr(s, *add(var("big"), lit(1))), EvalError);
  CHECK_THROWS_AS(eval_aexpr(s, *mul(var("big"), lit(2))), EvalError);
  try {
    eval_aexpr(s, *add(var("big"), lit(1)));
  } catch (const EvalError& e) {
    CHECK(e.kind == EvalError::Kind::Overflow);
  }
}

TEST_CASE("boolean evaluation examples") {
  CHECK(eval_bexpr({{"i", 0}}, *bnot(beq(var("i"), lit(0)))) == false);
  CHECK(eval_bexpr({{"i", 3}, {"j", 3}}, *beq(var("i"), var("j"))) == true);
  CHECK(eval_bexpr({{"x", 10}, {"y", 11}}, *bimp(beq(var("x"), var("y")), bfalse())) == true);
}

TEST_CASE("boolean evaluation agrees with a truth-table oracle on all shapes of depth <= 2") {
  Store s{{"x", 10}, {"y", 11}};
  std::vector<BExprPtr> atoms{btrue(), bfalse(), beq(var("x"), var("x")),
                              beq(var("x"), var("y"))};
  std::vector<BExprPtr> depth1 = atoms;
  for (const auto& a : atoms) {
    depth1.push_back(bnot(a));
    for (const auto& b : atoms) {
      depth1.push_back(band(a, b));
      depth1.push_back(bor(a, b));
      depth1.push_back(bimp(a, b));
    }
  }
  std::size_t checked = 0;
  for (const auto& a : depth1) {
    CHECK(eval_bexpr(s, *a) == testgen::oracle_bexpr(*a, s));
    for (const auto& b : depth1) {
      for (auto op : {BBinOp::And, BBinOp::Or, BBinOp::Imp}) {
        BExprPtr e = bbin(op, a, b);
        CHECK(eval_bexpr(s, *e) == testgen::oracle_bexpr(*e, s));
        ++checked;
      }
    }
    CHECK(eval_bexpr(s, *bnot(a)) == testgen::oracle_bexpr(*bnot(a), s));
  }
  CHECK(checked > 9000);
}

TEST_CASE("the allocate/lookup/free/mutate program aborts on the freed cell") {
  Program p = parse_program(
      "vars x y;\n{ emp }\nx := cons(1, 2);\ny := [x];\nfree(x + 1);\n[x + 1] := y;\n{ true }");
  ExecResult r = exec(p.body, initial_state(p), ExecConfig{10000, 10});
  REQUIRE(r.trace.size() == 3);
  CHECK(r.trace[0].after == State{{{"x", 10}, {"y", 0}}, {{10, 1}, {11, 2}}});
  CHECK(r.trace[1].after == State{{{"x", 10}, {"y", 1}}, {{10, 1}, {11, 2}}});
  CHECK(r.trace[2].after == State{{{"x", 10}, {"y", 1}}, {{10, 1}}});
  REQUIRE(r.aborted());
  CHECK(r.abort_address == 11);
  CHECK(r.abort_command == "[x + 1] := y");
}

TEST_CASE("skip finishes in the same state") {
  State s{{{"x", 5}}, {{3, 7}}};
  ExecResult r = exec(*cmd_skip(), s);
  REQUIRE(r.finished());
  CHECK(r.final_state == s);
}

TEST_CASE("while countdown matches a hand-unrolled oracle") {
  Program p = parse_program(
      "vars i;\n{ true }\nwhile !(i = 0) invariant { true } do (\n  i := i - 1;\n)\n{ true }");
  // Oracle: unroll the three iterations by hand.
  std::int64_t i = 3;
  int guard = 0;
  while (i != 0 && guard++ < 10) i = i - 1;
  REQUIRE(i == 0);

  ExecResult r = exec(p.body, State{{{"i", 3}}, {}}, ExecConfig{100, 1});
  REQUIRE(r.finished());
  CHECK(r.final_state.store.at("i") == 0);
  CHECK(r.final_state.heap.empty());
  CHECK(r.trace.size() == 3);  // one assignment per iteration
}

TEST_CASE("fuel exhaustion is distinguished from abort") {
  Program p = parse_program(
      "vars i;\n{ true }\nwhile true invariant { true } do (\n  skip;\n)\n{ true }");
  ExecResult r = exec(p.body, State{{{"i", 0}}, {}}, ExecConfig{50, 1});
  CHECK(r.out_of_fuel());
  CHECK(!r.aborted());
}

TEST_CASE("allocation takes the lowest free contiguous block at or above the base") {
  auto c = cmd_alloc("x", {lit(7), lit(8)});
  State s{{{"x", 0}}, {{2, 5}}};
  ExecResult r = exec(*c, s, ExecConfig{100, 1});
  REQUIRE(r.finished());
  CHECK(r.final_state.store.at("x") == 3);  // 1 is free but 2 is taken
  CHECK(r.final_state.heap.at(3) == 7);
  CHECK(r.final_state.heap.at(4) == 8);
}

TEST_CASE("execution is deterministic") {
  testgen::Rng rng(99);
  std::vector<std::string> vars{"x", "y", "z"};
  for (int k = 0; k < 100; ++k) {
    Block b = testgen::gen_block(rng, vars, 2, 4);
    State s = testgen::gen_state(rng, vars, 4, 7);
    ExecConfig cfg{200, 1};
    ExecResult r1 = exec(b, s, cfg);
    ExecResult r2 = exec(b, s, cfg);
    CHECK(r1.kind == r2.kind);
    CHECK(r1.final_state == r2.final_state);
    REQUIRE(r1.trace.size() == r2.trace.size());
    for (std::size_t i = 0; i < r1.trace.size(); ++i)
      CHECK(r1.trace[i].after == r2.trace[i].after);
  }
}

TEST_CASE("assignments never read or change the heap") {
  testgen::Rng rng(5);
  std::vector<std::string> vars{"x", "y"};
  for (int k = 0; k < 50; ++k) {
    State s = testgen::gen_state(rng, vars, 4, 7);
    auto c = cmd_assign("x", testgen::gen_aexpr(rng, vars, 3));
    ExecResult r = exec(*c, s);
    REQUIRE(r.finished());
    CHECK(r.final_state.heap == s.heap);
  }
}

namespace {

// Locations of the initial heap that the trace read, wrote or freed:
// re-evaluate each heap command's address in the store it ran under.
std::set<std::int64_t> touched_initial_cells(const Block& b, const State& initial,
                                             const ExecConfig& cfg) {
  std::set<std::int64_t> touched;
  ExecResult r = exec(b, initial, cfg);
  State prev = initial;
  for (const auto& step : r.trace) {
    AExprPtr address;
    if (const auto* l = std::get_if<Command::Lookup>(&step.cmd->node))
      address = l->address;
    else if (const auto* m = std::get_if<Command::Mutate>(&step.cmd->node))
      address = m->address;
    else if (const auto* f = std::get_if<Command::Free>(&step.cmd->node))
      address = f->address;
    if (address) {
      std::int64_t loc = eval_aexpr(prev.store, *address);
      if (initial.heap.count(loc)) touched.insert(loc);
    }
    prev = step.after;
  }
  return touched;
}

}  // namespace

TEST_CASE("frame property on randomized commands and disjoint extra heaps") {
  testgen::Rng rng(1234);
  std::vector<std::string> vars{"x", "y", "z"};
  int checked = 0;
  for (int k = 0; k < 200; ++k) {
    Block b = testgen::gen_block(rng, vars, 2, 3);
    State s = testgen::gen_state(rng, vars, 3, 7, 8);
    ExecConfig cfg{150, 20};
    ExecResult base = exec(b, s, cfg);
    if (!base.finished()) continue;

    // Extra cells at 100.. are disjoint from the initial heap, the final
    // heap, and everything the run allocates (allocation stays below 100
    // for these small programs).
    Heap extra;
    std::size_t n = static_cast<std::size_t>(testgen::pick_int(rng, 1, 3));
    for (std::size_t i = 0; i < n; ++i)
      extra[testgen::pick_int(rng, 100, 120)] = testgen::pick_int(rng, 0, 7);
    bool disjoint = true;
    for (const auto& [loc, _] : extra)
      if (base.final_state.heap.count(loc) || s.heap.count(loc)) disjoint = false;
    for (const auto& step : base.trace)
      for (const auto& [loc, _] : extra)
        if (step.after.heap.count(loc)) disjoint = false;
    if (!disjoint) continue;

    State extended = s;
    extended.heap.insert(extra.begin(), extra.end());
    ExecResult ext = exec(b, extended, cfg);
    REQUIRE(ext.finished());
    CHECK(ext.final_state.store == base.final_state.store);
    Heap expected = base.final_state.heap;
    expected.insert(extra.begin(), extra.end());
    CHECK(ext.final_state.heap == expected);
    ++checked;
  }
  CHECK(checked > 60);
}

TEST_CASE("removing a location the trace touched makes execution abort") {
  // With the allocation base above every initial cell, removing a touched
  // cell cannot change where allocation lands, so the first touch aborts.
  testgen::Rng rng(77);
  std::vector<std::string> vars{"x", "y"};
  int checked = 0;
  for (int k = 0; k < 800 && checked < 40; ++k) {
    Block b = testgen::gen_block(rng, vars, 1, 3);
    State s = testgen::gen_state(rng, vars, 3, 7, 8);
    ExecConfig cfg{100, 50};
    ExecResult base = exec(b, s, cfg);
    if (!base.finished()) continue;
    for (std::int64_t loc : touched_initial_cells(b, s, cfg)) {
      State reduced = s;
      reduced.heap.erase(loc);
      ExecResult r = exec(b, reduced, cfg);
      CHECK(r.aborted());
      ++checked;
    }
  }
  CHECK(checked >= 10);
}

TEST_CASE("state literals round trip") {
  Store s{{"x", 10}, {"y", -2}};
  Heap h{{10, 1}, {11, 2}};
  CHECK(parse_store_literal(store_literal(s)) == s);
  CHECK(parse_heap_literal(heap_literal(h)) == h);
  CHECK(store_literal(s) == "x=10,y=-2");
  CHECK(heap_literal(h) == "10:1,11:2");
  CHECK(state_line(State{s, h}) == "store {x:10, y:-2} heap {10:1, 11:2}");
  CHECK_THROWS(parse_heap_literal("0:5"));
}
