// Acceptance suite: one pass/fail line per criterion, each with its time
// budget pinned. Run the binary directly to see every line.

#include <doctest.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "seplog/assertions.hpp"
#include "seplog/fuzz.hpp"
#include "seplog/parser.hpp"
#include "seplog/printer.hpp"
#include "seplog/report.hpp"
#include "seplog/semantics.hpp"
#include "seplog/verifier.hpp"

using namespace seplog;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program corpus(const std::string& name) {
  return parse_program(slurp(std::string(SEPLOG_CORPUS_DIR) + "/" + name));
}

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report_line(int n, const std::string& what, bool pass, double secs, double budget) {
  std::printf("[%s] criterion %d: %s (%.2fs, budget %.0fs)\n", pass ? "PASS" : "FAIL", n,
              what.c_str(), secs, budget);
  std::fflush(stdout);
}

std::vector<Heap> all_heaps(const std::vector<std::int64_t>& locations,
                            const std::vector<std::int64_t>& values, std::size_t max_cells) {
  std::vector<Heap> out{{}};
  for (std::int64_t loc : locations) {
    std::vector<Heap> next = out;
    for (const auto& h : out) {
      if (h.size() >= max_cells) continue;
      for (std::int64_t v : values) {
        Heap extended = h;
        extended[loc] = v;
        next.push_back(extended);
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("criterion 1: the assertion/heap truth table, exhaustively") {
  Stopwatch watch;
  Store s{{"x", 10}, {"y", 11}};
  Heap h1{{10, 1}}, h2{{11, 2}}, both{{10, 1}, {11, 2}};
  DomainConfig cfg;
  cfg.values = {0, 1, 2, 3, 4, 5, 6, 7, 10, 11};
  cfg.locations = {10, 11, 12, 13};

  struct Row {
    const char* text;
    std::vector<Heap> truth;
  };
  std::vector<Row> rows{
      {"x |-> 1 * y |-> 2", {both}},
      {"x |-> 1 && x |-> 1", {h1}},
      {"x |-> 1 * x |-> 1", {}},
      {"x |-> 1 || y |-> 2", {h1, h2}},
      {"x |-> 1 * (x |-> 1 || y |-> 2)", {both}},
      {"(x |-> 1 || y |-> 2) * (x |-> 1 || y |-> 2)", {both}},
      {"x |-> 1 * y |-> 2 * (x |-> 1 || y |-> 2)", {}},
  };
  bool pass = true;
  std::size_t heaps_seen = 0;
  for (const auto& row : rows) {
    AssertionPtr a = parse_assertion(row.text);
    heaps_seen = 0;
    for (const Heap& h : all_heaps({10, 11}, {1, 2}, 2)) {
      bool expected = std::find(row.truth.begin(), row.truth.end(), h) != row.truth.end();
      bool got = sat(*a, State{s, h}, cfg);
      if (got != expected) pass = false;
      CHECK(got == expected);
      ++heaps_seen;
    }
    CHECK(heaps_seen == 9);
  }
  double secs = watch.seconds();
  CHECK(secs < 1.0);
  report_line(1, "seven-row assertion table over all 9 sub-heaps", pass && heaps_seen == 9,
              secs, 1);
}

TEST_CASE("criterion 2: the abort trace, byte-exact") {
  Stopwatch watch;
  std::string golden = slurp(std::string(SEPLOG_GOLDEN_DIR) + "/abort_demo_trace.txt");

  // through the library
  Program p = corpus("abort_demo.sl");
  State initial = initial_state(p);
  ExecResult r = exec(p.body, initial, ExecConfig{10000, 10});
  std::string text = run_text(r, initial, true);
  bool pass = text == golden;
  CHECK(text == golden);

  // and through the command line
  std::string command = std::string(SEPLOG_CLI_PATH) + " run " +
                        std::string(SEPLOG_CORPUS_DIR) + "/abort_demo.sl --alloc-base 10 --trace";
  std::string cli_out;
  std::array<char, 4096> buffer{};
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t n = fread(buffer.data(), 1, buffer.size(), pipe))
    cli_out.append(buffer.data(), n);
  int status = WEXITSTATUS(pclose(pipe));
  CHECK(cli_out == golden);
  CHECK(status == 1);
  pass = pass && cli_out == golden && status == 1;

  double secs = watch.seconds();
  CHECK(secs < 1.0);
  report_line(2, "allocate/lookup/free/mutate trace vs golden file", pass, secs, 1);
}

TEST_CASE("criterion 3: the bundled proof outlines all check") {
  Stopwatch watch;
  bool pass = true;

  CheckReport swap = check_outline(corpus("swap.sl"));
  pass &= swap.all_proven();
  CHECK(swap.all_proven());

  CheckReport offset = check_outline(corpus("offset_list.sl"));
  pass &= offset.all_proven();
  CHECK(offset.all_proven());
  // the adjacent-assertion implication introducing the offset witness
  bool offset_implication = false;
  for (const auto& ob : offset.results)
    if (ob.obligation.kind == Obligation::Kind::Implication &&
        ob.obligation.description.find("exists o") != std::string::npos &&
        ob.verdict == ObligationResult::Verdict::Proven)
      offset_implication = true;
  CHECK(offset_implication);
  pass &= offset_implication;

  CheckReport reverse = check_outline(corpus("list_reverse.sl"));
  pass &= reverse.all_proven();
  CHECK(reverse.all_proven());
  int entry = 0, preserve = 0, post_from_inv = 0, implications = 0;
  for (const auto& ob : reverse.results) {
    entry += ob.obligation.kind == Obligation::Kind::InvariantEntry;
    preserve += ob.obligation.kind == Obligation::Kind::InvariantPreserve;
    post_from_inv += ob.obligation.kind == Obligation::Kind::PostFromInvariant;
    implications += ob.obligation.kind == Obligation::Kind::Implication;
  }
  // invariant entry, preservation, the unfold and fold implications inside
  // the body, and the postcondition derivation chain after the loop
  CHECK(entry == 1);
  CHECK(preserve == 1);
  CHECK(post_from_inv == 1);
  CHECK(implications >= 5);
  bool unfold_step = false, fold_step = false;
  for (const auto& ob : reverse.results) {
    if (ob.obligation.kind != Obligation::Kind::Implication ||
        ob.verdict != ObligationResult::Verdict::Proven)
      continue;
    // loop head into the unfolded cell form, and the rearranged fold
    if (ob.obligation.description.find("i |-> a * i + 1 |-> p") != std::string::npos)
      unfold_step = true;
    if (ob.obligation.description.find("i ~>[beta'] 0") != std::string::npos) fold_step = true;
  }
  CHECK(unfold_step);
  CHECK(fold_step);
  pass &= entry == 1 && preserve == 1 && post_from_inv == 1 && implications >= 5 &&
          unfold_step && fold_step;

  CheckReport array = check_outline(corpus("array_mutate.sl"));
  pass &= array.all_proven();
  CHECK(array.all_proven());

  double secs = watch.seconds();
  CHECK(secs < 10.0);
  report_line(3, "swap, circular offset list and in-place reversal proofs", pass, secs, 10);
}

TEST_CASE("criterion 4: algebraic laws of the separating conjunction") {
  Stopwatch watch;
  testgen::Rng rng(412);
  DomainConfig cfg;
  cfg.values = {0, 1, 2, 3, 4, 5, 6, 7};
  cfg.locations = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  std::vector<std::string> vars{"x", "y"};
  bool pass = true;
  int states = 0;
  while (states < 220) {
    AssertionPtr p1 = testgen::gen_assertion(rng, vars, {}, 2, 0, false);
    AssertionPtr p2 = testgen::gen_assertion(rng, vars, {}, 2, 0, false);
    AssertionPtr p3 = testgen::gen_assertion(rng, vars, {}, 2, 0, false);
    for (int j = 0; j < 4; ++j, ++states) {
      State st = testgen::gen_state(rng, vars, 4, 7);
      auto holds = [&](const AssertionPtr& a) { return sat(*a, st, cfg); };
      bool ok = holds(sep_conj(p1, emp())) == holds(p1) &&
                holds(sep_conj(p1, p2)) == holds(sep_conj(p2, p1)) &&
                holds(sep_conj(sep_conj(p1, p2), p3)) ==
                    holds(sep_conj(p1, sep_conj(p2, p3))) &&
                holds(sep_conj(aor(p1, p2), p3)) ==
                    holds(aor(sep_conj(p1, p3), sep_conj(p2, p3)));
      if (holds(sep_conj(aand(p1, p2), p3)))
        ok = ok && holds(aand(sep_conj(p1, p3), sep_conj(p2, p3)));
      CHECK(ok);
      pass &= ok;
    }
  }
  CHECK(states >= 200);

  // exists distributes both ways; forall only forward
  Store s{{"a", 10}, {"b", 11}};
  DomainConfig qcfg;
  qcfg.values = {1, 2};
  qcfg.locations = {10, 11};
  AssertionPtr p = parse_assertion("a |-> v");
  AssertionPtr q = parse_assertion("b |-> 2");
  for (const Heap& h : all_heaps({10, 11}, {1, 2}, 2)) {
    State st{s, h};
    bool ok = sat(*sep_conj(exists("v", VarSort::Int, p), q), st, qcfg) ==
              sat(*exists("v", VarSort::Int, sep_conj(p, q)), st, qcfg);
    if (sat(*sep_conj(forall("v", VarSort::Int, p), q), st, qcfg))
      ok = ok && sat(*forall("v", VarSort::Int, sep_conj(p, q)), st, qcfg);
    CHECK(ok);
    pass &= ok;
  }

  // stored counterexample: (p1 * q) && (p2 * q) without (p1 && p2) * q
  State witness{s, {{10, 1}, {11, 2}}};
  AssertionPtr p1 = parse_assertion("a |-> 1");
  AssertionPtr p2 = parse_assertion("b |-> 2");
  AssertionPtr qor = parse_assertion("a |-> 1 || b |-> 2");
  bool conj_converse_fails =
      sat(*aand(sep_conj(p1, qor), sep_conj(p2, qor)), witness, qcfg) &&
      !sat(*sep_conj(aand(p1, p2), qor), witness, qcfg);
  CHECK(conj_converse_fails);
  pass &= conj_converse_fails;

  // stored counterexample: forall v . (p * true) without (forall v . p) * true
  AssertionPtr branchy = parse_assertion("(v = 1 && a |-> 1) || (v = 2 && b |-> 2)");
  bool forall_converse_fails =
      sat(*forall("v", VarSort::Int, sep_conj(branchy, assertion_true())), witness, qcfg) &&
      !sat(*sep_conj(forall("v", VarSort::Int, branchy), assertion_true()), witness, qcfg);
  CHECK(forall_converse_fails);
  pass &= forall_converse_fails;

  double secs = watch.seconds();
  CHECK(secs < 30.0);
  report_line(4, "separating-conjunction laws on 220 random states plus counterexamples",
              pass, secs, 30);
}

TEST_CASE("criterion 5: backward rules agree with the interpreter, exhaustively") {
  Stopwatch watch;
  DomainConfig cfg;
  cfg.values = {0, 1, 2, 3, 4, 5};
  cfg.locations = {1, 2, 3, 4, 5};
  const std::vector<std::int64_t> contents{0, 1, 2, 3, 4};
  const std::vector<std::int64_t> store_range{0, 1, 2, 3, 4, 5};

  struct Validation {
    const char* command;
    std::vector<const char*> posts;
  };
  std::vector<Validation> suites{
      {"[x] := 3;", {"x |-> 3", "x |-> 3 * y |-> 1", "emp"}},
      {"y := [x];", {"y = 2", "x |-> y", "y = 2 && x |-> 2"}},
      {"free(x);", {"emp", "y |-> 1", "true"}},
      {"x := cons(1, 2);", {"x |-> 1, 2", "x |-> 1, 2 * true", "!(x = 3)"}},
  };

  std::vector<Heap> heaps = all_heaps(cfg.locations, contents, 3);
  bool pass = true;
  long long states_checked = 0;
  for (const auto& suite : suites) {
    CommandPtr cmd = parse_command(suite.command);
    bool is_alloc = std::holds_alternative<Command::Alloc>(cmd->node);
    std::size_t arity =
        is_alloc ? std::get<Command::Alloc>(cmd->node).fields.size() : 0;
    for (const char* post_text : suite.posts) {
      AssertionPtr post = parse_assertion(post_text);
      AssertionPtr pre = wp(*cmd, post);
      for (std::int64_t xv : store_range)
        for (std::int64_t yv : store_range)
          for (const Heap& h : heaps) {
            State st{{{"x", xv}, {"y", yv}}, h};
            bool lhs = sat(*pre, st, cfg);
            bool rhs;
            if (!is_alloc) {
              ExecResult r = exec(*cmd, st);
              rhs = r.finished() && sat(*post, r.final_state, cfg);
            } else {
              // every admissible in-universe placement must satisfy post
              rhs = true;
              for (std::int64_t l : cfg.locations) {
                bool free_block = true;
                for (std::size_t k = 0; k < arity; ++k)
                  if (h.count(l + static_cast<std::int64_t>(k))) free_block = false;
                if (!free_block) continue;
                ExecResult r = exec(*cmd, st, ExecConfig{100, l});
                if (!r.finished() || r.final_state.store.at("x") != l ||
                    !sat(*post, r.final_state, cfg)) {
                  rhs = false;
                  break;
                }
              }
            }
            if (lhs != rhs) {
              pass = false;
              CAPTURE(suite.command);
              CAPTURE(post_text);
              CAPTURE(state_line(st));
              CHECK(lhs == rhs);
            }
            ++states_checked;
          }
    }
  }
  CHECK(states_checked > 150000);
  double secs = watch.seconds();
  CHECK(secs < 120.0);
  std::ostringstream what;
  what << "backward rules vs interpreter on " << states_checked << " states";
  report_line(5, what.str(), pass, secs, 120);
}

TEST_CASE("criterion 6: everything the checker proves survives fuzzing") {
  Stopwatch watch;
  bool pass = true;
  for (const char* name : {"swap.sl", "offset_list.sl", "array_mutate.sl", "list_reverse.sl"}) {
    Program p = corpus(name);
    CheckReport proof = check_outline(p);
    CHECK(proof.all_proven());
    pass &= proof.all_proven();
    FuzzConfig cfg;
    cfg.samples = 100;
    cfg.seed = 42;
    cfg.alloc_base = 50;
    FuzzReport r = fuzz_triple(p.precondition, p.body, p.postcondition, p.variables, cfg);
    INFO(name << "\n" << r.to_text());
    CHECK(r.samples_run >= 100);
    CHECK(r.failures.empty());
    pass &= r.samples_run >= 100 && r.failures.empty();
  }

  CheckReport broken = check_outline(corpus("list_reverse_broken.sl"));
  CHECK(!broken.all_proven());
  pass &= !broken.all_proven();

  double secs = watch.seconds();
  CHECK(secs < 60.0);
  report_line(6, "proven outlines pass 100-sample fuzzing; the && variant is rejected", pass,
              secs, 60);
}

TEST_CASE("criterion 7: the frame property of execution, 500 randomized cases") {
  Stopwatch watch;
  testgen::Rng rng(9090);
  std::vector<std::string> vars{"x", "y", "z"};
  bool pass = true;
  int cases = 0, exercised = 0;
  while (cases < 500) {
    ++cases;
    Block b = testgen::gen_block(rng, vars, 2, 3);
    State s = testgen::gen_state(rng, vars, 3, 7, 8);
    ExecConfig cfg{150, 20};
    ExecResult base = exec(b, s, cfg);
    if (!base.finished()) continue;  // the property holds vacuously

    Heap extra;
    std::size_t n = static_cast<std::size_t>(testgen::pick_int(rng, 1, 3));
    for (std::size_t i = 0; i < n; ++i)
      extra[testgen::pick_int(rng, 100, 140)] = testgen::pick_int(rng, 0, 7);
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
    Heap expected = base.final_state.heap;
    expected.insert(extra.begin(), extra.end());
    bool ok = ext.finished() && ext.final_state.store == base.final_state.store &&
              ext.final_state.heap == expected;
    CHECK(ok);
    pass &= ok;
    ++exercised;
  }
  CHECK(exercised > 150);
  double secs = watch.seconds();
  CHECK(secs < 30.0);
  std::ostringstream what;
  what << "frame property on 500 cases (" << exercised << " with disjoint extensions)";
  report_line(7, what.str(), pass, secs, 30);
}
