#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "seplog/ast.hpp"
#include "seplog/errors.hpp"

namespace seplog {

/// Variables to values. The domain is fixed by the program's declarations.
using Store = std::map<std::string, std::int64_t>;
/// Locations (>= 1) to values. 0 is the null constant and never allocated.
using Heap = std::map<std::int64_t, std::int64_t>;

struct State {
  Store store;
  Heap heap;

  bool operator==(const State&) const = default;
  bool operator<(const State& o) const {
    return store != o.store ? store < o.store : heap < o.heap;
  }
};

/// Expression evaluation reads only the store; there is no heap argument.
std::int64_t eval_aexpr(const Store& store, const AExpr& e);
bool eval_bexpr(const Store& store, const BExpr& e);

struct ExecConfig {
  std::int64_t fuel = 10000;
  std::int64_t alloc_base = 1;
};

struct ExecStep {
  CommandPtr cmd;
  std::string command;  // rendered atomic command
  SourcePos pos;
  State after;
};

struct ExecResult {
  enum class Kind { Final, Abort, OutOfFuel };
  Kind kind = Kind::Final;
  State final_state;  // meaningful for Final
  // Abort details: the offending command and the address whose membership
  // in the heap domain failed.
  std::string abort_command;
  SourcePos abort_pos;
  std::int64_t abort_address = 0;
  std::vector<ExecStep> trace;  // state after every atomic command

  bool aborted() const { return kind == Kind::Abort; }
  bool finished() const { return kind == Kind::Final; }
  bool out_of_fuel() const { return kind == Kind::OutOfFuel; }
};

/// Big-step execution. Allocation is deterministic: the smallest block of
/// contiguous free locations at or above alloc_base. Annotations inside the
/// block are ignored. Lookup, mutation and deallocation of an address
/// outside the heap domain abort.
ExecResult exec(const Block& body, State initial, const ExecConfig& config = {});
ExecResult exec(const Command& c, State initial, const ExecConfig& config = {});

/// Initial state for a program: every declared variable 0, empty heap,
/// then overrides applied.
State initial_state(const Program& p, const Store& overrides = {});

// ---- literal text forms (CLI flags and fuzz-report dumps) ----

std::string store_literal(const Store& s);   // "x=10,y=11"
std::string heap_literal(const Heap& h);     // "10:1,11:2"
Store parse_store_literal(const std::string& text);
Heap parse_heap_literal(const std::string& text);

/// One-line state form used in traces: "store {x:10, y:1} heap {10:1, 11:2}".
std::string state_line(const State& s);

}  // namespace seplog
