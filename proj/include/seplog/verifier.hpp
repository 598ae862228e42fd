#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "seplog/ast.hpp"
#include "seplog/subst.hpp"
#include "seplog/symbolic.hpp"

namespace seplog {

/// Store variables a command may modify: assignment, lookup and allocation
/// targets. Mutation and deallocation change only the heap.
std::set<std::string> modified_vars(const Command& c);
std::set<std::string> modified_vars(const Block& b);

/// Free variables of an assertion, integer and sequence sorted together.
std::set<std::string> free_assertion_vars(const Assertion& a);
inline std::set<std::string> free_assertion_vars(const AssertionPtr& a) {
  return free_assertion_vars(*a);
}

struct ObligationResult;

struct CheckConfig {
  int max_depth = 64;
  /// Invoked as each obligation is discharged; reports stream in source
  /// order with the summary last.
  std::function<void(const ObligationResult&)> on_result;
};

/// Fresh ghost-variable names for forward symbolic execution.
class GhostNames {
 public:
  GhostNames() = default;
  explicit GhostNames(std::set<std::string> taken) : taken_(std::move(taken)) {}
  std::string make(const std::string& base) {
    std::string n = fresh_name(base + "'", taken_);
    taken_.insert(n);
    return n;
  }
  void reserve(const std::string& n) { taken_.insert(n); }

 private:
  std::set<std::string> taken_;
};

struct SymExecResult {
  bool ok = false;
  SymbolicHeap post;
  std::string fault;  // when !ok: why the command may abort
  TraceNode trace;
};

/// Strongest-postcondition transformer for an atomic command. Assignment,
/// allocation and lookup record the overwritten variable in a fresh ghost;
/// lookup, mutation and deallocation must prove their footprint cell
/// allocated (via frame inference, unfolding list segments on demand) and
/// fault otherwise — a fault is a failed proof that the command cannot
/// abort.
SymExecResult sym_exec(const Command& c, const SymbolicHeap& pre, GhostNames& ghosts,
                       const CheckConfig& cfg = {});

/// Backward-rule precondition as a literal assertion, for validation
/// against the operational semantics; the symbolic prover never consumes
/// the -* these contain.
AssertionPtr wp(const Command& c, const AssertionPtr& post);

struct Obligation {
  enum class Kind {
    TripleStep,
    Implication,
    InvariantEntry,
    InvariantPreserve,
    PostFromInvariant
  };
  Kind kind = Kind::Implication;
  SourcePos pos;
  std::string description;
  std::string antecedent;  // rendered symbolic heap the obligation starts from
};

struct ObligationResult {
  enum class Verdict { Proven, NotProven, Error };
  Obligation obligation;
  Verdict verdict = Verdict::Error;
  std::string diagnostic;
  TraceNode trace;
  bool resource_limited = false;
};

struct CheckReport {
  std::vector<ObligationResult> results;

  bool all_proven() const;
  std::size_t proven_count() const;
  bool resource_limited() const;
};

const char* kind_name(Obligation::Kind k);
const char* verdict_name(ObligationResult::Verdict v);

/// Check {pre} body {post}: forward symbolic execution through the block,
/// one obligation per annotation reached and per loop rule premise.
CheckReport check_triple(const AssertionPtr& pre, const Block& body, const AssertionPtr& post,
                         const CheckConfig& cfg = {});

/// Check a fully annotated program.
CheckReport check_outline(const Program& p, const CheckConfig& cfg = {});

}  // namespace seplog
