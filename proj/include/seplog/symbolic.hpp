#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seplog/ast.hpp"

namespace seplog {

struct PureAtom {
  enum class Kind { Eq, Neq, SeqEq };
  Kind kind = Kind::Eq;
  AExprPtr lhs, rhs;            // Eq / Neq
  SeqExprPtr seq_lhs, seq_rhs;  // SeqEq

  static PureAtom eq(AExprPtr l, AExprPtr r) { return {Kind::Eq, l, r, nullptr, nullptr}; }
  static PureAtom neq(AExprPtr l, AExprPtr r) { return {Kind::Neq, l, r, nullptr, nullptr}; }
  static PureAtom seqs(SeqExprPtr l, SeqExprPtr r) {
    return {Kind::SeqEq, nullptr, nullptr, l, r};
  }
};

struct SpatialAtom {
  enum class Kind { PointsTo, ListRep };
  Kind kind = Kind::PointsTo;
  AExprPtr address, value;  // PointsTo
  SeqExprPtr contents;      // ListRep
  AExprPtr head, end;

  static SpatialAtom cell(AExprPtr addr, AExprPtr val) {
    return {Kind::PointsTo, addr, val, nullptr, nullptr, nullptr};
  }
  static SpatialAtom segment(SeqExprPtr contents, AExprPtr head, AExprPtr end) {
    return {Kind::ListRep, nullptr, nullptr, contents, head, end};
  }
};

/// A pure constraint set together with a multiset of spatial atoms, under a
/// prefix of existentially bound logical variables. The empty multiset is
/// emp. Program variables never appear among the existentials.
struct SymbolicHeap {
  std::vector<std::pair<std::string, VarSort>> existentials;
  std::vector<PureAtom> pure;
  std::vector<SpatialAtom> spatial;
};

/// Translation from the assertion language into Pi /\ Sigma form. Throws
/// FragmentError for -*, universal quantification, disjunction, negations
/// other than inequalities, and classical conjunction of two
/// heap-constraining parts.
SymbolicHeap to_symbolic(const Assertion& a);
inline SymbolicHeap to_symbolic(const AssertionPtr& a) { return to_symbolic(*a); }
AssertionPtr from_symbolic(const SymbolicHeap& h);
std::string to_string(const SymbolicHeap& h);

/// Substitute a term for a program variable throughout.
SymbolicHeap subst_heap(const SymbolicHeap& h, const std::string& name, const AExprPtr& e);

/// Pure atoms of a boolean condition (negated when positive is false).
/// Throws FragmentError when the condition has no conjunctive atom form.
std::vector<PureAtom> pure_atoms(const BExpr& b, bool positive);

/// Every variable name occurring in the heap, existentials included.
std::set<std::string> names_of(const SymbolicHeap& h);

/// Close the pure part under equality reasoning, substitute solved
/// equalities through, dissolve empty segments, and add derived facts:
/// distinct cell addresses are unequal, every cell address and nonempty
/// segment head differs from nil and from each other. Returns nullopt when
/// the heap is contradictory.
std::optional<SymbolicHeap> normalize(const SymbolicHeap& h);

/// Canonical sequence form: reversal pushed to variables, concatenation
/// flattened and right-associated, empty units removed. Idempotent and
/// denotation-preserving.
SeqExprPtr seq_normalize(const SeqExprPtr& s);

struct TraceNode {
  std::string rule;
  std::string detail;
  std::vector<TraceNode> children;
};
std::string to_string(const TraceNode& t, int indent = 0);

struct EntailConfig {
  int max_depth = 64;
};

struct EntailResult {
  enum class Status { Proven, NotProven, DepthExceeded };
  Status status = Status::NotProven;
  TraceNode trace;
  std::string reason;

  bool proven() const { return status == Status::Proven; }
};

/// Proof search for P |- Q with points-to matching, listrep fold/unfold,
/// and one-sided unification of the right side's existentials. NotProven
/// means the search failed, not that the entailment is invalid.
EntailResult entails(const SymbolicHeap& p, const SymbolicHeap& q, const EntailConfig& cfg = {});

struct FrameResult {
  bool found = false;
  SymbolicHeap remainder;
  /// Instantiation of the footprint's existentials chosen by the match.
  std::map<std::string, AExprPtr> witnesses;
  TraceNode trace;
  std::string reason;
};

/// Footprint subtraction: a remainder R such that entails(P, footprint * R)
/// holds. R keeps P's pure part and the spatial atoms left after the
/// footprint consumed its cells, unfolding list segments on demand.
FrameResult frame(const SymbolicHeap& p, const SymbolicHeap& footprint,
                  const EntailConfig& cfg = {});

}  // namespace seplog
