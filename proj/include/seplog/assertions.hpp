#pragma once

#include <cstdint>
#include <vector>

#include "seplog/ast.hpp"
#include "seplog/semantics.hpp"

namespace seplog {

/// Finite domains that make assertion checking a total decision procedure.
/// Quantified integer variables range over `values`; `-*` extension heaps
/// draw unconstrained addresses from `locations`; sequence-sorted
/// quantifiers range over sequences of values up to `max_seq_len`.
struct DomainConfig {
  std::vector<std::int64_t> values;
  std::vector<std::int64_t> locations;
  std::size_t max_seq_len = 3;

  /// values:    integers occurring in the state and assertion, plus 0..7.
  /// locations: heap domain, positive integers of the assertion, and the
  ///            four locations after the largest of those.
  static DomainConfig defaults_for(const State& st, const Assertion& a);
};

/// Truth of an assertion in a concrete state.
///
/// emp holds on the empty heap; e1 |-> e2 on exactly the singleton cell;
/// p * q when some split of the heap into disjoint parts satisfies the two
/// sides (all splits are enumerated); a pure condition constrains only the
/// store. p -* q is decided by enumerating the models of p, which must lie
/// in the precise fragment; otherwise a FragmentError is raised.
bool sat(const Assertion& a, const State& st, const DomainConfig& cfg);
inline bool sat(const Assertion& a, const State& st) {
  return sat(a, st, DomainConfig::defaults_for(st, a));
}
inline bool sat(const AssertionPtr& a, const State& st, const DomainConfig& cfg) {
  return sat(*a, st, cfg);
}
inline bool sat(const AssertionPtr& a, const State& st) { return sat(*a, st); }

/// The exact, finite set of heaps satisfying an assertion in the precise
/// fragment: emp, |-> and its multi-cell form, *, listrep over concrete
/// contents, conjunction with heap-free conditions, and exists over the
/// value domain. Addresses the assertion leaves unconstrained are drawn
/// from cfg.locations. Throws FragmentError outside the fragment.
std::vector<Heap> models_of(const Assertion& a, const Store& store, const DomainConfig& cfg);
inline std::vector<Heap> models_of(const AssertionPtr& a, const Store& store,
                                   const DomainConfig& cfg) {
  return models_of(*a, store, cfg);
}

/// True when the assertion never constrains the heap (pure conditions,
/// sequence equations, and their boolean/quantifier combinations).
bool is_heap_free(const Assertion& a);

/// Concrete value of a sequence expression; requires all sequence
/// variables to have been substituted away.
std::vector<std::int64_t> seq_denote(const SeqExpr& s, const Store& store);

}  // namespace seplog
