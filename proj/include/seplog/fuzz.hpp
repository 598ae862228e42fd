#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seplog/assertions.hpp"
#include "seplog/ast.hpp"
#include "seplog/semantics.hpp"

namespace seplog {

/// Differential testing configuration. A fixed seed reproduces the exact
/// sample sequence.
struct FuzzConfig {
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  DomainConfig domain{std::vector<std::int64_t>{0, 1, 2, 3, 4, 5, 6, 7},
                      std::vector<std::int64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}, 3};
  std::int64_t fuel = 10000;
  std::int64_t alloc_base = 1;
  /// Length bound for instantiating free sequence variables before heaps
  /// are materialized.
  std::size_t max_ghost_seq_len = 4;
};

/// Up to cfg.samples distinct states satisfying P: store values drawn from
/// the value domain, heaps from models_of. P must be free of uninstantiated
/// logical variables. An empty result means no in-domain model was found.
std::vector<State> sample_states(const AssertionPtr& p,
                                 const std::vector<std::string>& declared_vars,
                                 const FuzzConfig& cfg);

struct FuzzFailure {
  enum class Kind { Abort, PostFailed };
  Kind kind = Kind::Abort;
  std::size_t sample_index = 0;
  State initial;
  std::string ghosts;  // instantiation of logical variables, if any
  std::string detail;
};

struct FuzzReport {
  std::uint64_t seed = 0;
  std::size_t requested = 0;
  std::size_t samples_run = 0;
  std::size_t out_of_fuel = 0;  // partial correctness says nothing there
  std::vector<FuzzFailure> failures;

  bool ok() const { return failures.empty(); }
  std::string to_text() const;
};

/// Samples states from the precondition, executes the body, and checks the
/// postcondition on every final state; aborts and postcondition failures
/// are counterexamples reported with replayable state dumps.
FuzzReport fuzz_triple(const AssertionPtr& pre, const Block& body, const AssertionPtr& post,
                       const std::vector<std::string>& declared_vars, const FuzzConfig& cfg);

}  // namespace seplog
