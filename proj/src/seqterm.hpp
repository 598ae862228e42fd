#pragma once

#include <string>
#include <vector>

#include "poly.hpp"
#include "seplog/ast.hpp"

namespace seplog::detail {

// Canonical sequence form: a flat run of items, each a single element (a
// polynomial) or a possibly-reversed sequence variable. Reversal is pushed
// onto variables, concatenation is flattened, and empty units disappear, so
// rev(a . s) becomes [rev s, a] and rev(rev s) is s itself.

struct SeqItem {
  enum class Kind { Elem, Var };
  Kind kind;
  Poly elem;         // Kind::Elem
  std::string var;   // Kind::Var
  bool reversed = false;

  static SeqItem element(Poly p) { return {Kind::Elem, std::move(p), {}, false}; }
  static SeqItem variable(std::string name, bool rev = false) {
    return {Kind::Var, {}, std::move(name), rev};
  }
  bool operator==(const SeqItem&) const = default;
};

using SeqCanon = std::vector<SeqItem>;

SeqCanon seq_canon(const SeqExpr& s);
SeqCanon seq_reverse(SeqCanon s);
SeqExprPtr seq_uncanon(const SeqCanon& s);

bool seq_canon_mentions(const SeqCanon& s, const std::string& var);
/// Replace every occurrence of a sequence variable (reversed occurrences
/// receive the reversed replacement).
SeqCanon seq_subst_var(const SeqCanon& s, const std::string& var, const SeqCanon& repl);
/// Substitute a polynomial for an integer variable inside element items.
SeqCanon seq_subst_int(const SeqCanon& s, const std::string& var, const Poly& repl);

std::string to_string(const SeqCanon& s);

}  // namespace seplog::detail
