#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "seplog/ast.hpp"

namespace seplog {

/// Simultaneous substitution of expressions for integer variables.
using Substitution = std::vector<std::pair<std::string, AExprPtr>>;
/// Simultaneous substitution of sequences for sequence variables.
using SeqSubstitution = std::vector<std::pair<std::string, SeqExprPtr>>;

AExprPtr subst(const AExprPtr& e, const Substitution& s);
BExprPtr subst(const BExprPtr& e, const Substitution& s);
SeqExprPtr subst(const SeqExprPtr& e, const Substitution& s);
/// Capture-avoiding: bound variables are renamed when a replacement would
/// otherwise be captured.
AssertionPtr subst(const AssertionPtr& a, const Substitution& s);

SeqExprPtr subst_seq(const SeqExprPtr& e, const SeqSubstitution& s);
AssertionPtr subst_seq(const AssertionPtr& a, const SeqSubstitution& s);

/// base, base', base'', ... until the name avoids the given set.
std::string fresh_name(std::string base, const std::set<std::string>& avoid);

/// A sequence literal: v1 . v2 . ... . eps.
SeqExprPtr seq_literal(const std::vector<std::int64_t>& values);

}  // namespace seplog
