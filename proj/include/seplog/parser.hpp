#pragma once

#include <string_view>
#include <utility>

#include "seplog/ast.hpp"
#include "seplog/errors.hpp"

namespace seplog {

// Text format: UTF-8, `//` line comments. Programs declare their variables
// up front (`vars x y;`), carry a precondition and postcondition in braces,
// and may interleave `{ assertion }` annotations between commands. Every
// while loop carries an `invariant { ... }` clause.
//
// Sugar handled at parse time:
//   e ~> e'            becomes  (e |-> e') * true
//   e |-> e1, ..., en  becomes  e |-> e1 * ... * e+n-1 |-> en
//   e != e'            becomes  !(e = e')
//   nil                is the integer constant 0
//
// Quantified variables are sorted by use: a name appearing in sequence
// position anywhere in the body binds as a sequence variable, otherwise as
// an integer variable. An equation is read as a sequence equation when
// either side uses a sequence constructor (eps, `.`, `++`, rev).

Program parse_program(std::string_view text);
AssertionPtr parse_assertion(std::string_view text);
/// A single command, e.g. "[x] := 4;" (trailing semicolon optional).
CommandPtr parse_command(std::string_view text);
/// "P |- Q" entailment queries.
std::pair<AssertionPtr, AssertionPtr> parse_entailment(std::string_view text);

}  // namespace seplog
