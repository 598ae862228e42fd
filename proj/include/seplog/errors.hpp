#pragma once

#include <stdexcept>
#include <string>

#include "seplog/ast.hpp"

namespace seplog {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Lexical or grammatical error, with the offending position.
struct ParseError : Error {
  ParseError(SourcePos p, const std::string& msg)
      : Error("parse error at " + std::to_string(p.line) + ":" +
              std::to_string(p.column) + ": " + msg),
        pos(p) {}
  SourcePos pos;
};

/// Expression evaluation failure: unbound variable or integer overflow.
struct EvalError : Error {
  enum class Kind { UnboundVariable, Overflow };
  EvalError(Kind k, const std::string& msg) : Error(msg), kind(k) {}
  Kind kind;
};

/// An assertion falls outside the fragment an operation can decide
/// (imprecise wand operand, classical conjunction of spatial formulas, ...).
struct FragmentError : Error {
  explicit FragmentError(const std::string& msg) : Error(msg) {}
};

/// A configured resource bound was exhausted (search depth, domain size).
struct LimitError : Error {
  explicit LimitError(const std::string& msg) : Error(msg) {}
};

}  // namespace seplog
