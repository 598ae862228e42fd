#pragma once

#include <string>

#include "seplog/ast.hpp"

namespace seplog {

// Canonical text form. render is the inverse of the parser on ASTs:
// parsing the rendered text yields a structurally identical tree.

std::string render(const AExpr& e);
std::string render(const BExpr& e);
std::string render(const SeqExpr& s);
std::string render(const Assertion& a);
std::string render(const Command& c);
std::string render(const Block& b, int indent = 0);
std::string render(const Program& p);

inline std::string render(const AExprPtr& e) { return render(*e); }
inline std::string render(const BExprPtr& e) { return render(*e); }
inline std::string render(const SeqExprPtr& s) { return render(*s); }
inline std::string render(const AssertionPtr& a) { return render(*a); }
inline std::string render(const CommandPtr& c) { return render(*c); }

}  // namespace seplog
