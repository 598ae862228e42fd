#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace seplog {

struct SourcePos {
  int line = 0;
  int column = 0;
};

// ---------------------------------------------------------------------------
// Arithmetic expressions. Heap access (cons, [-]) is deliberately not an
// expression form; expressions read only the store.
// ---------------------------------------------------------------------------

struct AExpr;
using AExprPtr = std::shared_ptr<const AExpr>;

enum class ABinOp { Add, Sub, Mul };

struct AExpr {
  struct Lit {
    std::int64_t value = 0;
  };
  struct Var {
    std::string name;
  };
  struct Bin {
    ABinOp op;
    AExprPtr lhs;
    AExprPtr rhs;
  };
  std::variant<Lit, Var, Bin> node;
};

AExprPtr lit(std::int64_t v);
AExprPtr var(std::string name);
AExprPtr abin(ABinOp op, AExprPtr lhs, AExprPtr rhs);
AExprPtr add(AExprPtr lhs, AExprPtr rhs);
AExprPtr sub(AExprPtr lhs, AExprPtr rhs);
AExprPtr mul(AExprPtr lhs, AExprPtr rhs);
/// The null constant; locations are >= 1 so nil maps to 0.
AExprPtr nil_expr();

// ---------------------------------------------------------------------------
// Boolean expressions (pure: store-only).
// ---------------------------------------------------------------------------

struct BExpr;
using BExprPtr = std::shared_ptr<const BExpr>;

enum class BBinOp { And, Or, Imp };

struct BExpr {
  struct True {};
  struct False {};
  struct Eq {
    AExprPtr lhs;
    AExprPtr rhs;
  };
  struct Not {
    BExprPtr arg;
  };
  struct Bin {
    BBinOp op;
    BExprPtr lhs;
    BExprPtr rhs;
  };
  std::variant<True, False, Eq, Not, Bin> node;
};

BExprPtr btrue();
BExprPtr bfalse();
BExprPtr beq(AExprPtr lhs, AExprPtr rhs);
BExprPtr bneq(AExprPtr lhs, AExprPtr rhs);  // sugar: !(lhs = rhs)
BExprPtr bnot(BExprPtr arg);
BExprPtr bbin(BBinOp op, BExprPtr lhs, BExprPtr rhs);
BExprPtr band(BExprPtr lhs, BExprPtr rhs);
BExprPtr bor(BExprPtr lhs, BExprPtr rhs);
BExprPtr bimp(BExprPtr lhs, BExprPtr rhs);

// ---------------------------------------------------------------------------
// Symbolic sequences: contents of list segments.
// ---------------------------------------------------------------------------

struct SeqExpr;
using SeqExprPtr = std::shared_ptr<const SeqExpr>;

struct SeqExpr {
  struct Empty {};
  struct Var {
    std::string name;
  };
  struct Cons {
    AExprPtr head;
    SeqExprPtr tail;
  };
  struct Concat {
    SeqExprPtr lhs;
    SeqExprPtr rhs;
  };
  struct Rev {
    SeqExprPtr arg;
  };
  std::variant<Empty, Var, Cons, Concat, Rev> node;
};

SeqExprPtr seq_empty();
SeqExprPtr seq_var(std::string name);
SeqExprPtr seq_cons(AExprPtr head, SeqExprPtr tail);
SeqExprPtr seq_concat(SeqExprPtr lhs, SeqExprPtr rhs);
SeqExprPtr seq_rev(SeqExprPtr arg);

// ---------------------------------------------------------------------------
// Assertions.
// ---------------------------------------------------------------------------

enum class VarSort { Int, Seq };

struct Assertion;
using AssertionPtr = std::shared_ptr<const Assertion>;

enum class LBinOp { And, Or, Imp };

struct Assertion {
  struct Pure {
    BExprPtr cond;
  };
  struct Emp {};
  struct PointsTo {
    AExprPtr address;
    AExprPtr value;
  };
  struct SepConj {
    AssertionPtr lhs;
    AssertionPtr rhs;
  };
  struct Wand {
    AssertionPtr lhs;
    AssertionPtr rhs;
  };
  struct Bin {
    LBinOp op;
    AssertionPtr lhs;
    AssertionPtr rhs;
  };
  struct Not {
    AssertionPtr arg;
  };
  struct Quant {
    bool universal = false;
    std::string var;
    VarSort sort = VarSort::Int;
    AssertionPtr body;
  };
  struct ListRep {
    SeqExprPtr contents;
    AExprPtr head;
    AExprPtr end;
  };
  struct SeqEq {
    SeqExprPtr lhs;
    SeqExprPtr rhs;
  };
  std::variant<Pure, Emp, PointsTo, SepConj, Wand, Bin, Not, Quant, ListRep,
               SeqEq>
      node;
};

AssertionPtr pure(BExprPtr cond);
AssertionPtr emp();
AssertionPtr points_to(AExprPtr address, AExprPtr value);
/// e |-> e1, ..., en desugars to e |-> e1 * ... * e+n-1 |-> en.
AssertionPtr points_to_cells(AExprPtr address, const std::vector<AExprPtr>& values);
AssertionPtr sep_conj(AssertionPtr lhs, AssertionPtr rhs);
AssertionPtr wand(AssertionPtr lhs, AssertionPtr rhs);
AssertionPtr abin(LBinOp op, AssertionPtr lhs, AssertionPtr rhs);
AssertionPtr aand(AssertionPtr lhs, AssertionPtr rhs);
AssertionPtr aor(AssertionPtr lhs, AssertionPtr rhs);
AssertionPtr aimp(AssertionPtr lhs, AssertionPtr rhs);
AssertionPtr anot(AssertionPtr arg);
AssertionPtr exists(std::string v, VarSort sort, AssertionPtr body);
AssertionPtr forall(std::string v, VarSort sort, AssertionPtr body);
AssertionPtr listrep(SeqExprPtr contents, AExprPtr head, AExprPtr end);
AssertionPtr seq_eq(SeqExprPtr lhs, SeqExprPtr rhs);
AssertionPtr assertion_true();
/// e |-> -  is  exists v. e |-> v.
AssertionPtr points_to_any(AExprPtr address);

// ---------------------------------------------------------------------------
// Commands and annotated programs.
// ---------------------------------------------------------------------------

struct Command;
using CommandPtr = std::shared_ptr<const Command>;
struct Block;
using BlockPtr = std::shared_ptr<const Block>;

struct Command {
  struct Skip {};
  struct Assign {
    std::string target;
    AExprPtr value;
  };
  struct If {
    BExprPtr cond;
    BlockPtr then_body;
    BlockPtr else_body;
  };
  struct While {
    BExprPtr cond;
    AssertionPtr invariant;  // may be null when built programmatically
    BlockPtr body;
  };
  struct Alloc {
    std::string target;
    std::vector<AExprPtr> fields;  // arity >= 1
  };
  struct Lookup {
    std::string target;
    AExprPtr address;
  };
  struct Mutate {
    AExprPtr address;
    AExprPtr value;
  };
  struct Free {
    AExprPtr address;
  };
  std::variant<Skip, Assign, If, While, Alloc, Lookup, Mutate, Free> node;
  SourcePos pos;
};

/// A sequence of commands with optional assertions between them.
struct Block {
  struct Item {
    std::variant<CommandPtr, AssertionPtr> value;
    SourcePos pos;

    bool is_command() const { return std::holds_alternative<CommandPtr>(value); }
    bool is_annotation() const { return !is_command(); }
    const CommandPtr& command() const { return std::get<CommandPtr>(value); }
    const AssertionPtr& annotation() const { return std::get<AssertionPtr>(value); }
  };
  std::vector<Item> items;
};

CommandPtr cmd_skip(SourcePos pos = {});
CommandPtr cmd_assign(std::string target, AExprPtr value, SourcePos pos = {});
CommandPtr cmd_if(BExprPtr cond, Block then_body, Block else_body, SourcePos pos = {});
CommandPtr cmd_while(BExprPtr cond, AssertionPtr invariant, Block body, SourcePos pos = {});
CommandPtr cmd_alloc(std::string target, std::vector<AExprPtr> fields, SourcePos pos = {});
CommandPtr cmd_lookup(std::string target, AExprPtr address, SourcePos pos = {});
CommandPtr cmd_mutate(AExprPtr address, AExprPtr value, SourcePos pos = {});
CommandPtr cmd_free(AExprPtr address, SourcePos pos = {});

Block block_of(std::vector<CommandPtr> commands);

struct Program {
  std::vector<std::string> variables;
  AssertionPtr precondition;
  AssertionPtr postcondition;
  Block body;
};

bool is_atomic(const Command& c);

// ---------------------------------------------------------------------------
// Structural equality (positions ignored).
// ---------------------------------------------------------------------------

bool equal(const AExpr& a, const AExpr& b);
bool equal(const BExpr& a, const BExpr& b);
bool equal(const SeqExpr& a, const SeqExpr& b);
bool equal(const Assertion& a, const Assertion& b);
bool equal(const Command& a, const Command& b);
bool equal(const Block& a, const Block& b);
bool equal(const Program& a, const Program& b);

inline bool equal(const AExprPtr& a, const AExprPtr& b) { return equal(*a, *b); }
inline bool equal(const BExprPtr& a, const BExprPtr& b) { return equal(*a, *b); }
inline bool equal(const SeqExprPtr& a, const SeqExprPtr& b) { return equal(*a, *b); }
inline bool equal(const AssertionPtr& a, const AssertionPtr& b) { return equal(*a, *b); }

// ---------------------------------------------------------------------------
// Variable and literal collectors.
// ---------------------------------------------------------------------------

void collect_vars(const AExpr& e, std::set<std::string>& out);
void collect_vars(const BExpr& e, std::set<std::string>& out);
/// Integer-position and sequence-position variables of a sequence expression.
void collect_vars(const SeqExpr& s, std::set<std::string>& int_vars,
                  std::set<std::string>& seq_vars);
void collect_vars(const Command& c, std::set<std::string>& out);
void collect_vars(const Block& b, std::set<std::string>& out);

void collect_literals(const AExpr& e, std::set<std::int64_t>& out);
void collect_literals(const Assertion& a, std::set<std::int64_t>& out);

/// Free variables of an assertion, both integer and sequence sorted,
/// excluding quantifier-bound ones.
void free_vars(const Assertion& a, std::set<std::string>& int_vars,
               std::set<std::string>& seq_vars);

}  // namespace seplog
