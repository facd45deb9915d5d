#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "finicheck/source.hpp"

namespace finicheck {

struct TypeExpr;
struct Expr;
struct Command;
struct Decl;

using TypeExprPtr = std::shared_ptr<const TypeExpr>;
using ExprPtr = std::shared_ptr<const Expr>;
using CommandPtr = std::shared_ptr<const Command>;
using DeclPtr = std::shared_ptr<const Decl>;

// ---------------------------------------------------------------------------
// Types (syntactic)

enum class TypeExprKind {
  Bool,          // Bool
  Nat,           // ℕ[e]       sugar for ℤ[0,e]
  NatUnbounded,  // ℕ          legal only in val declarations
  IntRange,      // ℤ[lo,hi]
  Array,         // Array[len, T]
  Set,           // Set[T]
  Tuple,         // Tuple[T1,...,Tn]
  Name,          // reference to a declared type
};

struct TypeExpr {
  TypeExprKind kind;
  Span span;
  std::string name;               // Name
  std::vector<ExprPtr> bounds;    // Nat: [hi]; IntRange: [lo, hi]; Array: [len]
  std::vector<TypeExprPtr> args;  // Array: [elem]; Set: [elem]; Tuple: comps
};

// ---------------------------------------------------------------------------
// Expressions

enum class UnaryOp { Neg, Not };

enum class BinaryOp {
  Add, Sub, Mul, Quot, Rem,
  Eq, Ne, Lt, Le, Gt, Ge,
  And, Or, Implies, Iff,
  MemberOf,
};

struct Binder {
  std::string name;
  TypeExprPtr type;
  Span span;
};

struct LetBinding {
  std::string name;
  ExprPtr value;
  Span span;
};

enum class ExprKind {
  IntLit,
  BoolLit,
  VarRef,
  Unary,       // children: [operand]
  Binary,      // children: [lhs, rhs]
  Forall,      // binders (>=1), children: [body]
  Exists,      // binders (>=1), children: [body]
  Choose,      // binders (exactly 1), children: [condition]
  Let,         // bindings (sequential), children: [body]
  LetPar,      // bindings (simultaneous), children: [body]
  IfElse,      // children: [cond, then, else]
  Call,        // name, children: args
  ArrayIndex,  // children: [base, index]
  ArrayUpdate, // children: [base, index, value]   "base with [index] = value"
  TupleProj,   // children: [base], proj_index (1-based)
  TupleLit,    // children: elements
  SetLit,      // children: elements
};

struct Expr {
  ExprKind kind;
  Span span;
  long long int_value = 0;
  bool bool_value = false;
  std::string name;
  UnaryOp unary_op = UnaryOp::Neg;
  BinaryOp binary_op = BinaryOp::Add;
  std::vector<Binder> binders;
  std::vector<LetBinding> bindings;
  std::vector<ExprPtr> children;
  int proj_index = 0;
};

// ---------------------------------------------------------------------------
// Commands

enum class CmdKind {
  VarDecl,  // var name : type := init
  Assign,   // target [idx]* := value
  If,       // cond, then_cmd, optional else_cmd
  While,    // cond, invariants, optional decreases, body
  For,      // for_init; cond; for_update do body (plus optional annotations)
  Seq,
  Assert,
  Call,     // procedure call in statement position, result discarded
  Return,   // only as the final command of a procedure body
};

struct Command {
  CmdKind kind;
  Span span;
  // VarDecl
  std::string var_name;
  TypeExprPtr var_type;
  ExprPtr init;
  // Assign
  std::string target;
  std::vector<ExprPtr> indices;
  ExprPtr value;
  // If / While / For
  ExprPtr cond;
  CommandPtr then_cmd;
  CommandPtr else_cmd;
  std::vector<ExprPtr> invariants;
  ExprPtr decreases;  // may be null
  CommandPtr body;
  CommandPtr for_init;
  CommandPtr for_update;
  // Seq
  std::vector<CommandPtr> commands;
  // Assert
  ExprPtr formula;
  // Call
  std::string callee;
  std::vector<ExprPtr> args;
  // Return
  ExprPtr ret;
};

// ---------------------------------------------------------------------------
// Declarations

enum class DeclKind { Val, Type, Pred, Fun, Theorem, Proc };

struct Param {
  std::string name;
  TypeExprPtr type;
  Span span;
};

struct Decl {
  DeclKind kind;
  std::string name;
  Span span;
  // Val
  TypeExprPtr val_type;  // may be null ("val N = 4;")
  ExprPtr val_value;     // may be null ("val N: ℕ;")
  // Type
  TypeExprPtr type_rhs;
  // operations
  std::vector<Param> params;
  TypeExprPtr result_type;          // Fun, Proc
  std::vector<ExprPtr> requires_;   // conjoined, may be empty
  std::vector<ExprPtr> ensures_;    // Proc only
  ExprPtr body_expr;                // Pred, Fun, Theorem
  CommandPtr body_cmd;              // Proc (without the trailing return)
  ExprPtr return_expr;              // Proc
};

struct Spec {
  std::vector<DeclPtr> decls;
};

// ---------------------------------------------------------------------------
// Construction helpers (used by the parser and the VC generator)

ExprPtr mk_int(long long v, Span s = {});
ExprPtr mk_bool(bool v, Span s = {});
ExprPtr mk_var(std::string name, Span s = {});
ExprPtr mk_unary(UnaryOp op, ExprPtr e, Span s = {});
ExprPtr mk_binary(BinaryOp op, ExprPtr l, ExprPtr r, Span s = {});
ExprPtr mk_quant(ExprKind kind, std::vector<Binder> bs, ExprPtr body, Span s = {});
ExprPtr mk_choose(Binder b, ExprPtr cond, Span s = {});
ExprPtr mk_let(ExprKind kind, std::vector<LetBinding> bs, ExprPtr body, Span s = {});
ExprPtr mk_if(ExprPtr c, ExprPtr t, ExprPtr e, Span s = {});
ExprPtr mk_call(std::string name, std::vector<ExprPtr> args, Span s = {});
ExprPtr mk_index(ExprPtr base, ExprPtr idx, Span s = {});
ExprPtr mk_update(ExprPtr base, ExprPtr idx, ExprPtr val, Span s = {});
ExprPtr mk_proj(ExprPtr base, int index, Span s = {});
ExprPtr mk_tuple(std::vector<ExprPtr> elems, Span s = {});
ExprPtr mk_set(std::vector<ExprPtr> elems, Span s = {});

/// Conjunction of a nonempty list, left-associated; empty list yields "true".
ExprPtr mk_conj(const std::vector<ExprPtr>& fs, Span s = {});

// ---------------------------------------------------------------------------
// Structural utilities

/// Structural equality ignoring spans.
bool equal(const TypeExpr& a, const TypeExpr& b);
bool equal(const Expr& a, const Expr& b);
bool equal(const Command& a, const Command& b);
bool equal(const Decl& a, const Decl& b);
bool equal(const Spec& a, const Spec& b);

/// Equality modulo consistent renaming of bound variables (and ignoring
/// spans). Free variables must match by name.
bool alpha_equal(const Expr& a, const Expr& b);

/// Free variables of an expression (names not bound within it).
std::set<std::string> free_vars(const Expr& e);

/// All identifiers occurring anywhere in the expression, bound or free.
void collect_names(const Expr& e, std::set<std::string>& out);

/// Simultaneous capture-avoiding substitution of variables by expressions.
ExprPtr substitute(const ExprPtr& e,
                   const std::map<std::string, ExprPtr>& subst);

}  // namespace finicheck
