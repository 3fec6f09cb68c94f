#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "protoforge/diagnostics.hpp"
#include "protoforge/types.hpp"
#include "protoforge/value.hpp"

namespace protoforge {

enum class ExprKind {
  VarRef,
  ParamRef,
  ArgRef,
  BoolLit,
  IntLit,
  EmptySet,
  Singleton,
  SetLit,
  Not,
  And,
  Or,
  Implies,
  Eq,
  Neq,
  Lt,
  Le,
  Add,
  Sub,
  Union,
  Inter,
  Diff,
  Member,
  Subset,
  Apply,
  FuncUpdate,
  Forall,
  Exists,
  Ite,
  HoleCall,
  // Grammar-internal nonterminal placeholder; never appears in completions
  // or protocols.
  Placeholder,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable typed AST node. Nodes are built through the mk:: factories,
/// which compute the type; the parser and the enumerator both go through
/// them, so every Expr in the system carries a valid type.
struct Expr {
  ExprKind kind;
  Type type;
  std::string name;    // var/param/arg/hole/nonterminal/bound-var name
  std::string domain;  // quantifier bound domain
  bool bool_value = false;
  std::int64_t int_value = 0;
  std::vector<ExprPtr> children;
};

/// Node count: leaves are 1, an operator adds 1 to the sum of its children,
/// and a quantifier counts its bound-domain as an extra leaf.
int size(const ExprPtr& e);

/// Canonical textual form: fully parenthesized, parseable by the expression
/// parser. Used in caches, logs and output files.
std::string to_string(const ExprPtr& e);

bool contains_hole(const ExprPtr& e);
bool contains_placeholder(const ExprPtr& e);
void collect_holes(const ExprPtr& e, std::vector<ExprPtr>& out);

/// Free argument references (not bound by an enclosing quantifier).
void collect_free_args(const ExprPtr& e, std::vector<std::string>& out);

namespace mk {

ExprPtr var(std::string name, Type t);
ExprPtr param(std::string name, Type t);
ExprPtr arg(std::string name, Type t);
ExprPtr bool_lit(bool b);
ExprPtr int_lit(std::int64_t n);
ExprPtr empty_set(Type elem);
ExprPtr singleton(ExprPtr e);
ExprPtr set_lit(std::vector<ExprPtr> elems);
ExprPtr not_(ExprPtr e);
ExprPtr and_(ExprPtr a, ExprPtr b);
ExprPtr or_(ExprPtr a, ExprPtr b);
ExprPtr implies(ExprPtr a, ExprPtr b);
ExprPtr eq(ExprPtr a, ExprPtr b);
ExprPtr neq(ExprPtr a, ExprPtr b);
ExprPtr lt(ExprPtr a, ExprPtr b);
ExprPtr le(ExprPtr a, ExprPtr b);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr union_(ExprPtr a, ExprPtr b);
ExprPtr inter(ExprPtr a, ExprPtr b);
ExprPtr diff(ExprPtr a, ExprPtr b);
ExprPtr member(ExprPtr x, ExprPtr s);
ExprPtr subset(ExprPtr a, ExprPtr b);
ExprPtr apply(ExprPtr fn, ExprPtr key);
ExprPtr func_update(ExprPtr fn, ExprPtr key, ExprPtr val);
ExprPtr forall(std::string bound, std::string domain, ExprPtr body);
ExprPtr exists(std::string bound, std::string domain, ExprPtr body);
ExprPtr ite(ExprPtr c, ExprPtr t, ExprPtr e);
ExprPtr hole_call(std::string name, Type output, std::vector<ExprPtr> args);
ExprPtr placeholder(std::string nonterminal, Type t);

/// Binary node by kind; dispatches to the factory above.
ExprPtr binary(ExprKind k, ExprPtr a, ExprPtr b);

}  // namespace mk

/// Evaluation context. `state` may be null for expressions over arguments
/// only (hole bodies, pruning terms); `args` binds action arguments or hole
/// formals.
struct EvalCtx {
  const State* state = nullptr;
  const InstanceBinding* inst = nullptr;
  const std::map<std::string, Value>* args = nullptr;
};

/// Deterministic evaluation of a hole-free, well-typed expression. And/Or/Ite
/// and Implies short-circuit left to right. Throws EvalError on a function
/// application whose key is outside the map.
Value eval(const ExprPtr& e, const EvalCtx& ctx);

/// Replace each ArgRef named in `bindings` with the corresponding expression.
/// Quantifier binders shadow as expected.
ExprPtr replace_args(const ExprPtr& e,
                     const std::map<std::string, ExprPtr>& bindings);

struct Hole;  // sketch.hpp

/// Replace each HoleCall with the hole's completion expression, binding its
/// formal arguments to the call's actual argument expressions. Throws on a
/// missing hole or an arity mismatch.
ExprPtr substitute_holes(const ExprPtr& e,
                         const std::map<std::string, ExprPtr>& completion,
                         const std::map<std::string, Hole>& holes);

}  // namespace protoforge
