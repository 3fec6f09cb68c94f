#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "protoforge/expr.hpp"
#include "protoforge/lexer.hpp"
#include "protoforge/sketch.hpp"

namespace protoforge {

/// Untyped parse tree for expressions; typing happens in a second pass so
/// that empty-set literals and the like can take their type from context.
struct UExpr;
using UExprPtr = std::shared_ptr<const UExpr>;

enum class UKind {
  Ident,
  BoolLit,
  IntLit,
  EmptySet,
  SetLit,
  Not,
  Binary,
  Apply,
  With,
  Forall,
  Exists,
  Ite,
  HoleCall,
  Ascribe,
};

struct UExpr {
  UKind kind;
  SourceLoc loc;
  std::string name;  // ident / hole / bound variable
  std::string domain;
  ExprKind op = ExprKind::And;  // Binary
  bool bool_value = false;
  std::int64_t int_value = 0;
  Type ascribed;
  std::vector<UExprPtr> children;
};

/// Parse one expression starting at the lexer position.
UExprPtr parse_uexpr(Lexer& lx);

/// Parse a type: Bool, Int, Set[T], Func[K, V], or a domain name.
Type parse_type(Lexer& lx);

/// Records hole signatures discovered while checking action bodies.
struct HoleRecorder {
  std::vector<Hole>* holes = nullptr;
  std::string current_action;
  HoleKind current_kind = HoleKind::Pre;
};

/// Name-resolution and typing environment for the checker.
struct CheckEnv {
  const Sketch* sk = nullptr;
  bool use_vars = false;
  bool use_params = false;
  /// Action arguments or hole formals, resolved as ArgRefs.
  const std::vector<std::pair<std::string, Type>>* formals = nullptr;
  /// Grammar nonterminals, resolved as placeholders.
  const std::map<std::string, Type>* nonterminals = nullptr;
  HoleRecorder* holes = nullptr;
};

/// Raised when a literal's type cannot be synthesized bottom-up; callers of
/// same-type binary operators catch it and retry with the sibling's type.
class UninferableError : public TypecheckError {
 public:
  using TypecheckError::TypecheckError;
};

/// Type-check an untyped tree and produce the typed AST. `hole_ok_at_root`
/// permits a hole call as the entire expression (require line / update rhs);
/// a hole call anywhere else raises HoleMisuseError.
ExprPtr check_expr(const UExprPtr& u, const CheckEnv& env,
                   std::optional<Type> expected, bool hole_ok_at_root = false);

/// Convenience: parse and check a standalone expression from text.
ExprPtr parse_expr_string(const std::string& text, const CheckEnv& env,
                          std::optional<Type> expected = std::nullopt);

bool is_reserved_word(const std::string& s);

}  // namespace protoforge
