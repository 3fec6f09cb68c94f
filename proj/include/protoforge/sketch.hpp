#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "protoforge/expr.hpp"

namespace protoforge {

enum class ParamKind { Domain, Const };

struct Param {
  std::string name;
  ParamKind kind;
  Type type;  // for Const params; Domain params have no Type of their own
};

struct VarDecl {
  std::string name;
  Type type;
};

/// One conjunct v' = e of an action's post-condition. rhs may contain a
/// hole call (as the whole right-hand side).
struct PostClause {
  std::string var;
  ExprPtr rhs;
};

struct Action {
  std::string name;
  std::vector<std::pair<std::string, std::string>> args;  // (name, domain)
  std::vector<ExprPtr> pre;
  std::vector<PostClause> post;
  bool fair = false;
};

enum class HoleKind { Pre, Post };

/// An uninterpreted function standing for a missing guard or update. The
/// declared arguments name symbols of the enclosing scope (params, vars,
/// action arguments); grammar bodies refer to them as ArgRefs.
struct Hole {
  std::string name;
  std::vector<std::pair<std::string, Type>> args;
  Type output_type;
  std::string grammar_name;  // bound from the config, may be empty here
  HoleKind kind = HoleKind::Pre;
  std::string owner;  // owning action
};

struct Property {
  enum class Kind { Invariant, LeadsTo };
  Kind kind;
  std::string name;
  ExprPtr pred;  // Invariant
  ExprPtr p, q;  // LeadsTo: p ~> q
};

/// Protocol sketch: a protocol whose actions may contain holes. A Protocol is
/// simply a hole-free Sketch.
struct Sketch {
  std::vector<Param> params;
  std::vector<VarDecl> vars;
  std::vector<Hole> holes;
  std::vector<ExprPtr> init;  // conjoined, hole-free
  std::vector<Action> actions;
  std::vector<Property> properties;
  bool deadlock_check = false;

  const VarDecl* find_var(const std::string& name) const;
  const Param* find_param(const std::string& name) const;
  const Hole* find_hole(const std::string& name) const;
  const Action* find_action(const std::string& name) const;
  std::map<std::string, Hole> hole_map() const;
  bool has_holes() const { return !holes.empty(); }
  std::vector<Property> invariants() const;
  std::vector<Property> temporal_properties() const;
};

using Protocol = Sketch;

/// An assignment of one grammar expression to every hole.
struct Completion {
  std::map<std::string, ExprPtr> exprs;
};

/// Parse and validate a sketch from DSL source. Errors carry line/column.
Sketch parse_sketch(const std::string& text);

/// Validate all sketch invariants (also called by parse_sketch).
void validate_sketch(const Sketch& sk);

/// Substitute the completion into every hole site. The result is hole-free
/// and otherwise identical to the sketch.
Protocol apply_completion(const Sketch& sk, const Completion& c);

/// Render a hole-free protocol back to DSL text; parse(serialize(p)) is
/// identical to p up to formatting. Synthesized expressions print on one
/// line.
std::string serialize_protocol(const Protocol& p);

}  // namespace protoforge
