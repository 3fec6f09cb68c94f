#pragma once

#include <map>
#include <string>
#include <vector>

#include "protoforge/expr.hpp"

namespace protoforge {

/// One production: a typed expression template whose Placeholder leaves
/// name nonterminals. `overhead` is the node count contributed by the
/// template itself (placeholders excluded), so an instance built from
/// children c1..ck has size overhead + sum(size(ci)).
struct Production {
  ExprPtr templ;
  std::vector<std::string> placeholders;  // nonterminals, left to right
  int overhead = 0;
  /// Binary commutative operator over two placeholders of the same
  /// nonterminal; eligible for short-circuiting.
  bool commutative_pair = false;
  /// Union/inter/and/or: composing an expression with itself is redundant.
  bool idempotent_pair = false;
};

Production make_production(ExprPtr templ);

/// Typed regular tree grammar bound to one hole: placeholder leaves carry
/// nonterminal names, terminals reference the hole's arguments.
struct Grammar {
  std::string name;
  std::vector<std::string> nt_order;
  std::map<std::string, Type> nonterminals;
  std::string start;
  std::map<std::string, std::vector<Production>> productions;

  const Type& nt_type(const std::string& nt) const;
  void validate() const;
};

/// Instantiate a production with children for its placeholders, in order.
ExprPtr compose(const Production& p, const std::vector<ExprPtr>& children);

}  // namespace protoforge
