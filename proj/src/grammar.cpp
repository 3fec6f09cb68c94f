#include "protoforge/grammar.hpp"

#include <algorithm>

namespace protoforge {

namespace {

void collect_placeholders(const ExprPtr& e, std::vector<std::string>& out) {
  if (e->kind == ExprKind::Placeholder) {
    out.push_back(e->name);
    return;
  }
  for (const auto& c : e->children) collect_placeholders(c, out);
}

ExprPtr subst_placeholders(const ExprPtr& e,
                           const std::vector<ExprPtr>& children,
                           std::size_t& idx) {
  if (e->kind == ExprKind::Placeholder) return children[idx++];
  if (e->children.empty()) return e;
  bool changed = false;
  std::vector<ExprPtr> kids;
  kids.reserve(e->children.size());
  for (const auto& c : e->children) {
    auto r = subst_placeholders(c, children, idx);
    changed |= (r != c);
    kids.push_back(std::move(r));
  }
  if (!changed) return e;
  auto copy = std::make_shared<Expr>(*e);
  copy->children = std::move(kids);
  return copy;
}

}  // namespace

Production make_production(ExprPtr templ) {
  Production p;
  p.templ = std::move(templ);
  collect_placeholders(p.templ, p.placeholders);
  p.overhead = size(p.templ) - static_cast<int>(p.placeholders.size());
  if (p.placeholders.size() == 2 && p.templ->children.size() == 2 &&
      p.templ->children[0]->kind == ExprKind::Placeholder &&
      p.templ->children[1]->kind == ExprKind::Placeholder &&
      p.placeholders[0] == p.placeholders[1]) {
    switch (p.templ->kind) {
      case ExprKind::And:
      case ExprKind::Or:
      case ExprKind::Union:
      case ExprKind::Inter:
        p.commutative_pair = true;
        p.idempotent_pair = true;
        break;
      case ExprKind::Eq:
      case ExprKind::Neq:
      case ExprKind::Add:
        p.commutative_pair = true;
        break;
      default:
        break;
    }
  }
  return p;
}

const Type& Grammar::nt_type(const std::string& nt) const {
  auto it = nonterminals.find(nt);
  if (it == nonterminals.end())
    throw ConfigError("grammar " + name + ": unknown nonterminal " + nt);
  return it->second;
}

void Grammar::validate() const {
  if (nt_order.empty())
    throw ConfigError("grammar " + name + " declares no nonterminals");
  if (!nonterminals.count(start))
    throw ConfigError("grammar " + name + ": start nonterminal " + start +
                      " is not declared");
  for (const auto& nt : nt_order) {
    auto it = productions.find(nt);
    if (it == productions.end() || it->second.empty())
      throw ConfigError("grammar " + name + ": nonterminal " + nt +
                        " has no productions");
    for (const auto& p : it->second) {
      if (p.templ->type != nt_type(nt))
        throw ConfigError("grammar " + name + ": production " +
                          to_string(p.templ) + " has type " +
                          p.templ->type.str() + ", nonterminal " + nt +
                          " expects " + nt_type(nt).str());
      for (const auto& ph : p.placeholders)
        if (!nonterminals.count(ph))
          throw ConfigError("grammar " + name +
                            ": production references unknown nonterminal " +
                            ph);
    }
  }
}

ExprPtr compose(const Production& p, const std::vector<ExprPtr>& children) {
  std::size_t idx = 0;
  auto e = subst_placeholders(p.templ, children, idx);
  if (idx != children.size())
    throw ConfigError("wrong number of children for production");
  return e;
}

}  // namespace protoforge
