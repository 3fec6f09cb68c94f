#include "protoforge/parser.hpp"

#include <algorithm>

namespace protoforge {

namespace {

UExprPtr unode(UKind k, SourceLoc loc) {
  auto u = std::make_shared<UExpr>();
  const_cast<UExpr*>(u.get())->kind = k;
  const_cast<UExpr*>(u.get())->loc = loc;
  return u;
}

UExpr* mut(const UExprPtr& u) { return const_cast<UExpr*>(u.get()); }

Token expect(Lexer& lx, Tok kind, const std::string& what) {
  Token t = lx.next();
  if (t.kind != kind)
    throw ParseError(t.loc, "expected " + what + ", found " +
                                (t.kind == Tok::Ident ? "'" + t.text + "'"
                                                      : tok_name(t.kind)));
  return t;
}

bool peek_ident(Lexer& lx, const char* word, std::size_t ahead = 0) {
  const Token& t = lx.peek(ahead);
  return t.kind == Tok::Ident && t.text == word;
}

UExprPtr parse_implies(Lexer& lx);

UExprPtr parse_quantifier_or_ite(Lexer& lx) {
  const Token& t = lx.peek();
  if (peek_ident(lx, "forall") || peek_ident(lx, "exists")) {
    bool is_forall = t.text == "forall";
    Token kw = lx.next();
    Token bound = expect(lx, Tok::Ident, "bound variable");
    Token in_kw = expect(lx, Tok::Ident, "'in'");
    if (in_kw.text != "in") throw ParseError(in_kw.loc, "expected 'in'");
    Token dom = expect(lx, Tok::Ident, "domain name");
    expect(lx, Tok::Colon, "':'");
    auto body = parse_uexpr(lx);
    auto u = unode(is_forall ? UKind::Forall : UKind::Exists, kw.loc);
    mut(u)->name = bound.text;
    mut(u)->domain = dom.text;
    mut(u)->children = {body};
    return u;
  }
  if (peek_ident(lx, "if")) {
    Token kw = lx.next();
    auto c = parse_uexpr(lx);
    Token then_kw = expect(lx, Tok::Ident, "'then'");
    if (then_kw.text != "then") throw ParseError(then_kw.loc, "expected 'then'");
    auto a = parse_uexpr(lx);
    Token else_kw = expect(lx, Tok::Ident, "'else'");
    if (else_kw.text != "else") throw ParseError(else_kw.loc, "expected 'else'");
    auto b = parse_uexpr(lx);
    auto u = unode(UKind::Ite, kw.loc);
    mut(u)->children = {c, a, b};
    return u;
  }
  return nullptr;
}

UExprPtr parse_primary(Lexer& lx) {
  const Token& t = lx.peek();
  switch (t.kind) {
    case Tok::LParen: {
      lx.next();
      UExprPtr inner = parse_uexpr(lx);
      if (lx.peek().kind == Tok::Colon) {
        lx.next();
        Type ty = parse_type(lx);
        expect(lx, Tok::RParen, "')'");
        auto u = unode(UKind::Ascribe, t.loc);
        mut(u)->ascribed = ty;
        mut(u)->children = {inner};
        return u;
      }
      expect(lx, Tok::RParen, "')'");
      return inner;
    }
    case Tok::LBrace: {
      Token open = lx.next();
      if (lx.peek().kind == Tok::RBrace) {
        lx.next();
        return unode(UKind::EmptySet, open.loc);
      }
      auto u = unode(UKind::SetLit, open.loc);
      while (true) {
        mut(u)->children.push_back(parse_uexpr(lx));
        if (lx.peek().kind == Tok::Comma) {
          lx.next();
          continue;
        }
        break;
      }
      expect(lx, Tok::RBrace, "'}'");
      return u;
    }
    case Tok::Question: {
      Token q = lx.next();
      Token name = expect(lx, Tok::Ident, "hole name");
      expect(lx, Tok::LParen, "'('");
      auto u = unode(UKind::HoleCall, q.loc);
      mut(u)->name = name.text;
      if (lx.peek().kind != Tok::RParen) {
        while (true) {
          mut(u)->children.push_back(parse_uexpr(lx));
          if (lx.peek().kind == Tok::Comma) {
            lx.next();
            continue;
          }
          break;
        }
      }
      expect(lx, Tok::RParen, "')'");
      return u;
    }
    case Tok::Int: {
      Token n = lx.next();
      auto u = unode(UKind::IntLit, n.loc);
      mut(u)->int_value = n.int_value;
      return u;
    }
    case Tok::Minus: {
      Token m = lx.next();
      Token n = expect(lx, Tok::Int, "integer literal");
      auto u = unode(UKind::IntLit, m.loc);
      mut(u)->int_value = -n.int_value;
      return u;
    }
    case Tok::Ident: {
      if (t.text == "true" || t.text == "false") {
        Token b = lx.next();
        auto u = unode(UKind::BoolLit, b.loc);
        mut(u)->bool_value = b.text == "true";
        return u;
      }
      Token id = lx.next();
      auto u = unode(UKind::Ident, id.loc);
      mut(u)->name = id.text;
      return u;
    }
    default:
      throw ParseError(t.loc, "expected an expression, found " +
                                  tok_name(t.kind));
  }
}

UExprPtr parse_postfix(Lexer& lx) {
  auto e = parse_primary(lx);
  while (true) {
    if (lx.peek().kind == Tok::LBracket) {
      Token open = lx.next();
      auto key = parse_uexpr(lx);
      expect(lx, Tok::RBracket, "']'");
      auto u = unode(UKind::Apply, open.loc);
      mut(u)->children = {e, key};
      e = u;
      continue;
    }
    if (peek_ident(lx, "with")) {
      Token kw = lx.next();
      expect(lx, Tok::LBracket, "'['");
      auto key = parse_uexpr(lx);
      expect(lx, Tok::ColonEq, "':='");
      auto val = parse_uexpr(lx);
      expect(lx, Tok::RBracket, "']'");
      auto u = unode(UKind::With, kw.loc);
      mut(u)->children = {e, key, val};
      e = u;
      continue;
    }
    break;
  }
  return e;
}

std::optional<ExprKind> peek_setop(Lexer& lx) {
  if (peek_ident(lx, "union")) return ExprKind::Union;
  if (peek_ident(lx, "inter")) return ExprKind::Inter;
  if (peek_ident(lx, "diff")) return ExprKind::Diff;
  return std::nullopt;
}

UExprPtr parse_setop(Lexer& lx) {
  auto e = parse_postfix(lx);
  while (auto op = peek_setop(lx)) {
    Token t = lx.next();
    auto rhs = parse_postfix(lx);
    auto u = unode(UKind::Binary, t.loc);
    mut(u)->op = *op;
    mut(u)->children = {e, rhs};
    e = u;
  }
  return e;
}

UExprPtr parse_additive(Lexer& lx) {
  auto e = parse_setop(lx);
  while (lx.peek().kind == Tok::Plus || lx.peek().kind == Tok::Minus) {
    Token t = lx.next();
    auto rhs = parse_setop(lx);
    auto u = unode(UKind::Binary, t.loc);
    mut(u)->op = t.kind == Tok::Plus ? ExprKind::Add : ExprKind::Sub;
    mut(u)->children = {e, rhs};
    e = u;
  }
  return e;
}

std::optional<ExprKind> peek_cmp(Lexer& lx) {
  switch (lx.peek().kind) {
    case Tok::Eq: return ExprKind::Eq;
    case Tok::Neq: return ExprKind::Neq;
    case Tok::Lt: return ExprKind::Lt;
    case Tok::Le: return ExprKind::Le;
    default: break;
  }
  if (peek_ident(lx, "in")) return ExprKind::Member;
  if (peek_ident(lx, "subseteq")) return ExprKind::Subset;
  return std::nullopt;
}

UExprPtr parse_cmp(Lexer& lx) {
  auto e = parse_additive(lx);
  if (auto op = peek_cmp(lx)) {
    Token t = lx.next();
    auto rhs = parse_additive(lx);
    auto u = unode(UKind::Binary, t.loc);
    mut(u)->op = *op;
    mut(u)->children = {e, rhs};
    return u;  // comparisons do not chain
  }
  return e;
}

UExprPtr parse_not(Lexer& lx) {
  if (lx.peek().kind == Tok::Tilde) {
    Token t = lx.next();
    auto e = parse_not(lx);
    auto u = unode(UKind::Not, t.loc);
    mut(u)->children = {e};
    return u;
  }
  return parse_cmp(lx);
}

UExprPtr parse_and(Lexer& lx) {
  auto e = parse_not(lx);
  while (lx.peek().kind == Tok::And) {
    Token t = lx.next();
    auto rhs = parse_not(lx);
    auto u = unode(UKind::Binary, t.loc);
    mut(u)->op = ExprKind::And;
    mut(u)->children = {e, rhs};
    e = u;
  }
  return e;
}

UExprPtr parse_or(Lexer& lx) {
  auto e = parse_and(lx);
  while (lx.peek().kind == Tok::Or) {
    Token t = lx.next();
    auto rhs = parse_and(lx);
    auto u = unode(UKind::Binary, t.loc);
    mut(u)->op = ExprKind::Or;
    mut(u)->children = {e, rhs};
    e = u;
  }
  return e;
}

UExprPtr parse_implies(Lexer& lx) {
  auto e = parse_or(lx);
  if (lx.peek().kind == Tok::Implies) {
    Token t = lx.next();
    auto rhs = parse_implies(lx);  // right associative
    auto u = unode(UKind::Binary, t.loc);
    mut(u)->op = ExprKind::Implies;
    mut(u)->children = {e, rhs};
    return u;
  }
  return e;
}

}  // namespace

UExprPtr parse_uexpr(Lexer& lx) {
  if (auto q = parse_quantifier_or_ite(lx)) return q;
  return parse_implies(lx);
}

Type parse_type(Lexer& lx) {
  Token t = expect(lx, Tok::Ident, "type");
  if (t.text == "Bool") return Type::boolean();
  if (t.text == "Int") return Type::integer();
  if (t.text == "Set") {
    expect(lx, Tok::LBracket, "'['");
    Type elem = parse_type(lx);
    expect(lx, Tok::RBracket, "']'");
    return Type::set(elem);
  }
  if (t.text == "Func") {
    expect(lx, Tok::LBracket, "'['");
    Type key = parse_type(lx);
    expect(lx, Tok::Comma, "','");
    Type val = parse_type(lx);
    expect(lx, Tok::RBracket, "']'");
    return Type::func(key, val);
  }
  return Type::domain(t.text);
}

bool is_reserved_word(const std::string& s) {
  static const std::set<std::string> kReserved = {
      "true",   "false",  "in",   "union",   "inter", "diff",
      "subseteq", "forall", "exists", "if",   "then",  "else",
      "with",   "Bool",   "Int",  "Set",     "Func",  "Domain",
      "const",  "var",    "init", "action",  "require", "update",
      "invariant", "liveness", "option", "fair"};
  return kReserved.count(s) > 0;
}

namespace {

struct BoundVar {
  std::string name;
  std::string domain;
};

struct Checker {
  const CheckEnv& env;
  std::vector<BoundVar> bound;

  bool domain_declared(const std::string& name) const {
    if (!env.sk) return false;
    const Param* p = env.sk->find_param(name);
    return p && p->kind == ParamKind::Domain;
  }

  ExprPtr resolve_ident(const UExprPtr& u) {
    for (auto it = bound.rbegin(); it != bound.rend(); ++it)
      if (it->name == u->name)
        return mk::arg(u->name, Type::domain(it->domain));
    if (env.formals) {
      for (const auto& [name, ty] : *env.formals)
        if (name == u->name) return mk::arg(name, ty);
    }
    if (env.nonterminals) {
      auto nt = env.nonterminals->find(u->name);
      if (nt != env.nonterminals->end())
        return mk::placeholder(u->name, nt->second);
    }
    if (env.sk && env.use_vars) {
      if (const VarDecl* v = env.sk->find_var(u->name))
        return mk::var(v->name, v->type);
    }
    if (env.sk && env.use_params) {
      if (const Param* p = env.sk->find_param(u->name)) {
        Type t = p->kind == ParamKind::Domain
                     ? Type::set(Type::domain(p->name))
                     : p->type;
        return mk::param(p->name, t);
      }
    }
    throw TypecheckError(u->loc, "unresolved name '" + u->name + "'");
  }

  ExprPtr check(const UExprPtr& u, std::optional<Type> expected,
                bool hole_ok) {
    ExprPtr e = check_inner(u, expected, hole_ok);
    if (expected && e->type != *expected)
      throw TypecheckError(u->loc, "expected type " + expected->str() +
                                       ", got " + e->type.str());
    return e;
  }

  // Same-type binary operand pair with empty-set inference in either side.
  std::pair<ExprPtr, ExprPtr> check_same(const UExprPtr& u,
                                         std::optional<Type> expected) {
    try {
      ExprPtr a = check(u->children[0], expected, false);
      ExprPtr b = check(u->children[1], a->type, false);
      return {a, b};
    } catch (const UninferableError&) {
      ExprPtr b = check(u->children[1], expected, false);
      ExprPtr a = check(u->children[0], b->type, false);
      return {a, b};
    }
  }

  ExprPtr check_inner(const UExprPtr& u, std::optional<Type> expected,
                      bool hole_ok) {
    switch (u->kind) {
      case UKind::Ident:
        return resolve_ident(u);
      case UKind::BoolLit:
        return mk::bool_lit(u->bool_value);
      case UKind::IntLit:
        return mk::int_lit(u->int_value);
      case UKind::EmptySet: {
        if (!expected || !expected->is_set())
          throw UninferableError(
              u->loc, "cannot infer the element type of {}; add an "
                      "ascription like ({} : Set[T])");
        return mk::empty_set(expected->elem());
      }
      case UKind::SetLit: {
        std::optional<Type> elem_expected;
        if (expected && expected->is_set()) elem_expected = expected->elem();
        std::vector<ExprPtr> elems;
        for (const auto& c : u->children) {
          auto e = check(c, elem_expected, false);
          if (!elem_expected) elem_expected = e->type;
          elems.push_back(std::move(e));
        }
        if (u->children.size() == 1) return mk::singleton(elems[0]);
        return mk::set_lit(std::move(elems));
      }
      case UKind::Not:
        return mk::not_(check(u->children[0], Type::boolean(), false));
      case UKind::Binary: {
        switch (u->op) {
          case ExprKind::And:
          case ExprKind::Or:
          case ExprKind::Implies:
            return mk::binary(u->op,
                              check(u->children[0], Type::boolean(), false),
                              check(u->children[1], Type::boolean(), false));
          case ExprKind::Lt:
          case ExprKind::Le:
          case ExprKind::Add:
          case ExprKind::Sub:
            return mk::binary(u->op,
                              check(u->children[0], Type::integer(), false),
                              check(u->children[1], Type::integer(), false));
          case ExprKind::Eq:
          case ExprKind::Neq: {
            auto [a, b] = check_same(u, std::nullopt);
            return mk::binary(u->op, a, b);
          }
          case ExprKind::Union:
          case ExprKind::Inter:
          case ExprKind::Diff:
          case ExprKind::Subset: {
            std::optional<Type> setexp;
            if ((u->op == ExprKind::Union || u->op == ExprKind::Inter ||
                 u->op == ExprKind::Diff) &&
                expected && expected->is_set())
              setexp = expected;
            auto [a, b] = check_same(u, setexp);
            if (!a->type.is_set())
              throw TypecheckError(u->loc, "operator expects sets, got " +
                                               a->type.str());
            return mk::binary(u->op, a, b);
          }
          case ExprKind::Member: {
            try {
              ExprPtr s = check(u->children[1], std::nullopt, false);
              if (!s->type.is_set())
                throw TypecheckError(u->loc, "'in' expects a set, got " +
                                                 s->type.str());
              ExprPtr x = check(u->children[0], s->type.elem(), false);
              return mk::member(x, s);
            } catch (const UninferableError&) {
              ExprPtr x = check(u->children[0], std::nullopt, false);
              ExprPtr s =
                  check(u->children[1], Type::set(x->type), false);
              return mk::member(x, s);
            }
          }
          default:
            throw TypecheckError(u->loc, "unsupported operator");
        }
      }
      case UKind::Apply: {
        ExprPtr fn = check(u->children[0], std::nullopt, false);
        if (!fn->type.is_func())
          throw TypecheckError(u->loc, "application expects a function, got " +
                                           fn->type.str());
        ExprPtr key = check(u->children[1], fn->type.key(), false);
        return mk::apply(fn, key);
      }
      case UKind::With: {
        ExprPtr fn = check(u->children[0], expected, false);
        if (!fn->type.is_func())
          throw TypecheckError(u->loc, "with-update expects a function, got " +
                                           fn->type.str());
        ExprPtr key = check(u->children[1], fn->type.key(), false);
        ExprPtr val = check(u->children[2], fn->type.value(), false);
        return mk::func_update(fn, key, val);
      }
      case UKind::Forall:
      case UKind::Exists: {
        if (!domain_declared(u->domain))
          throw TypecheckError(u->loc, "quantifier domain '" + u->domain +
                                           "' is not a declared Domain "
                                           "parameter");
        if (is_reserved_word(u->name))
          throw TypecheckError(u->loc, "reserved word '" + u->name +
                                           "' cannot bind a variable");
        bound.push_back({u->name, u->domain});
        ExprPtr body = check(u->children[0], Type::boolean(), false);
        bound.pop_back();
        return u->kind == UKind::Forall ? mk::forall(u->name, u->domain, body)
                                        : mk::exists(u->name, u->domain, body);
      }
      case UKind::Ite: {
        ExprPtr c = check(u->children[0], Type::boolean(), false);
        try {
          ExprPtr a = check(u->children[1], expected, false);
          ExprPtr b = check(u->children[2], a->type, false);
          return mk::ite(c, a, b);
        } catch (const UninferableError&) {
          ExprPtr b = check(u->children[2], expected, false);
          ExprPtr a = check(u->children[1], b->type, false);
          return mk::ite(c, a, b);
        }
      }
      case UKind::Ascribe:
        return check(u->children[0], u->ascribed, false);
      case UKind::HoleCall: {
        if (!env.holes || !env.holes->holes)
          throw HoleMisuseError("hole ?" + u->name +
                                " is not allowed here (" + u->loc.str() + ")");
        if (!hole_ok)
          throw HoleMisuseError(
              "hole ?" + u->name + " must be a whole require line or a whole "
              "update right-hand side (" + u->loc.str() + ")");
        if (!expected)
          throw TypecheckError(u->loc, "cannot determine hole output type");
        for (const auto& h : *env.holes->holes)
          if (h.name == u->name)
            throw HoleMisuseError("hole ?" + u->name +
                                  " appears more than once (" + u->loc.str() +
                                  ")");
        Hole h;
        h.name = u->name;
        h.output_type = *expected;
        h.kind = env.holes->current_kind;
        h.owner = env.holes->current_action;
        std::vector<ExprPtr> actuals;
        for (const auto& c : u->children) {
          if (c->kind != UKind::Ident)
            throw HoleMisuseError(
                "hole arguments must be plain names of parameters, variables "
                "or action arguments (" + c->loc.str() + ")");
          ExprPtr a = resolve_ident(c);
          if (a->kind == ExprKind::Placeholder)
            throw HoleMisuseError("hole argument cannot be a nonterminal (" +
                                  c->loc.str() + ")");
          h.args.emplace_back(c->name, a->type);
          actuals.push_back(std::move(a));
        }
        env.holes->holes->push_back(h);
        return mk::hole_call(u->name, *expected, std::move(actuals));
      }
    }
    throw TypecheckError(u->loc, "unreachable");
  }
};

}  // namespace

ExprPtr check_expr(const UExprPtr& u, const CheckEnv& env,
                   std::optional<Type> expected, bool hole_ok_at_root) {
  Checker ck{env, {}};
  return ck.check(u, expected, hole_ok_at_root);
}

ExprPtr parse_expr_string(const std::string& text, const CheckEnv& env,
                          std::optional<Type> expected) {
  Lexer lx(text);
  auto u = parse_uexpr(lx);
  if (!lx.at_end())
    throw ParseError(lx.peek().loc, "unexpected trailing input");
  return check_expr(u, env, expected);
}

}  // namespace protoforge
