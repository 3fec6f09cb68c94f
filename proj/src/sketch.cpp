#include "protoforge/sketch.hpp"

#include <algorithm>
#include <set>

#include "protoforge/lexer.hpp"
#include "protoforge/parser.hpp"

namespace protoforge {

const VarDecl* Sketch::find_var(const std::string& name) const {
  for (const auto& v : vars)
    if (v.name == name) return &v;
  return nullptr;
}

const Param* Sketch::find_param(const std::string& name) const {
  for (const auto& p : params)
    if (p.name == name) return &p;
  return nullptr;
}

const Hole* Sketch::find_hole(const std::string& name) const {
  for (const auto& h : holes)
    if (h.name == name) return &h;
  return nullptr;
}

const Action* Sketch::find_action(const std::string& name) const {
  for (const auto& a : actions)
    if (a.name == name) return &a;
  return nullptr;
}

std::map<std::string, Hole> Sketch::hole_map() const {
  std::map<std::string, Hole> m;
  for (const auto& h : holes) m[h.name] = h;
  return m;
}

std::vector<Property> Sketch::invariants() const {
  std::vector<Property> out;
  for (const auto& p : properties)
    if (p.kind == Property::Kind::Invariant) out.push_back(p);
  return out;
}

std::vector<Property> Sketch::temporal_properties() const {
  std::vector<Property> out;
  for (const auto& p : properties)
    if (p.kind == Property::Kind::LeadsTo) out.push_back(p);
  return out;
}

namespace {

Token expect(Lexer& lx, Tok kind, const std::string& what) {
  Token t = lx.next();
  if (t.kind != kind)
    throw ParseError(t.loc, "expected " + what + ", found " +
                                (t.kind == Tok::Ident ? "'" + t.text + "'"
                                                      : tok_name(t.kind)));
  return t;
}

std::string fresh_name(Lexer& lx, const Sketch& sk, const char* what) {
  Token t = expect(lx, Tok::Ident, what);
  if (is_reserved_word(t.text))
    throw ParseError(t.loc, "'" + t.text + "' is a reserved word");
  if (sk.find_var(t.text) || sk.find_param(t.text))
    throw ParseError(t.loc, "name '" + t.text + "' is already declared");
  return t.text;
}

void check_domain_params(const Sketch& sk, const Type& t, SourceLoc loc) {
  switch (t.kind()) {
    case TypeKind::Domain: {
      const Param* p = sk.find_param(t.domain_name());
      if (!p || p->kind != ParamKind::Domain)
        throw TypecheckError(loc, "'" + t.domain_name() +
                                      "' is not a declared Domain parameter");
      return;
    }
    case TypeKind::Set:
      check_domain_params(sk, t.elem(), loc);
      return;
    case TypeKind::Func: {
      const Type& k = t.key();
      if (!(k.is_bool() || k.is_int() || k.is_domain()))
        throw TypecheckError(loc,
                             "Func key type must be Bool, Int or a domain");
      check_domain_params(sk, t.key(), loc);
      check_domain_params(sk, t.value(), loc);
      return;
    }
    default:
      return;
  }
}

void parse_action(Lexer& lx, Sketch& sk, bool fair) {
  Token name = expect(lx, Tok::Ident, "action name");
  if (sk.find_action(name.text))
    throw ParseError(name.loc, "duplicate action '" + name.text + "'");
  Action act;
  act.name = name.text;
  act.fair = fair;

  std::vector<std::pair<std::string, Type>> formals;
  if (lx.peek().kind == Tok::LParen) {
    lx.next();
    if (lx.peek().kind != Tok::RParen) {
      while (true) {
        Token arg = expect(lx, Tok::Ident, "argument name");
        if (is_reserved_word(arg.text))
          throw ParseError(arg.loc, "'" + arg.text + "' is a reserved word");
        expect(lx, Tok::Colon, "':'");
        Token dom = expect(lx, Tok::Ident, "domain name");
        const Param* p = sk.find_param(dom.text);
        if (!p || p->kind != ParamKind::Domain)
          throw TypecheckError(dom.loc,
                               "action argument domain '" + dom.text +
                                   "' must be a Domain parameter");
        act.args.emplace_back(arg.text, dom.text);
        formals.emplace_back(arg.text, Type::domain(dom.text));
        if (lx.peek().kind == Tok::Comma) {
          lx.next();
          continue;
        }
        break;
      }
    }
    expect(lx, Tok::RParen, "')'");
  }

  HoleRecorder rec;
  rec.holes = &sk.holes;
  rec.current_action = act.name;

  CheckEnv env;
  env.sk = &sk;
  env.use_vars = true;
  env.use_params = true;
  env.formals = &formals;
  env.holes = &rec;

  expect(lx, Tok::LBrace, "'{'");
  while (lx.peek().kind != Tok::RBrace) {
    Token kw = expect(lx, Tok::Ident, "'require' or 'update'");
    if (kw.text == "require") {
      rec.current_kind = HoleKind::Pre;
      auto u = parse_uexpr(lx);
      act.pre.push_back(check_expr(u, env, Type::boolean(), true));
    } else if (kw.text == "update") {
      Token var = expect(lx, Tok::Ident, "variable name");
      const VarDecl* v = sk.find_var(var.text);
      if (!v)
        throw TypecheckError(var.loc, "unknown state variable '" + var.text +
                                          "'");
      for (const auto& pc : act.post)
        if (pc.var == var.text)
          throw ValidationError("action " + act.name +
                                " updates variable '" + var.text +
                                "' more than once (" + var.loc.str() + ")");
      expect(lx, Tok::ColonEq, "':='");
      rec.current_kind = HoleKind::Post;
      auto u = parse_uexpr(lx);
      act.post.push_back({var.text, check_expr(u, env, v->type, true)});
    } else {
      throw ParseError(kw.loc, "expected 'require' or 'update', found '" +
                                   kw.text + "'");
    }
  }
  expect(lx, Tok::RBrace, "'}'");
  sk.actions.push_back(std::move(act));
}

}  // namespace

Sketch parse_sketch(const std::string& text) {
  Lexer lx(text);
  Sketch sk;
  CheckEnv top_env;
  top_env.sk = &sk;
  top_env.use_vars = true;
  top_env.use_params = true;

  while (!lx.at_end()) {
    Token kw = expect(lx, Tok::Ident, "a declaration");
    if (kw.text == "const") {
      std::string name = fresh_name(lx, sk, "parameter name");
      expect(lx, Tok::Colon, "':'");
      if (lx.peek().kind == Tok::Ident && lx.peek().text == "Domain") {
        lx.next();
        sk.params.push_back({name, ParamKind::Domain, Type::boolean()});
      } else {
        Type t = parse_type(lx);
        check_domain_params(sk, t, kw.loc);
        sk.params.push_back({name, ParamKind::Const, t});
      }
    } else if (kw.text == "var") {
      std::string name = fresh_name(lx, sk, "variable name");
      expect(lx, Tok::Colon, "':'");
      Type t = parse_type(lx);
      check_domain_params(sk, t, kw.loc);
      sk.vars.push_back({name, t});
    } else if (kw.text == "init") {
      auto u = parse_uexpr(lx);
      try {
        sk.init.push_back(check_expr(u, top_env, Type::boolean()));
      } catch (const HoleMisuseError&) {
        throw HoleMisuseError("no holes may appear in init (" +
                              u->loc.str() + ")");
      }
    } else if (kw.text == "fair" || kw.text == "action") {
      bool fair = kw.text == "fair";
      if (fair) {
        Token a = expect(lx, Tok::Ident, "'action'");
        if (a.text != "action")
          throw ParseError(a.loc, "expected 'action' after 'fair'");
      }
      parse_action(lx, sk, fair);
    } else if (kw.text == "invariant") {
      Token name = expect(lx, Tok::Ident, "property name");
      expect(lx, Tok::Colon, "':'");
      auto u = parse_uexpr(lx);
      Property p;
      p.kind = Property::Kind::Invariant;
      p.name = name.text;
      p.pred = check_expr(u, top_env, Type::boolean());
      sk.properties.push_back(std::move(p));
    } else if (kw.text == "liveness") {
      Token name = expect(lx, Tok::Ident, "property name");
      expect(lx, Tok::Colon, "':'");
      auto up = parse_uexpr(lx);
      expect(lx, Tok::LeadsTo, "'~>'");
      auto uq = parse_uexpr(lx);
      Property p;
      p.kind = Property::Kind::LeadsTo;
      p.name = name.text;
      p.p = check_expr(up, top_env, Type::boolean());
      p.q = check_expr(uq, top_env, Type::boolean());
      sk.properties.push_back(std::move(p));
    } else if (kw.text == "option") {
      Token name = expect(lx, Tok::Ident, "option name");
      expect(lx, Tok::Colon, "':'");
      Token val = expect(lx, Tok::Ident, "'true' or 'false'");
      if (name.text == "deadlock_check") {
        if (val.text != "true" && val.text != "false")
          throw ParseError(val.loc, "expected 'true' or 'false'");
        sk.deadlock_check = val.text == "true";
      } else {
        throw ParseError(name.loc, "unknown option '" + name.text + "'");
      }
    } else {
      throw ParseError(kw.loc, "unexpected '" + kw.text + "'");
    }
  }

  validate_sketch(sk);
  return sk;
}

void validate_sketch(const Sketch& sk) {
  if (sk.actions.empty())
    throw ValidationError("a protocol needs at least one action");
  if (sk.vars.empty())
    throw ValidationError("a protocol needs at least one state variable");

  std::set<std::string> names;
  for (const auto& p : sk.params)
    if (!names.insert(p.name).second)
      throw ValidationError("duplicate parameter '" + p.name + "'");
  for (const auto& v : sk.vars)
    if (!names.insert(v.name).second)
      throw ValidationError("duplicate declaration '" + v.name + "'");

  for (const auto& e : sk.init)
    if (contains_hole(e))
      throw HoleMisuseError("no holes may appear in init");
  for (const auto& p : sk.properties) {
    for (const auto& e : {p.pred, p.p, p.q})
      if (e && contains_hole(e))
        throw HoleMisuseError("no holes may appear in properties");
  }

  // Each hole belongs to exactly one action and occurs exactly once, as a
  // whole require line or a whole update right-hand side.
  std::set<std::string> seen_holes;
  for (const auto& a : sk.actions) {
    auto check_site = [&](const ExprPtr& e, HoleKind kind) {
      std::vector<ExprPtr> hs;
      collect_holes(e, hs);
      if (hs.empty()) return;
      if (e->kind != ExprKind::HoleCall || hs.size() != 1)
        throw HoleMisuseError("hole must be a whole require line or update "
                              "right-hand side in action " + a.name);
      const Hole* h = sk.find_hole(e->name);
      if (!h)
        throw ValidationError("undeclared hole ?" + e->name);
      if (h->owner != a.name || h->kind != kind)
        throw HoleMisuseError("hole ?" + e->name +
                              " does not match its declaration site");
      if (!seen_holes.insert(e->name).second)
        throw HoleMisuseError("hole ?" + e->name + " appears more than once");
    };
    for (const auto& e : a.pre) check_site(e, HoleKind::Pre);
    for (const auto& pc : a.post) check_site(pc.rhs, HoleKind::Post);
  }
  for (const auto& h : sk.holes) {
    if (!seen_holes.count(h.name))
      throw ValidationError("hole ?" + h.name + " is declared but unused");
    if (h.kind == HoleKind::Pre && !h.output_type.is_bool())
      throw ValidationError("pre-hole ?" + h.name + " must return Bool");
  }
}

Protocol apply_completion(const Sketch& sk, const Completion& c) {
  for (const auto& h : sk.holes)
    if (!c.exprs.count(h.name))
      throw ValidationError("completion is missing hole " + h.name);

  auto holes = sk.hole_map();
  // Completion bodies must only use the declared hole arguments.
  for (const auto& [name, body] : c.exprs) {
    auto it = holes.find(name);
    if (it == holes.end())
      throw ValidationError("completion names unknown hole " + name);
    std::vector<std::string> free;
    collect_free_args(body, free);
    for (const auto& f : free) {
      bool declared = false;
      for (const auto& [an, at] : it->second.args) declared |= (an == f);
      if (!declared)
        throw ValidationError("completion for hole " + name +
                              " uses '" + f + "', which is not a declared "
                              "argument of the hole");
    }
    if (body->type != it->second.output_type)
      throw TypecheckError(SourceLoc{},
                           "completion for hole " + name + " has type " +
                               body->type.str() + ", expected " +
                               it->second.output_type.str());
  }

  Protocol p = sk;
  p.holes.clear();
  for (auto& a : p.actions) {
    for (auto& e : a.pre) e = substitute_holes(e, c.exprs, holes);
    for (auto& pc : a.post) pc.rhs = substitute_holes(pc.rhs, c.exprs, holes);
  }
  return p;
}

std::string serialize_protocol(const Protocol& p) {
  if (p.has_holes())
    throw ValidationError("cannot serialize a sketch with holes");
  std::string out;
  for (const auto& prm : p.params) {
    out += "const " + prm.name + " : ";
    out += prm.kind == ParamKind::Domain ? "Domain" : prm.type.str();
    out += "\n";
  }
  for (const auto& v : p.vars)
    out += "var " + v.name + " : " + v.type.str() + "\n";
  for (const auto& e : p.init) out += "init " + to_string(e) + "\n";
  for (const auto& a : p.actions) {
    out += a.fair ? "fair action " : "action ";
    out += a.name + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ", ";
      out += a.args[i].first + ": " + a.args[i].second;
    }
    out += ") {\n";
    for (const auto& e : a.pre) out += "  require " + to_string(e) + "\n";
    for (const auto& pc : a.post)
      out += "  update " + pc.var + " := " + to_string(pc.rhs) + "\n";
    out += "}\n";
  }
  for (const auto& prop : p.properties) {
    if (prop.kind == Property::Kind::Invariant)
      out += "invariant " + prop.name + " : " + to_string(prop.pred) + "\n";
    else
      out += "liveness " + prop.name + " : " + to_string(prop.p) + " ~> " +
             to_string(prop.q) + "\n";
  }
  out += std::string("option deadlock_check : ") +
         (p.deadlock_check ? "true" : "false") + "\n";
  return out;
}

}  // namespace protoforge
