#include "protoforge/expr.hpp"

#include <algorithm>
#include <cassert>

#include "protoforge/sketch.hpp"

namespace protoforge {

namespace {

ExprPtr node(ExprKind k, Type t) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->type = std::move(t);
  return e;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw TypecheckError(SourceLoc{}, msg);
}

void require_bool(const ExprPtr& e, const char* op) {
  require(e->type.is_bool(),
          std::string(op) + " expects Bool, got " + e->type.str());
}

void require_int(const ExprPtr& e, const char* op) {
  require(e->type.is_int(),
          std::string(op) + " expects Int, got " + e->type.str());
}

void require_set(const ExprPtr& e, const char* op) {
  require(e->type.is_set(),
          std::string(op) + " expects a set, got " + e->type.str());
}

void require_same(const ExprPtr& a, const ExprPtr& b, const char* op) {
  require(a->type == b->type, std::string(op) + " expects equal types, got " +
                                  a->type.str() + " and " + b->type.str());
}

}  // namespace

int size(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::VarRef:
    case ExprKind::ParamRef:
    case ExprKind::ArgRef:
    case ExprKind::BoolLit:
    case ExprKind::IntLit:
    case ExprKind::EmptySet:
    case ExprKind::Placeholder:
      return 1;
    case ExprKind::Forall:
    case ExprKind::Exists:
      // quantifier node + bound-domain leaf + body
      return 2 + size(e->children[0]);
    default: {
      int n = 1;
      for (const auto& c : e->children) n += size(c);
      return n;
    }
  }
}

bool contains_hole(const ExprPtr& e) {
  if (e->kind == ExprKind::HoleCall) return true;
  for (const auto& c : e->children)
    if (contains_hole(c)) return true;
  return false;
}

bool contains_placeholder(const ExprPtr& e) {
  if (e->kind == ExprKind::Placeholder) return true;
  for (const auto& c : e->children)
    if (contains_placeholder(c)) return true;
  return false;
}

void collect_holes(const ExprPtr& e, std::vector<ExprPtr>& out) {
  if (e->kind == ExprKind::HoleCall) out.push_back(e);
  for (const auto& c : e->children) collect_holes(c, out);
}

namespace {
void collect_free_args_rec(const ExprPtr& e,
                           std::vector<std::string>& bound,
                           std::vector<std::string>& out) {
  if (e->kind == ExprKind::ArgRef) {
    if (std::find(bound.begin(), bound.end(), e->name) == bound.end() &&
        std::find(out.begin(), out.end(), e->name) == out.end())
      out.push_back(e->name);
    return;
  }
  if (e->kind == ExprKind::Forall || e->kind == ExprKind::Exists) {
    bound.push_back(e->name);
    collect_free_args_rec(e->children[0], bound, out);
    bound.pop_back();
    return;
  }
  for (const auto& c : e->children) collect_free_args_rec(c, bound, out);
}
}  // namespace

void collect_free_args(const ExprPtr& e, std::vector<std::string>& out) {
  std::vector<std::string> bound;
  collect_free_args_rec(e, bound, out);
}

namespace mk {

ExprPtr var(std::string name, Type t) {
  auto e = node(ExprKind::VarRef, std::move(t));
  const_cast<Expr*>(e.get())->name = std::move(name);
  return e;
}

ExprPtr param(std::string name, Type t) {
  auto e = node(ExprKind::ParamRef, std::move(t));
  const_cast<Expr*>(e.get())->name = std::move(name);
  return e;
}

ExprPtr arg(std::string name, Type t) {
  auto e = node(ExprKind::ArgRef, std::move(t));
  const_cast<Expr*>(e.get())->name = std::move(name);
  return e;
}

ExprPtr bool_lit(bool b) {
  auto e = node(ExprKind::BoolLit, Type::boolean());
  const_cast<Expr*>(e.get())->bool_value = b;
  return e;
}

ExprPtr int_lit(std::int64_t n) {
  auto e = node(ExprKind::IntLit, Type::integer());
  const_cast<Expr*>(e.get())->int_value = n;
  return e;
}

ExprPtr empty_set(Type elem) {
  return node(ExprKind::EmptySet, Type::set(std::move(elem)));
}

ExprPtr singleton(ExprPtr x) {
  auto e = node(ExprKind::Singleton, Type::set(x->type));
  const_cast<Expr*>(e.get())->children = {std::move(x)};
  return e;
}

ExprPtr set_lit(std::vector<ExprPtr> elems) {
  require(!elems.empty(), "set literal needs at least one element");
  for (const auto& x : elems) require_same(elems[0], x, "set literal");
  auto e = node(ExprKind::SetLit, Type::set(elems[0]->type));
  const_cast<Expr*>(e.get())->children = std::move(elems);
  return e;
}

ExprPtr not_(ExprPtr x) {
  require_bool(x, "~");
  auto e = node(ExprKind::Not, Type::boolean());
  const_cast<Expr*>(e.get())->children = {std::move(x)};
  return e;
}

namespace {
ExprPtr bool_binary(ExprKind k, ExprPtr a, ExprPtr b, const char* op) {
  require_bool(a, op);
  require_bool(b, op);
  auto e = node(k, Type::boolean());
  const_cast<Expr*>(e.get())->children = {std::move(a), std::move(b)};
  return e;
}

ExprPtr int_binary(ExprKind k, ExprPtr a, ExprPtr b, const char* op,
                   Type result) {
  require_int(a, op);
  require_int(b, op);
  auto e = node(k, std::move(result));
  const_cast<Expr*>(e.get())->children = {std::move(a), std::move(b)};
  return e;
}

ExprPtr set_binary(ExprKind k, ExprPtr a, ExprPtr b, const char* op) {
  require_set(a, op);
  require_same(a, b, op);
  auto e = node(k, a->type);
  const_cast<Expr*>(e.get())->children = {std::move(a), std::move(b)};
  return e;
}
}  // namespace

ExprPtr and_(ExprPtr a, ExprPtr b) {
  return bool_binary(ExprKind::And, std::move(a), std::move(b), "/\\");
}
ExprPtr or_(ExprPtr a, ExprPtr b) {
  return bool_binary(ExprKind::Or, std::move(a), std::move(b), "\\/");
}
ExprPtr implies(ExprPtr a, ExprPtr b) {
  return bool_binary(ExprKind::Implies, std::move(a), std::move(b), "=>");
}

ExprPtr eq(ExprPtr a, ExprPtr b) {
  require_same(a, b, "=");
  auto e = node(ExprKind::Eq, Type::boolean());
  const_cast<Expr*>(e.get())->children = {std::move(a), std::move(b)};
  return e;
}

ExprPtr neq(ExprPtr a, ExprPtr b) {
  require_same(a, b, "#");
  auto e = node(ExprKind::Neq, Type::boolean());
  const_cast<Expr*>(e.get())->children = {std::move(a), std::move(b)};
  return e;
}

ExprPtr lt(ExprPtr a, ExprPtr b) {
  return int_binary(ExprKind::Lt, std::move(a), std::move(b), "<",
                    Type::boolean());
}
ExprPtr le(ExprPtr a, ExprPtr b) {
  return int_binary(ExprKind::Le, std::move(a), std::move(b), "<=",
                    Type::boolean());
}
ExprPtr add(ExprPtr a, ExprPtr b) {
  return int_binary(ExprKind::Add, std::move(a), std::move(b), "+",
                    Type::integer());
}
ExprPtr sub(ExprPtr a, ExprPtr b) {
  return int_binary(ExprKind::Sub, std::move(a), std::move(b), "-",
                    Type::integer());
}

ExprPtr union_(ExprPtr a, ExprPtr b) {
  return set_binary(ExprKind::Union, std::move(a), std::move(b), "union");
}
ExprPtr inter(ExprPtr a, ExprPtr b) {
  return set_binary(ExprKind::Inter, std::move(a), std::move(b), "inter");
}
ExprPtr diff(ExprPtr a, ExprPtr b) {
  return set_binary(ExprKind::Diff, std::move(a), std::move(b), "diff");
}

ExprPtr member(ExprPtr x, ExprPtr s) {
  require_set(s, "in");
  require(s->type.elem() == x->type,
          "in: element type " + x->type.str() + " does not match " +
              s->type.str());
  auto e = node(ExprKind::Member, Type::boolean());
  const_cast<Expr*>(e.get())->children = {std::move(x), std::move(s)};
  return e;
}

ExprPtr subset(ExprPtr a, ExprPtr b) {
  require_set(a, "subseteq");
  require_same(a, b, "subseteq");
  auto e = node(ExprKind::Subset, Type::boolean());
  const_cast<Expr*>(e.get())->children = {std::move(a), std::move(b)};
  return e;
}

ExprPtr apply(ExprPtr fn, ExprPtr key) {
  require(fn->type.is_func(),
          "application expects a function, got " + fn->type.str());
  require(fn->type.key() == key->type,
          "application key type " + key->type.str() + " does not match " +
              fn->type.str());
  auto e = node(ExprKind::Apply, fn->type.value());
  const_cast<Expr*>(e.get())->children = {std::move(fn), std::move(key)};
  return e;
}

ExprPtr func_update(ExprPtr fn, ExprPtr key, ExprPtr val) {
  require(fn->type.is_func(),
          "with-update expects a function, got " + fn->type.str());
  require(fn->type.key() == key->type, "with-update key type mismatch");
  require(fn->type.value() == val->type, "with-update value type mismatch");
  auto e = node(ExprKind::FuncUpdate, fn->type);
  const_cast<Expr*>(e.get())->children = {std::move(fn), std::move(key),
                                          std::move(val)};
  return e;
}

namespace {
ExprPtr quantifier(ExprKind k, std::string bound, std::string domain,
                   ExprPtr body) {
  require_bool(body, "quantifier body");
  auto e = node(k, Type::boolean());
  auto* m = const_cast<Expr*>(e.get());
  m->name = std::move(bound);
  m->domain = std::move(domain);
  m->children = {std::move(body)};
  return e;
}
}  // namespace

ExprPtr forall(std::string bound, std::string domain, ExprPtr body) {
  return quantifier(ExprKind::Forall, std::move(bound), std::move(domain),
                    std::move(body));
}
ExprPtr exists(std::string bound, std::string domain, ExprPtr body) {
  return quantifier(ExprKind::Exists, std::move(bound), std::move(domain),
                    std::move(body));
}

ExprPtr ite(ExprPtr c, ExprPtr t, ExprPtr e2) {
  require_bool(c, "if");
  require_same(t, e2, "if branches");
  auto e = node(ExprKind::Ite, t->type);
  const_cast<Expr*>(e.get())->children = {std::move(c), std::move(t),
                                          std::move(e2)};
  return e;
}

ExprPtr hole_call(std::string name, Type output, std::vector<ExprPtr> args) {
  auto e = node(ExprKind::HoleCall, std::move(output));
  auto* m = const_cast<Expr*>(e.get());
  m->name = std::move(name);
  m->children = std::move(args);
  return e;
}

ExprPtr placeholder(std::string nonterminal, Type t) {
  auto e = node(ExprKind::Placeholder, std::move(t));
  const_cast<Expr*>(e.get())->name = std::move(nonterminal);
  return e;
}

ExprPtr binary(ExprKind k, ExprPtr a, ExprPtr b) {
  switch (k) {
    case ExprKind::And:
      return and_(std::move(a), std::move(b));
    case ExprKind::Or:
      return or_(std::move(a), std::move(b));
    case ExprKind::Implies:
      return implies(std::move(a), std::move(b));
    case ExprKind::Eq:
      return eq(std::move(a), std::move(b));
    case ExprKind::Neq:
      return neq(std::move(a), std::move(b));
    case ExprKind::Lt:
      return lt(std::move(a), std::move(b));
    case ExprKind::Le:
      return le(std::move(a), std::move(b));
    case ExprKind::Add:
      return add(std::move(a), std::move(b));
    case ExprKind::Sub:
      return sub(std::move(a), std::move(b));
    case ExprKind::Union:
      return union_(std::move(a), std::move(b));
    case ExprKind::Inter:
      return inter(std::move(a), std::move(b));
    case ExprKind::Diff:
      return diff(std::move(a), std::move(b));
    case ExprKind::Member:
      return member(std::move(a), std::move(b));
    case ExprKind::Subset:
      return subset(std::move(a), std::move(b));
    default:
      throw TypecheckError(SourceLoc{}, "not a binary operator");
  }
}

}  // namespace mk

namespace {

const char* binop_token(ExprKind k) {
  switch (k) {
    case ExprKind::And:
      return "/\\";
    case ExprKind::Or:
      return "\\/";
    case ExprKind::Implies:
      return "=>";
    case ExprKind::Eq:
      return "=";
    case ExprKind::Neq:
      return "#";
    case ExprKind::Lt:
      return "<";
    case ExprKind::Le:
      return "<=";
    case ExprKind::Add:
      return "+";
    case ExprKind::Sub:
      return "-";
    case ExprKind::Union:
      return "union";
    case ExprKind::Inter:
      return "inter";
    case ExprKind::Diff:
      return "diff";
    case ExprKind::Member:
      return "in";
    case ExprKind::Subset:
      return "subseteq";
    default:
      return "?";
  }
}

}  // namespace

std::string to_string(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::VarRef:
    case ExprKind::ParamRef:
    case ExprKind::ArgRef:
    case ExprKind::Placeholder:
      return e->name;
    case ExprKind::BoolLit:
      return e->bool_value ? "true" : "false";
    case ExprKind::IntLit:
      return std::to_string(e->int_value);
    case ExprKind::EmptySet:
      return "({} : " + e->type.str() + ")";
    case ExprKind::Singleton:
      return "{" + to_string(e->children[0]) + "}";
    case ExprKind::SetLit: {
      std::string s = "{";
      for (std::size_t i = 0; i < e->children.size(); ++i) {
        if (i) s += ", ";
        s += to_string(e->children[i]);
      }
      return s + "}";
    }
    case ExprKind::Not:
      return "(~ " + to_string(e->children[0]) + ")";
    case ExprKind::Apply:
      return to_string(e->children[0]) + "[" + to_string(e->children[1]) + "]";
    case ExprKind::FuncUpdate:
      return "(" + to_string(e->children[0]) + " with [" +
             to_string(e->children[1]) + " := " + to_string(e->children[2]) +
             "])";
    case ExprKind::Forall:
      return "(forall " + e->name + " in " + e->domain + " : " +
             to_string(e->children[0]) + ")";
    case ExprKind::Exists:
      return "(exists " + e->name + " in " + e->domain + " : " +
             to_string(e->children[0]) + ")";
    case ExprKind::Ite:
      return "(if " + to_string(e->children[0]) + " then " +
             to_string(e->children[1]) + " else " + to_string(e->children[2]) +
             ")";
    case ExprKind::HoleCall: {
      std::string s = "?" + e->name + "(";
      for (std::size_t i = 0; i < e->children.size(); ++i) {
        if (i) s += ", ";
        s += to_string(e->children[i]);
      }
      return s + ")";
    }
    default:
      return "(" + to_string(e->children[0]) + " " + binop_token(e->kind) +
             " " + to_string(e->children[1]) + ")";
  }
}

namespace {

struct BoundScope {
  std::vector<std::pair<std::string, Value>> stack;

  const Value* find(const std::string& name) const {
    for (auto it = stack.rbegin(); it != stack.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }
};

Value eval_rec(const ExprPtr& e, const EvalCtx& ctx, BoundScope& bound);

Value eval_quantifier(const ExprPtr& e, const EvalCtx& ctx,
                      BoundScope& bound) {
  bool is_forall = e->kind == ExprKind::Forall;
  if (!ctx.inst) throw EvalError("quantifier evaluation needs an instance");
  auto d = ctx.inst->domains.find(e->domain);
  if (d == ctx.inst->domains.end())
    throw EvalError("unbound domain in quantifier: " + e->domain);
  for (const auto& id : d->second) {
    bound.stack.emplace_back(e->name, Value::element(e->domain, id));
    bool v = eval_rec(e->children[0], ctx, bound).as_bool();
    bound.stack.pop_back();
    if (is_forall && !v) return Value::boolean(false);
    if (!is_forall && v) return Value::boolean(true);
  }
  return Value::boolean(is_forall);
}

Value eval_rec(const ExprPtr& e, const EvalCtx& ctx, BoundScope& bound) {
  switch (e->kind) {
    case ExprKind::VarRef:
      if (!ctx.state) throw EvalError("no state for variable " + e->name);
      return ctx.state->at(e->name);
    case ExprKind::ParamRef:
      if (!ctx.inst) throw EvalError("no instance for parameter " + e->name);
      return ctx.inst->param_value(e->name);
    case ExprKind::ArgRef: {
      if (const Value* v = bound.find(e->name)) return *v;
      if (ctx.args) {
        auto it = ctx.args->find(e->name);
        if (it != ctx.args->end()) return it->second;
      }
      throw EvalError("unbound argument: " + e->name);
    }
    case ExprKind::BoolLit:
      return Value::boolean(e->bool_value);
    case ExprKind::IntLit:
      return Value::integer(e->int_value);
    case ExprKind::EmptySet:
      return Value::make_set({});
    case ExprKind::Singleton:
      return Value::make_set({eval_rec(e->children[0], ctx, bound)});
    case ExprKind::SetLit: {
      std::vector<Value> elems;
      elems.reserve(e->children.size());
      for (const auto& c : e->children)
        elems.push_back(eval_rec(c, ctx, bound));
      return Value::make_set(std::move(elems));
    }
    case ExprKind::Not:
      return Value::boolean(!eval_rec(e->children[0], ctx, bound).as_bool());
    case ExprKind::And: {
      if (!eval_rec(e->children[0], ctx, bound).as_bool())
        return Value::boolean(false);
      return eval_rec(e->children[1], ctx, bound);
    }
    case ExprKind::Or: {
      if (eval_rec(e->children[0], ctx, bound).as_bool())
        return Value::boolean(true);
      return eval_rec(e->children[1], ctx, bound);
    }
    case ExprKind::Implies: {
      if (!eval_rec(e->children[0], ctx, bound).as_bool())
        return Value::boolean(true);
      return eval_rec(e->children[1], ctx, bound);
    }
    case ExprKind::Eq:
      return Value::boolean(eval_rec(e->children[0], ctx, bound) ==
                            eval_rec(e->children[1], ctx, bound));
    case ExprKind::Neq:
      return Value::boolean(eval_rec(e->children[0], ctx, bound) !=
                            eval_rec(e->children[1], ctx, bound));
    case ExprKind::Lt:
      return Value::boolean(eval_rec(e->children[0], ctx, bound).as_int() <
                            eval_rec(e->children[1], ctx, bound).as_int());
    case ExprKind::Le:
      return Value::boolean(eval_rec(e->children[0], ctx, bound).as_int() <=
                            eval_rec(e->children[1], ctx, bound).as_int());
    case ExprKind::Add:
      return Value::integer(eval_rec(e->children[0], ctx, bound).as_int() +
                            eval_rec(e->children[1], ctx, bound).as_int());
    case ExprKind::Sub:
      return Value::integer(eval_rec(e->children[0], ctx, bound).as_int() -
                            eval_rec(e->children[1], ctx, bound).as_int());
    case ExprKind::Union: {
      auto a = eval_rec(e->children[0], ctx, bound);
      auto b = eval_rec(e->children[1], ctx, bound);
      std::vector<Value> elems = a.set_elems();
      for (const auto& x : b.set_elems()) elems.push_back(x);
      return Value::make_set(std::move(elems));
    }
    case ExprKind::Inter: {
      auto a = eval_rec(e->children[0], ctx, bound);
      auto b = eval_rec(e->children[1], ctx, bound);
      std::vector<Value> elems;
      for (const auto& x : a.set_elems())
        if (b.set_contains(x)) elems.push_back(x);
      return Value::make_set(std::move(elems));
    }
    case ExprKind::Diff: {
      auto a = eval_rec(e->children[0], ctx, bound);
      auto b = eval_rec(e->children[1], ctx, bound);
      std::vector<Value> elems;
      for (const auto& x : a.set_elems())
        if (!b.set_contains(x)) elems.push_back(x);
      return Value::make_set(std::move(elems));
    }
    case ExprKind::Member: {
      auto x = eval_rec(e->children[0], ctx, bound);
      auto s = eval_rec(e->children[1], ctx, bound);
      return Value::boolean(s.set_contains(x));
    }
    case ExprKind::Subset: {
      auto a = eval_rec(e->children[0], ctx, bound);
      auto b = eval_rec(e->children[1], ctx, bound);
      for (const auto& x : a.set_elems())
        if (!b.set_contains(x)) return Value::boolean(false);
      return Value::boolean(true);
    }
    case ExprKind::Apply: {
      auto fn = eval_rec(e->children[0], ctx, bound);
      auto key = eval_rec(e->children[1], ctx, bound);
      auto v = fn.func_at(key);
      if (!v)
        throw EvalError("function applied outside its domain: key " +
                        key.str() + " not in " + fn.str());
      return *v;
    }
    case ExprKind::FuncUpdate: {
      auto fn = eval_rec(e->children[0], ctx, bound);
      auto key = eval_rec(e->children[1], ctx, bound);
      auto val = eval_rec(e->children[2], ctx, bound);
      auto entries = fn.func_entries();
      bool found = false;
      for (auto& [k, v] : entries)
        if (k == key) {
          v = val;
          found = true;
          break;
        }
      if (!found)
        throw EvalError("with-update outside the function domain: key " +
                        key.str());
      return Value::make_func(std::move(entries));
    }
    case ExprKind::Forall:
    case ExprKind::Exists:
      return eval_quantifier(e, ctx, bound);
    case ExprKind::Ite: {
      if (eval_rec(e->children[0], ctx, bound).as_bool())
        return eval_rec(e->children[1], ctx, bound);
      return eval_rec(e->children[2], ctx, bound);
    }
    case ExprKind::HoleCall:
      throw EvalError("cannot evaluate a hole call: ?" + e->name);
    case ExprKind::Placeholder:
      throw EvalError("cannot evaluate a grammar placeholder: " + e->name);
  }
  throw EvalError("unreachable");
}

}  // namespace

Value eval(const ExprPtr& e, const EvalCtx& ctx) {
  BoundScope bound;
  return eval_rec(e, ctx, bound);
}

ExprPtr replace_args(const ExprPtr& e,
                     const std::map<std::string, ExprPtr>& bindings) {
  switch (e->kind) {
    case ExprKind::ArgRef: {
      auto it = bindings.find(e->name);
      return it == bindings.end() ? e : it->second;
    }
    case ExprKind::Forall:
    case ExprKind::Exists: {
      // The binder shadows an argument of the same name.
      if (bindings.count(e->name)) {
        auto inner = bindings;
        inner.erase(e->name);
        auto body = replace_args(e->children[0], inner);
        if (body == e->children[0]) return e;
        return e->kind == ExprKind::Forall
                   ? mk::forall(e->name, e->domain, body)
                   : mk::exists(e->name, e->domain, body);
      }
      auto body = replace_args(e->children[0], bindings);
      if (body == e->children[0]) return e;
      return e->kind == ExprKind::Forall
                 ? mk::forall(e->name, e->domain, body)
                 : mk::exists(e->name, e->domain, body);
    }
    default: {
      if (e->children.empty()) return e;
      bool changed = false;
      std::vector<ExprPtr> kids;
      kids.reserve(e->children.size());
      for (const auto& c : e->children) {
        auto r = replace_args(c, bindings);
        changed |= (r != c);
        kids.push_back(std::move(r));
      }
      if (!changed) return e;
      auto copy = std::make_shared<Expr>(*e);
      copy->children = std::move(kids);
      return copy;
    }
  }
}

ExprPtr substitute_holes(const ExprPtr& e,
                         const std::map<std::string, ExprPtr>& completion,
                         const std::map<std::string, Hole>& holes) {
  if (e->kind == ExprKind::HoleCall) {
    auto body = completion.find(e->name);
    if (body == completion.end())
      throw ValidationError("completion is missing hole " + e->name);
    auto hole = holes.find(e->name);
    if (hole == holes.end())
      throw ValidationError("unknown hole " + e->name);
    if (hole->second.args.size() != e->children.size())
      throw ValidationError("arity mismatch for hole " + e->name + ": " +
                            std::to_string(e->children.size()) +
                            " arguments, declared " +
                            std::to_string(hole->second.args.size()));
    std::map<std::string, ExprPtr> bindings;
    for (std::size_t i = 0; i < e->children.size(); ++i)
      bindings[hole->second.args[i].first] = e->children[i];
    auto replaced = replace_args(body->second, bindings);
    if (replaced->type != e->type)
      throw TypecheckError(SourceLoc{}, "completion for hole " + e->name +
                                            " has type " +
                                            replaced->type.str() +
                                            ", expected " + e->type.str());
    return replaced;
  }
  if (e->children.empty()) return e;
  bool changed = false;
  std::vector<ExprPtr> kids;
  kids.reserve(e->children.size());
  for (const auto& c : e->children) {
    auto r = substitute_holes(c, completion, holes);
    changed |= (r != c);
    kids.push_back(std::move(r));
  }
  if (!changed) return e;
  auto copy = std::make_shared<Expr>(*e);
  copy->children = std::move(kids);
  return copy;
}

}  // namespace protoforge
