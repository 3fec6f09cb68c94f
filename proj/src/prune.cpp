#include "protoforge/prune.hpp"

#include <algorithm>

namespace protoforge {

namespace {

/// The probe state s*: the given state (plus action arguments) restricted
/// to the hole's declared arguments.
std::map<std::string, Value> restrict_state(
    const Hole& h, const State& s, const std::map<std::string, Value>& args,
    const InstanceBinding& inst) {
  std::map<std::string, Value> out;
  for (const auto& [name, type] : h.args) {
    auto a = args.find(name);
    if (a != args.end()) {
      out[name] = a->second;
      continue;
    }
    auto v = s.vars.find(name);
    if (v != s.vars.end()) {
      out[name] = v->second;
      continue;
    }
    out[name] = inst.param_value(name);
  }
  return out;
}

Value eval_hole(const Completion& x, const std::string& hole,
                const std::map<std::string, Value>& input,
                const InstanceBinding& inst) {
  auto it = x.exprs.find(hole);
  if (it == x.exprs.end())
    throw ValidationError("completion is missing hole " + hole);
  EvalCtx ctx{nullptr, &inst, &input};
  return eval(it->second, ctx);
}

void add_term(std::vector<Term>& terms, Term t) {
  for (const auto& u : terms)
    if (u.hole == t.hole && u.input == t.input && u.output == t.output)
      return;
  terms.push_back(std::move(t));
}

/// tau-terms for one transition s --label--> and every hole of the action.
void tau_terms_for(const Sketch& sk, const Completion& x,
                   const InstanceBinding& inst, const State& s,
                   const TransitionLabel& label, std::vector<Term>& out) {
  for (const auto& h : sk.holes) {
    if (h.owner != label.action) continue;
    Term t;
    t.hole = h.name;
    t.input = restrict_state(h, s, label.args, inst);
    t.output = eval_hole(x, h.name, t.input, inst);
    add_term(out, std::move(t));
  }
}

std::vector<std::map<std::string, Value>> action_arg_tuples(
    const Action& a, const InstanceBinding& inst) {
  std::vector<std::map<std::string, Value>> out;
  std::vector<std::vector<Value>> unis;
  for (const auto& [name, dom] : a.args)
    unis.push_back(universe(Type::domain(dom), inst));
  for (const auto& u : unis)
    if (u.empty()) return out;
  std::vector<std::size_t> idx(unis.size(), 0);
  while (true) {
    std::map<std::string, Value> m;
    for (std::size_t i = 0; i < unis.size(); ++i)
      m[a.args[i].first] = unis[i][idx[i]];
    out.push_back(std::move(m));
    bool done = true;
    for (std::size_t i = unis.size(); i > 0;) {
      --i;
      if (++idx[i] < unis[i].size()) {
        done = false;
        break;
      }
      idx[i] = 0;
    }
    if (done) break;
  }
  return out;
}

/// rho-terms at one state: for each action considered, each argument tuple
/// and each pre-hole that the completion evaluates to false there.
void rho_terms_at(const Sketch& sk, const Completion& x,
                  const InstanceBinding& inst, const State& s,
                  bool fair_only, std::vector<Term>& out) {
  for (const auto& a : sk.actions) {
    if (fair_only && !a.fair) continue;
    bool has_pre_hole = false;
    for (const auto& h : sk.holes)
      has_pre_hole |= (h.owner == a.name && h.kind == HoleKind::Pre);
    if (!has_pre_hole) continue;
    for (const auto& args : action_arg_tuples(a, inst)) {
      for (const auto& h : sk.holes) {
        if (h.owner != a.name || h.kind != HoleKind::Pre) continue;
        Term t;
        t.hole = h.name;
        t.input = restrict_state(h, s, args, inst);
        if (eval_hole(x, h.name, t.input, inst).as_bool()) continue;
        t.output = Value::boolean(false);
        add_term(out, std::move(t));
      }
    }
  }
}

std::string origin_of(const Counterexample& r) {
  switch (r.kind) {
    case CexKind::Safety: return "safety:" + r.property;
    case CexKind::Deadlock: return "deadlock";
    case CexKind::Liveness: return "liveness:" + r.property;
    case CexKind::Stuttering: return "stuttering:" + r.property;
  }
  return "?";
}

}  // namespace

std::string Term::str() const {
  std::string s = hole + "(";
  bool first = true;
  for (const auto& [name, v] : input) {
    if (!first) s += ", ";
    s += name + "=" + v.str();
    first = false;
  }
  return s + ") != " + output.str();
}

std::string PruningConstraint::str() const {
  if (terms.empty()) return "<unsatisfiable>";
  std::string s;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) s += "  \\/  ";
    s += terms[i].str();
  }
  return s;
}

std::string ConstraintSet::dump() const {
  std::string s;
  for (const auto& c : constraints) s += c.str() + "\n";
  return s;
}

bool satisfies(const Completion& x, const PruningConstraint& c) {
  for (const auto& t : c.terms)
    if (eval_hole(x, t.hole, t.input, *c.inst) != t.output) return true;
  return false;
}

PccResult pcc_check(const Completion& x, const ConstraintSet& cs) {
  for (std::size_t i = 0; i < cs.constraints.size(); ++i)
    if (!satisfies(x, cs.constraints[i]))
      return PccResult{false, static_cast<int>(i)};
  return PccResult{true, -1};
}

PruningConstraint encode_safety(const Counterexample& r, const Sketch& sk,
                                const Completion& x,
                                std::shared_ptr<const InstanceBinding> inst) {
  PruningConstraint pc;
  pc.origin = origin_of(r);
  pc.inst = inst;
  for (std::size_t i = 0; i < r.labels.size(); ++i)
    tau_terms_for(sk, x, *inst, r.states[i], r.labels[i], pc.terms);
  return pc;
}

PruningConstraint encode_deadlock(const Counterexample& r, const Sketch& sk,
                                  const Completion& x,
                                  std::shared_ptr<const InstanceBinding> inst) {
  PruningConstraint pc = encode_safety(r, sk, x, inst);
  pc.origin = origin_of(r);
  rho_terms_at(sk, x, *inst, r.states.back(), /*fair_only=*/false, pc.terms);
  return pc;
}

PruningConstraint encode_liveness(const Counterexample& r, const Sketch& sk,
                                  const Completion& x,
                                  std::shared_ptr<const InstanceBinding> inst) {
  PruningConstraint pc = encode_safety(r, sk, x, inst);
  pc.origin = origin_of(r);
  if (!r.loop_index)
    throw ValidationError("liveness counterexample without loop index");
  for (std::size_t j = *r.loop_index; j + 1 < r.states.size(); ++j)
    rho_terms_at(sk, x, *inst, r.states[j], /*fair_only=*/true, pc.terms);
  return pc;
}

PruningConstraint encode_stuttering(
    const Counterexample& r, const Sketch& sk, const Completion& x,
    std::shared_ptr<const InstanceBinding> inst) {
  PruningConstraint pc = encode_safety(r, sk, x, inst);
  pc.origin = origin_of(r);
  const State& sk_state = r.states.back();
  // pi_tau: one term per post-hole of every fair action instance
  for (const auto& a : sk.actions) {
    if (!a.fair) continue;
    bool has_post_hole = false;
    for (const auto& h : sk.holes)
      has_post_hole |= (h.owner == a.name && h.kind == HoleKind::Post);
    if (!has_post_hole) continue;
    for (const auto& args : action_arg_tuples(a, *inst)) {
      for (const auto& h : sk.holes) {
        if (h.owner != a.name || h.kind != HoleKind::Post) continue;
        Term t;
        t.hole = h.name;
        t.input = restrict_state(h, sk_state, args, *inst);
        t.output = eval_hole(x, h.name, t.input, *inst);
        add_term(pc.terms, std::move(t));
      }
    }
  }
  // pi_rho': as for liveness, probing only the final state
  rho_terms_at(sk, x, *inst, sk_state, /*fair_only=*/true, pc.terms);
  return pc;
}

PruningConstraint encode_counterexample(
    const Counterexample& r, const Sketch& sk, const Completion& x,
    std::shared_ptr<const InstanceBinding> inst) {
  switch (r.kind) {
    case CexKind::Safety:
      return encode_safety(r, sk, x, inst);
    case CexKind::Deadlock:
      return encode_deadlock(r, sk, x, inst);
    case CexKind::Liveness:
      return encode_liveness(r, sk, x, inst);
    case CexKind::Stuttering:
      return encode_stuttering(r, sk, x, inst);
  }
  throw ValidationError("unknown counterexample kind");
}

}  // namespace protoforge
