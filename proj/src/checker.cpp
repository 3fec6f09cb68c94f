#include "protoforge/checker.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>

namespace protoforge {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::vector<Value>> arg_universes(const Action& a,
                                              const InstanceBinding& inst) {
  std::vector<std::vector<Value>> out;
  for (const auto& [name, dom] : a.args)
    out.push_back(universe(Type::domain(dom), inst));
  return out;
}

/// Argument tuples of an action, last argument varying fastest.
std::vector<std::map<std::string, Value>> arg_tuples(
    const Action& a, const InstanceBinding& inst) {
  std::vector<std::map<std::string, Value>> out;
  auto unis = arg_universes(a, inst);
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

bool pres_hold(const Protocol& p, const InstanceBinding& inst, const State& s,
               const Action& a, const std::map<std::string, Value>& args) {
  EvalCtx ctx{&s, &inst, &args};
  for (const auto& pre : a.pre) {
    try {
      if (!eval(pre, ctx).as_bool()) return false;
    } catch (const EvalError& e) {
      throw EvalError("in pre-condition of " + a.name + ": " + e.what());
    }
  }
  (void)p;
  return true;
}

State apply_post(const Protocol& p, const InstanceBinding& inst,
                 const State& s, const Action& a,
                 const std::map<std::string, Value>& args) {
  EvalCtx ctx{&s, &inst, &args};
  State t = s;  // implicit frame: unlisted variables are unchanged
  for (const auto& pc : a.post) {
    try {
      t.vars[pc.var] = eval(pc.rhs, ctx);
    } catch (const EvalError& e) {
      throw EvalError("in update of " + pc.var + " in " + a.name + ": " +
                      e.what());
    }
  }
  (void)p;
  return t;
}

bool state_pred(const ExprPtr& e, const State& s, const InstanceBinding& inst) {
  EvalCtx ctx{&s, &inst, nullptr};
  return eval(e, ctx).as_bool();
}

}  // namespace

std::string TransitionLabel::str() const {
  std::string s = action + "(";
  bool first = true;
  for (const auto& [name, v] : args) {
    if (!first) s += ", ";
    s += name + "=" + v.str();
    first = false;
  }
  return s + ")";
}

std::string Counterexample::fingerprint() const {
  std::string s;
  switch (kind) {
    case CexKind::Safety: s = "safety"; break;
    case CexKind::Deadlock: s = "deadlock"; break;
    case CexKind::Liveness: s = "liveness"; break;
    case CexKind::Stuttering: s = "stuttering"; break;
  }
  s += "|" + property;
  for (std::size_t i = 0; i < states.size(); ++i) {
    s += "|" + states[i].str();
    if (i < labels.size()) s += "|" + labels[i].str();
  }
  if (loop_index) s += "|loop=" + std::to_string(*loop_index);
  return s;
}

std::string Counterexample::str() const {
  std::string s;
  switch (kind) {
    case CexKind::Safety:
      s = "safety violation of " + property;
      break;
    case CexKind::Deadlock:
      s = "deadlock";
      break;
    case CexKind::Liveness:
      s = "liveness violation of " + property;
      break;
    case CexKind::Stuttering:
      s = "stuttering violation of " + property;
      break;
  }
  s += "\n";
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (loop_index && *loop_index == i) s += "LOOP> ";
    s += states[i].str() + "\n";
    if (i < labels.size()) s += "  --[ " + labels[i].str() + " ]-->\n";
  }
  return s;
}

std::vector<std::pair<TransitionLabel, State>> successors(
    const Protocol& p, const InstanceBinding& inst, const State& s) {
  std::vector<std::pair<TransitionLabel, State>> out;
  for (const auto& a : p.actions) {
    for (const auto& args : arg_tuples(a, inst)) {
      if (!pres_hold(p, inst, s, a, args)) continue;
      TransitionLabel label{a.name, args};
      out.emplace_back(std::move(label), apply_post(p, inst, s, a, args));
    }
  }
  return out;
}

std::vector<State> initial_states(const Protocol& p,
                                  const InstanceBinding& inst,
                                  const CheckerOptions& opts) {
  // Enumerate the full variable-universe product, then filter through init.
  std::uint64_t total = 1;
  for (const auto& v : p.vars) {
    std::uint64_t n = universe_size(v.type, inst, inst.int_bounds);
    if (n == 0) return {};
    if (total > opts.state_cap / n + 1) throw StateSpaceLimitError(opts.state_cap);
    total *= n;
  }
  if (total > opts.state_cap) throw StateSpaceLimitError(opts.state_cap);

  std::vector<std::vector<Value>> unis;
  for (const auto& v : p.vars)
    unis.push_back(universe(v.type, inst, inst.int_bounds));

  std::vector<State> out;
  std::vector<std::size_t> idx(p.vars.size(), 0);
  while (true) {
    State s;
    for (std::size_t i = 0; i < p.vars.size(); ++i)
      s.vars[p.vars[i].name] = unis[i][idx[i]];
    bool ok = true;
    EvalCtx ctx{&s, &inst, nullptr};
    for (const auto& e : p.init)
      if (!eval(e, ctx).as_bool()) {
        ok = false;
        break;
      }
    if (ok) out.push_back(std::move(s));
    std::size_t i = idx.size();
    bool done = true;
    while (i > 0) {
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

std::vector<int> ReachGraph::path_from_init(int target) const {
  std::vector<int> path;
  for (int v = target; v != -1; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

ReachGraph build_reach_graph(const Protocol& p, const InstanceBinding& inst,
                             const CheckerOptions& opts) {
  ReachGraph g;
  std::deque<int> queue;
  for (const auto& s : initial_states(p, inst, opts)) {
    if (g.index.count(s)) continue;
    int id = static_cast<int>(g.states.size());
    g.index[s] = id;
    g.states.push_back(s);
    g.parent.push_back(-1);
    g.parent_edge.push_back(-1);
    queue.push_back(id);
  }
  g.edges.resize(g.states.size());
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    auto succ = successors(p, inst, g.states[u]);
    for (auto& [label, t] : succ) {
      auto it = g.index.find(t);
      int v;
      if (it == g.index.end()) {
        v = static_cast<int>(g.states.size());
        if (g.states.size() >= opts.state_cap)
          throw StateSpaceLimitError(opts.state_cap);
        g.index[t] = v;
        g.states.push_back(t);
        g.edges.emplace_back();
        g.parent.push_back(u);
        g.parent_edge.push_back(static_cast<int>(g.edges[u].size()));
        queue.push_back(v);
      } else {
        v = it->second;
      }
      g.edges[u].emplace_back(std::move(label), v);
    }
  }
  return g;
}

namespace {

Counterexample path_cex(const ReachGraph& g, int target, CexKind kind,
                        const std::string& property) {
  Counterexample cex;
  cex.kind = kind;
  cex.property = property;
  auto path = g.path_from_init(target);
  for (std::size_t i = 0; i < path.size(); ++i) {
    cex.states.push_back(g.states[path[i]]);
    if (i + 1 < path.size()) {
      int u = path[i];
      int e = g.parent_edge[path[i + 1]];
      cex.labels.push_back(g.edges[u][e].first);
    }
  }
  return cex;
}

}  // namespace

CheckReport check_safety_and_deadlock(const Protocol& p,
                                      const InstanceBinding& inst,
                                      const std::vector<Property>& invariants,
                                      bool deadlock_check,
                                      const CheckerOptions& opts) {
  auto t0 = Clock::now();
  CheckReport rep;

  // BFS with invariant checks at discovery; the first violating state found
  // is at minimal depth, so the returned path is shortest.
  ReachGraph g;
  std::deque<int> queue;
  auto check_state = [&](int id) -> const Property* {
    EvalCtx ctx{&g.states[id], &inst, nullptr};
    for (const auto& prop : invariants)
      if (!eval(prop.pred, ctx).as_bool()) return &prop;
    return nullptr;
  };

  for (const auto& s : initial_states(p, inst, opts)) {
    if (g.index.count(s)) continue;
    int id = static_cast<int>(g.states.size());
    g.index[s] = id;
    g.states.push_back(s);
    g.parent.push_back(-1);
    g.parent_edge.push_back(-1);
    g.edges.emplace_back();
    queue.push_back(id);
    if (const Property* bad = check_state(id)) {
      rep.pass = false;
      rep.cex = path_cex(g, id, CexKind::Safety, bad->name);
      rep.states_explored = g.states.size();
      rep.check_time = Clock::now() - t0;
      return rep;
    }
  }

  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    auto succ = successors(p, inst, g.states[u]);
    for (auto& [label, t] : succ) {
      auto it = g.index.find(t);
      int v;
      if (it == g.index.end()) {
        v = static_cast<int>(g.states.size());
        if (g.states.size() >= opts.state_cap)
          throw StateSpaceLimitError(opts.state_cap);
        g.index[t] = v;
        g.states.push_back(t);
        g.edges.emplace_back();
        g.parent.push_back(u);
        g.parent_edge.push_back(static_cast<int>(g.edges[u].size()));
        queue.push_back(v);
        g.edges[u].emplace_back(std::move(label), v);
        if (const Property* bad = check_state(v)) {
          rep.pass = false;
          rep.cex = path_cex(g, v, CexKind::Safety, bad->name);
          rep.states_explored = g.states.size();
          rep.check_time = Clock::now() - t0;
          return rep;
        }
      } else {
        v = it->second;
        g.edges[u].emplace_back(std::move(label), v);
      }
    }
  }

  if (deadlock_check) {
    for (std::size_t i = 0; i < g.states.size(); ++i) {
      if (g.edges[i].empty()) {
        rep.pass = false;
        rep.cex = path_cex(g, static_cast<int>(i), CexKind::Deadlock, "");
        break;
      }
    }
  }
  rep.states_explored = g.states.size();
  rep.check_time = Clock::now() - t0;
  return rep;
}

std::vector<TransitionLabel> fair_instances(const Protocol& p,
                                            const InstanceBinding& inst) {
  std::vector<TransitionLabel> out;
  for (const auto& a : p.actions) {
    if (!a.fair) continue;
    for (const auto& args : arg_tuples(a, inst))
      out.push_back(TransitionLabel{a.name, args});
  }
  return out;
}

bool instance_enabled(const Protocol& p, const InstanceBinding& inst,
                      const State& s, const TransitionLabel& label) {
  const Action* a = p.find_action(label.action);
  if (!a) throw ValidationError("unknown action " + label.action);
  return pres_hold(p, inst, s, *a, label.args);
}

State instance_successor(const Protocol& p, const InstanceBinding& inst,
                         const State& s, const TransitionLabel& label) {
  const Action* a = p.find_action(label.action);
  if (!a) throw ValidationError("unknown action " + label.action);
  return apply_post(p, inst, s, *a, label.args);
}

namespace {

/// The pending region of a leads-to property: states satisfying ~q that are
/// reachable from a (p && ~q) state through ~q states. Returns (pending set,
/// source flags, q-free flags) as indexed vectors.
struct PendingRegion {
  std::vector<char> q_free;       // state satisfies ~q
  std::vector<char> is_source;    // state satisfies p && ~q
  std::vector<char> pending;      // q-free-reachable from a source
};

PendingRegion pending_region(const Protocol&, const InstanceBinding& inst,
                             const Property& prop, const ReachGraph& g) {
  PendingRegion r;
  std::size_t n = g.states.size();
  r.q_free.assign(n, 0);
  r.is_source.assign(n, 0);
  r.pending.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    bool q = state_pred(prop.q, g.states[i], inst);
    r.q_free[i] = !q;
    if (!q && state_pred(prop.p, g.states[i], inst)) r.is_source[i] = 1;
  }
  std::deque<int> queue;
  for (std::size_t i = 0; i < n; ++i)
    if (r.is_source[i]) {
      r.pending[i] = 1;
      queue.push_back(static_cast<int>(i));
    }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (const auto& [label, v] : g.edges[u]) {
      if (r.q_free[v] && !r.pending[v]) {
        r.pending[v] = 1;
        queue.push_back(v);
      }
    }
  }
  return r;
}

/// Tarjan SCC over the subgraph induced by `member` (iterative).
std::vector<std::vector<int>> sccs_of_subgraph(const ReachGraph& g,
                                               const std::vector<char>& member) {
  std::size_t n = g.states.size();
  std::vector<int> indexv(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> sccs;
  int counter = 0;

  struct Frame {
    int v;
    std::size_t edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (!member[root] || indexv[root] != -1) continue;
    std::vector<Frame> frames{{static_cast<int>(root), 0}};
    indexv[root] = low[root] = counter++;
    stack.push_back(static_cast<int>(root));
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.edge < g.edges[f.v].size()) {
        int w = g.edges[f.v][f.edge].second;
        ++f.edge;
        if (!member[w]) continue;
        if (indexv[w] == -1) {
          indexv[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], indexv[w]);
        }
      } else {
        int v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == indexv[v]) {
          std::vector<int> comp;
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp.push_back(w);
            if (w == v) break;
          }
          std::sort(comp.begin(), comp.end());
          sccs.push_back(std::move(comp));
        }
      }
    }
  }
  std::sort(sccs.begin(), sccs.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  return sccs;
}

bool has_internal_edge(const ReachGraph& g, const std::vector<char>& member,
                       const std::vector<int>& comp) {
  for (int u : comp)
    for (const auto& [label, v] : g.edges[u])
      if (member[v] &&
          std::binary_search(comp.begin(), comp.end(), v))
        return true;
  return false;
}

/// A strongly connected set of states in which every enabled fair instance
/// has a labeled edge. Runs on the pending subgraph; refines by removing
/// states that enable fair instances with no internal edge (a fair run
/// confined to the component must eventually avoid such states).
std::optional<std::vector<int>> find_fair_component(
    const Protocol& p, const InstanceBinding& inst, const ReachGraph& g,
    const std::vector<TransitionLabel>& fair, std::vector<char> member) {
  auto sccs = sccs_of_subgraph(g, member);
  for (const auto& comp : sccs) {
    if (comp.size() == 1) {
      bool self = false;
      for (const auto& [label, v] : g.edges[comp[0]]) self |= (v == comp[0]);
      if (!self) continue;
    }
    if (!has_internal_edge(g, member, comp)) continue;

    std::vector<char> bad_state(g.states.size(), 0);
    bool refined = false;
    for (const auto& fi : fair) {
      std::vector<int> enabled_at;
      for (int u : comp)
        if (instance_enabled(p, inst, g.states[u], fi)) enabled_at.push_back(u);
      if (enabled_at.empty()) continue;
      bool witnessed = false;
      for (int u : comp) {
        for (const auto& [label, v] : g.edges[u]) {
          if (label == fi && std::binary_search(comp.begin(), comp.end(), v)) {
            witnessed = true;
            break;
          }
        }
        if (witnessed) break;
      }
      if (!witnessed) {
        refined = true;
        for (int u : enabled_at) bad_state[u] = 1;
      }
    }
    if (!refined) return comp;

    std::vector<char> sub(g.states.size(), 0);
    bool nonempty = false;
    for (int u : comp)
      if (!bad_state[u]) {
        sub[u] = 1;
        nonempty = true;
      }
    if (!nonempty) continue;
    auto found = find_fair_component(p, inst, g, fair, std::move(sub));
    if (found) return found;
  }
  return std::nullopt;
}

/// Shortest path inside a vertex set from `from` to any vertex satisfying
/// `goal`; returns state indices including both endpoints.
std::optional<std::vector<int>> bfs_within(
    const ReachGraph& g, const std::vector<char>& member, int from,
    const std::vector<char>& goal) {
  std::vector<int> parent(g.states.size(), -2);
  std::deque<int> queue;
  parent[from] = -1;
  queue.push_back(from);
  if (goal[from]) return std::vector<int>{from};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (const auto& [label, v] : g.edges[u]) {
      if (!member[v] || parent[v] != -2) continue;
      parent[v] = u;
      if (goal[v]) {
        std::vector<int> path;
        for (int w = v; w != -1; w = parent[w]) path.push_back(w);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(v);
    }
  }
  return std::nullopt;
}

void append_path_labels(const ReachGraph& g, const std::vector<int>& path,
                        Counterexample& cex, bool skip_first) {
  for (std::size_t i = skip_first ? 1 : 0; i < path.size(); ++i) {
    if (!cex.states.empty()) {
      // label for the edge from previous state to path[i]
      int u = g.index.at(cex.states.back());
      bool found = false;
      for (const auto& [label, v] : g.edges[u]) {
        if (v == path[i]) {
          cex.labels.push_back(label);
          found = true;
          break;
        }
      }
      if (!found)
        throw ValidationError("internal: missing edge while assembling lasso");
    }
    cex.states.push_back(g.states[path[i]]);
  }
}

/// Closed covering walk from `entry` within the component that takes every
/// witness edge once. Returns the walk as state indices (entry ... entry).
std::vector<int> covering_cycle(
    const ReachGraph& g, const std::vector<int>& comp, int entry,
    const std::vector<std::pair<int, int>>& witness_edges) {
  std::vector<char> member(g.states.size(), 0);
  for (int u : comp) member[u] = 1;
  std::vector<int> walk{entry};
  int current = entry;
  for (const auto& [u, eidx] : witness_edges) {
    std::vector<char> goal(g.states.size(), 0);
    goal[u] = 1;
    auto path = bfs_within(g, member, current, goal);
    if (!path) throw ValidationError("internal: SCC not strongly connected");
    walk.insert(walk.end(), path->begin() + 1, path->end());
    walk.push_back(g.edges[u][eidx].second);
    current = g.edges[u][eidx].second;
  }
  if (current != entry || walk.size() == 1) {
    // close the loop; if no witness edges were required, force >= 1 step
    if (walk.size() == 1) {
      bool self = false;
      int first_succ = -1;
      for (const auto& [label, v] : g.edges[entry]) {
        if (!member[v]) continue;
        if (first_succ == -1) first_succ = v;
        if (v == entry) {
          self = true;
          break;
        }
      }
      if (self) {
        walk.push_back(entry);
        return walk;
      }
      walk.push_back(first_succ);
      current = first_succ;
    }
    if (current != entry) {
      std::vector<char> goal(g.states.size(), 0);
      goal[entry] = 1;
      auto path = bfs_within(g, member, current, goal);
      if (!path) throw ValidationError("internal: cannot close fair cycle");
      walk.insert(walk.end(), path->begin() + 1, path->end());
    }
  }
  return walk;
}

}  // namespace

CheckReport check_liveness(const Protocol& p, const InstanceBinding& inst,
                           const Property& prop, const ReachGraph& g,
                           const CheckerOptions&) {
  auto t0 = Clock::now();
  CheckReport rep;
  rep.states_explored = g.states.size();

  auto region = pending_region(p, inst, prop, g);
  bool any = false;
  for (char c : region.pending) any |= c;
  if (!any) {
    rep.check_time = Clock::now() - t0;
    return rep;
  }

  auto fair = fair_instances(p, inst);
  auto comp = find_fair_component(p, inst, g, fair, region.pending);
  if (!comp) {
    rep.check_time = Clock::now() - t0;
    return rep;
  }

  // Assemble the lasso: init ->* source ->(q-free) entry ->cycle-> entry.
  std::vector<char> in_comp(g.states.size(), 0);
  for (int u : *comp) in_comp[u] = 1;

  int source = -1;
  std::vector<int> mid_path;
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    if (!region.is_source[i]) continue;
    auto path = bfs_within(g, region.pending, static_cast<int>(i), in_comp);
    if (path) {
      source = static_cast<int>(i);
      mid_path = *path;
      break;
    }
  }
  if (source == -1)
    throw ValidationError("internal: fair component unreachable from source");
  int entry = mid_path.back();

  // Witness edges: one internal edge per fair instance enabled in the
  // component.
  std::vector<std::pair<int, int>> witness_edges;
  for (const auto& fi : fair) {
    bool enabled = false;
    for (int u : *comp)
      if (instance_enabled(p, inst, g.states[u], fi)) {
        enabled = true;
        break;
      }
    if (!enabled) continue;
    bool found = false;
    for (int u : *comp) {
      const auto& es = g.edges[u];
      for (std::size_t e = 0; e < es.size(); ++e) {
        if (es[e].first == fi && in_comp[es[e].second]) {
          witness_edges.emplace_back(u, static_cast<int>(e));
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found)
      throw ValidationError("internal: fair component missing witness edge");
  }

  auto cycle = covering_cycle(g, *comp, entry, witness_edges);

  Counterexample cex;
  cex.kind = CexKind::Liveness;
  cex.property = prop.name;
  auto prefix = g.path_from_init(source);
  append_path_labels(g, prefix, cex, false);
  append_path_labels(g, mid_path, cex, true);
  cex.loop_index = cex.states.size() - 1;
  append_path_labels(g, cycle, cex, true);
  rep.pass = false;
  rep.cex = std::move(cex);
  rep.check_time = Clock::now() - t0;
  return rep;
}

CheckReport check_stuttering(const Protocol& p, const InstanceBinding& inst,
                             const Property& prop, const ReachGraph& g,
                             const CheckerOptions&) {
  auto t0 = Clock::now();
  CheckReport rep;
  rep.states_explored = g.states.size();

  auto region = pending_region(p, inst, prop, g);
  auto fair = fair_instances(p, inst);

  for (std::size_t i = 0; i < g.states.size(); ++i) {
    if (!region.pending[i]) continue;
    bool stuck = true;
    for (const auto& fi : fair) {
      if (!instance_enabled(p, inst, g.states[i], fi)) continue;
      State t = instance_successor(p, inst, g.states[i], fi);
      if (!(t == g.states[i])) {
        stuck = false;
        break;
      }
    }
    if (!stuck) continue;

    // Path: init ->* source ->(q-free)* stuck state, implicit self-loop.
    int target = static_cast<int>(i);
    int source = -1;
    std::vector<int> mid;
    std::vector<char> goal(g.states.size(), 0);
    goal[target] = 1;
    for (std::size_t s = 0; s < g.states.size(); ++s) {
      if (!region.is_source[s]) continue;
      auto path = bfs_within(g, region.pending, static_cast<int>(s), goal);
      if (path) {
        source = static_cast<int>(s);
        mid = *path;
        break;
      }
    }
    if (source == -1)
      throw ValidationError("internal: pending state without source");

    Counterexample cex;
    cex.kind = CexKind::Stuttering;
    cex.property = prop.name;
    auto prefix = g.path_from_init(source);
    append_path_labels(g, prefix, cex, false);
    append_path_labels(g, mid, cex, true);
    cex.loop_index = cex.states.size() - 1;
    rep.pass = false;
    rep.cex = std::move(cex);
    break;
  }
  rep.check_time = Clock::now() - t0;
  return rep;
}

CheckReport verify(const Protocol& p, const InstanceBinding& inst,
                   const std::vector<Property>& properties,
                   const CheckerOptions& opts) {
  auto t0 = Clock::now();
  std::vector<Property> invs;
  std::vector<Property> temporal;
  for (const auto& prop : properties) {
    if (prop.kind == Property::Kind::Invariant)
      invs.push_back(prop);
    else
      temporal.push_back(prop);
  }

  CheckReport rep =
      check_safety_and_deadlock(p, inst, invs, p.deadlock_check, opts);
  if (!rep.pass) {
    validate_counterexample(p, inst, *rep.cex);
    rep.check_time = Clock::now() - t0;
    return rep;
  }

  if (!temporal.empty()) {
    ReachGraph g = build_reach_graph(p, inst, opts);
    rep.states_explored = g.states.size();
    for (const auto& prop : temporal) {
      CheckReport r = check_stuttering(p, inst, prop, g, opts);
      if (!r.pass) {
        validate_counterexample(p, inst, *r.cex);
        r.check_time = Clock::now() - t0;
        return r;
      }
    }
    for (const auto& prop : temporal) {
      CheckReport r = check_liveness(p, inst, prop, g, opts);
      if (!r.pass) {
        validate_counterexample(p, inst, *r.cex);
        r.check_time = Clock::now() - t0;
        return r;
      }
    }
  }
  rep.pass = true;
  rep.cex.reset();
  rep.check_time = Clock::now() - t0;
  return rep;
}

bool replays(const Protocol& p, const InstanceBinding& inst,
             const Counterexample& cex) {
  if (cex.states.empty()) return false;
  EvalCtx ctx{&cex.states[0], &inst, nullptr};
  for (const auto& e : p.init)
    if (!eval(e, ctx).as_bool()) return false;
  for (std::size_t i = 0; i < cex.labels.size(); ++i) {
    const State& s = cex.states[i];
    const State& t = cex.states[i + 1];
    const TransitionLabel& label = cex.labels[i];
    if (!instance_enabled(p, inst, s, label)) return false;
    if (!(instance_successor(p, inst, s, label) == t)) return false;
  }
  return true;
}

void validate_counterexample(const Protocol& p, const InstanceBinding& inst,
                             const Counterexample& cex) {
  if (!replays(p, inst, cex))
    throw ValidationError("counterexample does not replay");
  if (cex.loop_index) {
    if (*cex.loop_index >= cex.states.size())
      throw ValidationError("loop index out of range");
    if (!(cex.states[*cex.loop_index] == cex.states.back()))
      throw ValidationError("lasso does not close");
  }
  if (cex.kind == CexKind::Liveness || cex.kind == CexKind::Stuttering) {
    if (!cex.loop_index)
      throw ValidationError("temporal counterexample without loop index");
  }
}

}  // namespace protoforge
