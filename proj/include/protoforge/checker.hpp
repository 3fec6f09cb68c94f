#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "protoforge/sketch.hpp"
#include "protoforge/value.hpp"

namespace protoforge {

/// Annotation of one transition: the action taken and its argument values.
struct TransitionLabel {
  std::string action;
  std::map<std::string, Value> args;

  bool operator==(const TransitionLabel& o) const {
    return action == o.action && args == o.args;
  }
  std::string str() const;
};

enum class CexKind { Safety, Deadlock, Liveness, Stuttering };

/// An action-annotated run violating a property. labels[i] annotates the
/// transition states[i] -> states[i+1]. Liveness and stuttering violations
/// are lassos: states[loop_index] == states.back(); for stuttering the
/// cycle is the implicit self-loop on the final state (loop_index = k).
struct Counterexample {
  CexKind kind;
  std::string property;
  std::vector<State> states;
  std::vector<TransitionLabel> labels;
  std::optional<std::size_t> loop_index;

  std::string fingerprint() const;
  /// One state per line with --[ Action(args) ]--> separators and a LOOP>
  /// marker at loop_index.
  std::string str() const;
};

struct CheckReport {
  bool pass = true;
  std::optional<Counterexample> cex;
  std::size_t states_explored = 0;
  std::chrono::duration<double> check_time{0};
};

struct CheckerOptions {
  std::size_t state_cap = 1000000;
};

/// All enabled transitions from s: actions in declaration order, argument
/// tuples in universe order (last argument fastest).
std::vector<std::pair<TransitionLabel, State>> successors(
    const Protocol& p, const InstanceBinding& inst, const State& s);

/// Initial states: the product of variable universes filtered through the
/// init predicates, in enumeration order.
std::vector<State> initial_states(const Protocol& p,
                                  const InstanceBinding& inst,
                                  const CheckerOptions& opts = {});

/// Explicit reachable-state graph, built breadth-first.
struct ReachGraph {
  std::vector<State> states;                 // by discovery index
  std::map<State, int> index;
  std::vector<std::vector<std::pair<TransitionLabel, int>>> edges;
  std::vector<int> parent;       // BFS tree (-1 for initial states)
  std::vector<int> parent_edge;  // edge index within edges[parent[i]]

  /// Shortest path of state indices from an initial state to `target`.
  std::vector<int> path_from_init(int target) const;
};

ReachGraph build_reach_graph(const Protocol& p, const InstanceBinding& inst,
                             const CheckerOptions& opts = {});

CheckReport check_safety_and_deadlock(const Protocol& p,
                                      const InstanceBinding& inst,
                                      const std::vector<Property>& invariants,
                                      bool deadlock_check,
                                      const CheckerOptions& opts = {});

CheckReport check_liveness(const Protocol& p, const InstanceBinding& inst,
                           const Property& prop, const ReachGraph& g,
                           const CheckerOptions& opts = {});

CheckReport check_stuttering(const Protocol& p, const InstanceBinding& inst,
                             const Property& prop, const ReachGraph& g,
                             const CheckerOptions& opts = {});

/// Full verification in order: safety, deadlock, stuttering per temporal
/// property, liveness per temporal property. First failure wins; the
/// returned counterexample has been replay-validated.
CheckReport verify(const Protocol& p, const InstanceBinding& inst,
                   const std::vector<Property>& properties,
                   const CheckerOptions& opts = {});

/// Re-evaluate every labeled transition of the counterexample and the init
/// predicates; throws ValidationError if anything fails to reproduce.
void validate_counterexample(const Protocol& p, const InstanceBinding& inst,
                             const Counterexample& cex);

/// True iff the run replays in p: the initial state satisfies init and each
/// labeled transition is valid (used by pruning-optimality harnesses).
bool replays(const Protocol& p, const InstanceBinding& inst,
             const Counterexample& cex);

/// Fair action instances: every (action, argument tuple) of fair actions.
std::vector<TransitionLabel> fair_instances(const Protocol& p,
                                            const InstanceBinding& inst);

/// All pre-conditions of the labeled instance hold at s.
bool instance_enabled(const Protocol& p, const InstanceBinding& inst,
                      const State& s, const TransitionLabel& label);

/// The unique successor of s under the labeled instance (pres not checked).
State instance_successor(const Protocol& p, const InstanceBinding& inst,
                         const State& s, const TransitionLabel& label);

}  // namespace protoforge
