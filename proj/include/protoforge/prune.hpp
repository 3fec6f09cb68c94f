#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "protoforge/checker.hpp"
#include "protoforge/sketch.hpp"
#include "protoforge/value.hpp"

namespace protoforge {

/// One disjunct of a pruning constraint: an interpretation X satisfies the
/// term when eval(X[hole], input) != output.
struct Term {
  std::string hole;
  std::map<std::string, Value> input;  // hole arguments, action args included
  Value output;

  std::string str() const;  // hole(arg=val, ...) != val
};

/// Disjunction of terms. A completion is pruned by the constraint iff it
/// satisfies no term (every hole evaluation agrees with the recorded
/// output). The empty disjunction is unsatisfiable: no completion can avoid
/// the underlying run.
struct PruningConstraint {
  std::vector<Term> terms;
  std::string origin;  // counterexample kind + run id, diagnostic
  /// Instance the term values came from; quantifiers in hole expressions
  /// expand over it during evaluation.
  std::shared_ptr<const InstanceBinding> inst;

  std::string str() const;
};

/// Conjunction of pruning constraints, grown append-only by the driver.
struct ConstraintSet {
  std::vector<PruningConstraint> constraints;

  void add(PruningConstraint c) { constraints.push_back(std::move(c)); }
  std::size_t size() const { return constraints.size(); }
  std::string dump() const;  // one constraint per line
};

struct PccResult {
  bool pass = true;
  int violated_index = -1;  // first violated constraint, diagnostic
};

/// Check a completion against the constraints by direct evaluation; no
/// model checking, no solver.
PccResult pcc_check(const Completion& x, const ConstraintSet& cs);

bool satisfies(const Completion& x, const PruningConstraint& c);

/// tau-terms for every transition of the run: one term per hole of the
/// taken action, probing the predecessor state restricted to the hole's
/// arguments, with the completion's own output as the recorded value.
PruningConstraint encode_safety(const Counterexample& r, const Sketch& sk,
                                const Completion& x,
                                std::shared_ptr<const InstanceBinding> inst);

/// Safety terms plus rho-terms weakening disabled pre-holes at the
/// deadlocked final state, over every action and argument tuple.
PruningConstraint encode_deadlock(const Counterexample& r, const Sketch& sk,
                                  const Completion& x,
                                  std::shared_ptr<const InstanceBinding> inst);

/// Safety terms plus rho-terms over fair actions, all argument tuples and
/// all cycle states: weakening any disabled pre-hole makes the cycle unfair.
PruningConstraint encode_liveness(const Counterexample& r, const Sketch& sk,
                                  const Completion& x,
                                  std::shared_ptr<const InstanceBinding> inst);

/// Safety terms, tau-terms for every post-hole of every fair action at the
/// stuck state, and rho-terms probing the stuck state only.
PruningConstraint encode_stuttering(
    const Counterexample& r, const Sketch& sk, const Completion& x,
    std::shared_ptr<const InstanceBinding> inst);

/// Dispatch on the counterexample kind.
PruningConstraint encode_counterexample(
    const Counterexample& r, const Sketch& sk, const Completion& x,
    std::shared_ptr<const InstanceBinding> inst);

}  // namespace protoforge
