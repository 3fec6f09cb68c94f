#pragma once

#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "protoforge/checker.hpp"
#include "protoforge/grammar.hpp"
#include "protoforge/sketch.hpp"

namespace protoforge::testing {

/// Independent powerset enumeration (recursive, order-preserving).
std::vector<std::vector<Value>> powerset_oracle(const std::vector<Value>& xs);

/// Independent verdicts computed from the raw transition function with
/// set/matrix algorithms (no shared search code with the checker): level-set
/// reachability for safety depth, reachability-matrix strong components with
/// refinement for fair cycles, and an exhaustive subset cross-check on small
/// pending regions.
struct OracleVerdict {
  bool safety_ok = true;
  int safety_depth = -1;  // depth of the shallowest violating state
  bool deadlock_ok = true;
  std::vector<bool> stuttering_ok;  // per temporal property, declared order
  std::vector<bool> liveness_ok;
};

OracleVerdict oracle_verify(const Protocol& p, const InstanceBinding& inst);

/// True iff the lasso cycle of r is fair in p: every fair instance enabled
/// at some cycle state labels some cycle transition (for stuttering lassos
/// the cycle is the implicit self-loop, so the check is that no fair
/// enabled instance changes the final state).
bool cycle_is_fair(const Protocol& p, const InstanceBinding& inst,
                   const Counterexample& r);

/// Final state of r has no successor in p.
bool final_state_deadlocked(const Protocol& p, const InstanceBinding& inst,
                            const Counterexample& r);

/// Deterministic generator of small random protocols and sketches over a
/// two-element domain, used by the pruning-optimality and checker-oracle
/// harnesses.
class RandomProtocolGen {
 public:
  explicit RandomProtocolGen(std::uint32_t seed) : rng_(seed) {}

  /// A hole-free protocol with invariants and one leads-to property.
  Protocol random_protocol(bool want_fair, bool deadlock_check);

  /// A sketch with `n_holes` holes (pre and/or post) plus per-hole finite
  /// grammars (terminal productions only, language <= `max_lang`).
  struct SketchAndGrammars {
    Sketch sk;
    std::map<std::string, Grammar> grammars;
  };
  SketchAndGrammars random_sketch(int n_holes, std::size_t max_lang);

  InstanceBinding instance() const;

  std::mt19937& rng() { return rng_; }

 private:
  int pick(int n);
  ExprPtr bool_atom(const Sketch& sk, const std::vector<ExprPtr>& args);
  ExprPtr set_update(const Sketch& sk, const std::string& var,
                     const std::vector<ExprPtr>& args);

  std::mt19937 rng_;
};

/// All completions of the given grammars (cross product of their finite
/// languages, enumerated by the cached enumerator with reduction off).
std::vector<Completion> all_completions(
    const Sketch& sk, const std::map<std::string, Grammar>& grammars,
    std::size_t cap);

}  // namespace protoforge::testing
