#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "protoforge/checker.hpp"
#include "protoforge/enumerate.hpp"
#include "protoforge/grammar.hpp"
#include "protoforge/prune.hpp"
#include "protoforge/sketch.hpp"

namespace protoforge {

enum class Strategy { Naive, Cached };

struct SynthesisConfig {
  InstanceBinding instance;
  std::vector<InstanceBinding> extra_instances;
  std::map<std::string, Grammar> grammars;  // by hole name
  Strategy strategy = Strategy::Cached;
  bool reduce = true;
  bool shortcircuit = true;
  bool extra_check = true;
  std::chrono::duration<double> timeout{3600.0};
  std::size_t state_cap = 1000000;
  std::optional<int> max_combined_size;
};

struct SynthesisStats {
  std::uint64_t generated = 0;
  std::uint64_t pruned = 0;
  std::uint64_t model_checked = 0;
  /// Combined size of the solution when solved, otherwise the largest
  /// combined size reached.
  std::optional<int> k_prime;
  bool k_prime_is_solution = false;
  std::chrono::duration<double> total_time{0};
  std::chrono::duration<double> check_time{0};
  std::uint64_t constraints = 0;
  std::uint64_t extra_check_failures = 0;
  /// Distinct verifier calls that returned a previously seen counterexample
  /// (tracked by fingerprint; expected to stay zero).
  std::uint64_t duplicate_counterexamples = 0;

  std::string k_prime_str() const;
};

enum class SynthesisOutcome { Solved, Exhausted, TimedOut, Unrealizable };

struct SynthesisResult {
  SynthesisOutcome outcome;
  std::optional<Completion> completion;  // Solved
  std::optional<Protocol> protocol;      // Solved
  std::optional<Counterexample> unrealizable_run;
  SynthesisStats stats;
};

struct ExtraCheckFailure {
  Counterexample cex;
  std::size_t instance_index;
};

/// Verify a solved protocol against each extra instance in order; the first
/// failure is returned.
std::optional<ExtraCheckFailure> extra_check(const Protocol& p,
                                             const SynthesisConfig& cfg);

/// The synthesis loop: enumerate candidates in nondecreasing combined size,
/// filter through the pruning constraints, verify survivors, and turn every
/// counterexample into a new constraint. Returns the first completion whose
/// protocol passes the primary instance and every extra instance.
SynthesisResult synthesize(const Sketch& sk, const SynthesisConfig& cfg);

/// Machine-readable key=value lines followed by a short human table.
std::string report_stats(const SynthesisStats& stats);

const char* outcome_name(SynthesisOutcome o);

}  // namespace protoforge
