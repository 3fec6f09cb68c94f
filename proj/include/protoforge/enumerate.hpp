#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "protoforge/grammar.hpp"
#include "protoforge/normal_form.hpp"
#include "protoforge/sketch.hpp"

namespace protoforge {

struct EnumStats {
  std::uint64_t built = 0;    // expressions composed
  std::uint64_t emitted = 0;  // expressions released to the stream
  std::uint64_t skipped_reduce = 0;
  /// Pair compositions attempted on commutative productions (after any
  /// short-circuit skips); the short-circuiting speedup is measured on this.
  std::uint64_t pairs_commutative = 0;
};

/// Source of expressions bucketed by exact size; implemented by both the
/// cache-based and the naive enumerator so the joint stream can drive
/// either.
class SizedExprSource {
 public:
  virtual ~SizedExprSource() = default;
  /// All expressions of exactly size n, filling lazily.
  virtual const std::vector<ExprPtr>& exprs_of_size(int n) = 0;
  /// True once it is known that no size beyond the largest filled one can
  /// produce an expression.
  virtual bool exhausted() const = 0;
  virtual int max_nonempty_size() const = 0;
};

/// Size-indexed cache enumeration: all expressions of size n are generated
/// before any of size n+1, built by composing cached sub-expressions into
/// productions. With `reduce`, expressions whose normal form is already
/// represented for their nonterminal are neither emitted nor cached. With
/// `shortcircuit`, commutative productions only compose ordered pairs
/// (by size, then canonical serialization) and idempotent operators skip
/// identical operands.
class CachedEnumerator : public SizedExprSource {
 public:
  CachedEnumerator(Grammar g, bool reduce, bool shortcircuit);

  std::optional<ExprPtr> next();

  const std::vector<ExprPtr>& exprs_of_size(int n) override;
  bool exhausted() const override { return exhausted_; }
  int max_nonempty_size() const override { return max_nonempty_; }

  int filled_size() const { return filled_; }
  const EnumStats& stats() const { return stats_; }
  /// Normal forms of cached start-nonterminal expressions per size
  /// (meaningful with reduce on; used by differential tests).
  std::vector<std::set<std::string>> start_class_keys() const;

 private:
  struct Entry {
    ExprPtr expr;
    std::string ser;  // canonical serialization, for short-circuit order
  };
  void fill_next_size();
  void consider(const std::string& nt, const ExprPtr& e, int n,
                bool& added_any);
  int max_composition_size() const;

  Grammar g_;
  bool reduce_;
  bool shortcircuit_;
  int filled_ = 0;
  int max_nonempty_ = 0;
  bool exhausted_ = false;
  EnumStats stats_;
  // cache[nt][size] -> entries; sizes indexed from 1
  std::map<std::string, std::vector<std::vector<Entry>>> cache_;
  std::map<std::string, std::set<std::string>> seen_;
  std::vector<ExprPtr> emit_buffer_;
  std::size_t emit_pos_ = 0;
  std::vector<std::vector<ExprPtr>> by_size_;  // start NT, emitted
};

/// Naive breadth-first enumeration: a priority queue of partial expressions
/// ordered by size; discharging a partial expression substitutes every
/// combination of productions into all of its nonterminals at once.
/// Duplicates are possible.
class NaiveEnumerator : public SizedExprSource {
 public:
  explicit NaiveEnumerator(Grammar g);

  std::optional<ExprPtr> next();

  const std::vector<ExprPtr>& exprs_of_size(int n) override;
  bool exhausted() const override;
  int max_nonempty_size() const override { return max_nonempty_; }

  const EnumStats& stats() const { return stats_; }

  /// All single-step expansions of a partial expression.
  static std::vector<ExprPtr> expand(const Grammar& g, const ExprPtr& partial);

 private:
  struct QueueEntry {
    int size;
    std::uint64_t seq;
    ExprPtr expr;
    bool operator>(const QueueEntry& o) const {
      return size != o.size ? size > o.size : seq > o.seq;
    }
  };
  std::optional<ExprPtr> pump();

  Grammar g_;
  std::vector<QueueEntry> heap_;
  std::uint64_t seq_ = 0;
  EnumStats stats_;
  std::optional<ExprPtr> lookahead_;
  std::vector<std::vector<ExprPtr>> by_size_;
  int max_nonempty_ = 0;
};

/// One candidate completion with its combined size.
struct JointCandidate {
  Completion completion;
  int combined_size = 0;
  std::vector<int> sizes;
};

/// Cross-product stream over one enumerator per hole, in nondecreasing
/// combined size; within a fixed combined size, size compositions iterate
/// lexicographically and expressions in cache order. Deterministic.
class JointEnumerator {
 public:
  JointEnumerator(std::vector<std::string> hole_names,
                  std::vector<std::unique_ptr<SizedExprSource>> sources,
                  std::optional<int> max_combined_size = std::nullopt);

  std::optional<JointCandidate> next();

 private:
  bool next_composition();
  bool all_exhausted_below() const;

  std::vector<std::string> holes_;
  std::vector<std::unique_ptr<SizedExprSource>> sources_;
  std::optional<int> max_combined_;
  int k_ = 0;
  bool comp_valid_ = false;
  std::vector<int> comp_;
  std::vector<std::size_t> tuple_;
  std::vector<const std::vector<ExprPtr>*> lists_;
  int last_emitted_size_ = 0;
};

}  // namespace protoforge
