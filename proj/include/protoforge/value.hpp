#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "protoforge/types.hpp"

namespace protoforge {

/// Runtime values: booleans, integers, opaque domain elements, finite sets and
/// total finite maps. Immutable; structural equality doubles as the equality
/// of the expression language. Sets are stored sorted and duplicate-free, and
/// function entries sorted by key, so structural equality is canonical.
class Value {
 public:
  enum class Kind { Bool, Int, Domain, Set, Func };

  Value() : kind_(Kind::Bool) {}

  static Value boolean(bool b);
  static Value integer(std::int64_t n);
  static Value element(std::string domain, std::string id);
  static Value make_set(std::vector<Value> elems);  // sorts, dedups
  static Value make_func(std::vector<std::pair<Value, Value>> entries);

  Kind kind() const { return kind_; }
  bool is_bool() const { return kind_ == Kind::Bool; }
  bool is_set() const { return kind_ == Kind::Set; }

  bool as_bool() const;
  std::int64_t as_int() const;
  const std::string& domain() const { return name_; }
  const std::string& element_id() const { return id_; }
  const std::vector<Value>& set_elems() const;
  const std::vector<std::pair<Value, Value>>& func_entries() const;

  bool set_contains(const Value& v) const;
  /// Lookup in a Func value; nullopt when the key is not in the map.
  std::optional<Value> func_at(const Value& key) const;

  /// Three-way structural comparison; total order over all values.
  int compare(const Value& other) const;
  bool operator==(const Value& other) const { return compare(other) == 0; }
  bool operator!=(const Value& other) const { return compare(other) != 0; }
  bool operator<(const Value& other) const { return compare(other) < 0; }

  std::string str() const;

 private:
  Kind kind_;
  bool bool_ = false;
  std::int64_t int_ = 0;
  std::string name_;  // domain name
  std::string id_;    // element id
  std::vector<Value> elems_;
  std::vector<std::pair<Value, Value>> entries_;
};

/// Binding of protocol parameters for one instance: domain element lists (in
/// declaration order) plus typed constants. Optionally carries the bounds used
/// to enumerate Int universes.
struct InstanceBinding {
  std::map<std::string, std::vector<std::string>> domains;
  std::map<std::string, Value> consts;
  std::optional<std::pair<std::int64_t, std::int64_t>> int_bounds;

  bool has_domain(const std::string& name) const {
    return domains.count(name) > 0;
  }
  /// Value of a parameter reference: the full element set for domains,
  /// otherwise the bound constant.
  Value param_value(const std::string& name) const;

  std::string str() const;
};

/// Assignment of values to the declared state variables.
struct State {
  std::map<std::string, Value> vars;

  const Value& at(const std::string& name) const;
  int compare(const State& other) const;
  bool operator==(const State& other) const { return compare(other) == 0; }
  bool operator<(const State& other) const { return compare(other) < 0; }
  std::string str() const;
};

/// True iff v inhabits t under the instance binding. Total predicate.
bool type_check(const Value& v, const Type& t, const InstanceBinding& inst);

/// Deterministic, duplicate-free list of all inhabitants of t. Order is
/// fixed: false<true, domain elements in declaration order, integers
/// ascending; sets by subset mask (first element = lowest bit) and functions
/// by value odometer (first key fastest). Throws UnboundedTypeError for Int
/// without bounds.
std::vector<Value> universe(
    const Type& t, const InstanceBinding& inst,
    std::optional<std::pair<std::int64_t, std::int64_t>> int_bounds =
        std::nullopt);

/// Number of inhabitants of t, without materializing them. Same error
/// behavior as universe().
std::uint64_t universe_size(
    const Type& t, const InstanceBinding& inst,
    std::optional<std::pair<std::int64_t, std::int64_t>> int_bounds =
        std::nullopt);

}  // namespace protoforge
