#include "protoforge/value.hpp"

#include <algorithm>
#include <cassert>

#include "protoforge/diagnostics.hpp"

namespace protoforge {

Value Value::boolean(bool b) {
  Value v;
  v.kind_ = Kind::Bool;
  v.bool_ = b;
  return v;
}

Value Value::integer(std::int64_t n) {
  Value v;
  v.kind_ = Kind::Int;
  v.int_ = n;
  return v;
}

Value Value::element(std::string domain, std::string id) {
  Value v;
  v.kind_ = Kind::Domain;
  v.name_ = std::move(domain);
  v.id_ = std::move(id);
  return v;
}

Value Value::make_set(std::vector<Value> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  Value v;
  v.kind_ = Kind::Set;
  v.elems_ = std::move(elems);
  return v;
}

Value Value::make_func(std::vector<std::pair<Value, Value>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Value v;
  v.kind_ = Kind::Func;
  v.entries_ = std::move(entries);
  return v;
}

bool Value::as_bool() const {
  if (kind_ != Kind::Bool) throw EvalError("value is not a boolean: " + str());
  return bool_;
}

std::int64_t Value::as_int() const {
  if (kind_ != Kind::Int) throw EvalError("value is not an integer: " + str());
  return int_;
}

const std::vector<Value>& Value::set_elems() const {
  if (kind_ != Kind::Set) throw EvalError("value is not a set: " + str());
  return elems_;
}

const std::vector<std::pair<Value, Value>>& Value::func_entries() const {
  if (kind_ != Kind::Func)
    throw EvalError("value is not a function: " + str());
  return entries_;
}

bool Value::set_contains(const Value& v) const {
  const auto& es = set_elems();
  return std::binary_search(es.begin(), es.end(), v);
}

std::optional<Value> Value::func_at(const Value& key) const {
  for (const auto& [k, v] : func_entries())
    if (k == key) return v;
  return std::nullopt;
}

int Value::compare(const Value& other) const {
  if (kind_ != other.kind_)
    return static_cast<int>(kind_) < static_cast<int>(other.kind_) ? -1 : 1;
  switch (kind_) {
    case Kind::Bool:
      return bool_ == other.bool_ ? 0 : (bool_ ? 1 : -1);
    case Kind::Int:
      return int_ == other.int_ ? 0 : (int_ < other.int_ ? -1 : 1);
    case Kind::Domain: {
      int c = name_.compare(other.name_);
      if (c != 0) return c < 0 ? -1 : 1;
      c = id_.compare(other.id_);
      return c == 0 ? 0 : (c < 0 ? -1 : 1);
    }
    case Kind::Set: {
      std::size_t n = std::min(elems_.size(), other.elems_.size());
      for (std::size_t i = 0; i < n; ++i) {
        int c = elems_[i].compare(other.elems_[i]);
        if (c != 0) return c;
      }
      if (elems_.size() != other.elems_.size())
        return elems_.size() < other.elems_.size() ? -1 : 1;
      return 0;
    }
    case Kind::Func: {
      std::size_t n = std::min(entries_.size(), other.entries_.size());
      for (std::size_t i = 0; i < n; ++i) {
        int c = entries_[i].first.compare(other.entries_[i].first);
        if (c != 0) return c;
        c = entries_[i].second.compare(other.entries_[i].second);
        if (c != 0) return c;
      }
      if (entries_.size() != other.entries_.size())
        return entries_.size() < other.entries_.size() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

std::string Value::str() const {
  switch (kind_) {
    case Kind::Bool:
      return bool_ ? "true" : "false";
    case Kind::Int:
      return std::to_string(int_);
    case Kind::Domain:
      return id_;
    case Kind::Set: {
      std::string s = "{";
      for (std::size_t i = 0; i < elems_.size(); ++i) {
        if (i) s += ", ";
        s += elems_[i].str();
      }
      return s + "}";
    }
    case Kind::Func: {
      std::string s = "[";
      for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) s += ", ";
        s += entries_[i].first.str() + " |-> " + entries_[i].second.str();
      }
      return s + "]";
    }
  }
  return "?";
}

Value InstanceBinding::param_value(const std::string& name) const {
  auto d = domains.find(name);
  if (d != domains.end()) {
    std::vector<Value> elems;
    elems.reserve(d->second.size());
    for (const auto& id : d->second) elems.push_back(Value::element(name, id));
    return Value::make_set(std::move(elems));
  }
  auto c = consts.find(name);
  if (c != consts.end()) return c->second;
  throw EvalError("unbound parameter: " + name);
}

std::string InstanceBinding::str() const {
  std::string s;
  for (const auto& [name, ids] : domains) {
    s += name + "={";
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) s += ",";
      s += ids[i];
    }
    s += "} ";
  }
  for (const auto& [name, v] : consts) s += name + "=" + v.str() + " ";
  if (!s.empty()) s.pop_back();
  return s;
}

const Value& State::at(const std::string& name) const {
  auto it = vars.find(name);
  if (it == vars.end()) throw EvalError("unbound state variable: " + name);
  return it->second;
}

int State::compare(const State& other) const {
  auto a = vars.begin();
  auto b = other.vars.begin();
  for (; a != vars.end() && b != other.vars.end(); ++a, ++b) {
    int c = a->first.compare(b->first);
    if (c != 0) return c < 0 ? -1 : 1;
    c = a->second.compare(b->second);
    if (c != 0) return c;
  }
  if (a != vars.end()) return 1;
  if (b != other.vars.end()) return -1;
  return 0;
}

std::string State::str() const {
  std::string s;
  for (const auto& [name, v] : vars) {
    if (!s.empty()) s += " ";
    s += name + "=" + v.str();
  }
  return s;
}

bool type_check(const Value& v, const Type& t, const InstanceBinding& inst) {
  switch (t.kind()) {
    case TypeKind::Bool:
      return v.kind() == Value::Kind::Bool;
    case TypeKind::Int:
      return v.kind() == Value::Kind::Int;
    case TypeKind::Domain: {
      if (v.kind() != Value::Kind::Domain) return false;
      if (v.domain() != t.domain_name()) return false;
      auto d = inst.domains.find(t.domain_name());
      if (d == inst.domains.end()) return false;
      return std::find(d->second.begin(), d->second.end(), v.element_id()) !=
             d->second.end();
    }
    case TypeKind::Set: {
      if (v.kind() != Value::Kind::Set) return false;
      for (const auto& e : v.set_elems())
        if (!type_check(e, t.elem(), inst)) return false;
      return true;
    }
    case TypeKind::Func: {
      if (v.kind() != Value::Kind::Func) return false;
      // Totality over the key universe, plus well-typed values.
      std::vector<Value> keys;
      try {
        keys = universe(t.key(), inst, inst.int_bounds);
      } catch (const UnboundedTypeError&) {
        return false;
      }
      const auto& entries = v.func_entries();
      if (entries.size() != keys.size()) return false;
      for (const auto& [k, val] : entries) {
        if (!type_check(k, t.key(), inst)) return false;
        if (!type_check(val, t.value(), inst)) return false;
      }
      for (const auto& k : keys)
        if (!v.func_at(k)) return false;
      return true;
    }
  }
  return false;
}

std::vector<Value> universe(
    const Type& t, const InstanceBinding& inst,
    std::optional<std::pair<std::int64_t, std::int64_t>> int_bounds) {
  switch (t.kind()) {
    case TypeKind::Bool:
      return {Value::boolean(false), Value::boolean(true)};
    case TypeKind::Int: {
      auto bounds = int_bounds ? int_bounds : inst.int_bounds;
      if (!bounds)
        throw UnboundedTypeError("universe of Int requires explicit bounds");
      std::vector<Value> vs;
      for (std::int64_t n = bounds->first; n <= bounds->second; ++n)
        vs.push_back(Value::integer(n));
      return vs;
    }
    case TypeKind::Domain: {
      auto d = inst.domains.find(t.domain_name());
      if (d == inst.domains.end())
        throw EvalError("unbound domain: " + t.domain_name());
      std::vector<Value> vs;
      for (const auto& id : d->second)
        vs.push_back(Value::element(t.domain_name(), id));
      return vs;
    }
    case TypeKind::Set: {
      auto elems = universe(t.elem(), inst, int_bounds);
      if (elems.size() > 24)
        throw StateSpaceLimitError(std::size_t(1) << 24);
      std::vector<Value> vs;
      std::uint64_t count = std::uint64_t(1) << elems.size();
      vs.reserve(count);
      for (std::uint64_t mask = 0; mask < count; ++mask) {
        std::vector<Value> members;
        for (std::size_t i = 0; i < elems.size(); ++i)
          if (mask & (std::uint64_t(1) << i)) members.push_back(elems[i]);
        vs.push_back(Value::make_set(std::move(members)));
      }
      return vs;
    }
    case TypeKind::Func: {
      auto keys = universe(t.key(), inst, int_bounds);
      auto vals = universe(t.value(), inst, int_bounds);
      std::vector<Value> vs;
      if (keys.empty()) {
        vs.push_back(Value::make_func({}));
        return vs;
      }
      // Odometer over value indices; first key varies fastest.
      std::vector<std::size_t> idx(keys.size(), 0);
      while (true) {
        std::vector<std::pair<Value, Value>> entries;
        entries.reserve(keys.size());
        for (std::size_t i = 0; i < keys.size(); ++i)
          entries.emplace_back(keys[i], vals[idx[i]]);
        vs.push_back(Value::make_func(std::move(entries)));
        std::size_t i = 0;
        for (; i < idx.size(); ++i) {
          if (++idx[i] < vals.size()) break;
          idx[i] = 0;
        }
        if (i == idx.size()) break;
      }
      return vs;
    }
  }
  return {};
}

std::uint64_t universe_size(
    const Type& t, const InstanceBinding& inst,
    std::optional<std::pair<std::int64_t, std::int64_t>> int_bounds) {
  switch (t.kind()) {
    case TypeKind::Bool:
      return 2;
    case TypeKind::Int: {
      auto bounds = int_bounds ? int_bounds : inst.int_bounds;
      if (!bounds)
        throw UnboundedTypeError("universe of Int requires explicit bounds");
      return static_cast<std::uint64_t>(bounds->second - bounds->first + 1);
    }
    case TypeKind::Domain: {
      auto d = inst.domains.find(t.domain_name());
      if (d == inst.domains.end())
        throw EvalError("unbound domain: " + t.domain_name());
      return d->second.size();
    }
    case TypeKind::Set: {
      std::uint64_t n = universe_size(t.elem(), inst, int_bounds);
      if (n >= 63) throw StateSpaceLimitError(std::size_t(1) << 24);
      return std::uint64_t(1) << n;
    }
    case TypeKind::Func: {
      std::uint64_t k = universe_size(t.key(), inst, int_bounds);
      std::uint64_t v = universe_size(t.value(), inst, int_bounds);
      std::uint64_t out = 1;
      for (std::uint64_t i = 0; i < k; ++i) {
        if (out > (std::uint64_t(1) << 40))
          throw StateSpaceLimitError(std::size_t(1) << 40);
        out *= v;
      }
      return out;
    }
  }
  return 0;
}

}  // namespace protoforge
