#pragma once

#include <memory>
#include <string>

namespace protoforge {

enum class TypeKind { Bool, Int, Domain, Set, Func };

/// Type expressions of the specification language. Values are immutable and
/// cheap to copy. Domain types are opaque parameter sets; Func keys must be
/// finitely enumerable (Bool, Int with bounds, or a domain).
class Type {
 public:
  Type() : kind_(TypeKind::Bool) {}

  static Type boolean() { return Type(TypeKind::Bool); }
  static Type integer() { return Type(TypeKind::Int); }
  static Type domain(std::string name) {
    Type t(TypeKind::Domain);
    t.domain_ = std::move(name);
    return t;
  }
  static Type set(Type elem) {
    Type t(TypeKind::Set);
    t.a_ = std::make_shared<Type>(std::move(elem));
    return t;
  }
  static Type func(Type key, Type value) {
    Type t(TypeKind::Func);
    t.a_ = std::make_shared<Type>(std::move(key));
    t.b_ = std::make_shared<Type>(std::move(value));
    return t;
  }

  TypeKind kind() const { return kind_; }
  bool is_bool() const { return kind_ == TypeKind::Bool; }
  bool is_int() const { return kind_ == TypeKind::Int; }
  bool is_domain() const { return kind_ == TypeKind::Domain; }
  bool is_set() const { return kind_ == TypeKind::Set; }
  bool is_func() const { return kind_ == TypeKind::Func; }

  const std::string& domain_name() const { return domain_; }
  const Type& elem() const { return *a_; }   // Set
  const Type& key() const { return *a_; }    // Func
  const Type& value() const { return *b_; }  // Func

  bool operator==(const Type& other) const;
  bool operator!=(const Type& other) const { return !(*this == other); }

  std::string str() const;

 private:
  explicit Type(TypeKind k) : kind_(k) {}

  TypeKind kind_;
  std::string domain_;
  std::shared_ptr<const Type> a_, b_;
};

}  // namespace protoforge
