#pragma once

#include <string>

#include "protoforge/expr.hpp"

namespace protoforge {

/// Canonical key for semantic equivalence within the supported theories:
/// boolean combinations (canonical DNF of prime implicants over opaque
/// atoms), set expressions built from union/inter/diff (DNF of the
/// membership indicator over base sets), set equality/subset via the
/// emptiness of difference sets, and integer (in)equalities via canonical
/// affine difference forms. Everything else is an opaque atom keyed by its
/// canonical serialization with normalized children, so distinct
/// serializations never merge.
struct NormalForm {
  std::string key;

  bool operator==(const NormalForm& o) const { return key == o.key; }
  bool operator<(const NormalForm& o) const { return key < o.key; }
};

/// Total on hole-free, placeholder-free, well-typed expressions.
NormalForm normalize(const ExprPtr& e);

}  // namespace protoforge
