#include "protoforge/types.hpp"

namespace protoforge {

bool Type::operator==(const Type& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case TypeKind::Bool:
    case TypeKind::Int:
      return true;
    case TypeKind::Domain:
      return domain_ == other.domain_;
    case TypeKind::Set:
      return *a_ == *other.a_;
    case TypeKind::Func:
      return *a_ == *other.a_ && *b_ == *other.b_;
  }
  return false;
}

std::string Type::str() const {
  switch (kind_) {
    case TypeKind::Bool:
      return "Bool";
    case TypeKind::Int:
      return "Int";
    case TypeKind::Domain:
      return domain_;
    case TypeKind::Set:
      return "Set[" + a_->str() + "]";
    case TypeKind::Func:
      return "Func[" + a_->str() + ", " + b_->str() + "]";
  }
  return "?";
}

}  // namespace protoforge
