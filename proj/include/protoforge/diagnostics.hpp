#pragma once

#include <stdexcept>
#include <string>

namespace protoforge {

struct SourceLoc {
  int line = 0;
  int col = 0;
  bool known() const { return line > 0; }
  std::string str() const {
    return known() ? std::to_string(line) + ":" + std::to_string(col) : "?";
  }
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public Error {
 public:
  ParseError(SourceLoc loc, const std::string& msg)
      : Error(loc.str() + ": " + msg), loc_(loc) {}
  SourceLoc loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

class TypecheckError : public Error {
 public:
  TypecheckError(SourceLoc loc, const std::string& msg)
      : Error((loc.known() ? loc.str() + ": " : "") + msg) {}
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Hole placed where it is not allowed: in init, twice, under negation, etc.
class HoleMisuseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

class UnboundedTypeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class StateSpaceLimitError : public Error {
 public:
  explicit StateSpaceLimitError(std::size_t cap)
      : Error("state space limit exceeded (cap " + std::to_string(cap) + ")"),
        cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_ = 0;
};

}  // namespace protoforge
