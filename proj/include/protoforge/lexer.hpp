#pragma once

#include <string>
#include <vector>

#include "protoforge/diagnostics.hpp"

namespace protoforge {

enum class Tok {
  End,
  Ident,
  Int,
  // punctuation and operators
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Colon,
  ColonEq,
  ColonColonEq,
  Pipe,
  Question,
  And,      // conjunction
  Or,       // disjunction
  Tilde,    // negation
  LeadsTo,  // ~>
  Implies,  // =>
  Eq,
  Neq,  // #
  Lt,
  Le,
  Plus,
  Minus,
  DotDot,  // ..
  At,      // @
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier text
  std::int64_t int_value = 0;
  SourceLoc loc;
};

/// Tokenizer for the sketch DSL, configuration files and expressions.
/// Comments run from `--` to end of line.
class Lexer {
 public:
  explicit Lexer(const std::string& src);

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool at_end() const { return peek().kind == Tok::End; }

  /// All tokens of one source line (used by line-oriented config parsing).
  static std::vector<Token> tokenize(const std::string& src);

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string tok_name(Tok t);

}  // namespace protoforge
