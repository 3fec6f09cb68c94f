#include "protoforge/lexer.hpp"

#include <cctype>

namespace protoforge {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::vector<Token> Lexer::tokenize(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto loc = [&]() { return SourceLoc{line, col}; };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  auto push = [&](Tok k, std::size_t len) {
    Token t;
    t.kind = k;
    t.loc = loc();
    out.push_back(t);
    advance(len);
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (ident_start(c)) {
      Token t;
      t.kind = Tok::Ident;
      t.loc = loc();
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.text = src.substr(i, j - i);
      advance(j - i);
      out.push_back(t);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Token t;
      t.kind = Tok::Int;
      t.loc = loc();
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      t.int_value = std::stoll(src.substr(i, j - i));
      advance(j - i);
      out.push_back(t);
      continue;
    }
    auto two = i + 1 < src.size() ? src.substr(i, 2) : "";
    auto three = i + 2 < src.size() ? src.substr(i, 3) : "";
    if (three == "::=") {
      push(Tok::ColonColonEq, 3);
      continue;
    }
    if (two == "/\\") {
      push(Tok::And, 2);
      continue;
    }
    if (two == "\\/") {
      push(Tok::Or, 2);
      continue;
    }
    if (two == "~>") {
      push(Tok::LeadsTo, 2);
      continue;
    }
    if (two == "=>") {
      push(Tok::Implies, 2);
      continue;
    }
    if (two == "<=") {
      push(Tok::Le, 2);
      continue;
    }
    if (two == ":=") {
      push(Tok::ColonEq, 2);
      continue;
    }
    if (two == "..") {
      push(Tok::DotDot, 2);
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case '{': push(Tok::LBrace, 1); continue;
      case '}': push(Tok::RBrace, 1); continue;
      case '[': push(Tok::LBracket, 1); continue;
      case ']': push(Tok::RBracket, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      case ':': push(Tok::Colon, 1); continue;
      case '|': push(Tok::Pipe, 1); continue;
      case '?': push(Tok::Question, 1); continue;
      case '~': push(Tok::Tilde, 1); continue;
      case '=': push(Tok::Eq, 1); continue;
      case '#': push(Tok::Neq, 1); continue;
      case '<': push(Tok::Lt, 1); continue;
      case '+': push(Tok::Plus, 1); continue;
      case '-': push(Tok::Minus, 1); continue;
      case '@': push(Tok::At, 1); continue;
      default:
        throw ParseError(loc(), std::string("unexpected character '") + c +
                                    "'");
    }
  }
  Token end;
  end.kind = Tok::End;
  end.loc = loc();
  out.push_back(end);
  return out;
}

Lexer::Lexer(const std::string& src) : tokens_(tokenize(src)) {}

const Token& Lexer::peek(std::size_t ahead) const {
  std::size_t idx = std::min(pos_ + ahead, tokens_.size() - 1);
  return tokens_[idx];
}

Token Lexer::next() {
  Token t = tokens_[std::min(pos_, tokens_.size() - 1)];
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

std::string tok_name(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::ColonEq: return "':='";
    case Tok::ColonColonEq: return "'::='";
    case Tok::Pipe: return "'|'";
    case Tok::Question: return "'?'";
    case Tok::And: return "'/\\'";
    case Tok::Or: return "'\\/'";
    case Tok::Tilde: return "'~'";
    case Tok::LeadsTo: return "'~>'";
    case Tok::Implies: return "'=>'";
    case Tok::Eq: return "'='";
    case Tok::Neq: return "'#'";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::DotDot: return "'..'";
    case Tok::At: return "'@'";
  }
  return "?";
}

}  // namespace protoforge
