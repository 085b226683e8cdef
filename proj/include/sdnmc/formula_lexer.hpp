#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "sdnmc/atoms.hpp"
#include "sdnmc/error.hpp"

namespace sdnmc::detail {

enum class Tok { Ident, StateEq, StateNe, LParen, RParen, LBracket, RBracket, Not, And, Or, Implies, End };

struct Token {
  Tok kind;
  std::string text;  // identifier name or bit string
  std::size_t pos;
};

inline std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Ident: return "'" + t.text + "'";
    case Tok::StateEq: return "'state=" + t.text + "'";
    case Tok::StateNe: return "'state!=" + t.text + "'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Not: return "'!'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Implies: return "'->'";
    case Tok::End: return "end of input";
  }
  return "?";
}

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto unknown = [&](std::size_t at) {
    return Error(ErrorCode::UnknownToken,
                 "unexpected character '" + std::string(1, text[at]) + "' at position " + std::to_string(at));
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    switch (c) {
      case '(': out.push_back({Tok::LParen, "", start}); ++i; continue;
      case ')': out.push_back({Tok::RParen, "", start}); ++i; continue;
      case '[': out.push_back({Tok::LBracket, "", start}); ++i; continue;
      case ']': out.push_back({Tok::RBracket, "", start}); ++i; continue;
      case '!': out.push_back({Tok::Not, "", start}); ++i; continue;
      case '&': out.push_back({Tok::And, "", start}); ++i; continue;
      case '|': out.push_back({Tok::Or, "", start}); ++i; continue;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          out.push_back({Tok::Implies, "", start});
          i += 2;
          continue;
        }
        throw unknown(i);
      default: break;
    }
    if (!is_ident_start(c)) throw unknown(i);
    while (i < text.size() && is_ident_char(text[i])) ++i;
    std::string word(text.substr(start, i - start));
    if (word == "state") {
      std::size_t j = i;
      while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      Tok kind = Tok::Ident;
      if (j < text.size() && text[j] == '=') {
        kind = Tok::StateEq;
        j += 1;
      } else if (j + 1 < text.size() && text[j] == '!' && text[j + 1] == '=') {
        kind = Tok::StateNe;
        j += 2;
      }
      if (kind != Tok::Ident) {
        while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        std::size_t b = j;
        while (j < text.size() && (text[j] == '0' || text[j] == '1')) ++j;
        if (b == j) {
          throw Error(ErrorCode::SyntaxError, "at position " + std::to_string(b) + ": expected bit string after 'state='");
        }
        out.push_back({kind, std::string(text.substr(b, j - b)), start});
        i = j;
        continue;
      }
    }
    out.push_back({Tok::Ident, std::move(word), start});
  }
  out.push_back({Tok::End, "", text.size()});
  return out;
}

/// Shared cursor for the recursive-descent parsers.
class TokenStream {
 public:
  explicit TokenStream(std::string_view text) : toks_(tokenize(text)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[k];
  }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(std::string_view word) const { return peek().kind == Tok::Ident && peek().text == word; }

  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }

  void expect(Tok k, std::string_view what) {
    if (!at(k)) fail(what);
    next();
  }

  [[noreturn]] void fail(std::string_view expected) const {
    throw Error(ErrorCode::SyntaxError, "at position " + std::to_string(peek().pos) + ": expected " +
                                            std::string(expected) + ", found " + describe(peek()));
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

inline AtomExpr state_atom(const Token& t) { return StateLiteral{StateVector::parse(t.text)}; }

}  // namespace sdnmc::detail
