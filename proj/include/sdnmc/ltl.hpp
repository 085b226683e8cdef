#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sdnmc/atoms.hpp"
#include "sdnmc/formula_lexer.hpp"

namespace sdnmc {

enum class LtlOp { True, False, Atom, Not, And, Or, Implies, Next, Finally, Globally, Until, Release };

struct LtlNode;

/// Immutable LTL syntax tree. Copies share nodes; equality is structural.
class LtlFormula {
 public:
  static LtlFormula truth();
  static LtlFormula falsity();
  static LtlFormula atom(AtomExpr a);
  static LtlFormula negation(LtlFormula f);
  static LtlFormula conj(LtlFormula a, LtlFormula b);
  static LtlFormula disj(LtlFormula a, LtlFormula b);
  static LtlFormula implies(LtlFormula a, LtlFormula b);
  static LtlFormula next(LtlFormula f);
  static LtlFormula finally(LtlFormula f);
  static LtlFormula globally(LtlFormula f);
  static LtlFormula until(LtlFormula a, LtlFormula b);
  static LtlFormula release(LtlFormula a, LtlFormula b);

  LtlOp op() const;
  const AtomExpr& atom() const;
  const LtlFormula& arg(std::size_t i) const;
  std::size_t arity() const;
  /// Node identity, usable as a memoization key.
  const void* id() const noexcept { return node_.get(); }

  friend bool operator==(const LtlFormula& a, const LtlFormula& b);

 private:
  explicit LtlFormula(std::shared_ptr<const LtlNode> n) : node_(std::move(n)) {}
  static LtlFormula make(LtlOp op, std::vector<LtlFormula> args, AtomExpr atom = NamedAtom{});

  std::shared_ptr<const LtlNode> node_;
};

struct LtlNode {
  LtlOp op;
  AtomExpr atom;
  std::vector<LtlFormula> args;
};

inline LtlFormula LtlFormula::make(LtlOp op, std::vector<LtlFormula> args, AtomExpr atom) {
  return LtlFormula(std::make_shared<const LtlNode>(LtlNode{op, std::move(atom), std::move(args)}));
}

inline LtlFormula LtlFormula::truth() { return make(LtlOp::True, {}); }
inline LtlFormula LtlFormula::falsity() { return make(LtlOp::False, {}); }
inline LtlFormula LtlFormula::atom(AtomExpr a) { return make(LtlOp::Atom, {}, std::move(a)); }
inline LtlFormula LtlFormula::negation(LtlFormula f) { return make(LtlOp::Not, {std::move(f)}); }
inline LtlFormula LtlFormula::conj(LtlFormula a, LtlFormula b) { return make(LtlOp::And, {std::move(a), std::move(b)}); }
inline LtlFormula LtlFormula::disj(LtlFormula a, LtlFormula b) { return make(LtlOp::Or, {std::move(a), std::move(b)}); }
inline LtlFormula LtlFormula::implies(LtlFormula a, LtlFormula b) {
  return make(LtlOp::Implies, {std::move(a), std::move(b)});
}
inline LtlFormula LtlFormula::next(LtlFormula f) { return make(LtlOp::Next, {std::move(f)}); }
inline LtlFormula LtlFormula::finally(LtlFormula f) { return make(LtlOp::Finally, {std::move(f)}); }
inline LtlFormula LtlFormula::globally(LtlFormula f) { return make(LtlOp::Globally, {std::move(f)}); }
inline LtlFormula LtlFormula::until(LtlFormula a, LtlFormula b) {
  return make(LtlOp::Until, {std::move(a), std::move(b)});
}
inline LtlFormula LtlFormula::release(LtlFormula a, LtlFormula b) {
  return make(LtlOp::Release, {std::move(a), std::move(b)});
}

inline LtlOp LtlFormula::op() const { return node_->op; }
inline const AtomExpr& LtlFormula::atom() const { return node_->atom; }
inline const LtlFormula& LtlFormula::arg(std::size_t i) const { return node_->args.at(i); }
inline std::size_t LtlFormula::arity() const { return node_->args.size(); }

inline bool operator==(const LtlFormula& a, const LtlFormula& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op() || a.arity() != b.arity()) return false;
  if (a.op() == LtlOp::Atom && !(a.atom() == b.atom())) return false;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!(a.arg(i) == b.arg(i))) return false;
  }
  return true;
}

/// Fully parenthesised rendering that parse_ltl reads back to an equal tree.
inline std::string to_string(const LtlFormula& f) {
  auto bin = [&](const char* sym) { return "(" + to_string(f.arg(0)) + " " + sym + " " + to_string(f.arg(1)) + ")"; };
  switch (f.op()) {
    case LtlOp::True: return "true";
    case LtlOp::False: return "false";
    case LtlOp::Atom: return to_string(f.atom());
    case LtlOp::Not: return "!" + to_string(f.arg(0));
    case LtlOp::And: return bin("&");
    case LtlOp::Or: return bin("|");
    case LtlOp::Implies: return bin("->");
    case LtlOp::Next: return "X " + to_string(f.arg(0));
    case LtlOp::Finally: return "F " + to_string(f.arg(0));
    case LtlOp::Globally: return "G " + to_string(f.arg(0));
    case LtlOp::Until: return bin("U");
    case LtlOp::Release: return bin("R");
  }
  return "?";
}

namespace detail {

inline bool is_ltl_keyword(std::string_view w) {
  return w == "X" || w == "F" || w == "G" || w == "U" || w == "R" || w == "true" || w == "false";
}

// Precedence, loosest first: ->  |  &  U/R  unary.
class LtlParser {
 public:
  explicit LtlParser(std::string_view text) : ts_(text) {}

  LtlFormula parse() {
    LtlFormula f = implication();
    if (!ts_.at(Tok::End)) ts_.fail("operator or end of input");
    return f;
  }

 private:
  LtlFormula implication() {
    LtlFormula lhs = disjunction();
    if (ts_.accept(Tok::Implies)) return LtlFormula::implies(lhs, implication());
    return lhs;
  }
  LtlFormula disjunction() {
    LtlFormula lhs = conjunction();
    while (ts_.accept(Tok::Or)) lhs = LtlFormula::disj(lhs, conjunction());
    return lhs;
  }
  LtlFormula conjunction() {
    LtlFormula lhs = binary_temporal();
    while (ts_.accept(Tok::And)) lhs = LtlFormula::conj(lhs, binary_temporal());
    return lhs;
  }
  LtlFormula binary_temporal() {
    LtlFormula lhs = unary();
    if (ts_.at_ident("U")) {
      ts_.next();
      return LtlFormula::until(lhs, binary_temporal());
    }
    if (ts_.at_ident("R")) {
      ts_.next();
      return LtlFormula::release(lhs, binary_temporal());
    }
    return lhs;
  }
  LtlFormula unary() {
    if (ts_.accept(Tok::Not)) return LtlFormula::negation(unary());
    if (ts_.at_ident("X")) return ts_.next(), LtlFormula::next(unary());
    if (ts_.at_ident("F")) return ts_.next(), LtlFormula::finally(unary());
    if (ts_.at_ident("G")) return ts_.next(), LtlFormula::globally(unary());
    return primary();
  }
  LtlFormula primary() {
    const Token& t = ts_.peek();
    switch (t.kind) {
      case Tok::LParen: {
        ts_.next();
        LtlFormula f = implication();
        ts_.expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::StateEq: return LtlFormula::atom(state_atom(ts_.next()));
      case Tok::StateNe: return LtlFormula::negation(LtlFormula::atom(state_atom(ts_.next())));
      case Tok::Ident:
        if (t.text == "true") return ts_.next(), LtlFormula::truth();
        if (t.text == "false") return ts_.next(), LtlFormula::falsity();
        if (!is_ltl_keyword(t.text)) return LtlFormula::atom(NamedAtom{ts_.next().text});
        break;
      default: break;
    }
    ts_.fail("formula");
  }

  TokenStream ts_;
};

}  // namespace detail

/// Parses ASCII LTL: `! & | -> X F G U R`, `true`, `false`, atoms and
/// `state=BITS` literals. U and R associate to the right.
inline LtlFormula parse_ltl(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw Error(ErrorCode::SyntaxError, "at position 0: expected formula, found end of input");
  }
  return detail::LtlParser(text).parse();
}

/// Negation normal form: negations only directly above atoms, no implications,
/// constants folded under negation.
inline LtlFormula nnf(const LtlFormula& f, bool negate = false) {
  using F = LtlFormula;
  switch (f.op()) {
    case LtlOp::True: return negate ? F::falsity() : F::truth();
    case LtlOp::False: return negate ? F::truth() : F::falsity();
    case LtlOp::Atom: return negate ? F::negation(f) : f;
    case LtlOp::Not: return nnf(f.arg(0), !negate);
    case LtlOp::And:
      return negate ? F::disj(nnf(f.arg(0), true), nnf(f.arg(1), true))
                    : F::conj(nnf(f.arg(0), false), nnf(f.arg(1), false));
    case LtlOp::Or:
      return negate ? F::conj(nnf(f.arg(0), true), nnf(f.arg(1), true))
                    : F::disj(nnf(f.arg(0), false), nnf(f.arg(1), false));
    case LtlOp::Implies:
      return negate ? F::conj(nnf(f.arg(0), false), nnf(f.arg(1), true))
                    : F::disj(nnf(f.arg(0), true), nnf(f.arg(1), false));
    case LtlOp::Next: return F::next(nnf(f.arg(0), negate));
    case LtlOp::Finally: return negate ? F::globally(nnf(f.arg(0), true)) : F::finally(nnf(f.arg(0), false));
    case LtlOp::Globally: return negate ? F::finally(nnf(f.arg(0), true)) : F::globally(nnf(f.arg(0), false));
    case LtlOp::Until:
      return negate ? F::release(nnf(f.arg(0), true), nnf(f.arg(1), true))
                    : F::until(nnf(f.arg(0), false), nnf(f.arg(1), false));
    case LtlOp::Release:
      return negate ? F::until(nnf(f.arg(0), true), nnf(f.arg(1), true))
                    : F::release(nnf(f.arg(0), false), nnf(f.arg(1), false));
  }
  return f;
}

inline bool is_nnf(const LtlFormula& f) {
  switch (f.op()) {
    case LtlOp::Implies: return false;
    case LtlOp::Not: return f.arg(0).op() == LtlOp::Atom;
    default: break;
  }
  for (std::size_t i = 0; i < f.arity(); ++i) {
    if (!is_nnf(f.arg(i))) return false;
  }
  return true;
}

}  // namespace sdnmc
