#pragma once

#include <deque>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "sdnmc/atoms.hpp"
#include "sdnmc/formula_lexer.hpp"
#include "sdnmc/kripke.hpp"

namespace sdnmc {

enum class CtlOp { True, False, Atom, Not, And, Or, Implies, AX, EX, AG, EG, AF, EF, AU, EU, AW };

struct CtlNode;

/// Immutable CTL syntax tree; every temporal operator carries its path
/// quantifier. AW (weak until) is kept as a node and desugared on checking.
class CtlFormula {
 public:
  static CtlFormula truth() { return make(CtlOp::True, {}); }
  static CtlFormula falsity() { return make(CtlOp::False, {}); }
  static CtlFormula atom(AtomExpr a) { return make(CtlOp::Atom, {}, std::move(a)); }
  static CtlFormula unary(CtlOp op, CtlFormula f) { return make(op, {std::move(f)}); }
  static CtlFormula binary(CtlOp op, CtlFormula a, CtlFormula b) { return make(op, {std::move(a), std::move(b)}); }
  static CtlFormula negation(CtlFormula f) { return unary(CtlOp::Not, std::move(f)); }

  CtlOp op() const;
  const AtomExpr& atom() const;
  const CtlFormula& arg(std::size_t i) const;
  std::size_t arity() const;

  friend bool operator==(const CtlFormula& a, const CtlFormula& b);

 private:
  explicit CtlFormula(std::shared_ptr<const CtlNode> n) : node_(std::move(n)) {}
  static CtlFormula make(CtlOp op, std::vector<CtlFormula> args, AtomExpr atom = NamedAtom{});

  std::shared_ptr<const CtlNode> node_;
};

struct CtlNode {
  CtlOp op;
  AtomExpr atom;
  std::vector<CtlFormula> args;
};

inline CtlFormula CtlFormula::make(CtlOp op, std::vector<CtlFormula> args, AtomExpr atom) {
  return CtlFormula(std::make_shared<const CtlNode>(CtlNode{op, std::move(atom), std::move(args)}));
}
inline CtlOp CtlFormula::op() const { return node_->op; }
inline const AtomExpr& CtlFormula::atom() const { return node_->atom; }
inline const CtlFormula& CtlFormula::arg(std::size_t i) const { return node_->args.at(i); }
inline std::size_t CtlFormula::arity() const { return node_->args.size(); }

inline bool operator==(const CtlFormula& a, const CtlFormula& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op() || a.arity() != b.arity()) return false;
  if (a.op() == CtlOp::Atom && !(a.atom() == b.atom())) return false;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!(a.arg(i) == b.arg(i))) return false;
  }
  return true;
}

inline std::string to_string(const CtlFormula& f) {
  auto bin = [&](const char* sym) { return "(" + to_string(f.arg(0)) + " " + sym + " " + to_string(f.arg(1)) + ")"; };
  auto quantified = [&](const char* q, const char* sym) {
    return std::string(q) + "[" + to_string(f.arg(0)) + " " + sym + " " + to_string(f.arg(1)) + "]";
  };
  auto un = [&](const char* op) { return std::string(op) + " " + to_string(f.arg(0)); };
  switch (f.op()) {
    case CtlOp::True: return "true";
    case CtlOp::False: return "false";
    case CtlOp::Atom: return to_string(f.atom());
    case CtlOp::Not: return "!" + to_string(f.arg(0));
    case CtlOp::And: return bin("&");
    case CtlOp::Or: return bin("|");
    case CtlOp::Implies: return bin("->");
    case CtlOp::AX: return un("AX");
    case CtlOp::EX: return un("EX");
    case CtlOp::AG: return un("AG");
    case CtlOp::EG: return un("EG");
    case CtlOp::AF: return un("AF");
    case CtlOp::EF: return un("EF");
    case CtlOp::AU: return quantified("A", "U");
    case CtlOp::EU: return quantified("E", "U");
    case CtlOp::AW: return quantified("A", "W");
  }
  return "?";
}

namespace detail {

class CtlParser {
 public:
  explicit CtlParser(std::string_view text) : ts_(text) {}

  CtlFormula parse() {
    CtlFormula f = implication();
    if (ts_.at_ident("U") || ts_.at_ident("R")) {
      throw Error(ErrorCode::UnpairedQuantifier, "at position " + std::to_string(ts_.peek().pos) +
                                                     ": binary temporal operator needs A[..] or E[..]");
    }
    if (!ts_.at(Tok::End)) ts_.fail("operator or end of input");
    return f;
  }

 private:
  CtlFormula implication() {
    CtlFormula lhs = disjunction();
    if (ts_.accept(Tok::Implies)) return CtlFormula::binary(CtlOp::Implies, lhs, implication());
    return lhs;
  }
  CtlFormula disjunction() {
    CtlFormula lhs = conjunction();
    while (ts_.accept(Tok::Or)) lhs = CtlFormula::binary(CtlOp::Or, lhs, conjunction());
    return lhs;
  }
  CtlFormula conjunction() {
    CtlFormula lhs = unary();
    while (ts_.accept(Tok::And)) lhs = CtlFormula::binary(CtlOp::And, lhs, unary());
    return lhs;
  }

  CtlFormula unary() {
    if (ts_.accept(Tok::Not)) return CtlFormula::negation(unary());
    const Token& t = ts_.peek();
    if (t.kind == Tok::Ident) {
      static const std::pair<const char*, CtlOp> kUnary[] = {{"AX", CtlOp::AX}, {"EX", CtlOp::EX}, {"AG", CtlOp::AG},
                                                              {"EG", CtlOp::EG}, {"AF", CtlOp::AF}, {"EF", CtlOp::EF}};
      for (const auto& [word, op] : kUnary) {
        if (t.text == word) {
          ts_.next();
          return CtlFormula::unary(op, unary());
        }
      }
      if (t.text == "A" || t.text == "E") return quantified_until();
      if (t.text == "X" || t.text == "F" || t.text == "G" || t.text == "U" || t.text == "R") {
        throw Error(ErrorCode::UnpairedQuantifier, "at position " + std::to_string(t.pos) + ": temporal operator '" +
                                                       t.text + "' needs a path quantifier (A or E)");
      }
    }
    return primary();
  }

  CtlFormula quantified_until() {
    Token q = ts_.next();
    if (!ts_.at(Tok::LBracket)) {
      throw Error(ErrorCode::UnpairedQuantifier, "at position " + std::to_string(q.pos) + ": quantifier '" + q.text +
                                                     "' must be followed by '[' or paired as " + q.text + "X/" +
                                                     q.text + "F/" + q.text + "G");
    }
    ts_.next();
    CtlFormula lhs = implication();
    CtlOp op;
    if (ts_.at_ident("U")) {
      op = q.text == "A" ? CtlOp::AU : CtlOp::EU;
    } else if (ts_.at_ident("W") && q.text == "A") {
      op = CtlOp::AW;
    } else {
      ts_.fail(q.text == "A" ? "'U' or 'W'" : "'U'");
    }
    ts_.next();
    CtlFormula rhs = implication();
    ts_.expect(Tok::RBracket, "']'");
    return CtlFormula::binary(op, lhs, rhs);
  }

  CtlFormula primary() {
    const Token& t = ts_.peek();
    switch (t.kind) {
      case Tok::LParen: {
        ts_.next();
        CtlFormula f = implication();
        ts_.expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::StateEq: return CtlFormula::atom(state_atom(ts_.next()));
      case Tok::StateNe: return CtlFormula::negation(CtlFormula::atom(state_atom(ts_.next())));
      case Tok::Ident:
        if (t.text == "true") return ts_.next(), CtlFormula::truth();
        if (t.text == "false") return ts_.next(), CtlFormula::falsity();
        return CtlFormula::atom(NamedAtom{ts_.next().text});
      default: break;
    }
    ts_.fail("formula");
  }

  TokenStream ts_;
};

}  // namespace detail

/// Parses ASCII CTL: `AX EX AG EG AF EF`, `A[x U y]`, `E[x U y]`, `A[x W y]`
/// plus the propositional connectives shared with LTL.
inline CtlFormula parse_ctl(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw Error(ErrorCode::SyntaxError, "at position 0: expected formula, found end of input");
  }
  return detail::CtlParser(text).parse();
}

/// Rewrites f over the basis {!, &, |, EX, EU, EG}.
inline CtlFormula to_ctl_basis(const CtlFormula& f) {
  using C = CtlFormula;
  auto neg = [](C x) { return C::negation(std::move(x)); };
  auto conj = [](C a, C b) { return C::binary(CtlOp::And, std::move(a), std::move(b)); };
  auto disj = [](C a, C b) { return C::binary(CtlOp::Or, std::move(a), std::move(b)); };
  auto eu = [](C a, C b) { return C::binary(CtlOp::EU, std::move(a), std::move(b)); };
  auto ex = [](C a) { return C::unary(CtlOp::EX, std::move(a)); };
  auto eg = [](C a) { return C::unary(CtlOp::EG, std::move(a)); };

  switch (f.op()) {
    case CtlOp::True:
    case CtlOp::False:
    case CtlOp::Atom: return f;
    case CtlOp::Not: return neg(to_ctl_basis(f.arg(0)));
    case CtlOp::And: return conj(to_ctl_basis(f.arg(0)), to_ctl_basis(f.arg(1)));
    case CtlOp::Or: return disj(to_ctl_basis(f.arg(0)), to_ctl_basis(f.arg(1)));
    case CtlOp::Implies: return disj(neg(to_ctl_basis(f.arg(0))), to_ctl_basis(f.arg(1)));
    case CtlOp::EX: return ex(to_ctl_basis(f.arg(0)));
    case CtlOp::EG: return eg(to_ctl_basis(f.arg(0)));
    case CtlOp::EU: return eu(to_ctl_basis(f.arg(0)), to_ctl_basis(f.arg(1)));
    case CtlOp::AX: return neg(ex(neg(to_ctl_basis(f.arg(0)))));
    case CtlOp::EF: return eu(C::truth(), to_ctl_basis(f.arg(0)));
    case CtlOp::AG: return neg(eu(C::truth(), neg(to_ctl_basis(f.arg(0)))));
    case CtlOp::AF: return neg(eg(neg(to_ctl_basis(f.arg(0)))));
    case CtlOp::AU: {
      C a = to_ctl_basis(f.arg(0));
      C b = to_ctl_basis(f.arg(1));
      return neg(disj(eu(neg(b), conj(neg(a), neg(b))), eg(neg(b))));
    }
    case CtlOp::AW: {
      // A[a W b] = !E[!b U (!a & !b)]
      C a = to_ctl_basis(f.arg(0));
      C b = to_ctl_basis(f.arg(1));
      return neg(eu(neg(b), conj(neg(a), neg(b))));
    }
  }
  return f;
}

/// States of a structure satisfying a formula.
struct SatSet {
  std::set<StateVector> states;

  bool contains(const StateVector& s) const { return states.count(s) != 0; }
  friend bool operator==(const SatSet&, const SatSet&) = default;
};

namespace detail {

class CtlChecker {
 public:
  CtlChecker(const KripkeStructure& k, const AtomTable& atoms) : k_(k), atoms_(atoms), n_(k.states().size()) {}

  std::vector<bool> sat(const CtlFormula& f) {
    std::vector<bool> out(n_, false);
    switch (f.op()) {
      case CtlOp::True: out.assign(n_, true); break;
      case CtlOp::False: break;
      case CtlOp::Atom: {
        StatePredicate p = atoms_.resolve(f.atom());
        for (std::size_t i = 0; i < n_; ++i) out[i] = p(k_.states()[i]);
        break;
      }
      case CtlOp::Not: {
        out = sat(f.arg(0));
        out.flip();
        break;
      }
      case CtlOp::And:
      case CtlOp::Or: {
        auto a = sat(f.arg(0));
        auto b = sat(f.arg(1));
        for (std::size_t i = 0; i < n_; ++i) out[i] = f.op() == CtlOp::And ? (a[i] && b[i]) : (a[i] || b[i]);
        break;
      }
      case CtlOp::EX: out = pre_exists(sat(f.arg(0))); break;
      case CtlOp::EU: {
        // Least fixpoint Z = b | (a & EX Z).
        auto a = sat(f.arg(0));
        auto b = sat(f.arg(1));
        out = b;
        for (bool changed = true; changed;) {
          changed = false;
          auto pre = pre_exists(out);
          for (std::size_t i = 0; i < n_; ++i) {
            if (!out[i] && a[i] && pre[i]) out[i] = changed = true;
          }
        }
        break;
      }
      case CtlOp::EG: {
        // Greatest fixpoint Z = a & EX Z.
        out = sat(f.arg(0));
        for (bool changed = true; changed;) {
          changed = false;
          auto pre = pre_exists(out);
          for (std::size_t i = 0; i < n_; ++i) {
            if (out[i] && !pre[i]) {
              out[i] = false;
              changed = true;
            }
          }
        }
        break;
      }
      default: throw Error(ErrorCode::WrongShape, "operator outside the fixpoint basis: " + to_string(f));
    }
    return out;
  }

 private:
  std::vector<bool> pre_exists(const std::vector<bool>& target) const {
    std::vector<bool> out(n_, false);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j : k_.successor_indices(i)) {
        if (target[j]) {
          out[i] = true;
          break;
        }
      }
    }
    return out;
  }

  const KripkeStructure& k_;
  const AtomTable& atoms_;
  std::size_t n_;
};

}  // namespace detail

/// Explicit-state CTL model checking by fixpoint computation over {EX, EU, EG}.
inline SatSet check_ctl(const KripkeStructure& k, const CtlFormula& f, const AtomTable& atoms) {
  auto bits = detail::CtlChecker(k, atoms).sat(to_ctl_basis(f));
  SatSet out;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out.states.insert(k.states()[i]);
  }
  return out;
}

inline SatSet check_ctl(const KripkeStructure& k, const CtlFormula& f) { return check_ctl(k, f, AtomTable(k)); }

/// True iff every initial state satisfies f.
inline bool holds_initially(const KripkeStructure& k, const SatSet& s) {
  for (const auto& i : k.init()) {
    if (!s.contains(i)) return false;
  }
  return true;
}

/// Shortest path from s0 to a state violating g, for a property AG g.
inline Path ctl_witness_ag_violation(const KripkeStructure& k, const CtlFormula& f, const StateVector& s0,
                                     const AtomTable& atoms) {
  if (f.op() != CtlOp::AG) throw Error(ErrorCode::WrongShape, "witness extraction needs an AG formula, got " + to_string(f));
  if (!k.init().count(s0)) throw Error(ErrorCode::UnknownState, s0.to_string() + " is not an initial state");
  SatSet good = check_ctl(k, f.arg(0), atoms);

  const std::size_t n = k.states().size();
  std::vector<std::size_t> parent(n, n);
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue;
  std::size_t start = k.require_index(s0);
  seen[start] = true;
  queue.push_back(start);
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    if (!good.contains(k.states()[i])) {
      Path p;
      for (std::size_t at = i; at != n; at = parent[at]) p.states.insert(p.states.begin(), k.states()[at]);
      return p;
    }
    for (std::size_t j : k.successor_indices(i)) {
      if (!seen[j]) {
        seen[j] = true;
        parent[j] = i;
        queue.push_back(j);
      }
    }
  }
  throw Error(ErrorCode::PropertyHolds, to_string(f) + " holds from " + s0.to_string());
}

}  // namespace sdnmc
