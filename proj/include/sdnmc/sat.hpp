#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sdnmc/error.hpp"

namespace sdnmc {

enum class BoolOp { Const, Var, Not, And, Or };

struct BoolNode;

/// Propositional formula with n-ary conjunction and disjunction. Nodes are
/// shared, so large unrollings stay DAG-sized; equality is structural.
class BoolExpr {
 public:
  static BoolExpr constant(bool v) { return make(BoolOp::Const, {}, v ? 1U : 0U); }
  static BoolExpr var(std::uint32_t index) { return make(BoolOp::Var, {}, index); }
  static BoolExpr negation(BoolExpr e) { return make(BoolOp::Not, {std::move(e)}, 0); }
  static BoolExpr conj(std::vector<BoolExpr> children) { return make(BoolOp::And, std::move(children), 0); }
  static BoolExpr disj(std::vector<BoolExpr> children) { return make(BoolOp::Or, std::move(children), 0); }

  BoolOp op() const;
  bool value() const;             // Const only
  std::uint32_t index() const;    // Var only
  const std::vector<BoolExpr>& children() const;
  const void* id() const noexcept { return node_.get(); }

  friend bool operator==(const BoolExpr& a, const BoolExpr& b);

 private:
  explicit BoolExpr(std::shared_ptr<const BoolNode> n) : node_(std::move(n)) {}
  static BoolExpr make(BoolOp op, std::vector<BoolExpr> children, std::uint32_t payload);

  std::shared_ptr<const BoolNode> node_;
};

struct BoolNode {
  BoolOp op;
  std::uint32_t payload;
  std::vector<BoolExpr> children;
};

inline BoolExpr BoolExpr::make(BoolOp op, std::vector<BoolExpr> children, std::uint32_t payload) {
  return BoolExpr(std::make_shared<const BoolNode>(BoolNode{op, payload, std::move(children)}));
}
inline BoolOp BoolExpr::op() const { return node_->op; }
inline bool BoolExpr::value() const { return node_->payload != 0; }
inline std::uint32_t BoolExpr::index() const { return node_->payload; }
inline const std::vector<BoolExpr>& BoolExpr::children() const { return node_->children; }

inline bool operator==(const BoolExpr& a, const BoolExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op() || a.node_->payload != b.node_->payload || a.children().size() != b.children().size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children().size(); ++i) {
    if (!(a.children()[i] == b.children()[i])) return false;
  }
  return true;
}

/// One more than the largest variable index in e (0 when e has no variables).
inline std::uint32_t variable_bound(const BoolExpr& e) {
  std::unordered_map<const void*, std::uint32_t> memo;
  auto go = [&](auto&& self, const BoolExpr& x) -> std::uint32_t {
    if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
    std::uint32_t r = x.op() == BoolOp::Var ? x.index() + 1 : 0;
    for (const auto& c : x.children()) r = std::max(r, self(self, c));
    memo.emplace(x.id(), r);
    return r;
  };
  return go(go, e);
}

struct Literal {
  std::uint32_t var = 0;
  bool positive = true;

  Literal operator~() const { return {var, !positive}; }
  /// DIMACS form: +(var+1) or -(var+1).
  long dimacs() const { return positive ? static_cast<long>(var) + 1 : -static_cast<long>(var) - 1; }

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

/// Total or partial truth assignment indexed by variable.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t num_vars) : values_(num_vars) {}

  std::size_t size() const noexcept { return values_.size(); }
  std::optional<bool> get(std::uint32_t v) const { return v < values_.size() ? values_[v] : std::nullopt; }
  void set(std::uint32_t v, bool b) {
    if (v >= values_.size()) values_.resize(v + 1);
    values_[v] = b;
  }
  bool is_total() const {
    for (const auto& v : values_) {
      if (!v) return false;
    }
    return true;
  }
  /// Value of a variable that must be assigned.
  bool at(std::uint32_t v) const {
    auto r = get(v);
    if (!r) throw Error(ErrorCode::UnassignedVariable, "variable " + std::to_string(v) + " is unassigned");
    return *r;
  }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::optional<bool>> values_;
};

/// Clause database. Clauses are normalised on insertion: duplicate literals
/// are merged and tautologies dropped.
class CnfFormula {
 public:
  CnfFormula() = default;
  explicit CnfFormula(std::uint32_t num_vars) : num_vars_(num_vars) {}

  std::uint32_t num_vars() const noexcept { return num_vars_; }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }
  const std::map<std::uint32_t, std::string>& names() const noexcept { return names_; }
  std::optional<Literal> root() const noexcept { return root_; }

  std::uint32_t new_var() { return num_vars_++; }
  void reserve_vars(std::uint32_t n) { num_vars_ = std::max(num_vars_, n); }
  void set_name(std::uint32_t v, std::string name) { names_[v] = std::move(name); }
  void set_root(Literal l) { root_ = l; }

  /// Returns false when the clause was a tautology and therefore dropped.
  bool add_clause(Clause c) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      if (c[i].var == c[i + 1].var) return false;
    }
    for (const auto& l : c) num_vars_ = std::max(num_vars_, l.var + 1);
    clauses_.push_back(std::move(c));
    return true;
  }

  bool satisfied_by(const Assignment& a) const {
    for (const auto& c : clauses_) {
      bool ok = false;
      for (const auto& l : c) {
        auto v = a.get(l.var);
        if (v && *v == l.positive) {
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
    return true;
  }

 private:
  std::uint32_t num_vars_ = 0;
  std::vector<Clause> clauses_;
  std::map<std::uint32_t, std::string> names_;
  std::optional<Literal> root_;
};

/// Truth value of e under a, which must assign every variable of e.
inline bool evaluate(const BoolExpr& e, const Assignment& a) {
  std::unordered_map<const void*, bool> memo;
  auto go = [&](auto&& self, const BoolExpr& x) -> bool {
    if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
    bool r = false;
    switch (x.op()) {
      case BoolOp::Const: r = x.value(); break;
      case BoolOp::Var: r = a.at(x.index()); break;
      case BoolOp::Not: r = !self(self, x.children()[0]); break;
      case BoolOp::And:
        r = true;
        for (const auto& c : x.children()) {
          if (!self(self, c)) {
            r = false;
            break;
          }
        }
        break;
      case BoolOp::Or:
        for (const auto& c : x.children()) {
          if (self(self, c)) {
            r = true;
            break;
          }
        }
        break;
    }
    memo.emplace(x.id(), r);
    return r;
  };
  return go(go, e);
}

/// Tseitin transformation. Input variables keep their indices; definition
/// variables are allocated from max(num_input_vars, variable_bound(e)) upward
/// in post-order, left to right. Shared subexpressions are defined once.
inline CnfFormula tseitin(const BoolExpr& e, std::uint32_t num_input_vars = 0) {
  CnfFormula cnf(std::max(num_input_vars, variable_bound(e)));
  std::unordered_map<const void*, Literal> memo;
  std::optional<Literal> true_lit;

  auto encode = [&](auto&& self, const BoolExpr& x) -> Literal {
    if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
    Literal out;
    switch (x.op()) {
      case BoolOp::Var: out = {x.index(), true}; break;
      case BoolOp::Const:
        if (!true_lit) {
          true_lit = Literal{cnf.new_var(), true};
          cnf.set_name(true_lit->var, "const.true");
          cnf.add_clause({*true_lit});
        }
        out = x.value() ? *true_lit : ~*true_lit;
        break;
      case BoolOp::Not: out = ~self(self, x.children()[0]); break;
      case BoolOp::And:
      case BoolOp::Or: {
        std::vector<Literal> kids;
        for (const auto& c : x.children()) kids.push_back(self(self, c));
        Literal g{cnf.new_var(), true};
        // And: g -> each kid, all kids -> g.  Or is the dual.
        const bool is_and = x.op() == BoolOp::And;
        Clause big{is_and ? g : ~g};
        for (const auto& k : kids) {
          cnf.add_clause(is_and ? Clause{~g, k} : Clause{g, ~k});
          big.push_back(is_and ? ~k : k);
        }
        cnf.add_clause(std::move(big));
        out = g;
        break;
      }
    }
    memo.emplace(x.id(), out);
    return out;
  };

  const std::uint32_t inputs = cnf.num_vars();
  Literal root = encode(encode, e);
  cnf.set_root(root);
  if (root.var >= inputs && !cnf.names().count(root.var)) cnf.set_name(root.var, "root");
  cnf.add_clause({root});
  return cnf;
}

}  // namespace sdnmc
