#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sdnmc/sat.hpp"

namespace sdnmc {

namespace detail {

// DPLL with two-watched-literal unit propagation and chronological
// backtracking. Branches on the lowest-index unassigned variable, true first.
class DpllSolver {
 public:
  explicit DpllSolver(const CnfFormula& cnf)
      : num_vars_(cnf.num_vars()), clauses_(cnf.clauses()), values_(num_vars_, kUnassigned),
        watches_(2 * static_cast<std::size_t>(num_vars_)) {}

  std::optional<Assignment> solve() {
    if (!attach_clauses()) return std::nullopt;
    std::uint32_t cursor = 0;
    for (;;) {
      if (!propagate()) {
        if (!backtrack()) return std::nullopt;
        cursor = 0;
        continue;
      }
      while (cursor < num_vars_ && values_[cursor] != kUnassigned) ++cursor;
      if (cursor == num_vars_) return model();
      decisions_.push_back({trail_.size(), cursor, false});
      enqueue({cursor, true});
    }
  }

 private:
  static constexpr std::int8_t kUnassigned = -1;

  struct Decision {
    std::size_t trail_pos;
    std::uint32_t var;
    bool flipped;
  };

  static std::size_t code(Literal l) { return 2 * static_cast<std::size_t>(l.var) + (l.positive ? 0 : 1); }

  // 1 true, 0 false, -1 unassigned.
  int value(Literal l) const {
    std::int8_t v = values_[l.var];
    if (v == kUnassigned) return -1;
    return (v == 1) == l.positive ? 1 : 0;
  }

  void enqueue(Literal l) {
    values_[l.var] = l.positive ? 1 : 0;
    trail_.push_back(l);
  }

  bool attach_clauses() {
    for (std::size_t ci = 0; ci < clauses_.size(); ++ci) {
      Clause& c = clauses_[ci];
      if (c.empty()) return false;
      if (c.size() == 1) {
        int v = value(c[0]);
        if (v == 0) return false;
        if (v == -1) enqueue(c[0]);
        continue;
      }
      watches_[code(c[0])].push_back(ci);
      watches_[code(c[1])].push_back(ci);
    }
    return true;
  }

  bool propagate() {
    while (head_ < trail_.size()) {
      Literal falsified = ~trail_[head_++];
      auto& watching = watches_[code(falsified)];
      std::size_t keep = 0;
      bool conflict = false;
      for (std::size_t w = 0; w < watching.size(); ++w) {
        std::size_t ci = watching[w];
        if (conflict) {
          watching[keep++] = ci;
          continue;
        }
        Clause& c = clauses_[ci];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (value(c[0]) == 1) {
          watching[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[code(c[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        watching[keep++] = ci;
        if (value(c[0]) == 0) {
          conflict = true;
        } else {
          enqueue(c[0]);
        }
      }
      watching.resize(keep);
      if (conflict) return false;
    }
    return true;
  }

  void undo_to(std::size_t pos) {
    while (trail_.size() > pos) {
      values_[trail_.back().var] = kUnassigned;
      trail_.pop_back();
    }
    head_ = pos;
  }

  bool backtrack() {
    while (!decisions_.empty()) {
      Decision& d = decisions_.back();
      undo_to(d.trail_pos);
      if (!d.flipped) {
        d.flipped = true;
        enqueue({d.var, false});
        return true;
      }
      decisions_.pop_back();
    }
    return false;
  }

  Assignment model() const {
    Assignment a(num_vars_);
    for (std::uint32_t v = 0; v < num_vars_; ++v) a.set(v, values_[v] == 1);
    return a;
  }

  std::uint32_t num_vars_;
  std::vector<Clause> clauses_;
  std::vector<std::int8_t> values_;
  std::vector<std::vector<std::size_t>> watches_;
  std::vector<Literal> trail_;
  std::size_t head_ = 0;
  std::vector<Decision> decisions_;
};

}  // namespace detail

/// Complete, deterministic satisfiability check. Returns a total satisfying
/// assignment, or nullopt when the formula is unsatisfiable.
inline std::optional<Assignment> solve(const CnfFormula& cnf) { return detail::DpllSolver(cnf).solve(); }

/// Exhaustive search in ascending binary order (variable i is bit i of the
/// counter). Test oracle for solve(); limited to 24 variables.
inline std::optional<Assignment> brute_force_solve(const CnfFormula& cnf) {
  constexpr std::uint32_t kMaxVars = 24;
  const std::uint32_t n = cnf.num_vars();
  if (n > kMaxVars) {
    throw Error(ErrorCode::TooManyVariables, std::to_string(n) + " variables exceed the limit of 24");
  }
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    bool ok = true;
    for (const auto& c : cnf.clauses()) {
      bool sat = false;
      for (const auto& l : c) {
        if ((((m >> l.var) & 1U) != 0) == l.positive) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) {
      Assignment a(n);
      for (std::uint32_t v = 0; v < n; ++v) a.set(v, ((m >> v) & 1U) != 0);
      return a;
    }
  }
  return std::nullopt;
}

}  // namespace sdnmc
