#pragma once

#include <vector>

#include "sdnmc/atoms.hpp"
#include "sdnmc/kripke.hpp"
#include "sdnmc/ltl.hpp"

namespace sdnmc {

namespace detail {

// Truth of every subformula at every lasso position, computed bottom-up.
// Temporal operators are fixpoints over the successor function
// succ(i) = i+1, succ(last) = loop_back.
class LassoEvaluator {
 public:
  LassoEvaluator(const Path& path, const AtomTable& atoms) : path_(path), atoms_(atoms) {
    n_ = path.states.size();
    for (std::size_t i = 0; i < n_; ++i) succ_.push_back(i + 1 < n_ ? i + 1 : *path.loop_back);
  }

  std::vector<bool> eval(const LtlFormula& f) {
    std::vector<bool> out(n_, false);
    switch (f.op()) {
      case LtlOp::True: out.assign(n_, true); break;
      case LtlOp::False: break;
      case LtlOp::Atom: {
        StatePredicate p = atoms_.resolve(f.atom());
        for (std::size_t i = 0; i < n_; ++i) out[i] = p(path_.states[i]);
        break;
      }
      case LtlOp::Not: {
        auto a = eval(f.arg(0));
        for (std::size_t i = 0; i < n_; ++i) out[i] = !a[i];
        break;
      }
      case LtlOp::And:
      case LtlOp::Or:
      case LtlOp::Implies: {
        auto a = eval(f.arg(0));
        auto b = eval(f.arg(1));
        for (std::size_t i = 0; i < n_; ++i) {
          out[i] = f.op() == LtlOp::And ? (a[i] && b[i]) : f.op() == LtlOp::Or ? (a[i] || b[i]) : (!a[i] || b[i]);
        }
        break;
      }
      case LtlOp::Next: {
        auto a = eval(f.arg(0));
        for (std::size_t i = 0; i < n_; ++i) out[i] = a[succ_[i]];
        break;
      }
      case LtlOp::Finally: {
        auto a = eval(f.arg(0));
        out = fixpoint(false, [&](const std::vector<bool>& x, std::size_t i) { return a[i] || x[succ_[i]]; });
        break;
      }
      case LtlOp::Globally: {
        auto a = eval(f.arg(0));
        out = fixpoint(true, [&](const std::vector<bool>& x, std::size_t i) { return a[i] && x[succ_[i]]; });
        break;
      }
      case LtlOp::Until: {
        auto a = eval(f.arg(0));
        auto b = eval(f.arg(1));
        out = fixpoint(false,
                       [&](const std::vector<bool>& x, std::size_t i) { return b[i] || (a[i] && x[succ_[i]]); });
        break;
      }
      case LtlOp::Release: {
        auto a = eval(f.arg(0));
        auto b = eval(f.arg(1));
        out = fixpoint(true,
                       [&](const std::vector<bool>& x, std::size_t i) { return b[i] && (a[i] || x[succ_[i]]); });
        break;
      }
    }
    return out;
  }

 private:
  // Least (start=false) or greatest (start=true) fixpoint of a monotone step.
  template <typename Step>
  std::vector<bool> fixpoint(bool start, Step step) const {
    std::vector<bool> x(n_, start);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = n_; i-- > 0;) {
        bool v = step(x, i);
        if (v != x[i]) {
          x[i] = v;
          changed = true;
        }
      }
    }
    return x;
  }

  const Path& path_;
  const AtomTable& atoms_;
  std::size_t n_ = 0;
  std::vector<std::size_t> succ_;
};

inline bool eval_bounded(const std::vector<StateVector>& s, const LtlFormula& f, std::size_t i,
                         const AtomTable& atoms) {
  const std::size_t last = s.size() - 1;
  if (i > last) return false;
  switch (f.op()) {
    case LtlOp::True: return true;
    case LtlOp::False: return false;
    case LtlOp::Atom: return atoms.resolve(f.atom())(s[i]);
    case LtlOp::Not: return !atoms.resolve(f.arg(0).atom())(s[i]);
    case LtlOp::And: return eval_bounded(s, f.arg(0), i, atoms) && eval_bounded(s, f.arg(1), i, atoms);
    case LtlOp::Or: return eval_bounded(s, f.arg(0), i, atoms) || eval_bounded(s, f.arg(1), i, atoms);
    case LtlOp::Next: return eval_bounded(s, f.arg(0), i + 1, atoms);
    case LtlOp::Finally:
      for (std::size_t j = i; j <= last; ++j) {
        if (eval_bounded(s, f.arg(0), j, atoms)) return true;
      }
      return false;
    case LtlOp::Globally: return false;
    case LtlOp::Until:
      for (std::size_t j = i; j <= last; ++j) {
        if (eval_bounded(s, f.arg(1), j, atoms)) return true;
        if (!eval_bounded(s, f.arg(0), j, atoms)) return false;
      }
      return false;
    case LtlOp::Release:
      for (std::size_t j = i; j <= last; ++j) {
        if (!eval_bounded(s, f.arg(1), j, atoms)) return false;
        if (eval_bounded(s, f.arg(0), j, atoms)) return true;
      }
      return false;
    case LtlOp::Implies: break;
  }
  throw Error(ErrorCode::NotInNnf, to_string(f));
}

}  // namespace detail

/// Truth of f on the infinite run represented by a lasso (path with loop_back).
inline bool eval_ltl_lasso(const Path& path, const LtlFormula& f, const AtomTable& atoms) {
  if (path.states.empty()) throw Error(ErrorCode::InvalidArgument, "empty path");
  if (!path.loop_back) throw Error(ErrorCode::MissingLoop, "lasso evaluation needs a loop_back index");
  if (*path.loop_back >= path.states.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "loop_back " + std::to_string(*path.loop_back) + " past end of path");
  }
  return detail::LassoEvaluator(path, atoms).eval(f)[0];
}

/// Pessimistic truth of f at position i of a finite prefix: every obligation
/// must be discharged inside the prefix, so G never holds and anything past
/// the last state is false.
inline bool eval_ltl_bounded_noloop(const Path& prefix, const LtlFormula& f, std::size_t i,
                                    const AtomTable& atoms) {
  if (prefix.states.empty()) throw Error(ErrorCode::InvalidArgument, "empty path");
  if (i > prefix.states.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "start " + std::to_string(i) + " beyond prefix of " + std::to_string(prefix.states.size()));
  }
  return detail::eval_bounded(prefix.states, nnf(f), i, atoms);
}

}  // namespace sdnmc
