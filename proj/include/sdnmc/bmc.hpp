#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sdnmc/atoms.hpp"
#include "sdnmc/dpll.hpp"
#include "sdnmc/kripke.hpp"
#include "sdnmc/ltl.hpp"
#include "sdnmc/sat.hpp"

namespace sdnmc {

/// `None` keeps only the loop-free translation and drops the loop condition
/// entirely (the reduced formula Init ∧ T ∧ ... ∧ [[f]]^0). `Standard` adds
/// the lasso disjuncts guarded by the loop condition.
enum class LoopMode { None, Standard };

inline std::string to_string(LoopMode m) { return m == LoopMode::None ? "none" : "standard"; }

inline LoopMode parse_loop_mode(const std::string& s) {
  if (s == "none") return LoopMode::None;
  if (s == "standard" || s == "both") return LoopMode::Standard;
  throw Error(ErrorCode::InvalidArgument, "unknown loop mode '" + s + "' (expected none|standard)");
}

/// Propositional variable for bit j of the state at step i, allocated
/// step-major: var(i, j) = i * width + j.
class StepVariables {
 public:
  StepVariables(std::size_t width, std::size_t bound) : width_(width), bound_(bound) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t bound() const noexcept { return bound_; }
  std::uint32_t count() const noexcept { return static_cast<std::uint32_t>((bound_ + 1) * width_); }

  std::uint32_t var(std::size_t step, std::size_t bit) const {
    if (step > bound_ || bit >= width_) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "step " + std::to_string(step) + " bit " + std::to_string(bit) + " outside the variable grid");
    }
    return static_cast<std::uint32_t>(step * width_ + bit);
  }

  std::string name(std::uint32_t v) const {
    return "s" + std::to_string(v / width_) + ".b[" + std::to_string(v % width_) + "]";
  }

 private:
  std::size_t width_;
  std::size_t bound_;
};

/// Conjunction of bit literals at one step, b[width-1] first.
inline BoolExpr encode_predicate(const StatePredicate& p, std::size_t step, const StepVariables& vars) {
  if (p.width != vars.width()) {
    throw Error(ErrorCode::WidthMismatch, "predicate width " + std::to_string(p.width) + " vs " +
                                              std::to_string(vars.width()));
  }
  std::vector<BoolExpr> lits;
  for (std::size_t j = vars.width(); j-- > 0;) {
    if (((p.mask >> j) & 1U) == 0) continue;
    BoolExpr v = BoolExpr::var(vars.var(step, j));
    lits.push_back(((p.value >> j) & 1U) ? v : BoolExpr::negation(v));
  }
  return BoolExpr::conj(std::move(lits));
}

inline BoolExpr encode_state_literal(const StateVector& sv, std::size_t step, const StepVariables& vars) {
  if (sv.width() != vars.width()) {
    throw Error(ErrorCode::WidthMismatch, "state " + sv.to_string() + " vs width " + std::to_string(vars.width()));
  }
  std::uint64_t all = sv.width() == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << sv.width()) - 1);
  return encode_predicate({sv.width(), all, sv.bits()}, step, vars);
}

inline BoolExpr encode_init(const KripkeStructure& k, const StepVariables& vars) {
  if (k.init().size() == 1) return encode_state_literal(*k.init().begin(), 0, vars);
  std::vector<BoolExpr> terms;
  for (const auto& s : k.init()) terms.push_back(encode_state_literal(s, 0, vars));
  return BoolExpr::disj(std::move(terms));
}

/// T(S_from, S_to): one disjunct per transition pair.
inline BoolExpr encode_transition_between(const KripkeStructure& k, std::size_t from_step, std::size_t to_step,
                                          const StepVariables& vars) {
  std::vector<BoolExpr> terms;
  for (const auto& [a, b] : k.transitions()) {
    terms.push_back(BoolExpr::conj({encode_state_literal(a, from_step, vars), encode_state_literal(b, to_step, vars)}));
  }
  return BoolExpr::disj(std::move(terms));
}

inline BoolExpr encode_transition_step(const KripkeStructure& k, std::size_t i, const StepVariables& vars) {
  if (i >= vars.bound()) {
    throw Error(ErrorCode::IndexOutOfRange, "transition step " + std::to_string(i) + " needs i < bound");
  }
  return encode_transition_between(k, i, i + 1, vars);
}

/// Init(S0) ∧ T(S0,S1) ∧ ... ∧ T(S_{d-1},S_d); just Init(S0) when d = 0.
inline BoolExpr unroll(const KripkeStructure& k, std::size_t d, const StepVariables& vars) {
  if (d == 0) return encode_init(k, vars);
  std::vector<BoolExpr> parts{encode_init(k, vars)};
  for (std::size_t i = 0; i < d; ++i) parts.push_back(encode_transition_step(k, i, vars));
  return BoolExpr::conj(std::move(parts));
}

struct LoopCondition {
  std::vector<BoolExpr> per_step;  // per_step[l] = T(S_d, S_l)
  BoolExpr any;                    // L^d, the disjunction over l = 0..d
};

inline LoopCondition encode_loop_condition(const KripkeStructure& k, std::size_t d, const StepVariables& vars) {
  LoopCondition out{{}, BoolExpr::constant(false)};
  for (std::size_t l = 0; l <= d; ++l) out.per_step.push_back(encode_transition_between(k, d, l, vars));
  out.any = BoolExpr::disj(out.per_step);
  return out;
}

namespace detail {

class BmcTranslator {
 public:
  static constexpr std::size_t kNoLoop = static_cast<std::size_t>(-1);

  BmcTranslator(std::size_t d, const StepVariables& vars, const AtomTable& atoms) : d_(d), vars_(vars), atoms_(atoms) {}

  BoolExpr noloop(const LtlFormula& f, std::size_t i) { return tr(f, kNoLoop, i); }
  BoolExpr loop(const LtlFormula& f, std::size_t l, std::size_t i) {
    if (l > d_) throw Error(ErrorCode::IndexOutOfRange, "loop index " + std::to_string(l) + " > bound");
    return tr(f, l, i);
  }

 private:
  BoolExpr tr(const LtlFormula& f, std::size_t l, std::size_t i) {
    auto key = std::make_tuple(f.id(), l, i);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    BoolExpr out = l == kNoLoop ? tr_noloop(f, i) : tr_loop(f, l, i);
    memo_.emplace(key, out);
    return out;
  }

  BoolExpr atom_at(const LtlFormula& f, std::size_t i) { return encode_predicate(atoms_.resolve(f.atom()), i, vars_); }

  BoolExpr propositional(const LtlFormula& f, std::size_t l, std::size_t i) {
    switch (f.op()) {
      case LtlOp::True: return BoolExpr::constant(true);
      case LtlOp::False: return BoolExpr::constant(false);
      case LtlOp::Atom: return atom_at(f, i);
      case LtlOp::Not:
        if (f.arg(0).op() != LtlOp::Atom) throw Error(ErrorCode::NotInNnf, to_string(f));
        return BoolExpr::negation(atom_at(f.arg(0), i));
      case LtlOp::And: return BoolExpr::conj({tr(f.arg(0), l, i), tr(f.arg(1), l, i)});
      case LtlOp::Or: return BoolExpr::disj({tr(f.arg(0), l, i), tr(f.arg(1), l, i)});
      case LtlOp::Implies: throw Error(ErrorCode::NotInNnf, to_string(f));
      default: break;
    }
    throw Error(ErrorCode::WrongShape, "not propositional: " + to_string(f));
  }

  static bool is_temporal(LtlOp op) {
    return op == LtlOp::Next || op == LtlOp::Finally || op == LtlOp::Globally || op == LtlOp::Until ||
           op == LtlOp::Release;
  }

  // φ@from ∧ ... ∧ φ@to (inclusive); empty when from > to.
  std::vector<BoolExpr> span(const LtlFormula& f, std::size_t l, std::size_t from, std::size_t to) {
    std::vector<BoolExpr> out;
    for (std::size_t n = from; n <= to; ++n) out.push_back(tr(f, l, n));
    return out;
  }

  BoolExpr tr_noloop(const LtlFormula& f, std::size_t i) {
    if (i > d_) return BoolExpr::constant(false);
    if (!is_temporal(f.op())) return propositional(f, kNoLoop, i);
    const auto& a = f.arg(0);
    switch (f.op()) {
      case LtlOp::Next: return i < d_ ? tr(a, kNoLoop, i + 1) : BoolExpr::constant(false);
      case LtlOp::Finally: return BoolExpr::disj(span(a, kNoLoop, i, d_));
      case LtlOp::Globally: return BoolExpr::constant(false);
      case LtlOp::Until: {
        std::vector<BoolExpr> terms;
        for (std::size_t j = i; j <= d_; ++j) {
          std::vector<BoolExpr> c{tr(f.arg(1), kNoLoop, j)};
          if (j > i) append(c, span(a, kNoLoop, i, j - 1));
          terms.push_back(BoolExpr::conj(std::move(c)));
        }
        return BoolExpr::disj(std::move(terms));
      }
      case LtlOp::Release: {
        std::vector<BoolExpr> terms;
        for (std::size_t j = i; j <= d_; ++j) {
          std::vector<BoolExpr> c{tr(a, kNoLoop, j)};
          for (auto& x : span(f.arg(1), kNoLoop, i, j)) c.push_back(x);
          terms.push_back(BoolExpr::conj(std::move(c)));
        }
        return BoolExpr::disj(std::move(terms));
      }
      default: break;
    }
    throw Error(ErrorCode::WrongShape, to_string(f));
  }

  BoolExpr tr_loop(const LtlFormula& f, std::size_t l, std::size_t i) {
    if (!is_temporal(f.op())) return propositional(f, l, i);
    const auto& a = f.arg(0);
    const std::size_t first = std::min(i, l);
    switch (f.op()) {
      case LtlOp::Next: return tr(a, l, i < d_ ? i + 1 : l);
      case LtlOp::Finally: return BoolExpr::disj(span(a, l, first, d_));
      case LtlOp::Globally: return BoolExpr::conj(span(a, l, first, d_));
      case LtlOp::Until: {
        const auto& b = f.arg(1);
        std::vector<BoolExpr> terms;
        for (std::size_t j = i; j <= d_; ++j) {
          std::vector<BoolExpr> c{tr(b, l, j)};
          if (j > i) append(c, span(a, l, i, j - 1));
          terms.push_back(BoolExpr::conj(std::move(c)));
        }
        // Witness reached after wrapping around the loop.
        for (std::size_t j = l; j < i; ++j) {
          std::vector<BoolExpr> c{tr(b, l, j)};
          append(c, span(a, l, i, d_));
          if (j > l) append(c, span(a, l, l, j - 1));
          terms.push_back(BoolExpr::conj(std::move(c)));
        }
        return BoolExpr::disj(std::move(terms));
      }
      case LtlOp::Release: {
        const auto& b = f.arg(1);
        std::vector<BoolExpr> terms{BoolExpr::conj(span(b, l, first, d_))};
        for (std::size_t j = i; j <= d_; ++j) {
          std::vector<BoolExpr> c{tr(a, l, j)};
          append(c, span(b, l, i, j));
          terms.push_back(BoolExpr::conj(std::move(c)));
        }
        for (std::size_t j = l; j < i; ++j) {
          std::vector<BoolExpr> c{tr(a, l, j)};
          append(c, span(b, l, i, d_));
          append(c, span(b, l, l, j));
          terms.push_back(BoolExpr::conj(std::move(c)));
        }
        return BoolExpr::disj(std::move(terms));
      }
      default: break;
    }
    throw Error(ErrorCode::WrongShape, to_string(f));
  }

  static void append(std::vector<BoolExpr>& to, std::vector<BoolExpr> more) {
    for (auto& x : more) to.push_back(std::move(x));
  }

  std::size_t d_;
  const StepVariables& vars_;
  const AtomTable& atoms_;
  std::map<std::tuple<const void*, std::size_t, std::size_t>, BoolExpr> memo_;
};

}  // namespace detail

/// Loop-free bounded translation [[f]]^i of an NNF formula over steps 0..d.
inline BoolExpr translate_noloop(const LtlFormula& f, std::size_t d, std::size_t i, const StepVariables& vars,
                                 const AtomTable& atoms) {
  if (!is_nnf(f)) throw Error(ErrorCode::NotInNnf, to_string(f));
  if (i > d + 1) throw Error(ErrorCode::IndexOutOfRange, "start " + std::to_string(i) + " > d+1");
  return detail::BmcTranslator(d, vars, atoms).noloop(f, i);
}

/// Translation of an NNF formula on the lasso s_0..s_d with back edge to s_l.
inline BoolExpr translate_loop(const LtlFormula& f, std::size_t d, std::size_t l, std::size_t i,
                               const StepVariables& vars, const AtomTable& atoms) {
  if (!is_nnf(f)) throw Error(ErrorCode::NotInNnf, to_string(f));
  if (i > d) throw Error(ErrorCode::IndexOutOfRange, "start " + std::to_string(i) + " > d");
  return detail::BmcTranslator(d, vars, atoms).loop(f, l, i);
}

struct Counterexample {
  std::vector<StateVector> trace;
  std::optional<std::size_t> loop_back;
  std::string formula;
  std::size_t bound = 0;
  LoopMode loop_mode = LoopMode::Standard;

  friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

struct NoWitnessAtBound {
  std::string formula;
  std::size_t bound = 0;
  LoopMode loop_mode = LoopMode::Standard;

  friend bool operator==(const NoWitnessAtBound&, const NoWitnessAtBound&) = default;
};

using BmcResult = std::variant<Counterexample, NoWitnessAtBound>;

inline bool found(const BmcResult& r) { return std::holds_alternative<Counterexample>(r); }

/// The complete propositional query for one bound, before CNF conversion.
struct BmcEncoding {
  StepVariables vars;
  LtlFormula formula;  // NNF
  BoolExpr expression;
  LoopCondition loops;
  BoolExpr noloop_branch;                // [[f]]^0 (guarded by ¬L^d in standard mode)
  std::vector<BoolExpr> loop_branches;   // l-th: T(S_d,S_l) ∧ l[[f]]^0; standard mode only
};

/// Builds Init ∧ T^d ∧ [[f]]^0 (mode None) or
/// Init ∧ T^d ∧ ((¬L^d ∧ [[f]]^0) ∨ ⋁_l (T(S_d,S_l) ∧ l[[f]]^0)) (mode Standard).
inline BmcEncoding encode_bmc(const KripkeStructure& k, const LtlFormula& f, std::size_t d, LoopMode mode,
                              const AtomTable& atoms) {
  StepVariables vars(k.width(), d);
  LtlFormula g = nnf(f);
  detail::BmcTranslator tr(d, vars, atoms);
  LoopCondition loops = encode_loop_condition(k, d, vars);
  BoolExpr noloop = tr.noloop(g, 0);

  std::vector<BoolExpr> parts{encode_init(k, vars)};
  for (std::size_t i = 0; i < d; ++i) parts.push_back(encode_transition_step(k, i, vars));

  std::vector<BoolExpr> loop_branches;
  if (mode == LoopMode::None) {
    parts.push_back(noloop);
  } else {
    std::vector<BoolExpr> cases{BoolExpr::conj({BoolExpr::negation(loops.any), noloop})};
    for (std::size_t l = 0; l <= d; ++l) {
      loop_branches.push_back(BoolExpr::conj({loops.per_step[l], tr.loop(g, l, 0)}));
      cases.push_back(loop_branches.back());
    }
    parts.push_back(BoolExpr::disj(std::move(cases)));
  }
  BoolExpr expr = BoolExpr::conj(std::move(parts));
  return BmcEncoding{vars, g, expr, loops, noloop, loop_branches};
}

inline CnfFormula bmc_cnf(const BmcEncoding& enc) {
  CnfFormula cnf = tseitin(enc.expression, enc.vars.count());
  for (std::uint32_t v = 0; v < enc.vars.count(); ++v) cnf.set_name(v, enc.vars.name(v));
  return cnf;
}

/// Reads the state at each step 0..d out of a model.
inline std::vector<StateVector> decode_trace(const Assignment& a, const StepVariables& vars, std::size_t d) {
  std::vector<StateVector> out;
  for (std::size_t i = 0; i <= d; ++i) {
    std::uint64_t bits = 0;
    for (std::size_t j = 0; j < vars.width(); ++j) {
      if (a.at(vars.var(i, j))) bits |= std::uint64_t{1} << j;
    }
    out.emplace_back(vars.width(), bits);
  }
  return out;
}

/// Assignment placing the given states at steps 0..trace.size()-1.
inline Assignment encode_trace(const std::vector<StateVector>& trace, const StepVariables& vars) {
  Assignment a(vars.count());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    for (std::size_t j = 0; j < vars.width(); ++j) a.set(vars.var(i, j), trace[i].bit(j));
  }
  return a;
}

/// Searches for a run of length d satisfying f. Returns a decoded trace, or
/// NoWitnessAtBound when the query is unsatisfiable. If cnf_out is given it
/// receives the CNF that was solved.
inline BmcResult find_witness(const KripkeStructure& k, const LtlFormula& f, std::size_t d, LoopMode mode,
                              const AtomTable& atoms, CnfFormula* cnf_out = nullptr) {
  BmcEncoding enc = encode_bmc(k, f, d, mode, atoms);
  CnfFormula cnf = bmc_cnf(enc);
  auto model = solve(cnf);
  if (cnf_out) *cnf_out = cnf;
  if (!model) return NoWitnessAtBound{to_string(f), d, mode};

  Counterexample cex{decode_trace(*model, enc.vars, d), std::nullopt, to_string(f), d, mode};
  // Under L^d the loop-free branch is disabled, so some loop branch holds.
  if (mode == LoopMode::Standard && evaluate(enc.loops.any, *model)) {
    for (std::size_t l = 0; l <= d; ++l) {
      if (evaluate(enc.loop_branches[l], *model)) {
        cex.loop_back = l;
        break;
      }
    }
  }
  return cex;
}

inline BmcResult find_witness(const KripkeStructure& k, const LtlFormula& f, std::size_t d, LoopMode mode) {
  return find_witness(k, f, d, mode, AtomTable(k));
}

/// Looks for a counterexample to `property` by searching for a witness of
/// its negation.
inline BmcResult refute(const KripkeStructure& k, const LtlFormula& property, std::size_t d, LoopMode mode,
                        const AtomTable& atoms, CnfFormula* cnf_out = nullptr) {
  return find_witness(k, nnf(LtlFormula::negation(property)), d, mode, atoms, cnf_out);
}

inline nlohmann::json to_json(const Counterexample& c) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& s : c.trace) trace.push_back(s.to_string());
  return {{"formula", c.formula},
          {"bound", c.bound},
          {"loop_mode", to_string(c.loop_mode)},
          {"trace", trace},
          {"loop_back", c.loop_back ? nlohmann::json(*c.loop_back) : nlohmann::json(nullptr)}};
}

inline Counterexample counterexample_from_json(const nlohmann::json& j) {
  Counterexample c;
  c.formula = j.at("formula").get<std::string>();
  c.bound = j.at("bound").get<std::size_t>();
  c.loop_mode = parse_loop_mode(j.at("loop_mode").get<std::string>());
  for (const auto& s : j.at("trace")) c.trace.push_back(StateVector::parse(s.get<std::string>()));
  if (!j.at("loop_back").is_null()) c.loop_back = j.at("loop_back").get<std::size_t>();
  return c;
}

}  // namespace sdnmc
