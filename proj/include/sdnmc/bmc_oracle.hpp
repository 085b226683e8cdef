#pragma once

#include "sdnmc/bmc.hpp"
#include "sdnmc/kripke.hpp"
#include "sdnmc/ltl_eval.hpp"

namespace sdnmc {

/// Answers the same bounded query as find_witness by explicit path
/// enumeration and the direct path evaluators, without any SAT encoding.
/// Loop-free candidates use the pessimistic finite semantics; in standard
/// mode they count only when the path closes no loop, and every closable
/// loop is tried as a lasso.
inline BmcResult oracle_bounded_check(const KripkeStructure& k, const LtlFormula& f, std::size_t d, LoopMode mode,
                                      const AtomTable& atoms) {
  if (k.states().size() > 16 || d > 8) {
    throw Error(ErrorCode::TooLarge, "oracle supports at most 16 states and bound 8");
  }
  for (const auto& p : enumerate_paths(k, d, true)) {
    if (mode == LoopMode::None || !p.has_loop()) {
      if (eval_ltl_bounded_noloop(p.prefix(), f, 0, atoms)) {
        return Counterexample{p.states, std::nullopt, to_string(f), d, mode};
      }
      continue;
    }
    for (std::size_t l : p.loop_backs) {
      if (eval_ltl_lasso(p.lasso(l), f, atoms)) return Counterexample{p.states, l, to_string(f), d, mode};
    }
  }
  return NoWitnessAtBound{to_string(f), d, mode};
}

inline BmcResult oracle_bounded_check(const KripkeStructure& k, const LtlFormula& f, std::size_t d, LoopMode mode) {
  return oracle_bounded_check(k, f, d, mode, AtomTable(k));
}

}  // namespace sdnmc
