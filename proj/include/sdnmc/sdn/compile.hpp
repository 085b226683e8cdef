#pragma once

#include "sdnmc/kripke.hpp"
#include "sdnmc/presets.hpp"
#include "sdnmc/sdn/types.hpp"

namespace sdnmc::sdn {

/// Packet-lifecycle phases over <I, W, C, FC, Mh, O>.
namespace phase {
inline StateVector switch_input() { return StateVector::parse("110000"); }
inline StateVector controller_input() { return StateVector::parse("101000"); }
inline StateVector rule_calculation() { return StateVector::parse("001100"); }
inline StateVector controller_output() { return StateVector::parse("001001"); }
inline StateVector header_modification() { return StateVector::parse("010010"); }
inline StateVector switch_output() { return StateVector::parse("010001"); }
}  // namespace phase

struct CompileWarning {
  std::string code;  // "UnreachablePhase"
  StateVector state;
  std::string message;
};

struct CompileResult {
  KripkeStructure structure;
  std::vector<CompileWarning> warnings;
};

namespace detail {

inline bool has_action(const FlowEntry& e, auto pred) {
  for (const auto& a : e.instructions) {
    if (pred(a)) return true;
  }
  return false;
}

}  // namespace detail

/// Phase-level abstraction of a network: one state per lifecycle phase, an
/// edge wherever some switch or the controller can realise that step.
/// `faults` are extra transitions injected after construction.
inline CompileResult compile_to_kripke(const Network& net, const std::vector<Transition>& faults = {}) {
  if (net.switches.empty()) throw Error(ErrorCode::NoSwitch, "network declares no switch");
  if (!net.controller) throw Error(ErrorCode::NoController, "network declares no controller");

  auto to_ctrl = [](const Action& a) { return std::holds_alternative<ToController>(a); };
  auto forward = [](const Action& a) { return std::holds_alternative<Forward>(a); };
  bool miss = false;
  bool hit = net.config.size() > 0;
  for (const auto& sw : net.switches) {
    for (const auto& t : sw.tables) {
      miss = miss || detail::has_action(t.table_miss, to_ctrl);
      for (const auto& e : t.entries) {
        miss = miss || detail::has_action(e, to_ctrl);
        hit = hit || detail::has_action(e, forward);
      }
    }
  }

  using namespace phase;
  std::vector<Transition> edges{
      {controller_input(), rule_calculation()},
      {rule_calculation(), controller_output()},
      {controller_output(), switch_output()},
      {header_modification(), switch_output()},
      {switch_output(), switch_input()},
  };
  if (miss) edges.push_back({switch_input(), controller_input()});
  if (hit) edges.push_back({switch_input(), switch_output()});
  if (!net.controller->header_rewrites.empty()) edges.push_back({controller_output(), header_modification()});

  std::vector<StateVector> states{switch_input(),      controller_input(),    rule_calculation(),
                                  controller_output(), header_modification(), switch_output()};
  KripkeStructure k = build_kripke(sdn_atoms(), states, {switch_input()}, edges);
  for (const auto& [from, to] : faults) k = with_added_transition(k, from, to);

  CompileResult out{k, {}};
  auto live = reachable(k);
  for (const auto& s : k.states()) {
    if (!live.count(s)) {
      out.warnings.push_back({"UnreachablePhase", s, "phase " + s.to_string() + " is unreachable from 110000"});
    }
  }
  return out;
}

}  // namespace sdnmc::sdn
