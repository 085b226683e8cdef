#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdnmc/bmc.hpp"
#include "sdnmc/bmc_oracle.hpp"
#include "sdnmc/sdn/compile.hpp"
#include "sdnmc/sdn/reference.hpp"

namespace sdnmc::cli {

struct ReproStep {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ReproReport {
  bool fault = true;
  std::vector<ReproStep> steps;

  bool passed() const {
    return std::all_of(steps.begin(), steps.end(), [](const ReproStep& s) { return s.passed; });
  }
};

/// The faulty edge from controller input straight to controller output.
inline Transition reference_fault() { return {sdn::phase::controller_input(), sdn::phase::controller_output()}; }

/// The run that skips rule calculation: switch input, controller input,
/// controller output.
inline std::vector<StateVector> reference_fault_trace() {
  return {sdn::phase::switch_input(), sdn::phase::controller_input(), sdn::phase::controller_output()};
}

inline std::string join_trace(const std::vector<StateVector>& trace) {
  std::string out;
  for (const auto& s : trace) out += (out.empty() ? "" : ",") + s.to_string();
  return out;
}

/// Rebuilds the reference structure, optionally injects the fault, encodes the
/// bound-2 search for F !p with p = rule calculation, solves it and checks the
/// known faulty run against the encoding and the unfaulted structure.
inline ReproReport run_paper_repro(bool inject_fault = true) {
  ReproReport r;
  r.fault = inject_fault;
  auto step = [&](std::string name, bool ok, std::string detail) {
    r.steps.push_back({std::move(name), ok, std::move(detail)});
    return ok;
  };
  const std::size_t d = 2;
  const auto p = sdn::phase::rule_calculation();
  const auto trace = reference_fault_trace();

  KripkeStructure base = sdn::compile_to_kripke(sdn::reference_network()).structure;
  step("reference structure", base.states().size() == 6 && base.transitions().size() == 8,
       std::to_string(base.states().size()) + " states, " + std::to_string(base.transitions().size()) + " transitions");

  KripkeStructure model = base;
  if (inject_fault) {
    model = with_added_transition(base, reference_fault().first, reference_fault().second);
    step("fault injection",
         model.transitions().size() == 9 && model.has_transition(reference_fault().first, reference_fault().second),
         "added " + reference_fault().first.to_string() + " -> " + reference_fault().second.to_string());
  }

  AtomTable atoms(model);
  LtlFormula f = LtlFormula::finally(LtlFormula::negation(LtlFormula::atom(StateLiteral{p})));
  BmcEncoding enc = encode_bmc(model, f, d, LoopMode::None, atoms);
  const std::size_t per_step = model.transitions().size();

  BoolExpr u = unroll(model, d, enc.vars);
  bool unroll_ok = u.op() == BoolOp::And && u.children().size() == d + 1;
  for (std::size_t i = 1; unroll_ok && i <= d; ++i) unroll_ok = u.children()[i].children().size() == per_step;
  step("unroll d=2", unroll_ok,
       std::to_string(enc.vars.count()) + " variables, " + std::to_string(per_step) + " disjuncts per step");

  Assignment known = encode_trace(trace, enc.vars);
  step("loop condition", enc.loops.per_step.size() == d + 1 && !evaluate(enc.loops.any, known),
       "L has " + std::to_string(enc.loops.per_step.size()) + " back-edge disjuncts; false on the faulty run");

  const BoolExpr& fp = enc.noloop_branch;
  step("translate F !p", fp.op() == BoolOp::Or && fp.children().size() == d + 1,
       "p = " + p.to_string() + ", " + std::to_string(fp.children().size()) + " disjuncts");

  const BoolExpr& top = enc.expression;
  step("combine query", top.op() == BoolOp::And && top.children().size() == d + 2 && top.children().back() == fp,
       "init, " + std::to_string(d) + " transition steps, property");

  CnfFormula cnf = bmc_cnf(enc);
  auto model_found = solve(cnf);
  bool solved = model_found.has_value();
  std::string solved_detail = "unsatisfiable";
  if (solved) {
    auto t = decode_trace(*model_found, enc.vars, d);
    solved = is_path_of(model, Path{t, std::nullopt}) && evaluate(top, *model_found) &&
             found(oracle_bounded_check(model, f, d, LoopMode::None, atoms));
    solved_detail = "witness " + join_trace(t) + " (" + std::to_string(cnf.num_vars()) + " vars, " +
                    std::to_string(cnf.clauses().size()) + " clauses)";
  }
  step("solve", solved, solved_detail);

  bool accepted = evaluate(top, known);
  if (inject_fault) {
    step("faulty run satisfies query", accepted, join_trace(trace) + (accepted ? " evaluates true" : " evaluates false"));
  } else {
    step("faulty run rejected", !accepted, join_trace(trace) + (accepted ? " evaluates true" : " evaluates false"));
  }

  bool absent = !is_path_of(base, Path{trace, std::nullopt});
  for (const auto& bp : enumerate_paths(base, d, false)) absent = absent && bp.states != trace;
  step("faulty run absent from correct model", absent, absent ? "no length-2 path matches" : "path exists");
  return r;
}

inline nlohmann::json to_json(const ReproReport& r) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : r.steps) steps.push_back({{"name", s.name}, {"passed", s.passed}, {"detail", s.detail}});
  return {{"fault", r.fault}, {"passed", r.passed()}, {"steps", steps}};
}

}  // namespace sdnmc::cli
