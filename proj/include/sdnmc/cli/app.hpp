#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdnmc/bmc.hpp"
#include "sdnmc/cli/repro.hpp"
#include "sdnmc/ctl.hpp"
#include "sdnmc/dimacs.hpp"
#include "sdnmc/kripke_io.hpp"
#include "sdnmc/presets.hpp"
#include "sdnmc/sdn.hpp"

namespace sdnmc::cli {

inline constexpr const char* kToolName = "sdnmc";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode { kExitOk = 0, kExitFailed = 1, kExitError = 2 };

namespace detail {

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

/// Raw Kripke text starts with an `atoms` directive; anything else is a network.
inline bool looks_like_kripke(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto words = sdnmc::detail::split_ws(sdnmc::detail::strip_comment(line));
    if (!words.empty()) return words[0] == "atoms";
  }
  return false;
}

inline Transition parse_fault(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::InvalidArgument, "fault must be FROM:TO, got '" + spec + "'");
  return {StateVector::parse(spec.substr(0, colon)), StateVector::parse(spec.substr(colon + 1))};
}

struct LoadedModel {
  KripkeStructure structure;
  bool network = false;
  std::vector<sdn::CompileWarning> warnings;
};

inline LoadedModel load_model(const std::string& path, const std::vector<std::string>& faults) {
  std::string text = read_text(path);
  std::vector<Transition> edges;
  for (const auto& f : faults) edges.push_back(parse_fault(f));
  if (looks_like_kripke(text)) {
    KripkeStructure k = parse_kripke_text(text, path);
    for (const auto& [from, to] : edges) {
      if (from.width() != k.width() || to.width() != k.width()) {
        throw Error(ErrorCode::WidthMismatch, "fault endpoints must have width " + std::to_string(k.width()));
      }
      k = with_added_transition(k, from, to);
    }
    return {k, false, {}};
  }
  auto compiled = sdn::compile_to_kripke(sdn::parse_network_text(text, path), edges);
  return {compiled.structure, true, compiled.warnings};
}

inline std::string trace_text(const std::vector<StateVector>& trace) {
  std::string out;
  for (const auto& s : trace) out += (out.empty() ? "" : " -> ") + s.to_string();
  return out;
}

inline nlohmann::json trace_json(const std::vector<StateVector>& trace) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : trace) out.push_back(s.to_string());
  return out;
}

inline std::string match_text(const sdn::Match& m, const sdn::FieldSchema& fields) {
  std::string out;
  for (std::size_t i = 0; i < m.fields.size(); ++i) {
    if (!m.fields[i]) continue;
    out += (out.empty() ? "" : " ") + (i < fields.names.size() ? fields.names[i] : std::to_string(i)) + "=" + *m.fields[i];
  }
  if (m.in_port) out += (out.empty() ? "" : " ") + std::string("in_port=") + std::to_string(*m.in_port);
  return out.empty() ? "*" : out;
}

inline std::string header_text(const sdn::PacketHeader& h, const sdn::FieldSchema& fields) {
  std::string out = "src=" + h.src + " dst=" + h.dst;
  for (std::size_t i = 0; i < h.pattern.size(); ++i) {
    if (!h.pattern[i].empty()) out += " " + fields.names.at(i + 2) + "=" + h.pattern[i];
  }
  return out;
}

inline nlohmann::json config_json(const sdn::NetworkConfig& cfg, const sdn::FieldSchema& fields) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [sw, rules] : cfg.rules) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& r : rules) list.push_back({{"match", match_text(r.match, fields)}, {"out_port", r.out_port}});
    out[sw] = list;
  }
  return out;
}

inline std::string config_text(const sdn::NetworkConfig& cfg, const sdn::FieldSchema& fields) {
  std::string out;
  for (const auto& [sw, rules] : cfg.rules) {
    for (const auto& r : rules) {
      out += (out.empty() ? "" : "; ") + sw + ": " + match_text(r.match, fields) + " -> " + std::to_string(r.out_port);
    }
  }
  return "{" + out + "}";
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
};

}  // namespace detail

struct CompileArgs {
  std::string input;
  std::string output;
  std::string dot;
  std::vector<std::string> faults;
};

struct CheckArgs {
  std::string input;
  std::string preset;
  std::string prop;
  std::string engine = "ctl";
  std::optional<std::size_t> bound;
  std::string loops = "standard";
  bool refute = false;
  std::vector<std::string> faults;
  std::string dump_cnf;
  bool json = false;
  bool no_timings = false;
};

struct SimulateArgs {
  std::string input;
  std::vector<std::string> packet;
  std::size_t max_steps = 64;
  bool modify = false;
  bool json = false;
};

struct ReproArgs {
  bool no_fault = false;
  bool json = false;
};

inline int cmd_compile(const CompileArgs& a, std::ostream& out, std::ostream& err) {
  std::string text = detail::read_text(a.input);
  std::vector<Transition> faults;
  for (const auto& f : a.faults) faults.push_back(detail::parse_fault(f));
  auto result = sdn::compile_to_kripke(sdn::parse_network_text(text, a.input), faults);
  for (const auto& w : result.warnings) err << "warning: " << w.code << ": " << w.message << '\n';
  std::string kripke = serialize_kripke(result.structure);
  if (a.output.empty()) {
    out << kripke;
  } else {
    detail::write_text(a.output, kripke);
  }
  if (!a.dot.empty()) detail::write_text(a.dot, export_dot(result.structure));
  return kExitOk;
}

inline int cmd_check(const CheckArgs& a, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  if (a.preset.empty() == a.prop.empty()) throw Error(ErrorCode::InvalidArgument, "give exactly one of --preset or --prop");
  if (a.engine != "ctl" && a.engine != "bmc") throw Error(ErrorCode::InvalidArgument, "unknown engine '" + a.engine + "'");
  detail::Timer timer;
  auto model = detail::load_model(a.input, a.faults);
  for (const auto& w : model.warnings) err << "warning: " << w.code << ": " << w.message << '\n';
  const KripkeStructure& k = model.structure;
  AtomTable atoms = model.network ? AtomTable(k, sdn_atom_macros()) : AtomTable(k);

  nlohmann::json verdict{{"tool", kToolName}, {"version", kToolVersion}, {"command", argv}};
  nlohmann::json result;
  std::string property;
  std::vector<std::string> lines;
  int code = kExitOk;

  if (a.engine == "ctl") {
    CtlFormula f = a.preset.empty() ? parse_ctl(a.prop) : find_preset(a.preset).formula;
    property = to_string(f);
    SatSet sat = check_ctl(k, f, atoms);
    if (holds_initially(k, sat)) {
      result = {{"kind", "Holds"}};
      lines.push_back("result: Holds");
    } else {
      code = kExitFailed;
      result = {{"kind", "Violated"}, {"trace", nullptr}};
      lines.push_back("result: Violated");
      if (f.op() == CtlOp::AG) {
        for (const auto& s0 : k.init()) {
          if (sat.contains(s0)) continue;
          Path p = ctl_witness_ag_violation(k, f, s0, atoms);
          result["trace"] = detail::trace_json(p.states);
          lines.push_back("witness: " + detail::trace_text(p.states));
          break;
        }
      }
    }
  } else {
    if (!a.preset.empty()) throw Error(ErrorCode::InvalidArgument, "presets are CTL properties; use --engine ctl");
    if (!a.bound) throw Error(ErrorCode::InvalidArgument, "--engine bmc requires --bound");
    LoopMode mode = parse_loop_mode(a.loops);
    LtlFormula f = parse_ltl(a.prop);
    property = to_string(f);
    CnfFormula cnf;
    BmcResult r = a.refute ? refute(k, f, *a.bound, mode, atoms, &cnf) : find_witness(k, f, *a.bound, mode, atoms, &cnf);
    if (!a.dump_cnf.empty()) detail::write_text(a.dump_cnf, write_dimacs(cnf));
    if (const auto* c = std::get_if<Counterexample>(&r)) {
      code = kExitFailed;
      const char* kind = a.refute ? "Violated" : "WitnessFound";
      result = to_json(*c);
      result["kind"] = kind;
      lines.push_back(std::string("result: ") + kind);
      lines.push_back("trace: " + detail::trace_text(c->trace));
      lines.push_back("loop_back: " + (c->loop_back ? std::to_string(*c->loop_back) : std::string("none")));
    } else {
      const auto& n = std::get<NoWitnessAtBound>(r);
      result = {{"kind", "NoWitnessAtBound"}, {"formula", n.formula}, {"bound", n.bound}, {"loop_mode", to_string(n.loop_mode)}};
      lines.push_back("result: NoWitnessAtBound (bound " + std::to_string(n.bound) + ")");
    }
  }

  verdict["property"] = property;
  verdict["engine"] = a.engine;
  verdict["result"] = result;
  if (!a.no_timings) verdict["time_ms"] = timer.ms();
  if (a.json) {
    out << verdict.dump(2) << '\n';
  } else {
    out << "model: " << a.input << " (" << (model.network ? "network" : "kripke") << ", " << k.states().size()
        << " states, " << k.transitions().size() << " transitions)\n";
    out << "property: " << property << " [" << a.engine << "]\n";
    for (const auto& l : lines) out << l << '\n';
    if (!a.no_timings) out << "time: " << timer.ms() << " ms\n";
  }
  return code;
}

inline int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  auto net = sdn::parse_network_text(detail::read_text(a.input), a.input);
  sdn::Packet pkt{net.fields.header(a.packet.at(0), a.packet.at(1)), ""};
  auto run = sdn::simulate_run(net, pkt, a.max_steps, {a.modify});

  std::string outcome;
  std::string reason;
  int code = kExitFailed;
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, sdn::run_outcome::Delivered>) {
          outcome = "Delivered";
          reason = o.host;
          code = kExitOk;
        } else if constexpr (std::is_same_v<T, sdn::run_outcome::Dropped>) {
          outcome = "Dropped";
          reason = o.reason;
        } else if constexpr (std::is_same_v<T, sdn::run_outcome::ToControllerPending>) {
          outcome = "ToControllerPending";
        } else {
          outcome = "StepLimit";
        }
      },
      run.outcome);

  if (a.json) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : run.steps) {
      steps.push_back({{"kind", s.kind == sdn::NodeKind::Switch ? "switch" : "controller"},
                       {"node", s.node},
                       {"packet", detail::header_text(s.packet.header, net.fields)},
                       {"config", detail::config_json(s.config, net.fields)}});
    }
    nlohmann::json j{{"tool", kToolName}, {"version", kToolVersion}, {"steps", steps},
                     {"outcome", {{"kind", outcome}, {"detail", reason}}},
                     {"controller_visits", run.controller_visits()}, {"lookups", run.lookups},
                     {"final_config", detail::config_json(run.final_config, net.fields)}};
    out << j.dump(2) << '\n';
  } else {
    for (std::size_t i = 0; i < run.steps.size(); ++i) {
      const auto& s = run.steps[i];
      out << "step " << i << ": " << (s.kind == sdn::NodeKind::Switch ? "switch " : "") << s.node << " | "
          << detail::header_text(s.packet.header, net.fields) << " | config " << detail::config_text(s.config, net.fields)
          << '\n';
    }
    out << "outcome: " << outcome << (reason.empty() ? "" : " (" + reason + ")") << '\n';
    out << "controller visits: " << run.controller_visits() << '\n';
  }
  return code;
}

inline int cmd_paper_repro(const ReproArgs& a, std::ostream& out) {
  ReproReport r = run_paper_repro(!a.no_fault);
  if (a.json) {
    out << to_json(r).dump(2) << '\n';
  } else {
    for (const auto& s : r.steps) out << (s.passed ? "PASS " : "FAIL ") << s.name << ": " << s.detail << '\n';
    out << (r.passed() ? "all steps passed" : "some steps failed") << '\n';
  }
  return r.passed() ? kExitOk : kExitFailed;
}

/// Entry point shared by the executable and the tests. args excludes the
/// program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model checking for software-defined networks", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  CompileArgs ca;
  auto* compile = app.add_subcommand("compile", "Compile a network file to a Kripke structure");
  compile->add_option("input", ca.input, "Network file")->required();
  compile->add_option("-o,--output", ca.output, "Kripke output path (default: standard output)");
  compile->add_option("--dot", ca.dot, "Graphviz output path");
  compile->add_option("--fault", ca.faults, "Extra transition FROM:TO (repeatable)");

  CheckArgs ka;
  auto* check = app.add_subcommand("check", "Check a CTL or bounded LTL property");
  check->add_option("input", ka.input, "Network or Kripke file")->required();
  auto* preset = check->add_option("--preset", ka.preset, "Property preset P1..P4");
  auto* prop = check->add_option("--prop", ka.prop, "Property text");
  preset->excludes(prop);
  check->add_option("--engine", ka.engine, "ctl or bmc")->check(CLI::IsMember({"ctl", "bmc"}));
  check->add_option("--bound", ka.bound, "BMC bound");
  check->add_option("--loops", ka.loops, "BMC loop handling: none or standard")->check(CLI::IsMember({"none", "standard"}));
  check->add_flag("--refute", ka.refute, "Search for a counterexample to the property");
  check->add_option("--fault", ka.faults, "Extra transition FROM:TO (repeatable)");
  check->add_option("--dump-cnf", ka.dump_cnf, "Write the solved CNF in DIMACS format");
  check->add_flag("--json", ka.json, "Print the verdict as JSON");
  check->add_flag("--no-timings", ka.no_timings, "Omit timings from the output");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Follow one packet through the network");
  simulate->add_option("input", sa.input, "Network file")->required();
  simulate->add_option("--packet", sa.packet, "Source and destination host")->expected(2)->required();
  simulate->add_option("--max-steps", sa.max_steps, "Step limit")->check(CLI::PositiveNumber);
  simulate->add_flag("--modify", sa.modify, "Apply controller header rewrites");
  simulate->add_flag("--json", sa.json, "Print the run as JSON");

  ReproArgs ra;
  auto* repro = app.add_subcommand("paper-repro", "Reproduce the faulty-controller bounded model checking example");
  repro->add_flag("--no-fault", ra.no_fault, "Run against the correct model");
  repro->add_flag("--json", ra.json, "Print the step report as JSON");

  std::vector<std::string> storage{kToolName};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitError;
  }

  try {
    if (*compile) return cmd_compile(ca, out, err);
    if (*check) return cmd_check(ka, args, out, err);
    if (*simulate) return cmd_simulate(sa, out);
    return cmd_paper_repro(ra, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace sdnmc::cli
