#pragma once

#include <string>
#include <vector>

#include "sdnmc/atoms.hpp"
#include "sdnmc/ctl.hpp"

namespace sdnmc {

/// Atom names of the six-bit packet-lifecycle encoding, most significant first.
inline const std::vector<std::string>& sdn_atoms() {
  static const std::vector<std::string> atoms{"I", "W", "C", "FC", "Mh", "O"};
  return atoms;
}

/// Derived location atoms: W_ip = packet at a switch input port, and so on.
inline const AtomMacros& sdn_atom_macros() {
  static const AtomMacros macros{
      {"W_ip", {"I", "W"}},
      {"C_ip", {"I", "C"}},
      {"W_op", {"W", "O"}},
      {"C_op", {"C", "O"}},
  };
  return macros;
}

struct PropertyPreset {
  std::string name;
  std::string text;
  std::string description;
  CtlFormula formula;
};

inline std::vector<PropertyPreset> sdn_property_presets() {
  struct Row {
    const char* name;
    const char* text;
    const char* description;
  };
  static const Row rows[] = {
      {"P1", "AG(W_ip -> A[!W_ip W FC])", "no packet leaves a switch input before forwarding rules exist"},
      {"P2", "AG(C_ip -> AX(FC))", "a packet reaching the controller is always followed by rule calculation"},
      {"P3", "AG(W_ip & !FC -> AX(C_ip))", "a table miss at a switch input escalates to the controller"},
      {"P4", "AG(W_ip & FC -> AX(W_op))", "a switch input with rules available proceeds to an output port"},
  };
  std::vector<PropertyPreset> out;
  for (const auto& r : rows) out.push_back({r.name, r.text, r.description, parse_ctl(r.text)});
  return out;
}

inline PropertyPreset find_preset(const std::string& name) {
  for (auto& p : sdn_property_presets()) {
    if (p.name == name) return p;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown preset '" + name + "' (expected P1..P4)");
}

}  // namespace sdnmc
