#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sdnmc/kripke.hpp"

namespace sdnmc {

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

inline std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace detail

/// Parses the line-oriented Kripke text format:
///
///     atoms I W C FC Mh O
///     state 110000
///     init 110000
///     trans 110000 101000
///
/// `#` starts a comment. Duplicate states and width mismatches are rejected.
inline KripkeStructure parse_kripke_text(const std::string& text, const std::string& origin = "<input>") {
  std::vector<std::string> atoms;
  std::vector<StateVector> states;
  std::vector<StateVector> init;
  std::vector<Transition> transitions;
  std::set<StateVector> seen;

  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) -> Error {
    return Error(ErrorCode::ParseError, origin + ":" + std::to_string(line_no) + ": " + msg);
  };
  auto state_arg = [&](const std::string& tok) {
    StateVector s = [&] {
      try {
        return StateVector::parse(tok);
      } catch (const Error&) {
        throw fail("bad state '" + tok + "'");
      }
    }();
    if (atoms.empty()) throw fail("'atoms' must precede states");
    if (s.width() != atoms.size()) {
      throw Error(ErrorCode::WidthMismatch, origin + ":" + std::to_string(line_no) + ": state " + tok +
                                                " does not match " + std::to_string(atoms.size()) + " atoms");
    }
    return s;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    auto toks = detail::split_ws(detail::strip_comment(raw));
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    if (kw == "atoms") {
      if (!atoms.empty()) throw fail("duplicate 'atoms' line");
      if (toks.size() < 2) throw fail("'atoms' needs at least one name");
      atoms.assign(toks.begin() + 1, toks.end());
    } else if (kw == "state") {
      if (toks.size() != 2) throw fail("'state' takes one bit string");
      auto s = state_arg(toks[1]);
      if (!seen.insert(s).second) {
        throw Error(ErrorCode::DuplicateState, origin + ":" + std::to_string(line_no) + ": duplicate state " + toks[1]);
      }
      states.push_back(s);
    } else if (kw == "init") {
      if (toks.size() < 2) throw fail("'init' takes at least one bit string");
      for (std::size_t i = 1; i < toks.size(); ++i) init.push_back(state_arg(toks[i]));
    } else if (kw == "trans") {
      if (toks.size() != 3) throw fail("'trans' takes two bit strings");
      transitions.emplace_back(state_arg(toks[1]), state_arg(toks[2]));
    } else {
      throw fail("unknown directive '" + kw + "'");
    }
  }
  if (atoms.empty()) throw Error(ErrorCode::ParseError, origin + ": missing 'atoms' line");
  return build_kripke(atoms, states, init, transitions);
}

inline KripkeStructure load_kripke_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_kripke_text(buf.str(), path);
}

/// Canonical text form: states, init and transitions in ascending order.
inline std::string serialize_kripke(const KripkeStructure& k) {
  std::ostringstream out;
  out << "atoms";
  for (const auto& a : k.atoms()) out << ' ' << a;
  out << '\n';
  for (const auto& s : k.states()) out << "state " << s.to_string() << '\n';
  for (const auto& s : k.init()) out << "init " << s.to_string() << '\n';
  for (const auto& [from, to] : k.transitions()) out << "trans " << from.to_string() << ' ' << to.to_string() << '\n';
  return out.str();
}

/// Graphviz rendering. Initial states are drawn as double circles.
inline std::string export_dot(const KripkeStructure& k) {
  std::ostringstream out;
  out << "digraph kripke {\n";
  out << "  rankdir=LR;\n";
  for (const auto& s : k.states()) {
    std::string label;
    for (const auto& a : k.label(s)) label += (label.empty() ? "" : ",") + a;
    out << "  \"" << s.to_string() << "\" [label=\"" << s.to_string() << "\\n{" << label << "}\", shape="
        << (k.init().count(s) ? "doublecircle" : "circle") << "];\n";
  }
  for (const auto& [from, to] : k.transitions()) {
    out << "  \"" << from.to_string() << "\" -> \"" << to.to_string() << "\";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace sdnmc
