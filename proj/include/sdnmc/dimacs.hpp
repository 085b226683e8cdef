#pragma once

#include <cstdlib>
#include <sstream>
#include <string>

#include "sdnmc/sat.hpp"

namespace sdnmc {

/// DIMACS CNF with `c` comment lines for named variables.
inline std::string write_dimacs(const CnfFormula& cnf) {
  std::ostringstream out;
  for (const auto& [v, name] : cnf.names()) out << "c " << (v + 1) << ' ' << name << '\n';
  out << "p cnf " << cnf.num_vars() << ' ' << cnf.clauses().size() << '\n';
  for (const auto& c : cnf.clauses()) {
    for (const auto& l : c) out << l.dimacs() << ' ';
    out << "0\n";
  }
  return out.str();
}

inline CnfFormula read_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<CnfFormula> cnf;
  Clause current;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first == "c" || first[0] == '%') continue;
    if (first == "p") {
      std::string fmt;
      long vars = 0;
      long clauses = 0;
      if (!(ls >> fmt >> vars >> clauses) || fmt != "cnf" || vars < 0) {
        throw Error(ErrorCode::ParseError, "dimacs:" + std::to_string(line_no) + ": bad problem line");
      }
      cnf.emplace(static_cast<std::uint32_t>(vars));
      continue;
    }
    if (!cnf) throw Error(ErrorCode::ParseError, "dimacs:" + std::to_string(line_no) + ": clause before 'p' line");
    std::istringstream body(line);
    for (long lit; body >> lit;) {
      if (lit == 0) {
        cnf->add_clause(std::move(current));
        current.clear();
      } else {
        current.push_back({static_cast<std::uint32_t>(std::labs(lit) - 1), lit > 0});
      }
    }
  }
  if (!cnf) throw Error(ErrorCode::ParseError, "dimacs: missing 'p cnf' line");
  if (!current.empty()) cnf->add_clause(std::move(current));
  return *cnf;
}

/// Reads a solver model in the `v 1 -2 3 ... 0` convention.
inline Assignment read_dimacs_model(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Assignment a;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first != "v") continue;
    for (long lit; ls >> lit;) {
      if (lit != 0) a.set(static_cast<std::uint32_t>(std::labs(lit) - 1), lit > 0);
    }
  }
  return a;
}

}  // namespace sdnmc
