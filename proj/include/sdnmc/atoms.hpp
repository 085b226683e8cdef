#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "sdnmc/kripke.hpp"

namespace sdnmc {

struct NamedAtom {
  std::string name;
  friend bool operator==(const NamedAtom&, const NamedAtom&) = default;
};

/// `state=110000`: true exactly at that state.
struct StateLiteral {
  StateVector state;
  friend bool operator==(const StateLiteral&, const StateLiteral&) = default;
};

using AtomExpr = std::variant<NamedAtom, StateLiteral>;

inline std::string to_string(const AtomExpr& a) {
  if (const auto* n = std::get_if<NamedAtom>(&a)) return n->name;
  return "state=" + std::get<StateLiteral>(a).state.to_string();
}

/// Name -> list of atoms whose conjunction it abbreviates.
using AtomMacros = std::map<std::string, std::vector<std::string>>;

/// Resolves atom expressions against a structure's atom list plus optional
/// conjunction macros.
class AtomTable {
 public:
  AtomTable(std::vector<std::string> atoms, AtomMacros macros = {})
      : atoms_(std::move(atoms)), macros_(std::move(macros)) {}

  explicit AtomTable(const KripkeStructure& k, AtomMacros macros = {}) : AtomTable(k.atoms(), std::move(macros)) {}

  std::size_t width() const noexcept { return atoms_.size(); }
  const std::vector<std::string>& atoms() const noexcept { return atoms_; }
  const AtomMacros& macros() const noexcept { return macros_; }

  StatePredicate resolve(const AtomExpr& a) const {
    if (const auto* lit = std::get_if<StateLiteral>(&a)) {
      if (lit->state.width() != width()) {
        throw Error(ErrorCode::WidthMismatch,
                    "state literal " + lit->state.to_string() + " does not match width " + std::to_string(width()));
      }
      std::uint64_t all = width() == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width()) - 1);
      return {width(), all, lit->state.bits()};
    }
    const std::string& name = std::get<NamedAtom>(a).name;
    if (auto bit = bit_of(name)) {
      std::uint64_t m = std::uint64_t{1} << *bit;
      return {width(), m, m};
    }
    if (auto it = macros_.find(name); it != macros_.end()) {
      StatePredicate p{width(), 0, 0};
      for (const auto& part : it->second) {
        auto bit = bit_of(part);
        if (!bit) throw Error(ErrorCode::UnboundAtom, "macro '" + name + "' refers to unknown atom '" + part + "'");
        p.mask |= std::uint64_t{1} << *bit;
      }
      p.value = p.mask;
      return p;
    }
    throw Error(ErrorCode::UnboundAtom, "atom '" + name + "' is not bound");
  }

 private:
  std::optional<std::size_t> bit_of(const std::string& name) const {
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      if (atoms_[k] == name) return atoms_.size() - 1 - k;
    }
    return std::nullopt;
  }

  std::vector<std::string> atoms_;
  AtomMacros macros_;
};

}  // namespace sdnmc
