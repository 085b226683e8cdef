#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sdnmc/error.hpp"
#include "sdnmc/state_vector.hpp"

namespace sdnmc {

using Transition = std::pair<StateVector, StateVector>;

/// Finite Kripke structure M = (Init, States, Transition, Labelling) over
/// bit-vector states. Atom i labels exactly the states with b[i] = 1, so the
/// labelling is never stored separately. Immutable once built.
class KripkeStructure {
 public:
  /// Validates and builds a structure. Throws Error on empty init, width
  /// mismatches, unknown init states, dangling transition endpoints, and
  /// states without a successor.
  static KripkeStructure build(std::vector<std::string> atoms, const std::vector<StateVector>& states,
                               const std::vector<StateVector>& init, const std::vector<Transition>& transitions) {
    if (atoms.empty()) throw Error(ErrorCode::WidthMismatch, "structure needs at least one atom");
    if (states.empty()) throw Error(ErrorCode::InvalidArgument, "structure needs at least one state");
    if (init.empty()) throw Error(ErrorCode::EmptyInit, "no initial state");
    {
      std::set<std::string> seen;
      for (const auto& a : atoms) {
        if (!seen.insert(a).second) throw Error(ErrorCode::DuplicateAtom, "duplicate atom '" + a + "'");
      }
    }

    KripkeStructure k;
    k.atoms_ = std::move(atoms);
    const std::size_t width = k.atoms_.size();
    auto check_width = [width](const StateVector& s) {
      if (s.width() != width) {
        throw Error(ErrorCode::WidthMismatch, "state " + s.to_string() + " has width " + std::to_string(s.width()) +
                                                  ", expected " + std::to_string(width));
      }
    };

    for (const auto& s : states) {
      check_width(s);
      k.states_.push_back(s);
    }
    std::sort(k.states_.begin(), k.states_.end());
    if (auto dup = std::adjacent_find(k.states_.begin(), k.states_.end()); dup != k.states_.end()) {
      throw Error(ErrorCode::DuplicateState, "duplicate state " + dup->to_string());
    }

    for (const auto& s : init) {
      check_width(s);
      if (!k.contains(s)) throw Error(ErrorCode::UnknownState, "initial state " + s.to_string() + " is not a state");
      k.init_.insert(s);
    }

    k.successors_.assign(k.states_.size(), {});
    for (const auto& t : transitions) {
      check_width(t.first);
      check_width(t.second);
      auto from = k.index_of(t.first);
      auto to = k.index_of(t.second);
      if (!from || !to) {
        throw Error(ErrorCode::DanglingTransitionEndpoint,
                    "transition " + t.first.to_string() + " -> " + t.second.to_string() + " leaves the state set");
      }
      if (k.transitions_.insert(t).second) k.successors_[*from].push_back(*to);
    }
    for (std::size_t i = 0; i < k.states_.size(); ++i) {
      if (k.successors_[i].empty()) {
        throw Error(ErrorCode::NonTotalState, "state " + k.states_[i].to_string() + " has no successor");
      }
      std::sort(k.successors_[i].begin(), k.successors_[i].end());
    }
    return k;
  }

  const std::vector<std::string>& atoms() const noexcept { return atoms_; }
  std::size_t width() const noexcept { return atoms_.size(); }
  /// States in ascending order.
  const std::vector<StateVector>& states() const noexcept { return states_; }
  const std::set<StateVector>& init() const noexcept { return init_; }
  const std::set<Transition>& transitions() const noexcept { return transitions_; }

  std::optional<std::size_t> index_of(const StateVector& s) const {
    auto it = std::lower_bound(states_.begin(), states_.end(), s);
    if (it == states_.end() || *it != s) return std::nullopt;
    return static_cast<std::size_t>(it - states_.begin());
  }

  bool contains(const StateVector& s) const { return index_of(s).has_value(); }

  std::size_t require_index(const StateVector& s) const {
    auto idx = index_of(s);
    if (!idx) throw Error(ErrorCode::UnknownState, "unknown state " + s.to_string());
    return *idx;
  }

  /// Successor indices of state index i, ascending.
  const std::vector<std::size_t>& successor_indices(std::size_t i) const { return successors_.at(i); }

  bool has_transition(const StateVector& from, const StateVector& to) const {
    return transitions_.count({from, to}) != 0;
  }

  /// L(s): the atoms whose bit is set in s.
  std::vector<std::string> label(const StateVector& s) const {
    std::vector<std::string> out;
    for (std::size_t i = width(); i-- > 0;) {
      if (s.bit(i)) out.push_back(atom_of_bit(i));
    }
    return out;
  }

  /// Atoms are listed most-significant first, so atoms()[0] names b[width-1].
  const std::string& atom_of_bit(std::size_t bit) const { return atoms_.at(width() - 1 - bit); }

  std::optional<std::size_t> bit_of_atom(const std::string& name) const {
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      if (atoms_[k] == name) return width() - 1 - k;
    }
    return std::nullopt;
  }

  friend bool operator==(const KripkeStructure& a, const KripkeStructure& b) {
    return a.atoms_ == b.atoms_ && a.states_ == b.states_ && a.init_ == b.init_ && a.transitions_ == b.transitions_;
  }

 private:
  KripkeStructure() = default;

  std::vector<std::string> atoms_;
  std::vector<StateVector> states_;
  std::set<StateVector> init_;
  std::set<Transition> transitions_;
  std::vector<std::vector<std::size_t>> successors_;
};

inline KripkeStructure build_kripke(std::vector<std::string> atoms, const std::vector<StateVector>& states,
                                    const std::vector<StateVector>& init, const std::vector<Transition>& transitions) {
  return KripkeStructure::build(std::move(atoms), states, init, transitions);
}

inline std::set<StateVector> successors(const KripkeStructure& k, const StateVector& s) {
  std::set<StateVector> out;
  for (std::size_t j : k.successor_indices(k.require_index(s))) out.insert(k.states()[j]);
  return out;
}

inline KripkeStructure with_added_transition(const KripkeStructure& k, const StateVector& from, const StateVector& to) {
  k.require_index(from);
  k.require_index(to);
  std::vector<Transition> transitions(k.transitions().begin(), k.transitions().end());
  transitions.emplace_back(from, to);
  return build_kripke(k.atoms(), k.states(), {k.init().begin(), k.init().end()}, transitions);
}

/// Finite path, optionally closed into a lasso: after the last state the run
/// continues at states[*loop_back].
struct Path {
  std::vector<StateVector> states;
  std::optional<std::size_t> loop_back;

  friend bool operator==(const Path&, const Path&) = default;
};

/// True when every step (and the closing edge, if any) is a transition of k.
inline bool is_path_of(const KripkeStructure& k, const Path& p) {
  if (p.states.empty()) return false;
  for (const auto& s : p.states) {
    if (!k.contains(s)) return false;
  }
  for (std::size_t i = 0; i + 1 < p.states.size(); ++i) {
    if (!k.has_transition(p.states[i], p.states[i + 1])) return false;
  }
  if (p.loop_back) {
    if (*p.loop_back >= p.states.size()) return false;
    if (!k.has_transition(p.states.back(), p.states[*p.loop_back])) return false;
  }
  return true;
}

/// A walk of d+1 states from an initial state together with every index l
/// such that (last, states[l]) is a transition.
struct BoundedPath {
  std::vector<StateVector> states;
  std::vector<std::size_t> loop_backs;

  Path prefix() const { return Path{states, std::nullopt}; }
  Path lasso(std::size_t l) const { return Path{states, l}; }
  bool has_loop() const { return !loop_backs.empty(); }
};

/// Every walk with exactly d+1 states starting in an initial state, in
/// lexicographic order of state indices.
inline std::vector<BoundedPath> enumerate_paths(const KripkeStructure& k, std::size_t d, bool with_loop_info) {
  std::vector<BoundedPath> out;
  std::vector<std::size_t> walk;
  auto emit = [&] {
    BoundedPath p;
    for (std::size_t i : walk) p.states.push_back(k.states()[i]);
    if (with_loop_info) {
      for (std::size_t l = 0; l < walk.size(); ++l) {
        if (k.has_transition(p.states.back(), p.states[l])) p.loop_backs.push_back(l);
      }
    }
    out.push_back(std::move(p));
  };
  auto extend = [&](auto&& self) -> void {
    if (walk.size() == d + 1) {
      emit();
      return;
    }
    for (std::size_t next : k.successor_indices(walk.back())) {
      walk.push_back(next);
      self(self);
      walk.pop_back();
    }
  };
  for (const auto& s : k.init()) {
    walk.assign(1, k.require_index(s));
    extend(extend);
  }
  return out;
}

inline std::set<StateVector> reachable(const KripkeStructure& k) {
  std::vector<bool> seen(k.states().size(), false);
  std::deque<std::size_t> queue;
  for (const auto& s : k.init()) {
    std::size_t i = k.require_index(s);
    if (!seen[i]) {
      seen[i] = true;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    for (std::size_t j : k.successor_indices(i)) {
      if (!seen[j]) {
        seen[j] = true;
        queue.push_back(j);
      }
    }
  }
  std::set<StateVector> out;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.insert(k.states()[i]);
  }
  return out;
}

}  // namespace sdnmc
