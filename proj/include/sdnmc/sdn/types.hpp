#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "sdnmc/error.hpp"

namespace sdnmc::sdn {

/// Header fields are addressed positionally: 0 = src, 1 = dst, 2.. = pattern.
struct PacketHeader {
  std::string src;
  std::string dst;
  std::vector<std::string> pattern;

  std::size_t arity() const noexcept { return 2 + pattern.size(); }

  const std::string& field(std::size_t i) const {
    if (i == 0) return src;
    if (i == 1) return dst;
    if (i - 2 >= pattern.size()) throw Error(ErrorCode::ArityMismatch, "no header field " + std::to_string(i));
    return pattern[i - 2];
  }

  void set_field(std::size_t i, std::string value) {
    if (i == 0) {
      src = std::move(value);
    } else if (i == 1) {
      dst = std::move(value);
    } else if (i - 2 < pattern.size()) {
      pattern[i - 2] = std::move(value);
    } else {
      throw Error(ErrorCode::ArityMismatch, "no header field " + std::to_string(i));
    }
  }

  friend auto operator<=>(const PacketHeader&, const PacketHeader&) = default;
};

struct Packet {
  PacketHeader header;
  std::string payload;

  friend bool operator==(const Packet&, const Packet&) = default;
};

/// Field names of a network; src and dst always come first.
struct FieldSchema {
  std::vector<std::string> names{"src", "dst"};

  std::size_t arity() const noexcept { return names.size(); }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return i;
    }
    return std::nullopt;
  }

  PacketHeader header(std::string src, std::string dst) const {
    return PacketHeader{std::move(src), std::move(dst), std::vector<std::string>(names.size() - 2)};
  }
};

enum class Direction { Input, Output };

struct Port {
  int id = 0;
  Direction direction = Direction::Input;

  friend bool operator==(const Port&, const Port&) = default;
};

/// Exact-or-wildcard per field plus an optional ingress-port constraint.
struct Match {
  std::vector<std::optional<std::string>> fields;
  std::optional<int> in_port;

  static Match any(std::size_t arity) { return Match{std::vector<std::optional<std::string>>(arity), std::nullopt}; }

  bool matches(const PacketHeader& h, std::optional<int> ingress = std::nullopt) const {
    if (fields.size() != h.arity()) {
      throw Error(ErrorCode::ArityMismatch, "match has " + std::to_string(fields.size()) + " fields, header has " +
                                                std::to_string(h.arity()));
    }
    if (in_port && ingress && *in_port != *ingress) return false;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (fields[i] && *fields[i] != h.field(i)) return false;
    }
    return true;
  }

  friend auto operator<=>(const Match&, const Match&) = default;
};

struct Forward {
  int port = 0;
  friend bool operator==(const Forward&, const Forward&) = default;
};
struct Drop {
  friend bool operator==(const Drop&, const Drop&) = default;
};
struct ToController {
  friend bool operator==(const ToController&, const ToController&) = default;
};
struct GotoTable {
  std::size_t table = 0;
  friend bool operator==(const GotoTable&, const GotoTable&) = default;
};
struct SetField {
  std::size_t field = 0;
  std::string value;
  friend bool operator==(const SetField&, const SetField&) = default;
};

using Action = std::variant<Forward, Drop, ToController, GotoTable, SetField>;

struct FlowEntry {
  Match match;
  int priority = 0;
  std::uint64_t counter = 0;
  std::vector<Action> instructions;
  std::uint32_t idle_timeout = 0;
  std::uint32_t hard_timeout = 0;
  std::uint64_t cookie = 0;
  std::set<std::string> flags;

  friend bool operator==(const FlowEntry&, const FlowEntry&) = default;
};

struct FlowTable {
  std::size_t index = 0;
  std::vector<FlowEntry> entries;
  FlowEntry table_miss;

  friend bool operator==(const FlowTable&, const FlowTable&) = default;
};

/// The mandatory lowest-priority entry: all wildcards, one action.
inline FlowEntry make_table_miss(std::size_t arity, Action action = ToController{}) {
  FlowEntry e;
  e.match = Match::any(arity);
  e.priority = 0;
  e.instructions = {std::move(action)};
  return e;
}

struct ForwardingRule {
  Match match;
  int out_port = 0;

  friend auto operator<=>(const ForwardingRule&, const ForwardingRule&) = default;
};

struct Switch {
  std::string id;
  std::vector<Port> ports;
  std::vector<FlowTable> tables;
  unsigned trust_labels = 0;

  bool has_port(int id_, Direction d) const {
    for (const auto& p : ports) {
      if (p.id == id_ && p.direction == d) return true;
    }
    return false;
  }
};

struct RewriteRule {
  Match match;
  std::vector<std::pair<std::size_t, std::string>> sets;
};

struct ControlTransition {
  std::string from;
  std::string rewrite;
  std::string calc;
  std::string to;
};

struct Controller {
  std::set<std::string> states;
  std::set<std::string> init_states;
  std::vector<RewriteRule> header_rewrites;
  std::vector<ControlTransition> transitions;
  int rule_priority = 100;
};

struct PortRef {
  std::string sw;
  int port = 0;

  friend auto operator<=>(const PortRef&, const PortRef&) = default;
};

inline std::string to_string(const PortRef& p) { return p.sw + ":" + std::to_string(p.port); }

struct Topology {
  std::map<PortRef, PortRef> links;  // (switch, output port) -> (switch, input port)
  std::map<std::string, PortRef> hosts;

  std::optional<std::string> host_at(const PortRef& p) const {
    for (const auto& [name, at] : hosts) {
      if (at == p) return name;
    }
    return std::nullopt;
  }
};

/// ConfiG: switch id -> installed forwarding rules, in installation order.
struct NetworkConfig {
  std::map<std::string, std::vector<ForwardingRule>> rules;

  /// Returns false when the rule was already installed.
  bool install(const std::string& sw, const ForwardingRule& r) {
    auto& list = rules[sw];
    for (const auto& x : list) {
      if (x == r) return false;
    }
    list.push_back(r);
    return true;
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& [sw, list] : rules) n += list.size();
    return n;
  }

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

struct Network {
  FieldSchema fields;
  std::vector<Switch> switches;
  std::optional<Controller> controller;
  Topology topology;
  NetworkConfig config;

  const Switch* find_switch(const std::string& id) const {
    for (const auto& s : switches) {
      if (s.id == id) return &s;
    }
    return nullptr;
  }

  const Switch& require_switch(const std::string& id) const {
    if (const auto* s = find_switch(id)) return *s;
    throw Error(ErrorCode::UnknownSwitch, "no switch '" + id + "'");
  }
};

}  // namespace sdnmc::sdn
