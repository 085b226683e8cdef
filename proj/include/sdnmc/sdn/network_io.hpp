#pragma once

#include <charconv>
#include <fstream>
#include <sstream>

#include "sdnmc/kripke_io.hpp"
#include "sdnmc/sdn/types.hpp"

namespace sdnmc::sdn {

namespace detail {

class NetworkParser {
 public:
  NetworkParser(std::string origin) : origin_(std::move(origin)) {}

  Network parse(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_;
      auto words = sdnmc::detail::split_ws(sdnmc::detail::strip_comment(raw));
      if (words.empty()) continue;
      directive(words);
    }
    validate();
    return std::move(net_);
  }

 private:
  enum class Section { None, Switches, Controller, Topology, Hosts, Config };

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ParseError, origin_ + ":" + std::to_string(line_) + ": " + msg);
  }
  [[noreturn]] static void invalid(const std::string& msg) { throw Error(ErrorCode::ValidationError, msg); }

  void expect_words(const std::vector<std::string>& w, std::size_t n) const {
    if (w.size() != n) fail("'" + w[0] + "' takes " + std::to_string(n - 1) + " argument(s)");
  }

  template <typename T>
  T number(const std::string& s) const {
    T v{};
    int base = 10;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
      b += 2;
      base = 16;
    }
    auto [p, ec] = std::from_chars(b, e, v, base);
    if (ec != std::errc() || p != e) fail("expected a number, found '" + s + "'");
    return v;
  }

  static std::pair<std::string, std::string> key_value(const std::string& tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) return {tok, ""};
    return {tok.substr(0, eq), tok.substr(eq + 1)};
  }

  PortRef port_ref(const std::string& s) const {
    auto colon = s.find(':');
    if (colon == std::string::npos || colon == 0) fail("expected SWITCH:PORT, found '" + s + "'");
    return PortRef{s.substr(0, colon), number<int>(s.substr(colon + 1))};
  }

  std::size_t field_index(const std::string& name) const {
    auto f = net_.fields.find(name);
    if (!f) fail("unknown header field '" + name + "'");
    return *f;
  }

  // Consumes FIELD=VALUE (and in_port=N when allowed) tokens from w[i..].
  Match match_tokens(const std::vector<std::string>& w, std::size_t& i, bool allow_in_port) const {
    Match m = Match::any(net_.fields.arity());
    for (; i < w.size(); ++i) {
      auto [k, v] = key_value(w[i]);
      if (v.empty()) break;
      if (k == "in_port" && allow_in_port) {
        m.in_port = number<int>(v);
        continue;
      }
      if (!net_.fields.find(k)) break;
      if (v != "*") m.fields[field_index(k)] = v;
    }
    return m;
  }

  Action action(const std::string& tok) const {
    if (tok == "drop") return Drop{};
    if (tok == "to_controller") return ToController{};
    if (tok.rfind("forward:", 0) == 0) return Forward{number<int>(tok.substr(8))};
    if (tok.rfind("goto:", 0) == 0) return GotoTable{number<std::size_t>(tok.substr(5))};
    if (tok.rfind("set:", 0) == 0) {
      auto [k, v] = key_value(tok.substr(4));
      if (v.empty()) fail("set action needs FIELD=VALUE");
      return SetField{field_index(k), v};
    }
    fail("unknown action '" + tok + "'");
  }

  std::vector<Action> actions(const std::string& list) const {
    std::vector<Action> out;
    std::stringstream ss(list);
    for (std::string tok; std::getline(ss, tok, ',');) out.push_back(action(tok));
    if (out.empty()) fail("empty action list");
    return out;
  }

  Switch& current_switch() {
    if (net_.switches.empty()) fail("'" + std::string("switch") + "' expected first");
    return net_.switches.back();
  }

  void directive(const std::vector<std::string>& w) {
    const std::string& d = w[0];
    static const std::map<std::string, Section> kSections{{"switches", Section::Switches},
                                                          {"controller", Section::Controller},
                                                          {"topology", Section::Topology},
                                                          {"hosts", Section::Hosts},
                                                          {"config", Section::Config}};
    if (auto it = kSections.find(d); it != kSections.end() && w.size() == 1) {
      section_ = it->second;
      if (section_ == Section::Controller) {
        if (net_.controller) fail("duplicate controller section");
        net_.controller.emplace();
      }
      return;
    }
    if (d == "fields") {
      if (section_ != Section::None || !net_.switches.empty()) fail("'fields' must precede all sections");
      for (std::size_t i = 1; i < w.size(); ++i) {
        static const std::set<std::string> kReserved{"match", "in_port", "priority", "actions",
                                                     "idle",  "hard",    "cookie",   "flags"};
        if (kReserved.count(w[i])) fail("'" + w[i] + "' is reserved and cannot name a field");
        if (net_.fields.find(w[i])) fail("duplicate field '" + w[i] + "'");
        net_.fields.names.push_back(w[i]);
      }
      return;
    }
    switch (section_) {
      case Section::Switches: return switch_directive(w);
      case Section::Controller: return controller_directive(w);
      case Section::Topology:
        if (d == "link" && w.size() == 4 && w[2] == "->") {
          PortRef from = port_ref(w[1]);
          if (net_.topology.links.count(from)) invalid("output port " + to_string(from) + " appears in two links");
          net_.topology.links[from] = port_ref(w[3]);
          return;
        }
        fail("expected 'link SW:OUT -> SW:IN'");
      case Section::Hosts:
        if (d == "host" && w.size() == 3) {
          if (net_.topology.hosts.count(w[1])) invalid("duplicate host '" + w[1] + "'");
          net_.topology.hosts[w[1]] = port_ref(w[2]);
          return;
        }
        fail("expected 'host NAME SW:PORT'");
      case Section::Config: {
        // rule SW match FIELD=V ... -> PORT
        if (d != "rule" || w.size() < 5 || w[2] != "match") fail("expected 'rule SW match FIELD=VALUE... -> PORT'");
        std::size_t i = 3;
        Match m = match_tokens(w, i, true);
        if (i + 2 != w.size() || w[i] != "->") fail("expected '-> PORT' after rule match");
        config_rules_.push_back({w[1], ForwardingRule{m, number<int>(w[i + 1])}, line_});
        return;
      }
      case Section::None: break;
    }
    fail("unknown directive '" + d + "'");
  }

  void switch_directive(const std::vector<std::string>& w) {
    const std::string& d = w[0];
    if (d == "switch") {
      if (w.size() < 2 || w.size() > 3) fail("expected 'switch ID [trust=N]'");
      if (net_.find_switch(w[1])) invalid("duplicate switch '" + w[1] + "'");
      Switch s;
      s.id = w[1];
      if (w.size() == 3) {
        auto [k, v] = key_value(w[2]);
        if (k != "trust") fail("unknown switch attribute '" + k + "'");
        s.trust_labels = number<unsigned>(v);
      }
      net_.switches.push_back(std::move(s));
      return;
    }
    Switch& s = current_switch();
    if (d == "in" || d == "out") {
      expect_words(w, 2);
      Direction dir = d == "in" ? Direction::Input : Direction::Output;
      int id = number<int>(w[1]);
      if (id < 0) fail("port ids are non-negative");
      if (s.has_port(id, dir)) invalid(s.id + ": duplicate " + d + " port " + w[1]);
      s.ports.push_back({id, dir});
      return;
    }
    if (d == "table") {
      if (w.size() < 2 || w.size() > 3) fail("expected 'table N [miss=ACTION]'");
      std::size_t idx = number<std::size_t>(w[1]);
      if (idx != s.tables.size()) invalid(s.id + ": table " + w[1] + " out of order (expected " +
                                          std::to_string(s.tables.size()) + ")");
      Action miss = ToController{};
      if (w.size() == 3) {
        auto [k, v] = key_value(w[2]);
        if (k != "miss") fail("unknown table attribute '" + k + "'");
        miss = action(v);
        if (std::holds_alternative<SetField>(miss) || std::holds_alternative<Forward>(miss)) {
          fail("table miss must be to_controller, drop or goto:N");
        }
      }
      s.tables.push_back(FlowTable{idx, {}, make_table_miss(net_.fields.arity(), miss)});
      return;
    }
    if (d == "entry") {
      if (s.tables.empty()) fail("'entry' before any 'table'");
      FlowEntry e;
      e.match = Match::any(net_.fields.arity());
      bool have_actions = false;
      for (std::size_t i = 1; i < w.size();) {
        if (w[i] == "match") {
          ++i;
          e.match = match_tokens(w, i, true);
          continue;
        }
        auto [k, v] = key_value(w[i]);
        if (k == "priority") {
          e.priority = number<int>(v);
          if (e.priority < 0) fail("priority must be non-negative");
        } else if (k == "actions") {
          e.instructions = actions(v);
          have_actions = true;
        } else if (k == "idle") {
          e.idle_timeout = number<std::uint32_t>(v);
        } else if (k == "hard") {
          e.hard_timeout = number<std::uint32_t>(v);
        } else if (k == "cookie") {
          e.cookie = number<std::uint64_t>(v);
        } else if (k == "flags") {
          std::stringstream ss(v);
          for (std::string f; std::getline(ss, f, ',');) {
            if (!f.empty()) e.flags.insert(f);
          }
        } else {
          fail("unknown entry attribute '" + w[i] + "'");
        }
        ++i;
      }
      if (!have_actions) fail("entry needs actions=...");
      s.tables.back().entries.push_back(std::move(e));
      return;
    }
    fail("unknown switch directive '" + d + "'");
  }

  void controller_directive(const std::vector<std::string>& w) {
    Controller& c = *net_.controller;
    const std::string& d = w[0];
    if (d == "state") {
      if (w.size() < 2 || w.size() > 3 || (w.size() == 3 && w[2] != "init")) fail("expected 'state ID [init]'");
      c.states.insert(w[1]);
      if (w.size() == 3) c.init_states.insert(w[1]);
      return;
    }
    if (d == "rewrite") {
      std::size_t i = 1;
      RewriteRule rw{match_tokens(w, i, false), {}};
      if (i >= w.size() || w[i] != "->") fail("expected 'rewrite FIELD=V... -> FIELD=V...'");
      for (++i; i < w.size(); ++i) {
        auto [k, v] = key_value(w[i]);
        if (v.empty()) fail("expected FIELD=VALUE, found '" + w[i] + "'");
        rw.sets.emplace_back(field_index(k), v);
      }
      if (rw.sets.empty()) fail("rewrite sets no field");
      c.header_rewrites.push_back(std::move(rw));
      return;
    }
    if (d == "trans") {
      expect_words(w, 5);
      c.transitions.push_back({w[1], w[2], w[3], w[4]});
      return;
    }
    if (d == "rule_priority") {
      expect_words(w, 2);
      c.rule_priority = number<int>(w[1]);
      return;
    }
    fail("unknown controller directive '" + d + "'");
  }

  void validate() {
    for (const auto& s : net_.switches) {
      bool in = false;
      bool out = false;
      for (const auto& p : s.ports) (p.direction == Direction::Input ? in : out) = true;
      if (!in || !out) invalid("switch " + s.id + " needs at least one input and one output port");
      if (s.tables.empty()) invalid("switch " + s.id + " has no flow table");
      for (const auto& t : s.tables) {
        auto check = [&](const FlowEntry& e) {
          for (const auto& a : e.instructions) {
            if (const auto* f = std::get_if<Forward>(&a); f && !s.has_port(f->port, Direction::Output)) {
              invalid(s.id + ": forward to missing output port " + std::to_string(f->port));
            }
            if (const auto* g = std::get_if<GotoTable>(&a); g && (g->table <= t.index || g->table >= s.tables.size())) {
              invalid(s.id + ": table " + std::to_string(t.index) + " goes to invalid table " +
                      std::to_string(g->table));
            }
          }
        };
        check(t.table_miss);
        for (const auto& e : t.entries) check(e);
      }
    }
    auto port_exists = [&](const PortRef& p, std::optional<Direction> d) {
      const auto* s = net_.find_switch(p.sw);
      if (!s) return false;
      if (d) return s->has_port(p.port, *d);
      return s->has_port(p.port, Direction::Input) || s->has_port(p.port, Direction::Output);
    };
    for (const auto& [from, to] : net_.topology.links) {
      if (!port_exists(from, Direction::Output)) invalid("link source " + to_string(from) + " is not an output port");
      if (!port_exists(to, Direction::Input)) invalid("link target " + to_string(to) + " is not an input port");
    }
    for (const auto& [name, at] : net_.topology.hosts) {
      if (!port_exists(at, std::nullopt)) invalid("host " + name + " attaches to missing port " + to_string(at));
    }
    for (const auto& [sw, rule, line] : config_rules_) {
      if (!port_exists(PortRef{sw, rule.out_port}, Direction::Output)) {
        invalid("config rule on line " + std::to_string(line) + ": " + sw + " has no output port " +
                std::to_string(rule.out_port));
      }
      net_.config.install(sw, rule);
    }
    if (net_.controller) {
      const auto& c = *net_.controller;
      for (const auto& s : c.init_states) {
        if (!c.states.count(s)) invalid("controller init state " + s + " is not declared");
      }
      for (const auto& t : c.transitions) {
        if (!c.states.count(t.from) || !c.states.count(t.to)) {
          invalid("controller transition " + t.from + " -> " + t.to + " uses an undeclared state");
        }
      }
      if (!c.states.empty() && c.init_states.empty()) invalid("controller declares states but no init state");
    }
  }

  struct PendingRule {
    std::string sw;
    ForwardingRule rule;
    std::size_t line;
  };

  std::string origin_;
  std::size_t line_ = 0;
  Section section_ = Section::None;
  Network net_;
  std::vector<PendingRule> config_rules_;
};

}  // namespace detail

inline Network parse_network_text(const std::string& text, const std::string& origin = "<network>") {
  return detail::NetworkParser(origin).parse(text);
}

inline Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network_text(buf.str(), path);
}

}  // namespace sdnmc::sdn
