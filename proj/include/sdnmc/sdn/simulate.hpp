#pragma once

#include "sdnmc/sdn/pipeline.hpp"
#include "sdnmc/sdn/routing.hpp"

namespace sdnmc::sdn {

/// Applies the first rewrite rule whose match accepts h; identity otherwise.
inline PacketHeader modify_header(const Controller& ctrl, PacketHeader h) {
  for (const auto& rw : ctrl.header_rewrites) {
    if (!rw.match.matches(h)) continue;
    for (const auto& [field, value] : rw.sets) h.set_field(field, value);
    break;
  }
  return h;
}

struct PacketState {
  PacketHeader header;
  int port = 0;
  std::string sw;

  friend auto operator<=>(const PacketState&, const PacketState&) = default;
};

struct DropNode {};

using TransmissionResult = std::variant<DropNode, std::set<PacketState>>;

/// One hop through the installed configuration. Networks with fewer than two
/// switches drop; otherwise every rule of the current switch that matches
/// leads over its link to the next switch's input port. With `modify` the
/// controller's header rewrite is applied on the way.
inline TransmissionResult transmission_step(const Network& net, const NetworkConfig& config, const PacketState& ps,
                                            bool modify) {
  if (net.switches.size() < 2) return DropNode{};
  net.require_switch(ps.sw);
  std::set<PacketState> out;
  auto it = config.rules.find(ps.sw);
  if (it == config.rules.end()) return out;
  for (const auto& rule : it->second) {
    if (!rule.match.matches(ps.header, ps.port)) continue;
    auto link = net.topology.links.find(PortRef{ps.sw, rule.out_port});
    if (link == net.topology.links.end()) continue;
    PacketHeader h = modify && net.controller ? modify_header(*net.controller, ps.header) : ps.header;
    out.insert(PacketState{std::move(h), link->second.port, link->second.sw});
  }
  return out;
}

namespace run_outcome {
struct Delivered {
  std::string host;
};
struct Dropped {
  std::string reason;
};
struct ToControllerPending {};
struct StepLimit {};
}  // namespace run_outcome

using RunOutcome =
    std::variant<run_outcome::Delivered, run_outcome::Dropped, run_outcome::ToControllerPending, run_outcome::StepLimit>;

enum class NodeKind { Switch, Controller };

struct RunStep {
  NodeKind kind = NodeKind::Switch;
  std::string node;
  NetworkConfig config;
  Packet packet;
};

struct Run {
  std::vector<RunStep> steps;
  RunOutcome outcome = run_outcome::StepLimit{};
  NetworkConfig final_config;
  std::map<std::string, std::vector<FlowTable>> final_tables;
  std::size_t lookups = 0;

  std::size_t controller_visits() const {
    std::size_t n = 0;
    for (const auto& s : steps) n += s.kind == NodeKind::Controller ? 1 : 0;
    return n;
  }
};

struct SimulationOptions {
  bool apply_header_rewrites = false;
};

namespace detail {

inline FlowEntry rule_entry(const ForwardingRule& r, int priority) {
  FlowEntry e;
  e.match = r.match;
  e.priority = priority;
  e.instructions = {Forward{r.out_port}};
  return e;
}

}  // namespace detail

/// Injects pkt at its source host and follows it through pipelines, links
/// and controller round-trips. Forwarding rules in the configuration are
/// realised as table-0 entries at the controller's rule priority.
inline Run simulate_run(const Network& net, Packet pkt, std::size_t max_steps, SimulationOptions opts = {},
                        std::optional<NetworkConfig> initial = std::nullopt) {
  if (max_steps == 0) throw Error(ErrorCode::InvalidArgument, "max_steps must be at least 1");
  auto src = net.topology.hosts.find(pkt.header.src);
  if (src == net.topology.hosts.end()) {
    throw Error(ErrorCode::UnknownEndpoint, "unknown endpoint '" + pkt.header.src + "'");
  }
  const int rule_priority = net.controller ? net.controller->rule_priority : 100;

  Run run;
  run.final_config = initial ? *initial : net.config;
  std::map<std::string, Switch> live;
  for (const auto& s : net.switches) live.emplace(s.id, s);
  for (const auto& [sw, rules] : run.final_config.rules) {
    auto& tables = live.at(sw).tables;
    for (const auto& r : rules) tables.at(0).entries.push_back(detail::rule_entry(r, rule_priority));
  }

  auto finish = [&](RunOutcome o) {
    run.outcome = std::move(o);
    for (auto& [id, s] : live) run.final_tables[id] = s.tables;
    return run;
  };
  auto record = [&](NodeKind kind, const std::string& node, const Packet& p) {
    run.steps.push_back(RunStep{kind, node, run.final_config, p});
    return run.steps.size() <= max_steps;
  };

  std::string at = src->second.sw;
  int ingress = src->second.port;
  for (;;) {
    if (!record(NodeKind::Switch, at, pkt)) return finish(run_outcome::StepLimit{});
    auto res = run_pipeline(live.at(at), pkt, ingress);
    run.lookups += res.lookups;

    if (auto* fwd = std::get_if<outcome::Forwarded>(&res.outcome)) {
      pkt = std::move(fwd->packet);
      PortRef out{at, fwd->port};
      if (auto link = net.topology.links.find(out); link != net.topology.links.end()) {
        at = link->second.sw;
        ingress = link->second.port;
        continue;
      }
      if (auto host = net.topology.host_at(out)) {
        if (*host == pkt.header.dst) return finish(run_outcome::Delivered{*host});
        return finish(run_outcome::Dropped{"delivered to " + *host + " instead of " + pkt.header.dst});
      }
      return finish(run_outcome::Dropped{"no link or host at " + to_string(out)});
    }
    if (std::holds_alternative<outcome::Dropped>(res.outcome)) {
      return finish(run_outcome::Dropped{"dropped at " + at});
    }

    // Table miss escalated to the controller.
    pkt = std::get<outcome::SentToController>(res.outcome).packet;
    if (!net.controller) return finish(run_outcome::ToControllerPending{});
    if (opts.apply_header_rewrites) pkt.header = modify_header(*net.controller, pkt.header);
    std::vector<std::pair<std::string, ForwardingRule>> rules;
    try {
      rules = compute_forwarding_rules(pkt.header, net.topology, run.final_config);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Unreachable && e.code() != ErrorCode::UnknownEndpoint) throw;
      record(NodeKind::Controller, "controller", pkt);
      return finish(run_outcome::Dropped{std::string("controller: ") + e.what()});
    }
    bool added = false;
    for (const auto& [sw, r] : rules) {
      if (run.final_config.install(sw, r)) {
        live.at(sw).tables.at(0).entries.push_back(detail::rule_entry(r, rule_priority));
        added = true;
      }
    }
    if (!record(NodeKind::Controller, "controller", pkt)) return finish(run_outcome::StepLimit{});
    if (!added) return finish(run_outcome::Dropped{"controller produced no new rules"});
  }
}

}  // namespace sdnmc::sdn
