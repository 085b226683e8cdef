#pragma once

#include <algorithm>
#include <functional>

#include "sdnmc/sdn/types.hpp"

namespace sdnmc::sdn {

using SwitchPath = std::vector<std::string>;

/// Every simple switch-level path between the switches the two hosts attach
/// to, shortest first, ties in lexicographic order of switch ids.
inline std::vector<SwitchPath> rank_paths(const Topology& topo, const std::string& src, const std::string& dst) {
  auto src_at = topo.hosts.find(src);
  auto dst_at = topo.hosts.find(dst);
  if (src_at == topo.hosts.end()) throw Error(ErrorCode::UnknownEndpoint, "unknown endpoint '" + src + "'");
  if (dst_at == topo.hosts.end()) throw Error(ErrorCode::UnknownEndpoint, "unknown endpoint '" + dst + "'");

  std::map<std::string, std::set<std::string>> adj;
  for (const auto& [from, to] : topo.links) adj[from.sw].insert(to.sw);

  std::vector<SwitchPath> out;
  SwitchPath cur{src_at->second.sw};
  const std::string& goal = dst_at->second.sw;
  std::function<void()> dfs = [&] {
    if (cur.back() == goal) {
      out.push_back(cur);
      return;
    }
    for (const auto& next : adj[cur.back()]) {
      if (std::find(cur.begin(), cur.end(), next) != cur.end()) continue;
      cur.push_back(next);
      dfs();
      cur.pop_back();
    }
  };
  dfs();
  if (out.empty()) throw Error(ErrorCode::Unreachable, "no path from " + src + " to " + dst);
  std::sort(out.begin(), out.end(), [](const SwitchPath& a, const SwitchPath& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

/// One rule per switch on the best-ranked path: match the destination,
/// forward over the lowest-numbered link to the next hop, or to the host
/// port at the last hop. The config is accepted for interface parity; routing
/// does not depend on rules already installed.
inline std::vector<std::pair<std::string, ForwardingRule>> compute_forwarding_rules(const PacketHeader& header,
                                                                                   const Topology& topo,
                                                                                   const NetworkConfig& /*config*/) {
  auto paths = rank_paths(topo, header.src, header.dst);
  const SwitchPath& best = paths.front();
  Match m = Match::any(header.arity());
  m.fields[1] = header.dst;

  std::vector<std::pair<std::string, ForwardingRule>> out;
  for (std::size_t k = 0; k < best.size(); ++k) {
    int port = 0;
    if (k + 1 == best.size()) {
      port = topo.hosts.at(header.dst).port;
    } else {
      bool found = false;
      for (const auto& [from, to] : topo.links) {
        if (from.sw == best[k] && to.sw == best[k + 1]) {
          port = from.port;
          found = true;
          break;
        }
      }
      if (!found) throw Error(ErrorCode::Unreachable, "no link " + best[k] + " -> " + best[k + 1]);
    }
    out.emplace_back(best[k], ForwardingRule{m, port});
  }
  return out;
}

}  // namespace sdnmc::sdn
