#pragma once

#include "sdnmc/sdn/network_io.hpp"

namespace sdnmc::sdn {

/// Text of the shipped single-switch reference network (fixtures/paper.net).
inline constexpr const char* kReferenceNetworkText = R"net(# Single switch with one controller: the reference packet lifecycle.
fields proto

switches
  switch w1 trust=1
    in 1
    out 2
    table 0 miss=to_controller
      entry priority=10 match dst=h2 actions=forward:2 idle=30 hard=300 cookie=0x1 flags=send_flow_rem

controller
  state c0 init
  state c1
  rewrite proto=legacy -> proto=v2
  trans c0 rw0 fc0 c1
  trans c1 rw0 fc0 c0
  rule_priority 100

hosts
  host h1 w1:1
  host h2 w1:2
)net";

inline Network reference_network() { return parse_network_text(kReferenceNetworkText, "paper.net"); }

}  // namespace sdnmc::sdn
