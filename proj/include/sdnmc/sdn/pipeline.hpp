#pragma once

#include <limits>

#include "sdnmc/sdn/types.hpp"

namespace sdnmc::sdn {

struct MatchResult {
  static constexpr std::size_t kMiss = std::numeric_limits<std::size_t>::max();
  std::size_t entry = kMiss;

  bool is_miss() const noexcept { return entry == kMiss; }
};

/// Highest-priority matching entry, ties to the earliest inserted; the
/// table-miss entry otherwise. Bumps the chosen entry's counter.
inline MatchResult match_packet(FlowTable& table, const PacketHeader& header, std::optional<int> ingress) {
  MatchResult best;
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    const auto& e = table.entries[i];
    if (!e.match.matches(header, ingress)) continue;
    if (best.is_miss() || e.priority > table.entries[best.entry].priority) best.entry = i;
  }
  if (best.is_miss()) {
    if (table.table_miss.match.fields.size() != header.arity()) {
      throw Error(ErrorCode::ArityMismatch, "table-miss entry arity differs from header");
    }
    ++table.table_miss.counter;
  } else {
    ++table.entries[best.entry].counter;
  }
  return best;
}

inline const FlowEntry& chosen(const FlowTable& t, const MatchResult& m) {
  return m.is_miss() ? t.table_miss : t.entries[m.entry];
}

namespace outcome {
struct Forwarded {
  int port = 0;
  Packet packet;
};
struct Dropped {};
struct SentToController {
  Packet packet;
};
struct Continue {
  std::size_t table = 0;
  Packet packet;
};
}  // namespace outcome

using PipelineOutcome = std::variant<outcome::Forwarded, outcome::Dropped, outcome::SentToController, outcome::Continue>;

/// Runs an entry's instructions in order. SetField rewrites the header; the
/// first Forward, Drop or ToController ends processing. A list with no
/// terminal action drops the packet.
inline PipelineOutcome apply_instructions(const Switch& sw, std::size_t table_index, const FlowEntry& entry,
                                          Packet pkt) {
  for (const auto& action : entry.instructions) {
    if (const auto* f = std::get_if<Forward>(&action)) {
      if (!sw.has_port(f->port, Direction::Output)) {
        throw Error(ErrorCode::BadPort, sw.id + " has no output port " + std::to_string(f->port));
      }
      return outcome::Forwarded{f->port, std::move(pkt)};
    }
    if (std::holds_alternative<Drop>(action)) return outcome::Dropped{};
    if (std::holds_alternative<ToController>(action)) return outcome::SentToController{std::move(pkt)};
    if (const auto* g = std::get_if<GotoTable>(&action)) {
      if (g->table <= table_index || g->table >= sw.tables.size()) {
        throw Error(ErrorCode::BadTableIndex, sw.id + ": goto " + std::to_string(g->table) + " from table " +
                                                  std::to_string(table_index));
      }
      return outcome::Continue{g->table, std::move(pkt)};
    }
    const auto& s = std::get<SetField>(action);
    pkt.header.set_field(s.field, s.value);
  }
  return outcome::Dropped{};
}

/// Terminal result of a full ingress pipeline pass.
struct PipelineResult {
  PipelineOutcome outcome;  // never Continue
  std::size_t lookups = 0;
};

inline PipelineResult run_pipeline(Switch& sw, Packet pkt, std::optional<int> ingress) {
  PipelineResult r{outcome::Dropped{}, 0};
  std::size_t t = 0;
  for (;;) {
    auto& table = sw.tables.at(t);
    auto m = match_packet(table, pkt.header, ingress);
    ++r.lookups;
    auto out = apply_instructions(sw, t, chosen(table, m), std::move(pkt));
    if (auto* c = std::get_if<outcome::Continue>(&out)) {
      t = c->table;
      pkt = std::move(c->packet);
      continue;
    }
    r.outcome = std::move(out);
    return r;
  }
}

}  // namespace sdnmc::sdn
