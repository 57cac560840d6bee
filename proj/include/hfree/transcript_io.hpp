#pragma once

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "hfree/congest.hpp"

namespace hfree {

// {rounds, id_bits, max_message_bits, total_bits, per_node_decisions,
//  violations[, traffic]}. Keys keep insertion order so output is stable.
inline nlohmann::ordered_json transcript_json(const Transcript& t) {
  nlohmann::ordered_json j;
  j["rounds"] = t.rounds;
  j["id_bits"] = t.id_bits;
  j["max_message_bits"] = t.max_message_bits;
  j["total_bits"] = t.total_bits;
  auto decisions = nlohmann::ordered_json::array();
  for (std::size_t v = 0; v < t.decisions.size(); ++v) {
    decisions.push_back({{"id", t.node_ids[v]}, {"decision", to_string(t.decisions[v])}});
  }
  j["per_node_decisions"] = std::move(decisions);
  auto violations = nlohmann::ordered_json::array();
  for (const Violation& x : t.violations) {
    violations.push_back({{"round", x.round},
                          {"from", x.from},
                          {"to", x.to},
                          {"ids", x.size.ids},
                          {"bits", x.size.bits},
                          {"size_bits", x.size_bits}});
  }
  j["violations"] = std::move(violations);
  if (t.detailed) {
    auto traffic = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < t.traffic.size(); ++r) {
      for (std::size_t e = 0; e < t.traffic[r].size(); ++e) {
        const MessageSize s = t.traffic[r][e];
        if (s.ids == 0 && s.bits == 0) continue;
        traffic.push_back({r + 1, t.directed_edges[e].first, t.directed_edges[e].second, s.ids, s.bits});
      }
    }
    j["traffic"] = std::move(traffic);
  }
  return j;
}

// One row per non-empty message: round,edge_u,edge_v,bits. Needs a detailed
// transcript.
inline void write_transcript_csv(std::ostream& out, const Transcript& t) {
  if (!t.detailed) throw InvalidArgument("transcript CSV needs a detailed transcript");
  out << "# schema=1\n";
  out << "round,edge_u,edge_v,bits\n";
  for (std::size_t r = 0; r < t.traffic.size(); ++r) {
    for (std::size_t e = 0; e < t.traffic[r].size(); ++e) {
      const MessageSize s = t.traffic[r][e];
      if (s.ids == 0 && s.bits == 0) continue;
      out << r + 1 << ',' << t.directed_edges[e].first << ',' << t.directed_edges[e].second << ','
          << t.size_bits(s) << '\n';
    }
  }
}

}  // namespace hfree
