#pragma once

// DFS tester for Hamiltonian patterns H on k nodes.
//
// Round 1: every node sends its identity. Round t = 2..k-1: from each view
// received in round t-1 the node forms a view one node longer by appending
// itself and its adjacency to the nodes already listed; then, independently
// for every incident edge, it forwards one of the views it formed, chosen
// uniformly at random (the view that came from the receiver included).
// After round k-1 the node appends itself to each received view and rejects
// iff one of the resulting k-node views has H, in the requested mode,
// on k distinct nodes.
//
// Randomness: one draw below(d) per incident edge, in slot order, in each of
// rounds 2..k-1. Draw number j of a node of degree d is the choice for slot
// j % d in round j / d + 2.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hfree/congest.hpp"
#include "hfree/pattern.hpp"
#include "hfree/tester.hpp"

namespace hfree {

// Nodes u_1..u_t of a forwarded walk and the known adjacency among them,
// as a pair_bit() mask over walk positions.
struct PartialView {
  std::array<NodeId, kMaxPatternNodes> nodes{};
  std::uint8_t count = 0;
  std::uint32_t adjacency = 0;

  bool has_edge(unsigned i, unsigned j) const noexcept { return (adjacency >> pair_bit(i, j)) & 1U; }

  bool distinct() const noexcept {
    for (unsigned j = 1; j < count; ++j) {
      for (unsigned i = 0; i < j; ++i) {
        if (nodes[i] == nodes[j]) return false;
      }
    }
    return true;
  }

  std::span<const NodeId> ids() const noexcept { return {nodes.data(), count}; }

  friend bool operator==(const PartialView&, const PartialView&) = default;
};

// How a view travels on the wire.
//  Compact4: the 4-node format (w,u) in round 2 and (w',u',u,b) in round
//    3, where b tells whether w' is a neighbor of u. Consecutive walk nodes
//    are adjacent, so b is the only non-implied pair.
//  FullAdjacency: t identities plus all C(t,2) adjacency bits.
enum class DfsEncoding : std::uint8_t { Compact4, FullAdjacency };

struct DfsMessage {
  std::array<NodeId, kMaxPatternNodes> ids{};
  std::uint8_t count = 0;
  std::uint8_t nbits = 0;
  std::uint32_t bits = 0;

  MessageSize size() const noexcept { return {count, nbits}; }
};

inline DfsMessage encode_view(const PartialView& v, DfsEncoding enc) {
  DfsMessage m;
  m.ids = v.nodes;
  m.count = v.count;
  if (enc == DfsEncoding::Compact4) {
    m.nbits = v.count == 3 ? 1 : 0;
    m.bits = v.count == 3 ? (v.has_edge(0, 2) ? 1U : 0U) : 0U;
  } else {
    m.nbits = static_cast<std::uint8_t>(pair_count(v.count));
    m.bits = v.adjacency;
  }
  return m;
}

inline PartialView decode_view(const DfsMessage& m, DfsEncoding enc) {
  PartialView v;
  v.nodes = m.ids;
  v.count = m.count;
  if (enc == DfsEncoding::Compact4) {
    for (unsigned i = 0; i + 1 < m.count; ++i) v.adjacency |= 1U << pair_bit(i, i + 1);
    if (m.count == 3 && (m.bits & 1U)) v.adjacency |= 1U << pair_bit(0, 2);
  } else {
    v.adjacency = m.bits;
  }
  return v;
}

struct DfsShared {
  unsigned k = 0;
  DfsEncoding encoding = DfsEncoding::FullAdjacency;
  PatternMatcher matcher;
};

class DfsProgram {
 public:
  using message_type = DfsMessage;

  explicit DfsProgram(std::shared_ptr<const DfsShared> shared) : shared_(std::move(shared)) {}

  void init(const NodeContext& ctx, RandomStream rng) {
    self_ = ctx.id;
    neighbors_ = ctx.neighbor_ids;
    rng_ = rng;
    formed_.clear();
    formed_msgs_.clear();
    detections_.clear();
  }

  void round(int t, std::span<const DfsMessage> inbox, Outbox<DfsMessage>& out) {
    const std::size_t d = neighbors_.size();
    if (d == 0) return;
    if (t == 1) {
      DfsMessage own;
      own.ids[0] = self_;
      own.count = 1;
      for (std::size_t s = 0; s < d; ++s) out[s] = own;
      return;
    }
    form(inbox);
    formed_msgs_.resize(d);
    for (std::size_t s = 0; s < d; ++s) formed_msgs_[s] = encode_view(formed_[s], shared_->encoding);
    for (std::size_t s = 0; s < d; ++s) out[s] = formed_msgs_[rng_.below(d)];
  }

  Decision decide(std::span<const DfsMessage> inbox) {
    if (neighbors_.empty()) return Decision::Accept;
    form(inbox);
    for (const PartialView& v : formed_) {
      if (v.count == shared_->k && v.distinct() && shared_->matcher.matches(v.adjacency)) {
        detections_.push_back(make_detected_set(v.ids()));
      }
    }
    return detections_.empty() ? Decision::Accept : Decision::Reject;
  }

  // Views formed from the messages of the last round, one per slot.
  std::span<const PartialView> final_views() const noexcept { return formed_; }
  std::span<const DetectedSet> detections() const noexcept { return detections_; }

 private:
  bool is_neighbor(NodeId id) const noexcept {
    return std::binary_search(neighbors_.begin(), neighbors_.end(), id);
  }

  void form(std::span<const DfsMessage> inbox) {
    formed_.resize(inbox.size());
    for (std::size_t s = 0; s < inbox.size(); ++s) {
      PartialView v = decode_view(inbox[s], shared_->encoding);
      const unsigned c = v.count;
      // The sender is the last listed node and is adjacent by construction.
      for (unsigned i = 0; i + 1 < c; ++i) {
        if (v.nodes[i] != self_ && is_neighbor(v.nodes[i])) v.adjacency |= 1U << pair_bit(i, c);
      }
      if (c > 0) v.adjacency |= 1U << pair_bit(c - 1, c);
      v.nodes[c] = self_;
      v.count = static_cast<std::uint8_t>(c + 1);
      formed_[s] = v;
    }
  }

  std::shared_ptr<const DfsShared> shared_;
  NodeId self_ = 0;
  std::span<const NodeId> neighbors_;
  RandomStream rng_;
  std::vector<PartialView> formed_;
  std::vector<DfsMessage> formed_msgs_;
  std::vector<DetectedSet> detections_;
};

// Builds one DfsProgram per node; all nodes share the pattern matcher.
class DfsProgramFactory {
 public:
  DfsProgramFactory(const Pattern& h, MatchMode mode) {
    if (!h.hamiltonian_path) throw InvalidArgument("DFS tester needs a pattern with a Hamiltonian path");
    if (h.k() < 2) throw InvalidArgument("DFS tester needs a pattern on at least 2 nodes");
    auto shared = std::make_shared<DfsShared>();
    shared->k = static_cast<unsigned>(h.k());
    shared->encoding = h.k() == 4 ? DfsEncoding::Compact4 : DfsEncoding::FullAdjacency;
    shared->matcher = PatternMatcher(h, mode);
    shared_ = std::move(shared);
  }

  DfsProgram operator()(const NodeContext&) const { return DfsProgram(shared_); }

  unsigned k() const noexcept { return shared_->k; }
  int rounds() const noexcept { return static_cast<int>(shared_->k) - 1; }
  DfsEncoding encoding() const noexcept { return shared_->encoding; }

  // Largest message the protocol sends: a (k-1)-node view.
  Budget budget() const noexcept {
    const unsigned t = shared_->k - 1;
    if (shared_->encoding == DfsEncoding::Compact4) return {3, 1};
    return {t, pair_count(t)};
  }

 private:
  std::shared_ptr<const DfsShared> shared_;
};

inline DfsProgramFactory dfs_program(const Pattern& h, MatchMode mode) { return DfsProgramFactory(h, mode); }

// T = ceil(8 ln 3 (4|E(H)|/eps)^2).
inline std::size_t dfs_iterations_for(double eps, std::size_t edge_count) {
  check_eps(eps);
  if (edge_count < 1) throw InvalidArgument("pattern must have at least one edge");
  const double ratio = 4.0 * static_cast<double>(edge_count) / eps;
  return static_cast<std::size_t>(std::ceil(8.0 * std::log(3.0) * ratio * ratio));
}

struct DfsParams {
  Pattern pattern;
  double eps = 0.5;
  std::size_t iterations = 1;
  MatchMode mode = MatchMode::Subgraph;
};

inline TestResult dfs_test(const Graph& g, const DfsParams& params, std::uint64_t seed,
                           const TestOptions& options = {}) {
  check_eps(params.eps);
  if (params.iterations < 1) throw InvalidArgument("iterations must be >= 1");
  const DfsProgramFactory factory(params.pattern, params.mode);
  Simulator<DfsProgram> sim(g, factory);
  return repeat_test(sim, factory.rounds(), params.iterations, options.budget.value_or(factory.budget()), seed,
                     options);
}

// Claw detection is local: a node rejects iff it has at least 3 neighbors.
class ClawProgram {
 public:
  using message_type = Message;

  void init(const NodeContext& ctx, RandomStream) {
    degree_ = ctx.neighbor_ids.size();
    self_ = ctx.id;
    neighbors_ = ctx.neighbor_ids;
  }
  void round(int, std::span<const Message>, Outbox<Message>&) {}
  Decision decide(std::span<const Message>) {
    detections_.clear();
    if (degree_ >= 3) {
      const std::array<NodeId, 4> set{self_, neighbors_[0], neighbors_[1], neighbors_[2]};
      detections_.push_back(make_detected_set(set));
    }
    return degree_ >= 3 ? Decision::Reject : Decision::Accept;
  }
  std::span<const DetectedSet> detections() const noexcept { return detections_; }

 private:
  std::size_t degree_ = 0;
  NodeId self_ = 0;
  std::span<const NodeId> neighbors_;
  std::vector<DetectedSet> detections_;
};

// Per-node decisions of the claw tester (0 rounds).
inline std::vector<Decision> claw_test(const Graph& g) {
  return run(g, [](const NodeContext&) { return ClawProgram{}; }, 0, Budget{}, 0).decisions;
}

}  // namespace hfree
