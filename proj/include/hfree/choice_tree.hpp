#pragma once

// Exact probabilities by enumerating every execution of a randomized
// protocol. Each random draw of a node is identified by (node identity,
// draw number). Draws selected by `is_free` range over all their values;
// the others are pinned to 0. A leaf of the tree is one complete run and
// has weight prod 1/arity over the free draws it made. Draws must happen in
// an order that depends only on earlier choices, so runs use one thread.

#include <cstdint>
#include <functional>
#include <set>
#include <utility>
#include <vector>

#include "hfree/bfs_tester.hpp"
#include "hfree/congest.hpp"
#include "hfree/dfs_tester.hpp"
#include "hfree/errors.hpp"

namespace hfree {

using DrawKey = std::pair<NodeId, std::uint64_t>;
using FreeDraw = std::function<bool(NodeId, std::uint64_t)>;

struct EnumerationResult {
  Rational probability = 0;
  std::uint64_t leaves = 0;
};

namespace detail {

struct Odometer {
  struct Entry {
    DrawKey key;
    std::uint64_t arity;
    std::uint64_t value;
  };
  std::vector<Entry> stack;
  std::size_t cursor = 0;

  std::uint64_t draw(DrawKey key, std::uint64_t arity) {
    if (cursor < stack.size()) {
      if (stack[cursor].key != key || stack[cursor].arity != arity) {
        throw ProtocolError("draw order changed between executions");
      }
      return stack[cursor++].value;
    }
    stack.push_back({key, arity, 0});
    ++cursor;
    return 0;
  }

  // Moves to the next leaf; false when the tree is exhausted.
  bool advance() {
    stack.resize(cursor);
    while (!stack.empty() && stack.back().value + 1 == stack.back().arity) stack.pop_back();
    if (stack.empty()) return false;
    ++stack.back().value;
    cursor = 0;
    return true;
  }
};

class ScriptedNode final : public ChoiceSource {
 public:
  ScriptedNode(NodeId id, Odometer* odo, const FreeDraw* is_free) : id_(id), odo_(odo), free_(is_free) {}

  void reset() { count_ = 0; }

  std::uint64_t choose(std::uint64_t arity) override {
    const std::uint64_t index = count_++;
    if (arity <= 1 || !(*free_)(id_, index)) return 0;
    return odo_->draw({id_, index}, arity);
  }

 private:
  NodeId id_;
  Odometer* odo_;
  const FreeDraw* free_;
  std::uint64_t count_ = 0;
};

}  // namespace detail

// Sum of leaf weights over the executions for which `event(sim)` holds.
template <class P, class Event>
EnumerationResult enumerate_probability(Simulator<P>& sim, int rounds, const FreeDraw& is_free, Event&& event,
                                        std::uint64_t max_leaves = 1U << 22) {
  const Graph& g = sim.network().graph();
  detail::Odometer odo;
  std::vector<detail::ScriptedNode> nodes;
  nodes.reserve(g.node_count());
  for (Vertex v = 0; v < g.node_count(); ++v) nodes.emplace_back(g.id(v), &odo, &is_free);
  RunOptions options;
  options.detailed_transcript = false;
  options.script = [&](Vertex v) -> ChoiceSource* { return &nodes[v]; };
  EnumerationResult result;
  do {
    if (++result.leaves > max_leaves) {
      throw WorkCapExceeded("choice tree has more than " + std::to_string(max_leaves) + " leaves");
    }
    for (auto& n : nodes) n.reset();
    odo.cursor = 0;
    sim.run(rounds, Budget::unlimited(), 0, options);
    if (event(sim)) {
      Rational w = 1;
      for (std::size_t i = 0; i < odo.cursor; ++i) w /= odo.stack[i].arity;
      result.probability += w;
    }
  } while (odo.advance());
  return result;
}

// Draws of the DFS tester that can influence the view sent from `from` to
// `to` in round `round`: that edge's own draw, and recursively the draws
// behind every view `from` received in the previous round.
inline std::set<DrawKey> dfs_draw_cone(const Graph& g, Vertex from, Vertex to, int round) {
  std::set<DrawKey> cone;
  const Network net(g);
  auto slot_of = [&](Vertex v, Vertex w) {
    const auto ids = net.neighbor_ids(v);
    return static_cast<std::uint64_t>(std::lower_bound(ids.begin(), ids.end(), g.id(w)) - ids.begin());
  };
  auto visit = [&](auto&& self, Vertex v, Vertex w, int t) -> void {
    if (t < 2) return;
    const std::uint64_t d = net.degree(v);
    if (!cone.insert({g.id(v), static_cast<std::uint64_t>(t - 2) * d + slot_of(v, w)}).second) return;
    for (Vertex x : net.neighbor_vertices(v)) self(self, x, v, t - 1);
  };
  visit(visit, from, to, round);
  return cone;
}

}  // namespace hfree
