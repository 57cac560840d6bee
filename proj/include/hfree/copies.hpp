#pragma once

// Brute-force oracles over copies of a small pattern H in a host graph G:
// enumeration of node sets carrying a copy, greedy extraction of an
// edge-disjoint family, and an exact epsilon-far decision for tiny graphs.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "hfree/errors.hpp"
#include "hfree/graph.hpp"
#include "hfree/pattern.hpp"

namespace hfree {

struct WorkCaps {
  // Search-tree nodes visited while enumerating candidate node sets.
  std::uint64_t enumeration_steps = 500'000'000;
  // Branch nodes visited by the exact epsilon-far search.
  std::uint64_t modification_sets = 50'000'000;
};

struct Copy {
  std::vector<Vertex> nodes;  // sorted
  std::vector<Edge> edges;    // edges used by the embedding; empty when not tracked
};

struct CopyFamily {
  std::vector<Copy> copies;
  bool edge_disjoint = false;

  std::size_t size() const noexcept { return copies.size(); }
};

namespace detail {

inline void check_steps(std::uint64_t& steps, const WorkCaps& caps) {
  if (++steps > caps.enumeration_steps) {
    throw WorkCapExceeded("copy enumeration exceeded " + std::to_string(caps.enumeration_steps) + " steps");
  }
}

// Every connected k-node set exactly once (ESU enumeration).
inline void for_each_connected_set(const Graph& g, std::size_t k, const WorkCaps& caps,
                                   const std::function<void(std::span<const Vertex>)>& visit) {
  std::uint64_t steps = 0;
  std::vector<Vertex> sub;
  sub.reserve(k);
  auto exclusive = [&](Vertex u) {
    for (Vertex s : sub) {
      if (s == u || g.has_edge(s, u)) return false;
    }
    return true;
  };
  auto extend = [&](auto&& self, std::vector<Vertex> ext, Vertex root) -> void {
    check_steps(steps, caps);
    if (sub.size() == k) {
      visit(sub);
      return;
    }
    while (!ext.empty()) {
      const Vertex w = ext.back();
      ext.pop_back();
      std::vector<Vertex> next = ext;
      for (Vertex u : g.neighbors(w)) {
        if (u > root && exclusive(u) && std::find(next.begin(), next.end(), u) == next.end()) {
          next.push_back(u);
        }
      }
      sub.push_back(w);
      self(self, std::move(next), root);
      sub.pop_back();
    }
  };
  for (Vertex v = 0; v < g.node_count(); ++v) {
    std::vector<Vertex> ext;
    for (Vertex w : g.neighbors(v)) {
      if (w > v) ext.push_back(w);
    }
    sub.assign(1, v);
    extend(extend, std::move(ext), v);
  }
}

inline void for_each_subset(std::size_t n, std::size_t k, const WorkCaps& caps,
                            const std::function<void(std::span<const Vertex>)>& visit) {
  if (k > n) return;
  std::uint64_t steps = 0;
  std::vector<Vertex> sub(k);
  for (Vertex i = 0; i < k; ++i) sub[i] = i;
  while (true) {
    check_steps(steps, caps);
    visit(sub);
    std::size_t i = k;
    while (i > 0 && sub[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++sub[i - 1];
    for (std::size_t j = i; j < k; ++j) sub[j] = sub[j - 1] + 1;
  }
}

inline std::uint64_t edge_key(Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  return (std::uint64_t{u} << 32) | v;
}

// First embedding of H (in lexicographic order of images) into the given
// node set using only edges accepted by `present`.
template <class Present>
std::optional<std::vector<Edge>> find_embedding(const Pattern& h, std::span<const Vertex> nodes,
                                                Present&& present) {
  const std::size_t k = h.k();
  std::vector<Vertex> image(k);
  std::vector<char> used(nodes.size(), 0);
  auto extend = [&](auto&& self, std::size_t i) -> bool {
    if (i == k) return true;
    for (std::size_t x = 0; x < nodes.size(); ++x) {
      if (used[x]) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        if (h.graph.has_edge(static_cast<Vertex>(i), static_cast<Vertex>(j))) {
          ok = present(nodes[x], image[j]);
        }
      }
      if (!ok) continue;
      used[x] = 1;
      image[i] = nodes[x];
      if (self(self, i + 1)) return true;
      used[x] = 0;
    }
    return false;
  };
  if (!extend(extend, 0)) return std::nullopt;
  std::vector<Edge> edges;
  for (const Edge& e : h.graph.edges()) {
    Vertex a = image[e.u];
    Vertex b = image[e.v];
    if (a > b) std::swap(a, b);
    edges.push_back({a, b});
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

}  // namespace detail

// All k-node sets A with contains_pattern(G[A], H, mode), in lexicographic
// order. Connected patterns are enumerated over connected node sets only.
inline CopyFamily enumerate_copies(const Graph& g, const Pattern& h, MatchMode mode,
                                   const WorkCaps& caps = {}) {
  CopyFamily family;
  const std::size_t k = h.k();
  if (k > g.node_count()) return family;
  const PatternMatcher matcher(h, mode);
  std::vector<Vertex> sorted(k);
  auto visit = [&](std::span<const Vertex> set) {
    std::copy(set.begin(), set.end(), sorted.begin());
    std::sort(sorted.begin(), sorted.end());
    if (matcher.matches(adjacency_mask(g, sorted))) family.copies.push_back({sorted, {}});
  };
  if (h.connected && k >= 1) {
    detail::for_each_connected_set(g, k, caps, visit);
  } else {
    detail::for_each_subset(g.node_count(), k, caps, visit);
  }
  std::sort(family.copies.begin(), family.copies.end(),
            [](const Copy& a, const Copy& b) { return a.nodes < b.nodes; });
  return family;
}

// Repeatedly takes the lexicographically smallest node set that still holds
// a copy of H, records the first embedding found there and deletes its
// edges, until no copy survives. The result is edge-disjoint and maximal.
inline CopyFamily greedy_edge_disjoint_copies(const Graph& g, const Pattern& h, const WorkCaps& caps = {}) {
  CopyFamily candidates = enumerate_copies(g, h, MatchMode::Subgraph, caps);
  CopyFamily family;
  family.edge_disjoint = true;
  std::unordered_set<std::uint64_t> removed;
  auto present = [&](Vertex a, Vertex b) {
    return g.has_edge(a, b) && !removed.contains(detail::edge_key(a, b));
  };
  // Deletions never create copies, so one pass in lexicographic order that
  // revisits a set until it is exhausted is the same as restarting the scan.
  for (const Copy& candidate : candidates.copies) {
    while (auto edges = detail::find_embedding(h, candidate.nodes, present)) {
      for (const Edge& e : *edges) removed.insert(detail::edge_key(e.u, e.v));
      family.copies.push_back({candidate.nodes, std::move(*edges)});
    }
  }
  return family;
}

// Largest number of edge modifications allowed for `eps` on m edges.
inline std::size_t modification_budget(double eps, std::size_t m) {
  return static_cast<std::size_t>(std::floor(eps * static_cast<double>(m) + 1e-9));
}

// True iff no set of at most floor(eps*m) edge modifications makes G H-free.
// Only deletions are searched: adding edges never destroys a copy of H, so a
// shortest modification sequence to H-freeness consists of deletions alone.
// The search branches on the edges of an embedding that is still intact,
// which visits every minimal deletion set. Limited to m <= 64.
inline bool is_eps_far_bruteforce(const Graph& g, const Pattern& h, double eps, const WorkCaps& caps = {}) {
  if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("eps must lie in (0, 1]");
  const std::size_t m = g.edge_count();
  if (m > 64) throw WorkCapExceeded("is_eps_far_bruteforce supports at most 64 edges, got " + std::to_string(m));
  const std::vector<Edge> edges = g.edges();
  auto index_of = [&](Edge e) {
    if (e.u > e.v) std::swap(e.u, e.v);
    return static_cast<unsigned>(std::lower_bound(edges.begin(), edges.end(), e) - edges.begin());
  };

  // Edge masks of every embedding of H.
  std::vector<std::uint64_t> embeddings;
  const CopyFamily sets = enumerate_copies(g, h, MatchMode::Subgraph, caps);
  const std::size_t k = h.k();
  for (const Copy& c : sets.copies) {
    std::vector<Vertex> image(k);
    std::vector<char> used(k, 0);
    auto extend = [&](auto&& self, std::size_t i) -> void {
      if (i == k) {
        std::uint64_t mask = 0;
        for (const Edge& e : h.graph.edges()) mask |= std::uint64_t{1} << index_of({image[e.u], image[e.v]});
        embeddings.push_back(mask);
        return;
      }
      for (std::size_t x = 0; x < k; ++x) {
        if (used[x]) continue;
        bool ok = true;
        for (std::size_t j = 0; j < i && ok; ++j) {
          if (h.graph.has_edge(static_cast<Vertex>(i), static_cast<Vertex>(j))) ok = g.has_edge(c.nodes[x], image[j]);
        }
        if (!ok) continue;
        used[x] = 1;
        image[i] = c.nodes[x];
        self(self, i + 1);
        used[x] = 0;
      }
    };
    extend(extend, 0);
  }
  std::sort(embeddings.begin(), embeddings.end());
  embeddings.erase(std::unique(embeddings.begin(), embeddings.end()), embeddings.end());
  if (embeddings.empty()) return false;

  const std::size_t budget = modification_budget(eps, m);
  std::uint64_t steps = 0;
  auto hits_all = [&](auto&& self, std::uint64_t deleted, std::size_t left) -> bool {
    if (++steps > caps.modification_sets) {
      throw WorkCapExceeded("is_eps_far_bruteforce exceeded " + std::to_string(caps.modification_sets) + " steps");
    }
    auto intact = std::find_if(embeddings.begin(), embeddings.end(),
                               [&](std::uint64_t e) { return (e & deleted) == 0; });
    if (intact == embeddings.end()) return true;
    if (left == 0) return false;
    for (std::uint64_t rest = *intact; rest != 0; rest &= rest - 1) {
      if (self(self, deleted | (rest & (0 - rest)), left - 1)) return true;
    }
    return false;
  };
  return !hits_all(hits_all, 0, budget);
}

}  // namespace hfree
