#pragma once

// Synthetic graph families used by tests and the CLI.

#include <cstdint>
#include <vector>

#include "hfree/errors.hpp"
#include "hfree/graph.hpp"
#include "hfree/pattern.hpp"
#include "hfree/rng.hpp"

namespace hfree::generators {

// `count` vertex-disjoint copies of H; copy c occupies vertices c*k..c*k+k-1.
inline Graph disjoint_copies(const Pattern& h, std::size_t count) {
  const std::size_t k = h.k();
  std::vector<Edge> edges;
  edges.reserve(count * h.edge_count());
  const auto base = h.graph.edges();
  for (std::size_t c = 0; c < count; ++c) {
    const auto off = static_cast<Vertex>(c * k);
    for (const Edge& e : base) edges.push_back({e.u + off, e.v + off});
  }
  return Graph(count * k, edges);
}

inline Graph cycle(std::size_t n) {
  if (n < 3) throw InvalidArgument("cycle needs n >= 3");
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i) e.push_back({i, static_cast<Vertex>((i + 1) % n)});
  return Graph(n, e);
}

inline Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph(n, e);
}

inline Graph complete(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) e.push_back({i, j});
  }
  return Graph(n, e);
}

// Center 0, leaves 1..leaves.
inline Graph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (Vertex i = 1; i <= leaves; ++i) e.push_back({0, i});
  return Graph(leaves + 1, e);
}

// Sides 0..a-1 and a..a+b-1.
inline Graph complete_bipartite(std::size_t a, std::size_t b) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < a; ++i) {
    for (Vertex j = 0; j < b; ++j) e.push_back({i, static_cast<Vertex>(a + j)});
  }
  return Graph(a + b, e);
}

// Uniform random recursive tree: vertex i > 0 attaches to a uniform earlier one.
inline Graph random_tree(std::size_t n, std::uint64_t seed) {
  RandomStream rng(derive_seed(seed, 0x7EE));
  std::vector<Edge> e;
  for (Vertex i = 1; i < n; ++i) e.push_back({static_cast<Vertex>(rng.below(i)), i});
  return Graph(n, e);
}

inline Graph gnp(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("edge probability must lie in [0, 1]");
  RandomStream rng(derive_seed(seed, 0x6A7));
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p)) e.push_back({i, j});
    }
  }
  return Graph(n, e);
}

// Random bipartite graph with sides of size a and b, each cross pair kept
// with probability p.
inline Graph random_bipartite(std::size_t a, std::size_t b, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("edge probability must lie in [0, 1]");
  RandomStream rng(derive_seed(seed, 0xB1B));
  std::vector<Edge> e;
  for (Vertex i = 0; i < a; ++i) {
    for (Vertex j = 0; j < b; ++j) {
      if (rng.bernoulli(p)) e.push_back({i, static_cast<Vertex>(a + j)});
    }
  }
  return Graph(a + b, e);
}

}  // namespace hfree::generators
