#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hfree/errors.hpp"
#include "hfree/graph.hpp"

namespace hfree {

enum class MatchMode { Subgraph, Induced };

inline constexpr std::size_t kMaxPatternNodes = 8;

inline std::string_view to_string(MatchMode mode) {
  return mode == MatchMode::Subgraph ? "subgraph" : "induced";
}

inline MatchMode parse_match_mode(std::string_view s) {
  if (s == "subgraph") return MatchMode::Subgraph;
  if (s == "induced") return MatchMode::Induced;
  throw InvalidArgument("unknown match mode '" + std::string(s) + "'");
}

// Bit index of the unordered pair {i, j} (i < j) among k positions. Pairs are
// ordered (0,1), (0,2), (1,2), (0,3), ... so that adding position t appends
// the t bits (0,t)..(t-1,t) after the existing C(t,2) bits.
constexpr unsigned pair_bit(unsigned i, unsigned j) noexcept {
  if (i > j) std::swap(i, j);
  return j * (j - 1) / 2 + i;
}

constexpr unsigned pair_count(unsigned k) noexcept { return k * (k - 1) / 2; }

// A small graph H with the traits the testers need.
struct Pattern {
  Graph graph;
  std::string name;
  std::optional<std::vector<Vertex>> hamiltonian_path;
  std::optional<Vertex> universal_vertex;
  bool connected = false;

  std::size_t k() const noexcept { return graph.node_count(); }
  std::size_t edge_count() const noexcept { return graph.edge_count(); }
};

namespace detail {

inline bool is_connected(const Graph& g) {
  if (g.node_count() == 0) return true;
  std::vector<char> seen(g.node_count(), 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == g.node_count();
}

}  // namespace detail

inline Pattern pattern_traits(const Graph& h, std::string name = "custom") {
  const std::size_t k = h.node_count();
  if (k == 0 || k > kMaxPatternNodes) {
    throw InvalidArgument("pattern must have between 1 and " + std::to_string(kMaxPatternNodes) + " nodes");
  }
  Pattern p{h, std::move(name), std::nullopt, std::nullopt, detail::is_connected(h)};
  std::vector<Vertex> order(k);
  std::iota(order.begin(), order.end(), Vertex{0});
  do {
    bool ok = true;
    for (std::size_t i = 0; i + 1 < k && ok; ++i) ok = h.has_edge(order[i], order[i + 1]);
    if (ok) {
      p.hamiltonian_path = order;
      break;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  for (Vertex v = 0; v < k; ++v) {
    if (h.degree(v) == k - 1) {
      p.universal_vertex = v;
      break;
    }
  }
  return p;
}

namespace patterns {

inline Pattern cycle(std::size_t k) {
  if (k < 3) throw InvalidArgument("cycle needs at least 3 nodes");
  std::vector<Edge> e;
  for (Vertex i = 0; i < k; ++i) e.push_back({i, static_cast<Vertex>((i + 1) % k)});
  return pattern_traits(Graph(k, e), "C" + std::to_string(k));
}

inline Pattern clique(std::size_t k) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < k; ++i) {
    for (Vertex j = i + 1; j < k; ++j) e.push_back({i, j});
  }
  return pattern_traits(Graph(k, e), "K" + std::to_string(k));
}

inline Pattern path(std::size_t k) {
  std::vector<Edge> e;
  for (Vertex i = 0; i + 1 < k; ++i) e.push_back({i, i + 1});
  return pattern_traits(Graph(k, e), "P" + std::to_string(k));
}

// K_{1,leaves}; vertex 0 is the center.
inline Pattern star(std::size_t leaves) {
  std::vector<Edge> e;
  for (Vertex i = 1; i <= leaves; ++i) e.push_back({0, i});
  return pattern_traits(Graph(leaves + 1, e), leaves == 3 ? "claw" : "K1," + std::to_string(leaves));
}

inline Pattern claw() { return star(3); }

// Accepts C<k>, K<k>, P<k>, claw, K1,<l>.
inline Pattern parse(std::string_view name) {
  auto number = [&](std::string_view digits) -> std::size_t {
    if (digits.empty() || digits.size() > 2 ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw InvalidArgument("unknown pattern '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(std::stoul(std::string(digits)));
  };
  if (name == "claw") return claw();
  if (name.starts_with("K1,")) return star(number(name.substr(3)));
  if (name.size() >= 2) {
    const std::size_t k = number(name.substr(1));
    if (k == 0 || k > kMaxPatternNodes) throw InvalidArgument("pattern size must be 1.." + std::to_string(kMaxPatternNodes));
    switch (name[0]) {
      case 'C': return cycle(k);
      case 'K': return clique(k);
      case 'P': return path(k);
      default: break;
    }
  }
  throw InvalidArgument("unknown pattern '" + std::string(name) + "'");
}

}  // namespace patterns

// True iff some injection of V(H) into V(S) maps edges to edges (Subgraph),
// or edges to edges and non-edges to non-edges (Induced). Exhaustive search.
inline bool contains_pattern(const Graph& s, const Pattern& h, MatchMode mode,
                             std::size_t cap = kMaxPatternNodes) {
  const std::size_t n = s.node_count();
  const std::size_t k = h.k();
  if (n > cap) {
    throw WorkCapExceeded("contains_pattern: host has " + std::to_string(n) + " nodes, cap is " +
                          std::to_string(cap));
  }
  if (n < k) return false;
  std::vector<Vertex> image(k);
  std::vector<char> used(n, 0);
  auto extend = [&](auto&& self, std::size_t i) -> bool {
    if (i == k) return true;
    for (Vertex x = 0; x < n; ++x) {
      if (used[x]) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        const bool in_h = h.graph.has_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
        const bool in_s = s.has_edge(x, image[j]);
        ok = mode == MatchMode::Subgraph ? (!in_h || in_s) : (in_h == in_s);
      }
      if (!ok) continue;
      used[x] = 1;
      image[i] = x;
      if (self(self, i + 1)) return true;
      used[x] = 0;
    }
    return false;
  };
  return extend(extend, 0);
}

// Constant-time containment test for graphs on exactly k labeled positions,
// encoded as a pair_bit() mask. Every relabeling of H is precomputed; for
// k <= 7 the answer for every mask is tabulated.
class PatternMatcher {
 public:
  PatternMatcher() = default;

  PatternMatcher(const Pattern& h, MatchMode mode) : k_(static_cast<unsigned>(h.k())), mode_(mode) {
    std::vector<Vertex> perm(k_);
    std::iota(perm.begin(), perm.end(), Vertex{0});
    do {
      std::uint32_t mask = 0;
      for (const Edge& e : h.graph.edges()) mask |= std::uint32_t{1} << pair_bit(perm[e.u], perm[e.v]);
      images_.push_back(mask);
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::sort(images_.begin(), images_.end());
    images_.erase(std::unique(images_.begin(), images_.end()), images_.end());

    const unsigned bits = pair_count(k_);
    if (k_ <= 7) {
      table_.assign(std::size_t{1} << bits, 0);
      for (std::uint32_t img : images_) table_[img] = 1;
      if (mode_ == MatchMode::Subgraph) {
        for (unsigned b = 0; b < bits; ++b) {
          const std::uint32_t bit = std::uint32_t{1} << b;
          for (std::uint32_t m = 0; m < table_.size(); ++m) {
            if ((m & bit) != 0 && table_[m ^ bit] != 0) table_[m] = 1;
          }
        }
      }
    }
  }

  unsigned k() const noexcept { return k_; }
  MatchMode mode() const noexcept { return mode_; }

  bool matches(std::uint32_t mask) const noexcept {
    if (!table_.empty()) return table_[mask] != 0;
    for (std::uint32_t img : images_) {
      if (mode_ == MatchMode::Subgraph ? (img & ~mask) == 0 : img == mask) return true;
    }
    return false;
  }

 private:
  unsigned k_ = 0;
  MatchMode mode_ = MatchMode::Subgraph;
  std::vector<std::uint32_t> images_;
  std::vector<std::uint8_t> table_;
};

// pair_bit() mask of g[vertices], positions in the given order.
inline std::uint32_t adjacency_mask(const Graph& g, std::span<const Vertex> vertices) {
  std::uint32_t mask = 0;
  for (unsigned j = 1; j < vertices.size(); ++j) {
    for (unsigned i = 0; i < j; ++i) {
      if (g.has_edge(vertices[i], vertices[j])) mask |= std::uint32_t{1} << pair_bit(i, j);
    }
  }
  return mask;
}

}  // namespace hfree
