#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hfree/errors.hpp"
#include "hfree/rng.hpp"

namespace hfree {

// Dense 0-based index of a node inside one Graph.
using Vertex = std::uint32_t;
// Identity of a processor, as seen by the protocols. Defaults to index + 1.
using NodeId = std::uint64_t;

struct Edge {
  Vertex u;
  Vertex v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Undirected simple graph in compressed adjacency form. Immutable once built.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  explicit Graph(std::size_t n) : offsets_(n + 1, 0), ids_(default_ids(n)) {}

  // Throws InvalidArgument on self-loops, duplicates, out-of-range
  // endpoints, or identities that are not distinct positive integers.
  Graph(std::size_t n, std::span<const Edge> edges, std::vector<NodeId> ids = {}) {
    build(n, edges);
    if (ids.empty()) {
      ids_ = default_ids(n);
    } else {
      set_ids(std::move(ids));
    }
  }

  std::size_t node_count() const noexcept { return offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  std::size_t max_degree() const noexcept {
    std::size_t best = 0;
    for (Vertex v = 0; v < node_count(); ++v) best = std::max(best, degree(v));
    return best;
  }

  bool has_edge(Vertex u, Vertex v) const noexcept {
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  NodeId id(Vertex v) const noexcept { return ids_[v]; }
  std::span<const NodeId> ids() const noexcept { return ids_; }
  bool has_default_ids() const noexcept { return id_index_.empty(); }

  NodeId max_id() const noexcept {
    return ids_.empty() ? 0 : *std::max_element(ids_.begin(), ids_.end());
  }

  std::optional<Vertex> vertex_of(NodeId id) const {
    if (id_index_.empty()) {
      if (id >= 1 && id <= node_count()) return static_cast<Vertex>(id - 1);
      return std::nullopt;
    }
    const auto it = id_index_.find(id);
    if (it == id_index_.end()) return std::nullopt;
    return it->second;
  }

  // Edges with u < v in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (Vertex u = 0; u < node_count(); ++u) {
      for (Vertex v : neighbors(u)) {
        if (u < v) out.push_back({u, v});
      }
    }
    return out;
  }

  Graph with_ids(std::vector<NodeId> ids) const {
    Graph g = *this;
    g.set_ids(std::move(ids));
    return g;
  }

  // Same structure, identities a uniformly random permutation of 1..n.
  Graph with_permuted_ids(std::uint64_t seed) const {
    std::vector<NodeId> ids = default_ids(node_count());
    RandomStream rng(derive_seed(seed, 0x1D5));
    rng.shuffle(ids.begin(), ids.end());
    return with_ids(std::move(ids));
  }

  // Removes the listed edges (which must exist); identities are kept.
  Graph without_edges(std::span<const Edge> removed) const {
    std::vector<Edge> drop(removed.begin(), removed.end());
    for (auto& e : drop) {
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(drop.begin(), drop.end());
    std::vector<Edge> keep;
    for (const Edge& e : edges()) {
      if (!std::binary_search(drop.begin(), drop.end(), e)) keep.push_back(e);
    }
    return Graph(node_count(), keep, std::vector<NodeId>(ids_.begin(), ids_.end()));
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.offsets_ == b.offsets_ && a.adjacency_ == b.adjacency_ && a.ids_ == b.ids_;
  }

 private:
  static std::vector<NodeId> default_ids(std::size_t n) {
    std::vector<NodeId> ids(n);
    std::iota(ids.begin(), ids.end(), NodeId{1});
    return ids;
  }

  void build(std::size_t n, std::span<const Edge> edges) {
    std::vector<Edge> sorted;
    sorted.reserve(edges.size());
    for (Edge e : edges) {
      if (e.u >= n || e.v >= n) {
        throw InvalidArgument("edge endpoint out of range: " + std::to_string(e.u) + "-" +
                              std::to_string(e.v));
      }
      if (e.u == e.v) throw InvalidArgument("self-loop at vertex " + std::to_string(e.u));
      if (e.u > e.v) std::swap(e.u, e.v);
      sorted.push_back(e);
    }
    std::sort(sorted.begin(), sorted.end());
    if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
      throw InvalidArgument("duplicate edge " + std::to_string(dup->u) + "-" + std::to_string(dup->v));
    }
    offsets_.assign(n + 1, 0);
    for (const Edge& e : sorted) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adjacency_.resize(2 * sorted.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : sorted) {
      adjacency_[fill[e.u]++] = e.v;
      adjacency_[fill[e.v]++] = e.u;
    }
    for (Vertex v = 0; v < n; ++v) {
      std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
    }
  }

  void set_ids(std::vector<NodeId> ids) {
    if (ids.size() != node_count()) throw InvalidArgument("identity count does not match node count");
    std::unordered_map<NodeId, Vertex> index;
    index.reserve(ids.size());
    bool identity = true;
    for (Vertex v = 0; v < ids.size(); ++v) {
      if (ids[v] == 0) throw InvalidArgument("node identities must be positive");
      if (!index.emplace(ids[v], v).second) {
        throw InvalidArgument("duplicate node identity " + std::to_string(ids[v]));
      }
      identity = identity && ids[v] == NodeId{v} + 1;
    }
    ids_ = std::move(ids);
    if (identity) {
      id_index_.clear();
    } else {
      id_index_ = std::move(index);
    }
  }

  std::vector<std::size_t> offsets_;
  std::vector<Vertex> adjacency_;
  std::vector<NodeId> ids_;
  std::unordered_map<NodeId, Vertex> id_index_;  // empty when ids are 1..n
};

// Subgraph on the nodes with the given identities (in the given order),
// keeping exactly the edges of g internal to that set and the identities.
inline Graph induced_subgraph(const Graph& g, std::span<const NodeId> node_ids) {
  std::vector<Vertex> pick;
  pick.reserve(node_ids.size());
  for (NodeId id : node_ids) {
    const auto v = g.vertex_of(id);
    if (!v) throw InvalidArgument("unknown node identity " + std::to_string(id));
    pick.push_back(*v);
  }
  std::unordered_map<Vertex, Vertex> local;
  for (Vertex i = 0; i < pick.size(); ++i) {
    if (!local.emplace(pick[i], i).second) {
      throw InvalidArgument("node identity listed twice: " + std::to_string(g.id(pick[i])));
    }
  }
  std::vector<Edge> edges;
  std::vector<NodeId> ids;
  ids.reserve(pick.size());
  for (Vertex i = 0; i < pick.size(); ++i) {
    ids.push_back(g.id(pick[i]));
    for (Vertex w : g.neighbors(pick[i])) {
      const auto it = local.find(w);
      if (it != local.end() && i < it->second) edges.push_back({i, it->second});
    }
  }
  return Graph(pick.size(), edges, std::move(ids));
}

// Same, addressed by vertex index; identities are carried over.
inline Graph induced_subgraph_by_vertex(const Graph& g, std::span<const Vertex> vertices) {
  std::vector<NodeId> ids;
  ids.reserve(vertices.size());
  for (Vertex v : vertices) ids.push_back(g.id(v));
  return induced_subgraph(g, ids);
}

// ---------------------------------------------------------------------------
// Edge-list files: first line "n m", then m lines "u v" with 1 <= u < v <= n.

inline Graph read_edge_list(std::istream& in) {
  std::string line;
  auto next_line = [&](std::size_t& line_no) -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      return true;
    }
    return false;
  };
  std::size_t line_no = 0;
  if (!next_line(line_no)) throw FormatError("empty graph file");
  std::istringstream header(line);
  long long n = -1;
  long long m = -1;
  if (!(header >> n >> m) || n < 0 || m < 0) {
    throw FormatError("line " + std::to_string(line_no) + ": expected header \"n m\"");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!next_line(line_no)) {
      throw FormatError("expected " + std::to_string(m) + " edges, found " + std::to_string(i));
    }
    std::istringstream row(line);
    long long u = 0;
    long long v = 0;
    std::string extra;
    if (!(row >> u >> v) || (row >> extra)) {
      throw FormatError("line " + std::to_string(line_no) + ": expected \"u v\"");
    }
    if (u == v) throw FormatError("line " + std::to_string(line_no) + ": self-loop");
    if (u < 1 || v > n || u > v) {
      throw FormatError("line " + std::to_string(line_no) + ": need 1 <= u < v <= n");
    }
    edges.push_back({static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1)});
  }
  if (next_line(line_no)) throw FormatError("line " + std::to_string(line_no) + ": trailing data");
  std::vector<Edge> sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
    throw FormatError("duplicate edge " + std::to_string(dup->u + 1) + " " + std::to_string(dup->v + 1));
  }
  return Graph(static_cast<std::size_t>(n), edges);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u + 1 << ' ' << e.v + 1 << '\n';
}

}  // namespace hfree
