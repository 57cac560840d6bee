#pragma once

// Quantities from the detection-probability lower bounds, computed on a
// concrete graph from a greedy maximal family of edge-disjoint copies of H.
//
//   important edge  middle edge of a spanning P4 of one family copy (k = 4)
//   good edge       d(u) d(v) <= 4 m |E(H)| / eps
//   c(u)            number of family copies containing u
//   good vertex     d(u) <= 24 c(u) / eps

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "hfree/copies.hpp"
#include "hfree/graph.hpp"
#include "hfree/pattern.hpp"
#include "hfree/tester.hpp"

namespace hfree {

struct Diagnostics {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t pattern_edges = 0;
  double eps = 0;
  std::size_t copies = 0;
  // copies >= eps m / |E(H)|: the family is as large as eps-farness forces.
  bool eps_far_evidence = false;
  std::optional<std::size_t> important_edges;
  std::size_t good_edges = 0;
  std::optional<std::size_t> important_good_edges;
  std::vector<std::uint32_t> c;  // by vertex
  std::size_t good_vertices = 0;
  std::uint64_t bad_vertex_copy_sum = 0;
  // sum over important good edges of 1/(d(u)d(v)).
  std::optional<double> dfs_lower_bound;
  // sum over vertices of 2 c(u) / d(u)^2.
  double bfs_lower_bound = 0;

  // Inequalities of the lower-bound argument; evaluated only when
  // eps_far_evidence holds, otherwise nullopt.
  std::optional<bool> good_edge_bound_holds;       // good >= (1 - 3 eps/(4|E(H)|)) m
  std::optional<bool> important_good_bound_holds;  // important & good >= eps m / (4|E(H)|)
  std::optional<bool> bad_vertex_bound_holds;      // sum_{bad} c(u) < eps m / 12 (K4 only)
};

inline Diagnostics compute_diagnostics(const Graph& g, const Pattern& h, double eps, const WorkCaps& caps = {}) {
  check_eps(eps);
  Diagnostics out;
  out.n = g.node_count();
  out.m = g.edge_count();
  out.pattern_edges = h.edge_count();
  out.eps = eps;
  out.c.assign(out.n, 0);
  if (h.edge_count() == 0) throw InvalidArgument("pattern must have at least one edge");

  const CopyFamily family = greedy_edge_disjoint_copies(g, h, caps);
  out.copies = family.size();
  const double m = static_cast<double>(out.m);
  const double eh = static_cast<double>(h.edge_count());
  out.eps_far_evidence = out.m > 0 && static_cast<double>(out.copies) + 1e-9 >= eps * m / eh;

  for (const Copy& copy : family.copies) {
    for (Vertex v : copy.nodes) ++out.c[v];
  }

  std::unordered_set<std::uint64_t> important;
  if (h.k() == 4) {
    for (const Copy& copy : family.copies) {
      std::unordered_set<std::uint64_t> in_copy;
      for (const Edge& e : copy.edges) in_copy.insert(detail::edge_key(e.u, e.v));
      auto has = [&](Vertex a, Vertex b) { return in_copy.contains(detail::edge_key(a, b)); };
      std::vector<Vertex> order = copy.nodes;
      std::sort(order.begin(), order.end());
      do {
        if (has(order[0], order[1]) && has(order[1], order[2]) && has(order[2], order[3])) {
          important.insert(detail::edge_key(order[1], order[2]));
        }
      } while (std::next_permutation(order.begin(), order.end()));
    }
    out.important_edges = important.size();
  }

  const double good_threshold = 4.0 * m * eh / eps;
  std::size_t important_good = 0;
  double dfs_bound = 0;
  for (const Edge& e : g.edges()) {
    const double prod = static_cast<double>(g.degree(e.u)) * static_cast<double>(g.degree(e.v));
    if (prod > good_threshold * (1 + 1e-12)) continue;
    ++out.good_edges;
    if (important.contains(detail::edge_key(e.u, e.v))) {
      ++important_good;
      dfs_bound += 1.0 / prod;
    }
  }
  if (h.k() == 4) {
    out.important_good_edges = important_good;
    out.dfs_lower_bound = dfs_bound;
  }

  for (Vertex v = 0; v < out.n; ++v) {
    const double d = static_cast<double>(g.degree(v));
    if (d <= 24.0 * out.c[v] / eps * (1 + 1e-12)) {
      ++out.good_vertices;
    } else {
      out.bad_vertex_copy_sum += out.c[v];
    }
    if (d > 0) out.bfs_lower_bound += 2.0 * out.c[v] / (d * d);
  }

  if (out.eps_far_evidence) {
    out.good_edge_bound_holds = static_cast<double>(out.good_edges) + 1e-9 >= (1.0 - 3.0 * eps / (4.0 * eh)) * m;
    if (out.important_good_edges) {
      out.important_good_bound_holds = static_cast<double>(*out.important_good_edges) + 1e-9 >= eps * m / (4.0 * eh);
    }
    if (h.k() == 4 && h.edge_count() == 6) {
      out.bad_vertex_bound_holds = static_cast<double>(out.bad_vertex_copy_sum) < eps * m / 12.0 + 1e-9;
    }
  }
  return out;
}

}  // namespace hfree
