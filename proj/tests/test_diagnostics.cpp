#include <gtest/gtest.h>

#include "hfree/constructions.hpp"
#include "hfree/diagnostics.hpp"
#include "hfree/generators.hpp"
#include "hfree/rng.hpp"

#include <algorithm>

using namespace hfree;
namespace gen = hfree::generators;

TEST(Diagnostics, DisjointC4s) {
  const Pattern h = patterns::cycle(4);
  const Diagnostics d = compute_diagnostics(gen::disjoint_copies(h, 50), h, 0.9);
  EXPECT_EQ(d.n, 200U);
  EXPECT_EQ(d.m, 200U);
  EXPECT_EQ(d.copies, 50U);
  EXPECT_TRUE(d.eps_far_evidence);
  EXPECT_EQ(d.good_edges, 200U);
  EXPECT_EQ(d.important_edges, 200U);
  EXPECT_EQ(d.important_good_edges, 200U);
  EXPECT_DOUBLE_EQ(*d.dfs_lower_bound, 200.0 / 4.0);
  EXPECT_EQ(d.good_vertices, 200U);
  EXPECT_EQ(d.bad_vertex_copy_sum, 0U);
  EXPECT_EQ(d.good_edge_bound_holds, true);
  EXPECT_EQ(d.important_good_bound_holds, true);
  EXPECT_FALSE(d.bad_vertex_bound_holds.has_value());
}

TEST(Diagnostics, LayeredCycleGraphEveryVertexInTwoCopies) {
  const LayeredGraph lg = build_bc(5, digit_perm_set(2, 5, 29, 5));
  const Diagnostics d = compute_diagnostics(lg.graph, patterns::cycle(5), 0.5);
  EXPECT_EQ(d.copies, 58U);
  for (auto c : d.c) EXPECT_EQ(c, 2U);
  EXPECT_FALSE(d.important_edges.has_value());
  EXPECT_DOUBLE_EQ(d.bfs_lower_bound, 145 * 2.0 * 2.0 / 16.0);
}

TEST(Diagnostics, EmptyGraph) {
  const Diagnostics d = compute_diagnostics(Graph(), patterns::cycle(4), 0.5);
  EXPECT_EQ(d.n, 0U);
  EXPECT_EQ(d.m, 0U);
  EXPECT_EQ(d.copies, 0U);
  EXPECT_EQ(d.good_edges, 0U);
  EXPECT_EQ(d.important_edges, 0U);
  EXPECT_EQ(d.good_vertices, 0U);
  EXPECT_FALSE(d.eps_far_evidence);
  EXPECT_FALSE(d.good_edge_bound_holds.has_value());
}

TEST(Diagnostics, K4Copies) {
  const Pattern h = patterns::clique(4);
  const Diagnostics d = compute_diagnostics(gen::disjoint_copies(h, 20), h, 0.9);
  EXPECT_EQ(d.copies, 20U);
  EXPECT_EQ(d.important_edges, 120U);
  EXPECT_EQ(d.bad_vertex_bound_holds, true);
  EXPECT_NEAR(d.bfs_lower_bound, 80 * 2.0 / 9.0, 1e-9);
}

TEST(Diagnostics, CountsBoundedAndInequalitiesHoldOnFarInstances) {
  const Pattern h = patterns::cycle(4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    // Planted C4s on a sparse random background.
    const Graph planted = gen::disjoint_copies(h, 30);
    std::vector<Edge> e = planted.edges();
    RandomStream rng(seed);
    for (int i = 0; i < 20; ++i) {
      const Vertex a = static_cast<Vertex>(rng.below(120));
      const Vertex b = static_cast<Vertex>(rng.below(120));
      if (a != b && std::find(e.begin(), e.end(), Edge{std::min(a, b), std::max(a, b)}) == e.end()) {
        e.push_back({std::min(a, b), std::max(a, b)});
      }
    }
    const Graph g(120, e);
    for (double eps : {0.3, 0.6}) {
      const Diagnostics d = compute_diagnostics(g, h, eps);
      EXPECT_LE(d.good_edges, d.m);
      EXPECT_LE(*d.important_edges, d.m);
      EXPECT_LE(*d.important_good_edges, *d.important_edges);
      EXPECT_LE(d.good_vertices, d.n);
      if (d.eps_far_evidence) {
        EXPECT_EQ(d.good_edge_bound_holds, true);
        EXPECT_EQ(d.important_good_bound_holds, true);
      }
    }
  }
}

TEST(Diagnostics, InvalidInput) {
  EXPECT_THROW(compute_diagnostics(gen::cycle(4), patterns::cycle(4), 0.0), InvalidArgument);
  EXPECT_THROW(compute_diagnostics(gen::cycle(4), pattern_traits(Graph(2)), 0.5), InvalidArgument);
}
