#include <gtest/gtest.h>

#include <cmath>

#include "hfree/choice_tree.hpp"
#include "hfree/dfs_tester.hpp"
#include "hfree/generators.hpp"

using namespace hfree;
namespace gen = hfree::generators;

namespace {

// Exact rejection probability of one iteration of the 4-node DFS tester,
// computed without the engine. Round-2 message x->y is (r2[x][y], x) with
// r2[x][y] uniform over N(x); round-3 message x->y is (r2[u][x], u, x) with
// u = r3[x][y] uniform over N(x); y then holds G restricted to those four
// nodes. Given all round-2 draws, the round-3 draws are independent, so
//   Pr[no reject] = E_{r2} prod_{x->y} (1 - good(x,y)/d(x)).
// Returned as numerator / denominator.
std::pair<std::uint64_t, std::uint64_t> dfs4_reject_probability(const Graph& g, const Pattern& h, MatchMode mode) {
  const std::size_t n = g.node_count();
  std::vector<std::pair<Vertex, Vertex>> arcs;
  for (Vertex x = 0; x < n; ++x) {
    for (Vertex y : g.neighbors(x)) arcs.emplace_back(x, y);
  }
  std::vector<std::size_t> arc_of(n * n, 0);
  for (std::size_t a = 0; a < arcs.size(); ++a) arc_of[arcs[a].first * n + arcs[a].second] = a;
  // hit[((w*n + u)*n + x)*n + y]: the four nodes are distinct and carry H.
  std::vector<char> hit(n * n * n * n, 0);
  for (const auto& [x, y] : arcs) {
    for (Vertex u : g.neighbors(x)) {
      for (Vertex w : g.neighbors(u)) {
        std::vector<Vertex> set{w, u, x, y};
        std::vector<Vertex> sorted = set;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
        hit[((w * n + u) * n + x) * n + y] = contains_pattern(induced_subgraph_by_vertex(g, set), h, mode) ? 1 : 0;
      }
    }
  }
  std::vector<std::size_t> r2(arcs.size(), 0);
  std::uint64_t configs = 1;
  for (const auto& arc : arcs) configs *= g.degree(arc.first);
  const std::uint64_t r3_total = configs;
  std::uint64_t no_reject = 0;
  for (std::uint64_t c = 0; c < configs; ++c) {
    std::uint64_t rest = c;
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      const std::size_t d = g.degree(arcs[a].first);
      r2[a] = rest % d;
      rest /= d;
    }
    std::uint64_t product = 1;
    for (const auto& [x, y] : arcs) {
      std::uint64_t bad = 0;
      for (Vertex u : g.neighbors(x)) {
        const Vertex w = g.neighbors(u)[r2[arc_of[u * n + x]]];
        bad += hit[((w * n + u) * n + x) * n + y] ? 0 : 1;
      }
      product *= bad;
      if (product == 0) break;
    }
    no_reject += product;
  }
  const std::uint64_t total = configs * r3_total;
  return {total - no_reject, total};
}

std::vector<Vertex> vertices_of(const Graph& g, std::initializer_list<NodeId> ids) {
  std::vector<Vertex> out;
  for (NodeId id : ids) out.push_back(*g.vertex_of(id));
  return out;
}

// Probability that the last node of `path` ends up holding the view listing
// `path` in order, by enumerating the draws that can influence it.
Rational path_view_probability(const Graph& g, const Pattern& h, const std::vector<Vertex>& path) {
  const auto factory = dfs_program(h, MatchMode::Subgraph);
  Simulator<DfsProgram> sim(g, factory);
  const std::size_t k = path.size();
  const auto cone = dfs_draw_cone(g, path[k - 2], path[k - 1], factory.rounds());
  const FreeDraw is_free = [&](NodeId id, std::uint64_t draw) { return cone.contains({id, draw}); };
  std::vector<NodeId> ids;
  for (Vertex v : path) ids.push_back(g.id(v));
  const auto event = [&](Simulator<DfsProgram>& s) {
    for (const PartialView& v : s.programs()[path.back()].final_views()) {
      if (v.count == k && std::equal(ids.begin(), ids.end(), v.nodes.begin())) return true;
    }
    return false;
  };
  return enumerate_probability(sim, factory.rounds(), is_free, event).probability;
}

Rational inverse_inner_degrees(const Graph& g, const std::vector<Vertex>& path) {
  Rational p = 1;
  for (std::size_t i = 1; i + 1 < path.size(); ++i) p /= g.degree(path[i]);
  return p;
}

bool always_accepts(const Graph& g, const Pattern& h, MatchMode mode, std::uint64_t seeds, std::size_t iters) {
  for (std::uint64_t s = 0; s < seeds; ++s) {
    TestOptions o;
    o.stop_at_first_reject = true;
    if (dfs_test(g, DfsParams{h, 0.5, iters, mode}, s, o).decision == Decision::Reject) return false;
  }
  return true;
}

}  // namespace

TEST(DfsIterations, FrozenValues) {
  EXPECT_EQ(dfs_iterations_for(1.0, 4), 2250U);
  EXPECT_EQ(dfs_iterations_for(0.5, 4), 9000U);
  EXPECT_EQ(dfs_iterations_for(0.5, 6), 20250U);
  EXPECT_EQ(dfs_iterations_for(0.9, 4), 2778U);
  EXPECT_EQ(dfs_iterations_for(0.9, 6), 6250U);
  EXPECT_EQ(dfs_iterations_for(1.0, 5), 3516U);
}

TEST(DfsIterations, DomainErrors) {
  EXPECT_THROW(dfs_iterations_for(0.0, 4), InvalidArgument);
  EXPECT_THROW(dfs_iterations_for(1.5, 4), InvalidArgument);
  EXPECT_THROW(dfs_iterations_for(-0.1, 4), InvalidArgument);
  EXPECT_THROW(dfs_iterations_for(0.5, 0), InvalidArgument);
}

TEST(DfsProgram, IneligiblePatterns) {
  EXPECT_THROW(dfs_program(patterns::claw(), MatchMode::Subgraph), InvalidArgument);
  EXPECT_THROW(dfs_program(patterns::star(4), MatchMode::Subgraph), InvalidArgument);
  const Pattern single = pattern_traits(Graph(1));
  EXPECT_THROW(dfs_program(single, MatchMode::Subgraph), InvalidArgument);
  EXPECT_NO_THROW(dfs_program(patterns::path(2), MatchMode::Subgraph));
}

TEST(DfsProgram, FactoryShape) {
  const auto f4 = dfs_program(patterns::cycle(4), MatchMode::Subgraph);
  EXPECT_EQ(f4.rounds(), 3);
  EXPECT_EQ(f4.encoding(), DfsEncoding::Compact4);
  EXPECT_EQ(f4.budget().max_ids_per_edge_per_round, 3U);
  EXPECT_EQ(f4.budget().max_extra_bits, 1U);
  const auto f5 = dfs_program(patterns::cycle(5), MatchMode::Subgraph);
  EXPECT_EQ(f5.rounds(), 4);
  EXPECT_EQ(f5.encoding(), DfsEncoding::FullAdjacency);
  EXPECT_EQ(f5.budget().max_ids_per_edge_per_round, 4U);
  EXPECT_EQ(f5.budget().max_extra_bits, 6U);
}

TEST(DfsProgram, EncodingRoundTrip) {
  PartialView v;
  v.nodes = {7, 3, 9};
  v.count = 3;
  v.adjacency = (1U << pair_bit(0, 1)) | (1U << pair_bit(1, 2)) | (1U << pair_bit(0, 2));
  for (DfsEncoding enc : {DfsEncoding::Compact4, DfsEncoding::FullAdjacency}) {
    EXPECT_EQ(decode_view(encode_view(v, enc), enc), v);
  }
  const DfsMessage compact = encode_view(v, DfsEncoding::Compact4);
  EXPECT_EQ(compact.size(), (MessageSize{3, 1}));
  EXPECT_EQ(encode_view(v, DfsEncoding::FullAdjacency).size(), (MessageSize{3, 3}));
  v.adjacency &= ~(1U << pair_bit(0, 2));
  EXPECT_EQ(decode_view(encode_view(v, DfsEncoding::Compact4), DfsEncoding::Compact4), v);
  PartialView rep;
  rep.nodes = {1, 2, 1};
  rep.count = 3;
  EXPECT_FALSE(rep.distinct());
}

TEST(DfsProgram, MessageSizesPerRound) {
  const Graph g = gen::complete(7);
  {
    const auto f = dfs_program(patterns::cycle(4), MatchMode::Subgraph);
    const auto r = run(g, f, f.rounds(), f.budget(), 3);
    ASSERT_EQ(r.transcript.round_max.size(), 3U);
    EXPECT_EQ(r.transcript.round_max[0], (MessageSize{1, 0}));
    EXPECT_EQ(r.transcript.round_max[1], (MessageSize{2, 0}));
    EXPECT_EQ(r.transcript.round_max[2], (MessageSize{3, 1}));
    for (const auto& round : r.transcript.traffic) {
      for (std::size_t e = 0; e < round.size(); ++e) EXPECT_EQ(round[e], round[0]);
    }
  }
  {
    const auto f = dfs_program(patterns::cycle(6), MatchMode::Subgraph);
    const auto r = run(g, f, f.rounds(), f.budget(), 3);
    for (unsigned t = 1; t <= 5; ++t) {
      EXPECT_EQ(r.transcript.round_max[t - 1], (MessageSize{t, pair_count(t)}));
    }
    EXPECT_TRUE(r.transcript.violations.empty());
  }
}

TEST(DfsProgram, IsolatedNodesAccept) {
  const Graph g(5);
  const auto f = dfs_program(patterns::cycle(4), MatchMode::Subgraph);
  const auto r = run(g, f, f.rounds(), f.budget(), 1);
  for (Decision d : r.decisions) EXPECT_EQ(d, Decision::Accept);
  EXPECT_EQ(r.transcript.total_bits, 0U);
}

TEST(DfsOneSided, RandomizedCorpus) {
  EXPECT_TRUE(always_accepts(gen::random_tree(60, 1), patterns::cycle(4), MatchMode::Subgraph, 20, 50));
  EXPECT_TRUE(always_accepts(gen::random_bipartite(15, 15, 0.3, 3), patterns::cycle(5), MatchMode::Subgraph, 20, 50));
  EXPECT_TRUE(always_accepts(gen::cycle(5), patterns::clique(4), MatchMode::Subgraph, 20, 50));
  EXPECT_TRUE(always_accepts(gen::cycle(7), patterns::cycle(5), MatchMode::Subgraph, 20, 50));
  // K4 has C4 as a subgraph but not as an induced subgraph.
  EXPECT_TRUE(always_accepts(gen::complete(4), patterns::cycle(4), MatchMode::Induced, 20, 50));
  EXPECT_FALSE(always_accepts(gen::complete(4), patterns::cycle(4), MatchMode::Subgraph, 5, 50));
  EXPECT_TRUE(always_accepts(gen::complete_bipartite(4, 4).with_permuted_ids(5), patterns::clique(4),
                             MatchMode::Subgraph, 20, 50));
}

TEST(DfsOneSided, ExhaustiveOnTinyGraphs) {
  const FreeDraw all = [](NodeId, std::uint64_t) { return true; };
  const auto never = [](auto& s) { return s.any_reject(); };
  for (const Graph& g : {gen::cycle(5), gen::path(5), gen::star(3)}) {
    const auto f = dfs_program(patterns::cycle(4), MatchMode::Subgraph);
    Simulator<DfsProgram> sim(g, f);
    EXPECT_EQ(enumerate_probability(sim, f.rounds(), all, never).probability, 0);
  }
}

TEST(DfsChoiceTree, OracleMatchesEnumerationOnC4) {
  const Graph g = gen::cycle(4);
  const Pattern h = patterns::cycle(4);
  const auto f = dfs_program(h, MatchMode::Subgraph);
  Simulator<DfsProgram> sim(g, f);
  const FreeDraw all = [](NodeId, std::uint64_t) { return true; };
  const auto result = enumerate_probability(sim, f.rounds(), all, [](auto& s) { return s.any_reject(); });
  const auto [num, den] = dfs4_reject_probability(g, h, MatchMode::Subgraph);
  EXPECT_EQ(result.probability, Rational(num) / Rational(den));
}

TEST(DfsChoiceTree, OracleMatchesEnumerationWithPendant) {
  // C4 with a pendant node on vertex 0.
  const std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}};
  const Graph g(5, e);
  const Pattern h = patterns::path(4);
  const auto f = dfs_program(h, MatchMode::Induced);
  Simulator<DfsProgram> sim(g, f);
  const FreeDraw all = [](NodeId, std::uint64_t) { return true; };
  const auto result = enumerate_probability(sim, f.rounds(), all, [](auto& s) { return s.any_reject(); });
  const auto [num, den] = dfs4_reject_probability(g, h, MatchMode::Induced);
  EXPECT_EQ(result.probability, Rational(num) / Rational(den));
  EXPECT_GT(result.probability, 0);
}

TEST(DfsChoiceTree, PerPathProbabilityC4) {
  const Graph g = gen::cycle(4);
  const Pattern h = patterns::cycle(4);
  std::vector<Vertex> path{0, 1, 2, 3};
  // Every directed Hamiltonian path of the 4-cycle.
  for (int rot = 0; rot < 4; ++rot) {
    for (bool reverse : {false, true}) {
      std::vector<Vertex> p(4);
      for (int i = 0; i < 4; ++i) p[i] = static_cast<Vertex>((rot + (reverse ? -i + 4 : i)) % 4);
      EXPECT_EQ(path_view_probability(g, h, p), Rational(1, 4));
      EXPECT_EQ(inverse_inner_degrees(g, p), Rational(1, 4));
    }
  }
}

TEST(DfsChoiceTree, PerPathProbabilityIsInverseInnerDegrees) {
  // C4 on 1..4 with extra pendants raising the inner degrees.
  const std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 4}, {2, 5}, {2, 6}};
  const Graph g(7, e);
  const std::vector<Vertex> p = vertices_of(g, {1, 2, 3, 4});
  EXPECT_EQ(inverse_inner_degrees(g, p), Rational(1, 12));
  EXPECT_EQ(path_view_probability(g, patterns::cycle(4), p), Rational(1, 12));
  EXPECT_EQ(path_view_probability(g, patterns::path(4), p), Rational(1, 12));

  const Graph c5 = gen::cycle(5);
  const std::vector<Vertex> q{0, 1, 2, 3, 4};
  EXPECT_EQ(path_view_probability(c5, patterns::cycle(5), q), Rational(1, 8));

  // Same 5-cycle with identities permuted and a chord-free branch.
  const std::vector<Edge> e5{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {2, 5}, {5, 6}};
  const Graph g5 = Graph(7, e5).with_permuted_ids(4);
  EXPECT_EQ(path_view_probability(g5, patterns::cycle(5), q), Rational(1, 12));
}

TEST(DfsChoiceTree, DisjointCopiesDetectIndependently) {
  // Two 4-cycles sharing vertex 0: 0-1-2-3-0 and 0-4-5-6-0. The two path
  // events both pass through vertex 0 and use two of its draws.
  const std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}, {4, 5}, {5, 6}, {6, 0}};
  const Graph g(7, e);
  const auto f = dfs_program(patterns::cycle(4), MatchMode::Subgraph);
  Simulator<DfsProgram> sim(g, f);
  auto cone = dfs_draw_cone(g, 0, 3, 3);
  const auto cone2 = dfs_draw_cone(g, 0, 6, 3);
  cone.insert(cone2.begin(), cone2.end());
  const FreeDraw is_free = [&](NodeId id, std::uint64_t d) { return cone.contains({id, d}); };
  auto holds = [](Simulator<DfsProgram>& s, Vertex at, std::vector<NodeId> ids) {
    for (const PartialView& v : s.programs()[at].final_views()) {
      if (v.count == 4 && std::equal(ids.begin(), ids.end(), v.nodes.begin())) return true;
    }
    return false;
  };
  auto e1 = [&](auto& s) { return holds(s, 3, {3, 2, 1, 4}); };
  auto e2 = [&](auto& s) { return holds(s, 6, {6, 5, 1, 7}); };
  const Rational p1 = enumerate_probability(sim, 3, is_free, e1).probability;
  const Rational p2 = enumerate_probability(sim, 3, is_free, e2).probability;
  const Rational both = enumerate_probability(sim, 3, is_free, [&](auto& s) { return e1(s) && e2(s); }).probability;
  EXPECT_EQ(p1, Rational(1, 8));
  EXPECT_EQ(p2, Rational(1, 8));
  EXPECT_EQ(both, p1 * p2);
}

TEST(DfsChoiceTree, LeafCapAndDrawOrderChecks) {
  const Graph g = gen::complete(4);
  const auto f = dfs_program(patterns::cycle(4), MatchMode::Subgraph);
  Simulator<DfsProgram> sim(g, f);
  const FreeDraw all = [](NodeId, std::uint64_t) { return true; };
  EXPECT_THROW(enumerate_probability(sim, f.rounds(), all, [](auto&) { return true; }, 1000), WorkCapExceeded);
}

TEST(DfsMonteCarlo, K4P4MatchesExactOracle) {
  const Graph g = gen::complete(4);
  const Pattern h = patterns::path(4);
  const auto [num, den] = dfs4_reject_probability(g, h, MatchMode::Subgraph);
  const double p = static_cast<double>(num) / static_cast<double>(den);
  TestOptions o;
  o.stop_at_first_reject = false;
  const std::size_t n = 10000;
  const TestResult r = dfs_test(g, DfsParams{h, 0.5, n, MatchMode::Subgraph}, 2024, o);
  std::size_t hits = 0;
  for (auto d : r.detections) hits += d > 0 ? 1 : 0;
  const double freq = static_cast<double>(hits) / n;
  const double sigma = std::sqrt(p * (1 - p) / n);
  EXPECT_GT(p, 0.0);
  EXPECT_LT(p, 1.0);
  EXPECT_NEAR(freq, p, 3 * sigma) << "exact " << p;
}

TEST(DfsTest, DisjointC4sRejectQuickly) {
  const Pattern h = patterns::cycle(4);
  const Graph g = gen::disjoint_copies(h, 50);
  const auto [num, den] = dfs4_reject_probability(gen::cycle(4), h, MatchMode::Subgraph);
  const double p = static_cast<double>(num) / static_cast<double>(den);
  TestOptions o;
  const TestResult r = dfs_test(g, DfsParams{h, 0.9, dfs_iterations_for(0.9, 4), MatchMode::Subgraph}, 5, o);
  EXPECT_EQ(r.decision, Decision::Reject);
  EXPECT_LE(r.iterations_run, 3U);
  o.stop_at_first_reject = false;
  const std::size_t iters = 200;
  const TestResult all = dfs_test(g, DfsParams{h, 0.9, iters, MatchMode::Subgraph}, 5, o);
  EXPECT_EQ(all.iterations_run, iters);
  const double sd = std::sqrt(50 * p * (1 - p) / iters);
  EXPECT_NEAR(all.mean_detections(), 50 * p, 5 * sd);
}

TEST(DfsTest, ParamValidation) {
  const Graph g = gen::cycle(4);
  EXPECT_THROW(dfs_test(g, DfsParams{patterns::cycle(4), 0.5, 0, MatchMode::Subgraph}, 1), InvalidArgument);
  EXPECT_THROW(dfs_test(g, DfsParams{patterns::cycle(4), 0.0, 5, MatchMode::Subgraph}, 1), InvalidArgument);
  EXPECT_THROW(dfs_test(g, DfsParams{patterns::claw(), 0.5, 5, MatchMode::Subgraph}, 1), InvalidArgument);
}

TEST(DfsTest, DetectionsAreCopiesOfH) {
  const Graph g = gen::gnp(30, 0.3, 8);
  const Pattern h = patterns::cycle(5);
  const auto f = dfs_program(h, MatchMode::Subgraph);
  Simulator<DfsProgram> sim(g, f);
  std::size_t seen = 0;
  for (std::uint64_t it = 0; it < 30; ++it) {
    RunOptions o;
    o.iteration = it;
    o.detailed_transcript = false;
    sim.run(f.rounds(), f.budget(), 1, o);
    for (const DfsProgram& p : sim.programs()) {
      for (const DetectedSet& s : p.detections()) {
        const std::vector<NodeId> ids(s.begin(), s.begin() + 5);
        EXPECT_TRUE(contains_pattern(induced_subgraph(g, ids), h, MatchMode::Subgraph));
        ++seen;
      }
    }
  }
  EXPECT_GT(seen, 0U);
}

TEST(ClawTest, Examples) {
  for (Decision d : claw_test(gen::cycle(4))) EXPECT_EQ(d, Decision::Accept);
  for (Decision d : claw_test(gen::path(3))) EXPECT_EQ(d, Decision::Accept);
  const auto star = claw_test(gen::star(3));
  EXPECT_EQ(star[0], Decision::Reject);
  for (std::size_t i = 1; i < star.size(); ++i) EXPECT_EQ(star[i], Decision::Accept);
  const Graph g = gen::gnp(40, 0.1, 2);
  const auto d = claw_test(g);
  for (Vertex v = 0; v < g.node_count(); ++v) EXPECT_EQ(d[v] == Decision::Reject, g.degree(v) >= 3);
}
