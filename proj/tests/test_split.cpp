#include <catch2/catch.hpp>

#include <set>
#include <unordered_set>

#include "hmldm/split.hpp"
#include "hmldm/synthetic.hpp"

using namespace hmldm;

namespace {

std::uint64_t key(const Edge& e) {
  return (static_cast<std::uint64_t>(e.first) << 32) | static_cast<std::uint32_t>(e.second);
}

// Connected test graph: a random spanning tree plus extra random edges.
Graph random_connected_graph(NodeId n, std::size_t extra_edges, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) {
    NodeId u = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(v)));
    edges.emplace_back(u, v);
  }
  std::size_t added = 0;
  while (added < extra_edges) {
    NodeId a = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
    NodeId b = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
    if (a == b) continue;
    edges.emplace_back(std::min(a, b), std::max(a, b));
    ++added;
  }
  return Graph::unipartite(n, std::move(edges));
}

}  // namespace

TEST_CASE("spanning forest spans every component") {
  Graph g = random_connected_graph(40, 60, 7);
  Rng rng(3);
  auto forest = random_spanning_forest(g, rng);
  CHECK(forest.size() == 39);  // spanning tree of a connected graph
  Graph tree = Graph::unipartite(g.n_nodes(), forest);
  CHECK(is_connected(tree));
  for (const auto& e : forest) CHECK(g.has_edge(e.first, e.second));
}

TEST_CASE("split on the triangle holds out exactly one edge") {
  Graph tri = Graph::unipartite(3, {{0, 1}, {1, 2}, {0, 2}});
  auto split = split_for_link_prediction(tri, 0.34, 5);
  CHECK(split.test_positives.size() == 1);
  CHECK(split.train.n_edges() == 2);
  CHECK(is_connected(split.train));
  CHECK_FALSE(split.fewer_positives_than_requested);
  CHECK(split.test_negatives.empty());  // K3 has no non-edges to sample
}

TEST_CASE("splitting a tree removes nothing and warns") {
  Graph path = Graph::unipartite(3, {{0, 1}, {1, 2}});
  auto split = split_for_link_prediction(path, 0.5, 11);
  CHECK(split.test_positives.empty());
  CHECK(split.test_negatives.empty());
  CHECK(split.train.n_edges() == 2);
  CHECK(split.fewer_positives_than_requested);
}

TEST_CASE("split rejects out-of-range fractions") {
  Graph tri = Graph::unipartite(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK_THROWS_AS(split_for_link_prediction(tri, 0.0, 1), ValidationError);
  CHECK_THROWS_AS(split_for_link_prediction(tri, 1.0, 1), ValidationError);
}

TEST_CASE("split property: residual connected, sets disjoint, counts exact") {
  Graph g = random_connected_graph(30, 45, 99);
  const std::size_t expect = g.n_edges() / 2;

  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto split = split_for_link_prediction(g, 0.5, seed);
    REQUIRE(is_connected(split.train));
    REQUIRE(split.test_positives.size() + split.train.n_edges() == g.n_edges());

    std::unordered_set<std::uint64_t> train_keys;
    for (const auto& e : split.train.edges()) train_keys.insert(key(e));
    for (const auto& e : split.test_positives) {
      REQUIRE(g.has_edge(e.first, e.second));
      REQUIRE_FALSE(train_keys.count(key(e)));
    }
    REQUIRE(split.test_negatives.size() == split.test_positives.size());
    std::unordered_set<std::uint64_t> neg_keys;
    for (const auto& e : split.test_negatives) {
      REQUIRE_FALSE(g.has_edge(e.first, e.second));
      REQUIRE(neg_keys.insert(key(e)).second);  // no duplicates
    }
    if (!split.fewer_positives_than_requested) REQUIRE(split.test_positives.size() == expect);
  }
}

TEST_CASE("split is deterministic per seed") {
  Graph g = random_connected_graph(25, 30, 4);
  auto a = split_for_link_prediction(g, 0.5, 1234);
  auto b = split_for_link_prediction(g, 0.5, 1234);
  CHECK(a.train == b.train);
  CHECK(a.test_positives == b.test_positives);
  CHECK(a.test_negatives == b.test_negatives);
  auto c = split_for_link_prediction(g, 0.5, 1235);
  CHECK_FALSE(a.test_positives == c.test_positives);
}

TEST_CASE("negative sampling: exact small cases") {
  SECTION("count zero") {
    Graph tri = Graph::unipartite(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(sample_negative_pairs(tri, 0, 1).empty());
  }
  SECTION("empty graph: all pairs are non-edges") {
    Graph empty = Graph::unipartite(4, {});
    auto neg = sample_negative_pairs(empty, 6, 1);
    std::set<Edge> got(neg.begin(), neg.end());
    CHECK(got == std::set<Edge>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  }
  SECTION("star graph: the non-edges are the leaf pairs") {
    // Oracle: enumerate non-edges of the 4-node star by brute force.
    Graph star = Graph::unipartite(4, {{0, 1}, {0, 2}, {0, 3}});
    std::set<Edge> expected;
    for (NodeId i = 0; i < 4; ++i)
      for (NodeId j = i + 1; j < 4; ++j)
        if (!star.has_edge(i, j)) expected.insert({i, j});
    CHECK(expected == std::set<Edge>{{1, 2}, {1, 3}, {2, 3}});
    auto neg = sample_negative_pairs(star, 3, 7);
    CHECK(std::set<Edge>(neg.begin(), neg.end()) == expected);
  }
  SECTION("infeasible request names the budget") {
    Graph tri = Graph::unipartite(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK_THROWS_WITH(sample_negative_pairs(tri, 1, 1), Catch::Contains("0 non-edges"));
  }
}

TEST_CASE("negative samples never collide with edges or excludes") {
  Graph g = random_connected_graph(50, 100, 21);
  std::vector<Edge> exclude{{0, 5}, {3, 9}};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto neg = sample_negative_pairs(g, 40, seed, exclude);
    CHECK(neg.size() == 40);
    std::set<Edge> seen;
    for (const auto& e : neg) {
      CHECK_FALSE(g.has_edge(e.first, e.second));
      CHECK(seen.insert(e).second);
      for (const auto& x : exclude) CHECK(e != x);
    }
  }
}

TEST_CASE("negative sampling on bipartite graphs stays cross-partition") {
  Graph bip = Graph::bipartite({3, 4}, {{0, 3}, {1, 4}, {2, 5}});
  auto neg = sample_negative_pairs(bip, 5, 3);
  CHECK(neg.size() == 5);
  for (const auto& [r, c] : neg) {
    CHECK(r < 3);
    CHECK(c >= 3);
    CHECK_FALSE(bip.has_edge(r, c));
  }
}

TEST_CASE("bipartite splits keep every invariant cross-partition") {
  auto bb = generate_bipartite_blocks(25, 30, 3, 0.6, 0.1, 13);
  auto split = split_for_link_prediction(bb.graph, 0.5, 3);
  CHECK(split.train.is_bipartite());
  CHECK(is_connected(split.train));
  CHECK(split.test_positives.size() + split.train.n_edges() == bb.graph.n_edges());
  for (const auto& [r, c] : split.test_positives) {
    CHECK(r < 25);
    CHECK(c >= 25);
  }
  for (const auto& [r, c] : split.test_negatives) {
    CHECK(r < 25);
    CHECK(c >= 25);
    CHECK_FALSE(bb.graph.has_edge(r, c));
  }
}

TEST_CASE("rejection path matches feasibility accounting") {
  // > 1000 nodes exercises the rejection sampler.
  Graph g = random_connected_graph(1200, 2000, 5);
  auto neg = sample_negative_pairs(g, 3000, 17);
  CHECK(neg.size() == 3000);
  std::set<Edge> seen;
  for (const auto& e : neg) {
    CHECK_FALSE(g.has_edge(e.first, e.second));
    CHECK(seen.insert(e).second);
  }
  auto again = sample_negative_pairs(g, 3000, 17);
  CHECK(neg == again);
}
