#include <catch2/catch.hpp>

#include "hmldm/reorder.hpp"
#include "hmldm/synthetic.hpp"

using namespace hmldm;

TEST_CASE("disjoint cliques reorder with empty off-diagonal blocks") {
  auto lg = generate_planted_partition(12, 3, 1.0, 0.0, 1);
  auto res = reorder_adjacency(lg.graph, lg.labels);
  REQUIRE(res.block_density.size() == 3);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      CHECK(res.block_density[a][b] == (a == b ? 1.0 : 0.0));
  // Positions invert the order.
  for (std::size_t pos = 0; pos < res.order.size(); ++pos)
    CHECK(res.position[static_cast<std::size_t>(res.order[pos])] == static_cast<NodeId>(pos));
}

TEST_CASE("single-community partition reduces to a degree sort") {
  Graph star = Graph::unipartite(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}});
  Partition all_zero(5, 0);
  auto res = reorder_adjacency(star, all_zero);
  CHECK(res.order[0] == 0);  // degree 4 first
  for (std::size_t pos = 1; pos < res.order.size(); ++pos)
    CHECK(star.degree(res.order[pos - 1]) >= star.degree(res.order[pos]));
}

TEST_CASE("planted labels recover generator densities") {
  const double p_in = 0.2, p_out = 0.01;
  auto lg = generate_planted_partition(400, 4, p_in, p_out, 42);
  auto res = reorder_adjacency(lg.graph, lg.labels);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      const double expect = a == b ? p_in : p_out;
      CHECK(std::abs(res.block_density[a][b] - expect) < 0.05);
    }
}

TEST_CASE("coordinates land inside the permuted grid") {
  auto lg = generate_planted_partition(20, 2, 0.5, 0.2, 7);
  auto res = reorder_adjacency(lg.graph, lg.labels);
  CHECK(res.coords.size() == lg.graph.n_edges());
  for (const auto& [a, b] : res.coords) {
    CHECK(a >= 0);
    CHECK(b < 20);
    CHECK(a < b);
  }
  CHECK(std::is_sorted(res.coords.begin(), res.coords.end()));
}

TEST_CASE("an untrained state still reorders cleanly") {
  auto lg = generate_planted_partition(15, 3, 0.6, 0.1, 2);
  ModelConfig cfg{2, 2, 1.0, 0};
  auto fresh = init_state<double>(cfg, lg.graph, 4);
  auto res = reorder_adjacency(lg.graph, hard_assignments(fresh));
  CHECK(res.order.size() == 15);
  CHECK(res.coords.size() == lg.graph.n_edges());
}

TEST_CASE("reorder validates the partition") {
  Graph tri = Graph::unipartite(3, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(reorder_adjacency(tri, Partition{0, 1}), ValidationError);
}

TEST_CASE("bipartite reorder emits separate row and column permutations") {
  auto bb = generate_bipartite_blocks(10, 14, 2, 0.9, 0.05, 3);
  auto res = reorder_adjacency(bb.graph, bb.row_labels, bb.col_labels);
  CHECK(res.order.size() == 10);
  CHECK(res.col_order.size() == 14);
  for (NodeId c : res.col_order) CHECK(c >= 10);  // column permutation uses global ids
  REQUIRE(res.block_density.size() == 2);
  REQUIRE(res.block_density[0].size() == 2);
  // Matched blocks dominate.
  CHECK(res.block_density[0][0] > res.block_density[0][1]);
  CHECK(res.block_density[1][1] > res.block_density[1][0]);
  for (const auto& [r, c] : res.coords) {
    CHECK(r < 10);
    CHECK(c < 14);
  }
  CHECK_THROWS_AS(reorder_adjacency(bb.graph, bb.row_labels), ValidationError);
}
