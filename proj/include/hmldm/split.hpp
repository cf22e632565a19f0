#pragma once

// Connectivity-preserving train/test edge splits and negative-pair sampling
// for link-prediction evaluation.

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hmldm/errors.hpp"
#include "hmldm/graph.hpp"
#include "hmldm/rng.hpp"

namespace hmldm {

namespace detail {

inline std::uint64_t pair_key(NodeId i, NodeId j) {
  if (i > j) std::swap(i, j);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
         static_cast<std::uint32_t>(j);
}

}  // namespace detail

// Uniform random spanning forest (Wilson's loop-erased random walk, run per
// connected component). Isolated nodes contribute nothing.
inline std::vector<Edge> random_spanning_forest(const Graph& g, Rng& rng) {
  const auto n = static_cast<std::size_t>(g.n_nodes());
  const auto& adj = g.neighbors();
  std::vector<char> in_tree(n, 0);
  std::vector<char> seen(n, 0);
  std::vector<NodeId> next(n, -1);
  std::vector<Edge> forest;

  for (NodeId root = 0; root < g.n_nodes(); ++root) {
    if (seen[static_cast<std::size_t>(root)] || g.degree(root) == 0) continue;
    // New component: mark it reachable, anchor the root in the tree.
    std::vector<NodeId> stack{root};
    seen[static_cast<std::size_t>(root)] = 1;
    std::vector<NodeId> component{root};
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (NodeId u : adj[static_cast<std::size_t>(v)])
        if (!seen[static_cast<std::size_t>(u)]) {
          seen[static_cast<std::size_t>(u)] = 1;
          component.push_back(u);
          stack.push_back(u);
        }
    }
    in_tree[static_cast<std::size_t>(root)] = 1;
    for (NodeId start : component) {
      if (in_tree[static_cast<std::size_t>(start)]) continue;
      NodeId u = start;
      while (!in_tree[static_cast<std::size_t>(u)]) {
        const auto& nb = adj[static_cast<std::size_t>(u)];
        next[static_cast<std::size_t>(u)] = nb[rng.below(nb.size())];
        u = next[static_cast<std::size_t>(u)];
      }
      u = start;
      while (!in_tree[static_cast<std::size_t>(u)]) {
        in_tree[static_cast<std::size_t>(u)] = 1;
        forest.emplace_back(u, next[static_cast<std::size_t>(u)]);
        u = next[static_cast<std::size_t>(u)];
      }
    }
  }
  for (auto& [i, j] : forest)
    if (i > j) std::swap(i, j);
  return forest;
}

// Uniform non-edge pairs without replacement, disjoint from g's edges and
// from `exclude`. Bipartite graphs sample cross-partition pairs only.
// Exhaustive enumeration for small graphs, rejection sampling otherwise.
inline std::vector<Edge> sample_negative_pairs(const Graph& g, std::size_t count,
                                               std::uint64_t seed,
                                               const std::vector<Edge>& exclude = {}) {
  std::unordered_set<std::uint64_t> taken;
  taken.reserve(g.n_edges() + exclude.size());
  for (const auto& [i, j] : g.edges()) taken.insert(detail::pair_key(i, j));
  for (const auto& [i, j] : exclude) taken.insert(detail::pair_key(i, j));

  const std::size_t blocked = taken.size();
  const std::size_t available = g.total_pairs() - blocked;
  if (count > available)
    throw ValidationError("requested " + std::to_string(count) + " negative pairs but only " +
                          std::to_string(available) + " non-edges are available");

  Rng rng(seed);
  std::vector<Edge> out;
  out.reserve(count);
  if (count == 0) return out;

  // Enumerates the still-unclaimed non-edges and draws the remaining sample
  // by partial Fisher-Yates. Also the small-graph fast path.
  auto enumerate_rest = [&]() {
    std::vector<Edge> pool;
    if (g.is_bipartite()) {
      for (NodeId r = 0; r < g.n_rows(); ++r)
        for (NodeId c = g.n_rows(); c < g.n_nodes(); ++c)
          if (!taken.count(detail::pair_key(r, c))) pool.emplace_back(r, c);
    } else {
      for (NodeId i = 0; i < g.n_nodes(); ++i)
        for (NodeId j = i + 1; j < g.n_nodes(); ++j)
          if (!taken.count(detail::pair_key(i, j))) pool.emplace_back(i, j);
    }
    std::size_t filled = 0;
    while (out.size() < count) {
      std::size_t pick = filled + static_cast<std::size_t>(rng.below(pool.size() - filled));
      std::swap(pool[filled], pool[pick]);
      out.push_back(pool[filled]);
      ++filled;
    }
  };

  if (g.n_nodes() <= 1000) {
    enumerate_rest();
    return out;
  }

  // Rejection sampling; non-edges vastly outnumber edges at this scale.
  std::size_t attempts = 0;
  const std::size_t max_attempts = 200 * count + 1000;
  while (out.size() < count && attempts < max_attempts) {
    ++attempts;
    NodeId i, j;
    if (g.is_bipartite()) {
      i = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(g.n_rows())));
      j = g.n_rows() + static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(g.n_cols())));
    } else {
      i = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(g.n_nodes())));
      j = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(g.n_nodes())));
      if (i == j) continue;
      if (i > j) std::swap(i, j);
    }
    auto key = detail::pair_key(i, j);
    if (taken.count(key)) continue;
    taken.insert(key);
    out.emplace_back(i, j);
  }
  if (out.size() < count) enumerate_rest();
  return out;
}

// Train/test split for link prediction.
struct TrainTestSplit {
  Graph train;
  std::vector<Edge> test_positives;
  std::vector<Edge> test_negatives;
  std::uint64_t seed = 0;
  // Set when bridges limited the holdout below floor(fraction * |E|).
  bool fewer_positives_than_requested = false;
};

// Protects a uniform random spanning forest, then removes uniformly among the
// remaining edges until floor(fraction * |E|) are held out (or none are
// removable). Negative pairs are non-edges of the original graph, matched
// 1:1 with the positives (capped by the number of non-edges the graph has).
// Deterministic per seed.
inline TrainTestSplit split_for_link_prediction(const Graph& g, double removal_fraction,
                                                std::uint64_t seed) {
  if (!(removal_fraction > 0.0 && removal_fraction < 1.0))
    throw ValidationError("removal fraction must lie strictly between 0 and 1");

  Rng rng(seed);
  Rng forest_rng = rng.fork(1);
  Rng shuffle_rng = rng.fork(2);
  Rng negative_rng = rng.fork(3);

  auto forest = random_spanning_forest(g, forest_rng);
  std::unordered_set<std::uint64_t> protected_edges;
  protected_edges.reserve(forest.size());
  for (const auto& [i, j] : forest) protected_edges.insert(detail::pair_key(i, j));

  std::vector<Edge> removable;
  removable.reserve(g.n_edges() - forest.size());
  for (const auto& e : g.edges())
    if (!protected_edges.count(detail::pair_key(e.first, e.second))) removable.push_back(e);

  const auto target = static_cast<std::size_t>(removal_fraction * static_cast<double>(g.n_edges()));
  const std::size_t n_remove = std::min(target, removable.size());

  for (std::size_t k = 0; k < n_remove; ++k) {
    std::size_t pick = k + static_cast<std::size_t>(shuffle_rng.below(removable.size() - k));
    std::swap(removable[k], removable[pick]);
  }
  std::vector<Edge> positives(removable.begin(), removable.begin() + static_cast<std::ptrdiff_t>(n_remove));
  std::sort(positives.begin(), positives.end());

  std::unordered_set<std::uint64_t> held;
  held.reserve(positives.size());
  for (const auto& [i, j] : positives) held.insert(detail::pair_key(i, j));
  std::vector<Edge> train_edges;
  train_edges.reserve(g.n_edges() - positives.size());
  for (const auto& e : g.edges())
    if (!held.count(detail::pair_key(e.first, e.second))) train_edges.push_back(e);

  Graph train = g.is_bipartite() ? Graph::bipartite(*g.shape(), std::move(train_edges))
                                 : Graph::unipartite(g.n_nodes(), std::move(train_edges));

  const std::size_t n_non_edges = g.total_pairs() - g.n_edges();
  auto negatives =
      sample_negative_pairs(g, std::min(positives.size(), n_non_edges), negative_rng.seed());
  std::sort(negatives.begin(), negatives.end());

  return TrainTestSplit{std::move(train), std::move(positives), std::move(negatives), seed,
                        n_remove < target};
}

}  // namespace hmldm
