#pragma once

// Adjacency reordering by inferred memberships: nodes sorted by (community,
// degree descending), plus per-community-pair edge densities for block plots.

#include <algorithm>
#include <numeric>
#include <vector>

#include "hmldm/errors.hpp"
#include "hmldm/graph.hpp"
#include "hmldm/metrics.hpp"

namespace hmldm {

struct ReorderResult {
  std::vector<NodeId> order;        // display position -> node id (row side)
  std::vector<NodeId> position;     // node id -> display position
  std::vector<NodeId> col_order;    // bipartite only: position -> column node (global id)
  std::vector<NodeId> col_position; // bipartite only: column-side index -> position
  std::vector<std::vector<double>> block_density;  // [community a][community b]
  std::vector<Edge> coords;         // edges as (row position, col position)
};

namespace detail {

inline std::vector<NodeId> sorted_by_community(const Graph& g, const Partition& labels,
                                               NodeId first, NodeId count) {
  std::vector<NodeId> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), first);
  std::sort(order.begin(), order.end(), [&](NodeId x, NodeId y) {
    const int lx = labels[static_cast<std::size_t>(x - first)];
    const int ly = labels[static_cast<std::size_t>(y - first)];
    if (lx != ly) return lx < ly;
    if (g.degree(x) != g.degree(y)) return g.degree(x) > g.degree(y);
    return x < y;
  });
  return order;
}

}  // namespace detail

// Unipartite reordering. `labels` covers all nodes; density of block (a, b)
// is edges(a, b) divided by the number of dyads between the two communities.
inline ReorderResult reorder_adjacency(const Graph& g, const Partition& labels) {
  if (g.is_bipartite())
    throw ValidationError("bipartite graphs need the two-partition reorder overload");
  if (static_cast<NodeId>(labels.size()) != g.n_nodes())
    throw ValidationError("partition must cover all nodes");

  ReorderResult out;
  out.order = detail::sorted_by_community(g, labels, 0, g.n_nodes());
  out.position.resize(static_cast<std::size_t>(g.n_nodes()));
  for (std::size_t pos = 0; pos < out.order.size(); ++pos)
    out.position[static_cast<std::size_t>(out.order[pos])] = static_cast<NodeId>(pos);

  const int k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<double> sizes(static_cast<std::size_t>(k), 0.0);
  for (int l : labels) {
    if (l < 0 || l >= k) throw ValidationError("community id out of range");
    sizes[static_cast<std::size_t>(l)] += 1.0;
  }
  out.block_density.assign(static_cast<std::size_t>(k),
                           std::vector<double>(static_cast<std::size_t>(k), 0.0));
  for (const auto& [i, j] : g.edges()) {
    const int a = labels[static_cast<std::size_t>(i)];
    const int b = labels[static_cast<std::size_t>(j)];
    out.block_density[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] += 1.0;
    if (a != b) out.block_density[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] += 1.0;
  }
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      const double pairs = a == b ? sizes[static_cast<std::size_t>(a)] * (sizes[static_cast<std::size_t>(a)] - 1.0) / 2.0
                                  : sizes[static_cast<std::size_t>(a)] * sizes[static_cast<std::size_t>(b)];
      if (pairs > 0.0) out.block_density[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] /= pairs;
    }

  out.coords.reserve(g.n_edges());
  for (const auto& [i, j] : g.edges()) {
    NodeId a = out.position[static_cast<std::size_t>(i)];
    NodeId b = out.position[static_cast<std::size_t>(j)];
    if (a > b) std::swap(a, b);
    out.coords.emplace_back(a, b);
  }
  std::sort(out.coords.begin(), out.coords.end());
  return out;
}

// Bipartite reordering with separate row and column permutations; block
// densities are edges between row community a and column community b over
// rows(a) * cols(b).
inline ReorderResult reorder_adjacency(const Graph& g, const Partition& row_labels,
                                       const Partition& col_labels) {
  if (!g.is_bipartite()) throw ValidationError("two-partition reorder requires a bipartite graph");
  if (static_cast<NodeId>(row_labels.size()) != g.n_rows() ||
      static_cast<NodeId>(col_labels.size()) != g.n_cols())
    throw ValidationError("partitions must cover the row and column node sets");

  ReorderResult out;
  out.order = detail::sorted_by_community(g, row_labels, 0, g.n_rows());
  out.position.resize(static_cast<std::size_t>(g.n_rows()));
  for (std::size_t pos = 0; pos < out.order.size(); ++pos)
    out.position[static_cast<std::size_t>(out.order[pos])] = static_cast<NodeId>(pos);
  out.col_order = detail::sorted_by_community(g, col_labels, g.n_rows(), g.n_cols());
  out.col_position.resize(static_cast<std::size_t>(g.n_cols()));
  for (std::size_t pos = 0; pos < out.col_order.size(); ++pos)
    out.col_position[static_cast<std::size_t>(out.col_order[pos] - g.n_rows())] = static_cast<NodeId>(pos);

  const int kr = row_labels.empty() ? 0 : *std::max_element(row_labels.begin(), row_labels.end()) + 1;
  const int kc = col_labels.empty() ? 0 : *std::max_element(col_labels.begin(), col_labels.end()) + 1;
  std::vector<double> row_sizes(static_cast<std::size_t>(kr), 0.0);
  std::vector<double> col_sizes(static_cast<std::size_t>(kc), 0.0);
  for (int l : row_labels) row_sizes[static_cast<std::size_t>(l)] += 1.0;
  for (int l : col_labels) col_sizes[static_cast<std::size_t>(l)] += 1.0;
  out.block_density.assign(static_cast<std::size_t>(kr),
                           std::vector<double>(static_cast<std::size_t>(kc), 0.0));
  for (const auto& [i, j] : g.edges()) {
    const int a = row_labels[static_cast<std::size_t>(i)];
    const int b = col_labels[static_cast<std::size_t>(j - g.n_rows())];
    out.block_density[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] += 1.0;
  }
  for (int a = 0; a < kr; ++a)
    for (int b = 0; b < kc; ++b) {
      const double pairs = row_sizes[static_cast<std::size_t>(a)] * col_sizes[static_cast<std::size_t>(b)];
      if (pairs > 0.0) out.block_density[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] /= pairs;
    }

  out.coords.reserve(g.n_edges());
  for (const auto& [i, j] : g.edges())
    out.coords.emplace_back(out.position[static_cast<std::size_t>(i)],
                            out.col_position[static_cast<std::size_t>(j - g.n_rows())]);
  std::sort(out.coords.begin(), out.coords.end());
  return out;
}

}  // namespace hmldm
