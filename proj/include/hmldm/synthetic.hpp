#pragma once

// Planted-partition generators used as recovery oracles in tests and via the
// CLI `synth` command.

#include <cstdint>
#include <string>
#include <vector>

#include "hmldm/errors.hpp"
#include "hmldm/graph.hpp"
#include "hmldm/rng.hpp"

namespace hmldm {

// k blocks of size ceil(n/k) / floor(n/k); within-block pairs are edges with
// probability p_in, cross-block pairs with p_out, independently. Requires
// p_out <= p_in (assortative); labels record block ids.
inline LabeledGraph generate_planted_partition(NodeId n, int k, double p_in, double p_out,
                                               std::uint64_t seed) {
  if (n < 1) throw ValidationError("planted partition needs n >= 1");
  if (k < 1) throw ValidationError("planted partition needs k >= 1");
  if (p_in < 0 || p_in > 1 || p_out < 0 || p_out > 1)
    throw ValidationError("edge probabilities must lie in [0, 1]");
  if (p_out > p_in)
    throw ValidationError("assortative structure required: p_out (" + std::to_string(p_out) +
                          ") must not exceed p_in (" + std::to_string(p_in) + ")");

  std::vector<int> labels(static_cast<std::size_t>(n));
  const NodeId base = n / k;
  const NodeId remainder = n % k;
  NodeId next = 0;
  for (int b = 0; b < k && next < n; ++b) {
    NodeId size = base + (b < remainder ? 1 : 0);
    for (NodeId s = 0; s < size && next < n; ++s) labels[static_cast<std::size_t>(next++)] = b;
  }

  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) {
      double p = labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)] ? p_in : p_out;
      if (rng.uniform() < p) edges.emplace_back(i, j);
    }
  return LabeledGraph{Graph::unipartite(n, std::move(edges)), std::move(labels)};
}

struct BipartiteBlocks {
  Graph graph;
  std::vector<int> row_labels;
  std::vector<int> col_labels;
};

// Bipartite analogue: row block b connects to column block b with p_in,
// otherwise p_out. Column labels are indexed over the column node set.
inline BipartiteBlocks generate_bipartite_blocks(NodeId n_rows, NodeId n_cols, int k, double p_in,
                                                 double p_out, std::uint64_t seed) {
  if (n_rows < 1 || n_cols < 1) throw ValidationError("bipartite blocks need n_rows, n_cols >= 1");
  if (k < 1) throw ValidationError("bipartite blocks need k >= 1");
  if (p_in < 0 || p_in > 1 || p_out < 0 || p_out > 1)
    throw ValidationError("edge probabilities must lie in [0, 1]");
  if (p_out > p_in) throw ValidationError("assortative structure required: p_out must not exceed p_in");

  auto block_of = [k](NodeId idx, NodeId n) {
    NodeId base = n / k, rem = n % k;
    NodeId boundary = rem * (base + 1);
    return idx < boundary ? static_cast<int>(idx / (base + 1))
                          : static_cast<int>(rem + (idx - boundary) / std::max<NodeId>(base, 1));
  };

  std::vector<int> row_labels(static_cast<std::size_t>(n_rows));
  std::vector<int> col_labels(static_cast<std::size_t>(n_cols));
  for (NodeId r = 0; r < n_rows; ++r) row_labels[static_cast<std::size_t>(r)] = block_of(r, n_rows);
  for (NodeId c = 0; c < n_cols; ++c) col_labels[static_cast<std::size_t>(c)] = block_of(c, n_cols);

  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId r = 0; r < n_rows; ++r)
    for (NodeId c = 0; c < n_cols; ++c) {
      double p = row_labels[static_cast<std::size_t>(r)] == col_labels[static_cast<std::size_t>(c)] ? p_in : p_out;
      if (rng.uniform() < p) edges.emplace_back(r, n_rows + c);
    }
  return BipartiteBlocks{Graph::bipartite({n_rows, n_cols}, std::move(edges)),
                         std::move(row_labels), std::move(col_labels)};
}

}  // namespace hmldm
