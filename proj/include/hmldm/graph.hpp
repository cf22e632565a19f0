#pragma once

// Immutable undirected graphs (optionally bipartite) over dense 0-based node
// ids, with canonical edge-list text I/O.
//
// Text format, one edge per line ("i j", any whitespace), '#' comments.
// Optional self-describing headers before the first edge:
//   %nodes <n>               fixes the node count (keeps isolated nodes)
//   %bipartite <rows> <cols> bipartite graph; column ids start at <rows>
// Files without a header get unipartite treatment; sparse id sets are
// relabeled to dense ids in ascending original-id order.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hmldm/errors.hpp"

namespace hmldm {

using NodeId = std::int32_t;
using Edge = std::pair<NodeId, NodeId>;

struct BipartiteShape {
  NodeId n_rows = 0;
  NodeId n_cols = 0;
  bool operator==(const BipartiteShape&) const = default;
};

class Graph {
 public:
  Graph() = default;

  // Canonicalizes: orders endpoints, sorts, deduplicates. Throws
  // ValidationError on self-loops or out-of-range ids.
  static Graph unipartite(NodeId n_nodes, std::vector<Edge> edges) {
    if (n_nodes < 0) throw ValidationError("node count must be non-negative");
    for (auto& [i, j] : edges) {
      if (i == j)
        throw ValidationError("self-loop on node " + std::to_string(i));
      if (i < 0 || j < 0 || i >= n_nodes || j >= n_nodes)
        throw ValidationError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") outside node range [0, " + std::to_string(n_nodes) + ")");
      if (i > j) std::swap(i, j);
    }
    return Graph(n_nodes, std::nullopt, std::move(edges));
  }

  // Bipartite graph over global ids: rows are [0, n_rows), columns are
  // [n_rows, n_rows + n_cols). Every edge must cross the partition.
  static Graph bipartite(BipartiteShape shape, std::vector<Edge> edges) {
    if (shape.n_rows < 0 || shape.n_cols < 0)
      throw ValidationError("bipartite shape must be non-negative");
    const NodeId n = shape.n_rows + shape.n_cols;
    for (auto& [i, j] : edges) {
      if (i > j) std::swap(i, j);
      if (i < 0 || j >= n)
        throw ValidationError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") outside node range [0, " + std::to_string(n) + ")");
      if (!(i < shape.n_rows && j >= shape.n_rows))
        throw ValidationError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") does not cross the bipartite partition");
    }
    return Graph(n, shape, std::move(edges));
  }

  NodeId n_nodes() const noexcept { return n_nodes_; }
  std::size_t n_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool is_bipartite() const noexcept { return shape_.has_value(); }
  NodeId n_rows() const { return shape_ ? shape_->n_rows : n_nodes_; }
  NodeId n_cols() const { return shape_ ? shape_->n_cols : n_nodes_; }
  const std::optional<BipartiteShape>& shape() const noexcept { return shape_; }

  // Number of dyads the model sees: C(n,2) unipartite, rows*cols bipartite.
  std::size_t total_pairs() const noexcept {
    if (shape_)
      return static_cast<std::size_t>(shape_->n_rows) * static_cast<std::size_t>(shape_->n_cols);
    auto n = static_cast<std::size_t>(n_nodes_);
    return n * (n - 1) / 2;
  }

  bool has_edge(NodeId i, NodeId j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
  }

  NodeId degree(NodeId i) const { return degrees_[static_cast<std::size_t>(i)]; }
  const std::vector<NodeId>& degrees() const noexcept { return degrees_; }
  const std::vector<std::vector<NodeId>>& neighbors() const noexcept { return adj_; }

  bool operator==(const Graph& o) const {
    return n_nodes_ == o.n_nodes_ && shape_ == o.shape_ && edges_ == o.edges_;
  }

 private:
  Graph(NodeId n, std::optional<BipartiteShape> shape, std::vector<Edge> edges)
      : n_nodes_(n), shape_(shape), edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    degrees_.assign(static_cast<std::size_t>(n_nodes_), 0);
    adj_.assign(static_cast<std::size_t>(n_nodes_), {});
    for (const auto& [i, j] : edges_) {
      ++degrees_[static_cast<std::size_t>(i)];
      ++degrees_[static_cast<std::size_t>(j)];
      adj_[static_cast<std::size_t>(i)].push_back(j);
      adj_[static_cast<std::size_t>(j)].push_back(i);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
  }

  NodeId n_nodes_ = 0;
  std::optional<BipartiteShape> shape_;
  std::vector<Edge> edges_;
  std::vector<NodeId> degrees_;
  std::vector<std::vector<NodeId>> adj_;
};

// Graph plus ground-truth community ids in [0, k).
struct LabeledGraph {
  Graph graph;
  std::vector<int> labels;

  int n_communities() const {
    int k = 0;
    for (int l : labels) k = std::max(k, l + 1);
    return k;
  }
};

// True iff all nodes of degree >= 1 lie in a single component. A graph with
// no edges is vacuously connected.
inline bool is_connected(const Graph& g) {
  NodeId start = -1;
  for (NodeId v = 0; v < g.n_nodes(); ++v)
    if (g.degree(v) > 0) {
      start = v;
      break;
    }
  if (start < 0) return true;
  std::vector<char> seen(static_cast<std::size_t>(g.n_nodes()), 0);
  std::vector<NodeId> stack{start};
  seen[static_cast<std::size_t>(start)] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId u : g.neighbors()[static_cast<std::size_t>(v)])
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        ++reached;
        stack.push_back(u);
      }
  }
  std::size_t with_degree = 0;
  for (NodeId v = 0; v < g.n_nodes(); ++v)
    if (g.degree(v) > 0) ++with_degree;
  return reached == with_degree;
}

enum class GraphMode { unipartite, bipartite };

struct LoadOptions {
  std::optional<GraphMode> expected_mode;  // error if the file disagrees
  bool drop_self_loops = false;            // default: self-loops are an error
};

struct LoadedGraph {
  Graph graph;
  bool relabeled = false;
  std::vector<std::int64_t> original_ids;  // dense id -> original id, when relabeled
  std::size_t self_loops_dropped = 0;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::int64_t parse_int(std::string_view tok, std::size_t line) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError("expected an integer, got '" + std::string(tok) + "'", line);
  return v;
}

}  // namespace detail

inline LoadedGraph load_edge_list(std::istream& in, LoadOptions opts = {}) {
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::optional<BipartiteShape> bip;
  std::optional<std::int64_t> declared_nodes;
  LoadedGraph out;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    if (s.front() == '%') {
      if (!raw.empty()) throw ParseError("header after first edge", lineno);
      auto toks = detail::split_ws(s);
      if (toks[0] == "%bipartite") {
        if (toks.size() != 3) throw ParseError("%bipartite expects <n_rows> <n_cols>", lineno);
        if (bip || declared_nodes) throw ParseError("duplicate header", lineno);
        bip = BipartiteShape{static_cast<NodeId>(detail::parse_int(toks[1], lineno)),
                             static_cast<NodeId>(detail::parse_int(toks[2], lineno))};
      } else if (toks[0] == "%nodes") {
        if (toks.size() != 2) throw ParseError("%nodes expects <n_nodes>", lineno);
        if (bip || declared_nodes) throw ParseError("duplicate header", lineno);
        declared_nodes = detail::parse_int(toks[1], lineno);
      } else {
        throw ParseError("unknown header '" + std::string(toks[0]) + "'", lineno);
      }
      continue;
    }
    auto toks = detail::split_ws(s);
    if (toks.size() != 2)
      throw ParseError("expected two whitespace-separated node ids", lineno);
    std::int64_t a = detail::parse_int(toks[0], lineno);
    std::int64_t b = detail::parse_int(toks[1], lineno);
    if (a < 0 || b < 0) throw ParseError("negative node id", lineno);
    if (a == b) {
      if (opts.drop_self_loops) {
        ++out.self_loops_dropped;
        continue;
      }
      throw ValidationError("self-loop on node " + std::to_string(a) + " at line " +
                            std::to_string(lineno));
    }
    raw.emplace_back(a, b);
  }

  if (opts.expected_mode) {
    const bool file_bip = bip.has_value();
    if (*opts.expected_mode == GraphMode::bipartite && !file_bip)
      throw ValidationError("bipartite input requires a '%bipartite <rows> <cols>' header");
    if (*opts.expected_mode == GraphMode::unipartite && file_bip)
      throw ValidationError("expected a unipartite edge list, found a %bipartite header");
  }

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  if (bip) {
    for (const auto& [a, b] : raw)
      edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    out.graph = Graph::bipartite(*bip, std::move(edges));
    return out;
  }
  if (declared_nodes) {
    for (const auto& [a, b] : raw) {
      if (a >= *declared_nodes || b >= *declared_nodes)
        throw ValidationError("node id exceeds declared %nodes count");
      edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    }
    out.graph = Graph::unipartite(static_cast<NodeId>(*declared_nodes), std::move(edges));
    return out;
  }

  // Headerless: relabel to dense ids unless the ids are already 0..max.
  std::vector<std::int64_t> ids;
  ids.reserve(raw.size() * 2);
  for (const auto& [a, b] : raw) {
    ids.push_back(a);
    ids.push_back(b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  const bool dense = ids.empty() || (ids.front() == 0 && ids.back() == static_cast<std::int64_t>(ids.size()) - 1);
  if (dense) {
    for (const auto& [a, b] : raw)
      edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    out.graph = Graph::unipartite(static_cast<NodeId>(ids.size()), std::move(edges));
    return out;
  }
  auto dense_id = [&](std::int64_t v) {
    return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), v) - ids.begin());
  };
  for (const auto& [a, b] : raw) edges.emplace_back(dense_id(a), dense_id(b));
  out.graph = Graph::unipartite(static_cast<NodeId>(ids.size()), std::move(edges));
  out.relabeled = true;
  out.original_ids = std::move(ids);
  return out;
}

inline LoadedGraph load_edge_list(std::istream& in, GraphMode expected) {
  return load_edge_list(in, LoadOptions{expected, false});
}

// Canonical serialization: self-describing header, then sorted "i j" lines,
// LF-terminated. load(serialize(g)) reconstructs g exactly.
inline void serialize_edge_list(const Graph& g, std::ostream& out) {
  if (g.is_bipartite())
    out << "%bipartite " << g.n_rows() << ' ' << g.n_cols() << '\n';
  else
    out << "%nodes " << g.n_nodes() << '\n';
  for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

// One integer label per line, ordered by dense node id.
inline std::vector<int> load_labels(std::istream& in) {
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    labels.push_back(static_cast<int>(detail::parse_int(s, lineno)));
  }
  return labels;
}

inline void save_labels(const std::vector<int>& labels, std::ostream& out) {
  for (int l : labels) out << l << '\n';
}

}  // namespace hmldm
