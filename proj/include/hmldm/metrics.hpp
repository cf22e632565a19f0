#pragma once

// Link-prediction scoring and AUC metrics, membership extraction, champion
// and identifiability diagnostics, and partition agreement (NMI / ARI).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hmldm/errors.hpp"
#include "hmldm/graph.hpp"
#include "hmldm/model.hpp"

namespace hmldm {

enum class PairLabel { positive, negative };

struct ScoredPairs {
  std::vector<Edge> pairs;
  std::vector<double> scores;  // log-rates; monotone in the Poisson rate
  PairLabel label = PairLabel::positive;
};

// Scores dyads by model log-rate (higher = more likely edge).
template <class Scalar>
ScoredPairs score_pairs(const ModelState<Scalar>& state, std::span<const Edge> pairs,
                        PairLabel label = PairLabel::positive) {
  ScoredPairs out;
  out.label = label;
  out.pairs.assign(pairs.begin(), pairs.end());
  out.scores.reserve(pairs.size());
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    try {
      out.scores.push_back(log_rate(state, pairs[idx].first, pairs[idx].second));
    } catch (const ValidationError& e) {
      throw ValidationError("pair #" + std::to_string(idx) + ": " + e.what());
    }
    if (!std::isfinite(out.scores.back()))
      throw NumericalError("non-finite score at pair #" + std::to_string(idx));
  }
  return out;
}

template <class Scalar>
ScoredPairs score_pairs(const ModelState<Scalar>& state, const std::vector<Edge>& pairs,
                        PairLabel label = PairLabel::positive) {
  return score_pairs(state, std::span<const Edge>(pairs), label);
}

namespace detail {

// Win count u and comparison count d are exact half-integers / integers in
// double. Dividing the smaller of u and d-u and mirroring the other side
// makes auc(pos, neg) + auc(neg, pos) == 1 hold bitwise for every input.
inline double normalized_u_statistic(double u, double d) {
  if (2.0 * u == d) return 0.5;
  if (2.0 * u < d) return u / d;
  return 1.0 - (d - u) / d;
}

}  // namespace detail

// Rank-based AUC-ROC (Mann-Whitney U with midranks): the probability that a
// random positive outscores a random negative, ties counting half.
inline double auc_roc(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty())
    throw ValidationError("AUC needs at least one positive and one negative score");
  struct Item {
    double score;
    bool positive;
  };
  std::vector<Item> all;
  all.reserve(pos.size() + neg.size());
  for (double s : pos) all.push_back({s, true});
  for (double s : neg) all.push_back({s, false});
  std::sort(all.begin(), all.end(), [](const Item& a, const Item& b) { return a.score < b.score; });

  // Midranks are half-integers, so the rank sum is exact in double.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t t = i; t < j; ++t)
      if (all[t].positive) rank_sum_pos += midrank;
    i = j;
  }
  const double n1 = static_cast<double>(pos.size());
  const double n0 = static_cast<double>(neg.size());
  const double u = rank_sum_pos - n1 * (n1 + 1.0) / 2.0;
  return detail::normalized_u_statistic(u, n1 * n0);
}

// Area under the precision-recall curve by trapezoidal integration over
// descending score thresholds (predict positive when score >= threshold).
// The recall-0 endpoint uses the precision of the first threshold.
inline double auc_pr(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty())
    throw ValidationError("AUC needs at least one positive and one negative score");
  struct Item {
    double score;
    bool positive;
  };
  std::vector<Item> all;
  all.reserve(pos.size() + neg.size());
  for (double s : pos) all.push_back({s, true});
  for (double s : neg) all.push_back({s, false});
  std::sort(all.begin(), all.end(), [](const Item& a, const Item& b) { return a.score > b.score; });

  const double n_pos = static_cast<double>(pos.size());
  double tp = 0.0, fp = 0.0;
  double area = 0.0;
  double prev_recall = 0.0;
  double prev_precision = 1.0;
  bool first = true;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    for (std::size_t t = i; t < j; ++t) (all[t].positive ? tp : fp) += 1.0;
    const double recall = tp / n_pos;
    const double precision = tp / (tp + fp);
    if (first) {
      prev_precision = precision;  // anchor the curve at (0, p_first)
      first = false;
    }
    area += (recall - prev_recall) * 0.5 * (precision + prev_precision);
    prev_recall = recall;
    prev_precision = precision;
    i = j;
  }
  return area;
}

using Partition = std::vector<int>;

// Relabels community ids densely in order of first appearance.
inline Partition canonicalize_partition(const Partition& labels) {
  Partition out(labels.size());
  std::vector<int> map;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int l = labels[i];
    if (l < 0) throw ValidationError("community ids must be non-negative");
    auto it = std::find(map.begin(), map.end(), l);
    if (it == map.end()) {
      map.push_back(l);
      out[i] = static_cast<int>(map.size()) - 1;
    } else {
      out[i] = static_cast<int>(it - map.begin());
    }
  }
  return out;
}

namespace detail {

inline Partition argmax_rows(const MatrixX<double>& w) {
  Partition labels(static_cast<std::size_t>(w.rows()));
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    int best = 0;
    for (Eigen::Index d = 1; d < w.cols(); ++d)
      if (w(i, d) > w(i, best)) best = static_cast<int>(d);  // ties keep the lowest index
    labels[static_cast<std::size_t>(i)] = best;
  }
  return labels;
}

}  // namespace detail

// Maximum-membership community per node (ties break toward the lowest index).
// Bipartite states: labels for the row set; see hard_assignments_cols.
template <class Scalar>
Partition hard_assignments(const ModelState<Scalar>& state) {
  return detail::argmax_rows(embeddings(state));
}

template <class Scalar>
Partition hard_assignments_cols(const ModelState<Scalar>& state) {
  return detail::argmax_rows(embeddings_cols(state));
}

// A node is a champion of community d when its membership w_id >= tau; the
// solution is identifiable when every community holds at least one champion.
// Bipartite states pool both node sets.
struct ChampionReport {
  double tau = 0.99;
  std::vector<std::int64_t> champions_per_community;
  std::int64_t n_champions = 0;
  double champion_fraction = 0.0;
  bool identifiable = false;
};

template <class Scalar>
ChampionReport champion_report(const ModelState<Scalar>& state, double tau = 0.99) {
  if (!(tau > 0.5 && tau <= 1.0)) throw ValidationError("champion threshold must lie in (0.5, 1]");
  const MatrixX<double> w = stacked_embeddings(state);
  ChampionReport report;
  report.tau = tau;
  report.champions_per_community.assign(static_cast<std::size_t>(w.cols()), 0);
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index d = 0; d < w.cols(); ++d)
      if (w(i, d) >= tau) {
        ++report.champions_per_community[static_cast<std::size_t>(d)];
        ++report.n_champions;
      }
  report.champion_fraction = w.rows() > 0
                                 ? static_cast<double>(report.n_champions) / static_cast<double>(w.rows())
                                 : 0.0;
  report.identifiable = std::all_of(report.champions_per_community.begin(),
                                    report.champions_per_community.end(),
                                    [](std::int64_t c) { return c >= 1; });
  return report;
}

namespace detail {

struct Contingency {
  std::vector<std::vector<double>> cells;  // counts n_ab
  std::vector<double> row_sums, col_sums;
  double n = 0.0;
};

inline Contingency contingency_table(const Partition& a, const Partition& b) {
  if (a.size() != b.size())
    throw ValidationError("partitions must cover the same nodes (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  const Partition ca = canonicalize_partition(a);
  const Partition cb = canonicalize_partition(b);
  const int ka = ca.empty() ? 0 : *std::max_element(ca.begin(), ca.end()) + 1;
  const int kb = cb.empty() ? 0 : *std::max_element(cb.begin(), cb.end()) + 1;
  Contingency t;
  t.cells.assign(static_cast<std::size_t>(ka), std::vector<double>(static_cast<std::size_t>(kb), 0.0));
  t.row_sums.assign(static_cast<std::size_t>(ka), 0.0);
  t.col_sums.assign(static_cast<std::size_t>(kb), 0.0);
  t.n = static_cast<double>(a.size());
  for (std::size_t i = 0; i < ca.size(); ++i) {
    t.cells[static_cast<std::size_t>(ca[i])][static_cast<std::size_t>(cb[i])] += 1.0;
    t.row_sums[static_cast<std::size_t>(ca[i])] += 1.0;
    t.col_sums[static_cast<std::size_t>(cb[i])] += 1.0;
  }
  return t;
}

}  // namespace detail

// Normalized mutual information with arithmetic-mean normalization:
// NMI = MI / ((H(a) + H(b)) / 2), in [0, 1]. Two constant partitions have no
// information to compare and score 1 by convention.
inline double nmi(const Partition& a, const Partition& b) {
  if (a.empty()) throw ValidationError("NMI needs at least one node");
  if (a.size() == b.size() && canonicalize_partition(a) == canonicalize_partition(b))
    return 1.0;  // agreement up to relabeling is exact by definition
  const auto t = detail::contingency_table(a, b);
  auto entropy = [&](const std::vector<double>& sums) {
    double h = 0.0;
    for (double s : sums)
      if (s > 0.0) h -= (s / t.n) * std::log(s / t.n);
    return h;
  };
  const double ha = entropy(t.row_sums);
  const double hb = entropy(t.col_sums);
  if (ha + hb == 0.0) return 1.0;  // both partitions constant
  // Summing the cell terms in value order makes nmi(a, b) == nmi(b, a) exact.
  std::vector<double> terms;
  for (std::size_t x = 0; x < t.cells.size(); ++x)
    for (std::size_t y = 0; y < t.cells[x].size(); ++y) {
      const double nxy = t.cells[x][y];
      if (nxy > 0.0)
        terms.push_back((nxy / t.n) * std::log((t.n * nxy) / (t.row_sums[x] * t.col_sums[y])));
    }
  std::sort(terms.begin(), terms.end());
  double mi = 0.0;
  for (double v : terms) mi += v;
  return std::clamp(mi / (0.5 * (ha + hb)), 0.0, 1.0);
}

// Adjusted Rand index (permutation-model adjusted, via the contingency
// table). 1 iff the partitions agree up to relabeling; ~0 for independent
// ones. The degenerate zero-denominator case (both partitions trivial in the
// same way) scores 1.
inline double ari(const Partition& a, const Partition& b) {
  if (a.size() < 2) throw ValidationError("ARI needs at least two nodes");
  const auto t = detail::contingency_table(a, b);
  auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
  double sum_cells = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& row : t.cells)
    for (double c : row) sum_cells += choose2(c);
  for (double s : t.row_sums) sum_rows += choose2(s);
  for (double s : t.col_sums) sum_cols += choose2(s);
  const double total = choose2(t.n);
  const double expected = sum_rows * sum_cols / total;
  const double maximum = 0.5 * (sum_rows + sum_cols);
  if (maximum == expected) return 1.0;
  return (sum_cells - expected) / (maximum - expected);
}

// Pearson correlation between two flattened membership matrices after the
// column permutation of `b` that maximizes it (exhaustive over permutations
// for k <= 8, greedy column matching beyond). Used to check that two
// independently trained identifiable solutions agree up to corner relabeling.
struct ColumnAlignment {
  std::vector<int> permutation;  // column d of a corresponds to permutation[d] of b
  double correlation = 0.0;
};

namespace detail {

inline double pearson(const MatrixX<double>& x, const MatrixX<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = x.sum() / n, my = y.sum() / n;
  const double cov = ((x.array() - mx) * (y.array() - my)).sum();
  const double vx = (x.array() - mx).square().sum();
  const double vy = (y.array() - my).square().sum();
  if (vx == 0.0 || vy == 0.0) return 0.0;
  return cov / std::sqrt(vx * vy);
}

}  // namespace detail

inline ColumnAlignment align_columns(const MatrixX<double>& a, const MatrixX<double>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ValidationError("membership matrices must have identical shapes");
  const int k = static_cast<int>(a.cols());
  ColumnAlignment best;
  best.correlation = -2.0;
  MatrixX<double> permuted(b.rows(), b.cols());
  if (k <= 8) {
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (int d = 0; d < k; ++d) permuted.col(d) = b.col(perm[static_cast<std::size_t>(d)]);
      const double c = detail::pearson(a, permuted);
      if (c > best.correlation) {
        best.correlation = c;
        best.permutation = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  // Greedy fallback: repeatedly match the most correlated column pair.
  std::vector<int> perm(static_cast<std::size_t>(k), -1);
  std::vector<char> used(static_cast<std::size_t>(k), 0);
  for (int d = 0; d < k; ++d) {
    int pick = -1;
    double pick_corr = -2.0;
    for (int e = 0; e < k; ++e) {
      if (used[static_cast<std::size_t>(e)]) continue;
      MatrixX<double> ca = a.col(d), cb = b.col(e);
      const double c = detail::pearson(ca, cb);
      if (c > pick_corr) {
        pick_corr = c;
        pick = e;
      }
    }
    perm[static_cast<std::size_t>(d)] = pick;
    used[static_cast<std::size_t>(pick)] = 1;
  }
  for (int d = 0; d < k; ++d) permuted.col(d) = b.col(perm[static_cast<std::size_t>(d)]);
  best.permutation = perm;
  best.correlation = detail::pearson(a, permuted);
  return best;
}

}  // namespace hmldm
