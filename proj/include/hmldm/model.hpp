#pragma once

// Hybrid-membership latent distance model: each node gets a membership vector
// on the unit D-simplex (row-softmax of free logits) plus a scalar random
// effect; a dyad's Poisson log-rate is
//
//   log lambda_ij = gamma_i + gamma_j - delta^p * ||w_i - w_j||_2^p,   p in {1, 2},
//
// and the log-likelihood of a binary adjacency is the edge sum of log-rates
// minus the rate sum over all dyads. The simplex size delta interpolates
// between hard community assignments (small delta) and an unconstrained
// latent distance model (large delta).
//
// Two evaluation paths, one contract:
//  * log_likelihood / log_rate: reference path. All reductions over the
//    membership dimension run in ascending value order, so relabeling the
//    simplex corners (a column permutation of the logits) reproduces results
//    bit for bit.
//  * PairwiseEngine: dense vectorized path used by training; fixed summation
//    order per run, identical results for identical seeds.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hmldm/errors.hpp"
#include "hmldm/graph.hpp"
#include "hmldm/rng.hpp"

namespace hmldm {

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct ModelConfig {
  int dimension = 8;       // D; the simplex has D+1 corners (communities)
  int norm_power = 2;      // p in {1, 2}
  double delta = 1.0;      // simplex size, > 0
  std::uint64_t seed = 0;

  int n_communities() const noexcept { return dimension + 1; }

  void validate() const {
    if (dimension < 1) throw ValidationError("dimension must be >= 1");
    if (norm_power != 1 && norm_power != 2) throw ValidationError("norm power must be 1 or 2");
    if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  }
};

// Trainable parameters. Unipartite states use `logits`/`gamma` for all nodes;
// bipartite states add a second set for the column nodes.
template <class Scalar>
struct ModelState {
  ModelConfig config;
  bool bipartite = false;
  MatrixX<Scalar> logits;       // n_rows x (D+1)
  VectorX<Scalar> gamma;        // n_rows
  MatrixX<Scalar> logits_cols;  // n_cols x (D+1), bipartite only
  VectorX<Scalar> gamma_cols;   // n_cols, bipartite only

  NodeId n_rows() const noexcept { return static_cast<NodeId>(logits.rows()); }
  NodeId n_cols() const noexcept { return static_cast<NodeId>(logits_cols.rows()); }
  NodeId n_nodes() const noexcept { return n_rows() + (bipartite ? n_cols() : 0); }
  int n_communities() const noexcept { return static_cast<int>(logits.cols()); }

  bool all_finite() const {
    return logits.allFinite() && gamma.allFinite() &&
           (!bipartite || (logits_cols.allFinite() && gamma_cols.allFinite()));
  }

  template <class T>
  ModelState<T> cast() const {
    ModelState<T> out;
    out.config = config;
    out.bipartite = bipartite;
    out.logits = logits.template cast<T>();
    out.gamma = gamma.template cast<T>();
    out.logits_cols = logits_cols.template cast<T>();
    out.gamma_cols = gamma_cols.template cast<T>();
    return out;
  }
};

namespace detail {

// Sum in ascending value order: invariant under input permutation, so corner
// relabelings reproduce bit-identical results.
inline double ordered_sum(std::span<double> buf) {
  std::sort(buf.begin(), buf.end());
  double s = 0.0;
  for (double v : buf) s += v;
  return s;
}

template <class Scalar>
inline void softmax_row_canonical(const MatrixX<Scalar>& logits, Eigen::Index row,
                                  std::vector<double>& buf, Eigen::RowVectorXd& out) {
  const Eigen::Index k = logits.cols();
  double m = -std::numeric_limits<double>::infinity();
  for (Eigen::Index d = 0; d < k; ++d) m = std::max(m, static_cast<double>(logits(row, d)));
  buf.resize(static_cast<std::size_t>(k));
  out.resize(k);
  for (Eigen::Index d = 0; d < k; ++d) {
    out(d) = std::exp(static_cast<double>(logits(row, d)) - m);
    buf[static_cast<std::size_t>(d)] = out(d);
  }
  out /= ordered_sum(buf);
}

inline double sq_distance_canonical(const double* a, const double* b, Eigen::Index k,
                                    std::vector<double>& buf) {
  buf.resize(static_cast<std::size_t>(k));
  for (Eigen::Index d = 0; d < k; ++d) {
    double t = a[d] - b[d];
    buf[static_cast<std::size_t>(d)] = t * t;
  }
  return ordered_sum(buf);
}

inline double distance_term(double sq_dist, double delta, int p) {
  return p == 2 ? delta * delta * sq_dist : delta * std::sqrt(sq_dist);
}

}  // namespace detail

// Row-wise softmax of the row-side logits; each row is non-negative and sums
// to one. Reference (permutation-canonical) path.
template <class Scalar>
MatrixX<double> embeddings(const ModelState<Scalar>& state) {
  MatrixX<double> w(state.logits.rows(), state.logits.cols());
  std::vector<double> buf;
  Eigen::RowVectorXd row;
  for (Eigen::Index i = 0; i < state.logits.rows(); ++i) {
    detail::softmax_row_canonical(state.logits, i, buf, row);
    w.row(i) = row;
  }
  return w;
}

template <class Scalar>
MatrixX<double> embeddings_cols(const ModelState<Scalar>& state) {
  if (!state.bipartite) throw ValidationError("column embeddings exist only for bipartite states");
  MatrixX<double> w(state.logits_cols.rows(), state.logits_cols.cols());
  std::vector<double> buf;
  Eigen::RowVectorXd row;
  for (Eigen::Index i = 0; i < state.logits_cols.rows(); ++i) {
    detail::softmax_row_canonical(state.logits_cols, i, buf, row);
    w.row(i) = row;
  }
  return w;
}

// All latent membership vectors: row set, then column set for bipartite.
template <class Scalar>
MatrixX<double> stacked_embeddings(const ModelState<Scalar>& state) {
  if (!state.bipartite) return embeddings(state);
  MatrixX<double> w(state.n_rows() + state.n_cols(), state.logits.cols());
  w.topRows(state.n_rows()) = embeddings(state);
  w.bottomRows(state.n_cols()) = embeddings_cols(state);
  return w;
}

namespace detail {

// Resolves a (possibly swapped) dyad to (row index, column-side index) for
// bipartite states, or validated (i, j) for unipartite ones.
template <class Scalar>
inline std::pair<NodeId, NodeId> resolve_pair(const ModelState<Scalar>& state, NodeId i, NodeId j) {
  if (i == j) throw ValidationError("log-rate requires two distinct nodes, got node " + std::to_string(i));
  if (!state.bipartite) {
    if (i < 0 || j < 0 || i >= state.n_rows() || j >= state.n_rows())
      throw ValidationError("node id out of range");
    return {i, j};
  }
  const NodeId r = state.n_rows();
  const NodeId n = state.n_nodes();
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n || !(i < r && j >= r))
    throw ValidationError("bipartite pair (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") must join a row node and a column node");
  return {i, static_cast<NodeId>(j - r)};
}

}  // namespace detail

// log lambda_ij. Symmetric in (i, j); bipartite pairs must cross the
// partition (ids are global, columns offset by n_rows).
template <class Scalar>
double log_rate(const ModelState<Scalar>& state, NodeId i, NodeId j) {
  auto [a, b] = detail::resolve_pair(state, i, j);
  std::vector<double> buf;
  Eigen::RowVectorXd wa, wb;
  detail::softmax_row_canonical(state.logits, a, buf, wa);
  if (state.bipartite)
    detail::softmax_row_canonical(state.logits_cols, b, buf, wb);
  else
    detail::softmax_row_canonical(state.logits, b, buf, wb);
  const double ga = static_cast<double>(state.gamma(a));
  const double gb = static_cast<double>(state.bipartite ? state.gamma_cols(b) : state.gamma(b));
  const double d2 = detail::sq_distance_canonical(wa.data(), wb.data(), wa.size(), buf);
  return ga + gb - detail::distance_term(d2, state.config.delta, state.config.norm_power);
}

// The p=2 log-rate rewritten as a positive eigenmodel with random effects:
//   gt_i + gt_j + 2 delta^2 (w_i . w_j),  gt_i = gamma_i - delta^2 ||w_i||^2.
// Algebraically identical to log_rate; exposed to test the reparameterization.
template <class Scalar>
double eigenmodel_log_rate(const ModelState<Scalar>& state, NodeId i, NodeId j) {
  if (state.config.norm_power != 2)
    throw ValidationError("the eigenmodel reparameterization requires p = 2");
  auto [a, b] = detail::resolve_pair(state, i, j);
  std::vector<double> buf;
  Eigen::RowVectorXd wa, wb;
  detail::softmax_row_canonical(state.logits, a, buf, wa);
  if (state.bipartite)
    detail::softmax_row_canonical(state.logits_cols, b, buf, wb);
  else
    detail::softmax_row_canonical(state.logits, b, buf, wb);
  const double ga = static_cast<double>(state.gamma(a));
  const double gb = static_cast<double>(state.bipartite ? state.gamma_cols(b) : state.gamma(b));
  const double d2 = state.config.delta * state.config.delta;

  auto sq_norm = [&buf](const Eigen::RowVectorXd& v) {
    buf.resize(static_cast<std::size_t>(v.size()));
    for (Eigen::Index d = 0; d < v.size(); ++d) buf[static_cast<std::size_t>(d)] = v(d) * v(d);
    return detail::ordered_sum(buf);
  };
  auto dot = [&buf](const Eigen::RowVectorXd& u, const Eigen::RowVectorXd& v) {
    buf.resize(static_cast<std::size_t>(v.size()));
    for (Eigen::Index d = 0; d < v.size(); ++d) buf[static_cast<std::size_t>(d)] = u(d) * v(d);
    return detail::ordered_sum(buf);
  };
  const double ga_t = ga - d2 * sq_norm(wa);
  const double gb_t = gb - d2 * sq_norm(wb);
  return ga_t + gb_t + 2.0 * d2 * dot(wa, wb);
}

// Log-rates for a list of dyads (the materialized rate query).
template <class Scalar>
std::vector<double> log_rates(const ModelState<Scalar>& state, std::span<const Edge> pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& [i, j] : pairs) out.push_back(log_rate(state, i, j));
  return out;
}

namespace detail {

template <class Scalar>
inline void check_state_matches(const ModelState<Scalar>& state, const Graph& g) {
  if (state.bipartite != g.is_bipartite())
    throw ValidationError("state and graph disagree on bipartite mode");
  if (state.bipartite) {
    if (state.n_rows() != g.n_rows() || state.n_cols() != g.n_cols())
      throw ValidationError("state shape does not match the bipartite graph");
  } else if (state.n_rows() != g.n_nodes()) {
    throw ValidationError("state has " + std::to_string(state.n_rows()) + " nodes, graph has " +
                          std::to_string(g.n_nodes()));
  }
}

}  // namespace detail

// Exact Poisson log-likelihood: sum of log-rates over edges minus the rate
// sum over all dyads (the log y! term vanishes for binary data). Reference
// path; bit-identical under corner relabelings.
template <class Scalar>
double log_likelihood(const ModelState<Scalar>& state, const Graph& g) {
  detail::check_state_matches(state, g);
  state.config.validate();
  const MatrixX<double> wr = embeddings(state);
  const MatrixX<double> wc = state.bipartite ? embeddings_cols(state) : MatrixX<double>();
  const double delta = state.config.delta;
  const int p = state.config.norm_power;
  std::vector<double> buf;

  auto gamma_row = [&](NodeId i) { return static_cast<double>(state.gamma(i)); };
  auto gamma_col = [&](NodeId c) {
    return static_cast<double>(state.bipartite ? state.gamma_cols(c) : state.gamma(c));
  };

  const Eigen::Index k = wr.cols();
  auto row_ptr = [&wr](NodeId i) { return wr.data() + static_cast<std::ptrdiff_t>(i) * wr.cols(); };
  auto col_ptr = [&wc](NodeId c) { return wc.data() + static_cast<std::ptrdiff_t>(c) * wc.cols(); };

  double edge_sum = 0.0;
  for (const auto& [i, j] : g.edges()) {
    const NodeId b = state.bipartite ? j - g.n_rows() : j;
    const double* wb = state.bipartite ? col_ptr(b) : row_ptr(b);
    const double lr = gamma_row(i) + gamma_col(b) -
                      detail::distance_term(detail::sq_distance_canonical(row_ptr(i), wb, k, buf), delta, p);
    if (!std::isfinite(lr))
      throw NumericalError("non-finite log-rate at edge (" + std::to_string(i) + ", " +
                           std::to_string(j) + ")");
    edge_sum += lr;
  }

  double penalty = 0.0;
  if (state.bipartite) {
    for (NodeId r = 0; r < g.n_rows(); ++r)
      for (NodeId c = 0; c < g.n_cols(); ++c) {
        const double lam =
            std::exp(gamma_row(r) + gamma_col(c) -
                     detail::distance_term(detail::sq_distance_canonical(row_ptr(r), col_ptr(c), k, buf), delta, p));
        if (!std::isfinite(lam))
          throw NumericalError("non-finite rate at pair (" + std::to_string(r) + ", " +
                               std::to_string(g.n_rows() + c) + ")");
        penalty += lam;
      }
  } else {
    for (NodeId i = 0; i < g.n_nodes(); ++i)
      for (NodeId j = i + 1; j < g.n_nodes(); ++j) {
        const double lam =
            std::exp(gamma_row(i) + gamma_col(j) -
                     detail::distance_term(detail::sq_distance_canonical(row_ptr(i), row_ptr(j), k, buf), delta, p));
        if (!std::isfinite(lam))
          throw NumericalError("non-finite rate at pair (" + std::to_string(i) + ", " +
                               std::to_string(j) + ")");
        penalty += lam;
      }
  }
  return edge_sum - penalty;
}

// Unbiased estimator of the log-likelihood for large graphs: the edge sum is
// exact, the all-dyads rate penalty is estimated from `sample_pairs` uniform
// dyads scaled by total_pairs / sample_pairs. Falls back to the exact sum
// when the sample budget covers every dyad.
template <class Scalar>
double log_likelihood_sampled(const ModelState<Scalar>& state, const Graph& g,
                              std::size_t sample_pairs, std::uint64_t seed) {
  detail::check_state_matches(state, g);
  if (sample_pairs < 1) throw ValidationError("sample_pairs must be >= 1");
  if (sample_pairs >= g.total_pairs()) return log_likelihood(state, g);

  double edge_sum = 0.0;
  for (const auto& [i, j] : g.edges()) edge_sum += log_rate(state, i, j);

  Rng rng(seed);
  const NodeId n = g.n_nodes();
  double sampled = 0.0;
  for (std::size_t s = 0; s < sample_pairs; ++s) {
    NodeId i, j;
    if (g.is_bipartite()) {
      i = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(g.n_rows())));
      j = g.n_rows() + static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(g.n_cols())));
    } else {
      do {
        i = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
        j = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
      } while (i == j);
    }
    sampled += std::exp(log_rate(state, i, j));
  }
  const double scale = static_cast<double>(g.total_pairs()) / static_cast<double>(sample_pairs);
  return edge_sum - scale * sampled;
}

// Fresh state: logits uniform in (-1, 1); gamma from log(degree + 1) relative
// to the mean degree when a graph is supplied, zeros otherwise.
template <class Scalar = double>
ModelState<Scalar> init_state(const ModelConfig& config, NodeId n_nodes, std::uint64_t seed) {
  config.validate();
  if (n_nodes < 2) throw ValidationError("a model needs at least 2 nodes");
  ModelState<Scalar> s;
  s.config = config;
  s.bipartite = false;
  const int k = config.n_communities();
  s.logits.resize(n_nodes, k);
  Rng rng(seed);
  for (Eigen::Index i = 0; i < s.logits.rows(); ++i)
    for (Eigen::Index d = 0; d < s.logits.cols(); ++d)
      s.logits(i, d) = static_cast<Scalar>(rng.uniform(-1.0, 1.0));
  s.gamma = VectorX<Scalar>::Zero(n_nodes);
  return s;
}

template <class Scalar = double>
ModelState<Scalar> init_state(const ModelConfig& config, const Graph& g, std::uint64_t seed) {
  config.validate();
  if (g.n_nodes() < 2) throw ValidationError("a model needs at least 2 nodes");
  ModelState<Scalar> s;
  s.config = config;
  s.bipartite = g.is_bipartite();
  const int k = config.n_communities();
  Rng rng(seed);
  auto fill_uniform = [&rng](MatrixX<Scalar>& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index d = 0; d < m.cols(); ++d)
        m(i, d) = static_cast<Scalar>(rng.uniform(-1.0, 1.0));
  };
  auto degree_gamma = [&g](NodeId first, NodeId count) {
    VectorX<Scalar> gamma(count);
    double total = 0.0;
    for (NodeId v = 0; v < count; ++v) total += g.degree(first + v);
    const double mean = total / static_cast<double>(count);
    for (NodeId v = 0; v < count; ++v) {
      const double d = static_cast<double>(g.degree(first + v));
      gamma(v) = static_cast<Scalar>(mean > 0 ? std::log(d + 1.0) - std::log(mean) : 0.0);
    }
    return gamma;
  };
  if (s.bipartite) {
    s.logits.resize(g.n_rows(), k);
    fill_uniform(s.logits);
    s.logits_cols.resize(g.n_cols(), k);
    fill_uniform(s.logits_cols);
    s.gamma = degree_gamma(0, g.n_rows());
    s.gamma_cols = degree_gamma(g.n_rows(), g.n_cols());
  } else {
    s.logits.resize(g.n_nodes(), k);
    fill_uniform(s.logits);
    s.gamma = degree_gamma(0, g.n_nodes());
  }
  return s;
}

template <class Scalar>
struct Gradient {
  MatrixX<Scalar> logits;
  VectorX<Scalar> gamma;
  MatrixX<Scalar> logits_cols;
  VectorX<Scalar> gamma_cols;
  double log_likelihood = 0.0;

  bool all_finite() const {
    return logits.allFinite() && gamma.allFinite() && logits_cols.allFinite() &&
           gamma_cols.allFinite() && std::isfinite(log_likelihood);
  }
};

// Dense full-dyad evaluator. Owns the O(N^2) scratch (squared distances and
// rates), so one instance amortizes allocations across training iterations.
// Summation order is fixed and independent of thread count.
template <class Scalar>
class PairwiseEngine {
 public:
  explicit PairwiseEngine(const Graph& g) : g_(g) {
    if (g.is_bipartite()) {
      dist_.resize(g.n_rows(), g.n_cols());
      lam_.resize(g.n_rows(), g.n_cols());
    } else {
      dist_.resize(g.n_nodes(), g.n_nodes());
      lam_.resize(g.n_nodes(), g.n_nodes());
    }
  }

  const Graph& graph() const noexcept { return g_; }

  // Log-likelihood at `state`; with `grad`, also d LL / d (logits, gamma).
  double evaluate(const ModelState<Scalar>& state, Gradient<Scalar>* grad) {
    detail::check_state_matches(state, g_);
    return state.bipartite ? eval_bipartite(state, grad) : eval_unipartite(state, grad);
  }

 private:
  static void softmax_rows(const MatrixX<Scalar>& z, MatrixX<Scalar>& w) {
    w.resize(z.rows(), z.cols());
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      const Scalar m = z.row(i).maxCoeff();
      w.row(i) = (z.row(i).array() - m).exp();
      w.row(i) /= w.row(i).sum();
    }
  }

  // dLL/dlogits row from dLL/dw row through the softmax Jacobian:
  // dz = w .* (dw - <dw, w>).
  static void chain_softmax(const MatrixX<Scalar>& w, const MatrixX<Scalar>& dw,
                            MatrixX<Scalar>& dz) {
    dz.resize(w.rows(), w.cols());
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      const Scalar dot = dw.row(i).dot(w.row(i));
      dz.row(i) = w.row(i).array() * (dw.row(i).array() - dot);
    }
  }

  double eval_unipartite(const ModelState<Scalar>& state, Gradient<Scalar>* grad) {
    const Eigen::Index n = state.logits.rows();
    const double delta = state.config.delta;
    const int p = state.config.norm_power;
    const Scalar coef = static_cast<Scalar>(p == 2 ? delta * delta : delta);

    softmax_rows(state.logits, w_);
    sq_ = w_.rowwise().squaredNorm();

    dist_.noalias() = w_ * w_.transpose();
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
      dist_.row(i) = (sq_(i) + sq_.transpose().array() - Scalar(2) * dist_.row(i).array()).max(Scalar(0));
      if (p == 1) dist_.row(i) = dist_.row(i).array().sqrt();
      lam_.row(i) = (state.gamma(i) + state.gamma.transpose().array() - coef * dist_.row(i).array()).exp();
      lam_(i, i) = Scalar(0);
    }

    rowsum_ = lam_.rowwise().sum();
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) total += static_cast<double>(rowsum_(i));

    double edge_sum = 0.0;
    for (const auto& [i, j] : g_.edges())
      edge_sum += static_cast<double>(state.gamma(i)) + static_cast<double>(state.gamma(j)) -
                  static_cast<double>(coef) * static_cast<double>(dist_(i, j));
    const double ll = edge_sum - 0.5 * total;
    if (!grad) return ll;

    grad->log_likelihood = ll;
    grad->gamma.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
      grad->gamma(i) = static_cast<Scalar>(g_.degree(static_cast<NodeId>(i))) - rowsum_(i);
    grad->logits_cols.resize(0, 0);
    grad->gamma_cols.resize(0);

    // Rewrite lam_ into the pair coefficient matrix C_ij = (y_ij - lam_ij) s_ij
    // where s_ij = 2 delta^2 (p=2) or delta / dist_ij (p=1, subgradient 0 at 0).
    if (p == 2) {
      const Scalar s = Scalar(2) * coef;
#pragma omp parallel for schedule(static)
      for (Eigen::Index i = 0; i < n; ++i) lam_.row(i) *= -s;
      for (const auto& [i, j] : g_.edges()) {
        lam_(i, j) += s;
        lam_(j, i) += s;
      }
    } else {
#pragma omp parallel for schedule(static)
      for (Eigen::Index i = 0; i < n; ++i)
        lam_.row(i) = (dist_.row(i).array() > Scalar(0))
                          .select(-coef * lam_.row(i).array() / dist_.row(i).array(), Scalar(0));
      for (const auto& [i, j] : g_.edges()) {
        const Scalar d = dist_(i, j);
        if (d > Scalar(0)) {
          lam_(i, j) += coef / d;
          lam_(j, i) += coef / d;
        }
      }
    }

    gw_.noalias() = lam_ * w_;
    rowsum_ = lam_.rowwise().sum();
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) gw_.row(i) -= rowsum_(i) * w_.row(i);
    chain_softmax(w_, gw_, grad->logits);
    return ll;
  }

  double eval_bipartite(const ModelState<Scalar>& state, Gradient<Scalar>* grad) {
    const Eigen::Index nr = state.logits.rows();
    const Eigen::Index nc = state.logits_cols.rows();
    const double delta = state.config.delta;
    const int p = state.config.norm_power;
    const Scalar coef = static_cast<Scalar>(p == 2 ? delta * delta : delta);

    softmax_rows(state.logits, w_);
    softmax_rows(state.logits_cols, wc_);
    sq_ = w_.rowwise().squaredNorm();
    sqc_ = wc_.rowwise().squaredNorm();

    dist_.noalias() = w_ * wc_.transpose();
#pragma omp parallel for schedule(static)
    for (Eigen::Index r = 0; r < nr; ++r) {
      dist_.row(r) = (sq_(r) + sqc_.transpose().array() - Scalar(2) * dist_.row(r).array()).max(Scalar(0));
      if (p == 1) dist_.row(r) = dist_.row(r).array().sqrt();
      lam_.row(r) = (state.gamma(r) + state.gamma_cols.transpose().array() - coef * dist_.row(r).array()).exp();
    }

    rowsum_ = lam_.rowwise().sum();
    double total = 0.0;
    for (Eigen::Index r = 0; r < nr; ++r) total += static_cast<double>(rowsum_(r));

    double edge_sum = 0.0;
    for (const auto& [i, j] : g_.edges()) {
      const Eigen::Index c = j - g_.n_rows();
      edge_sum += static_cast<double>(state.gamma(i)) + static_cast<double>(state.gamma_cols(c)) -
                  static_cast<double>(coef) * static_cast<double>(dist_(i, c));
    }
    const double ll = edge_sum - total;
    if (!grad) return ll;

    grad->log_likelihood = ll;
    grad->gamma.resize(nr);
    for (Eigen::Index r = 0; r < nr; ++r)
      grad->gamma(r) = static_cast<Scalar>(g_.degree(static_cast<NodeId>(r))) - rowsum_(r);
    colsum_ = lam_.colwise().sum().transpose();
    grad->gamma_cols.resize(nc);
    for (Eigen::Index c = 0; c < nc; ++c)
      grad->gamma_cols(c) =
          static_cast<Scalar>(g_.degree(static_cast<NodeId>(g_.n_rows() + c))) - colsum_(c);

    if (p == 2) {
      const Scalar s = Scalar(2) * coef;
#pragma omp parallel for schedule(static)
      for (Eigen::Index r = 0; r < nr; ++r) lam_.row(r) *= -s;
      for (const auto& [i, j] : g_.edges()) lam_(i, j - g_.n_rows()) += s;
    } else {
#pragma omp parallel for schedule(static)
      for (Eigen::Index r = 0; r < nr; ++r)
        lam_.row(r) = (dist_.row(r).array() > Scalar(0))
                          .select(-coef * lam_.row(r).array() / dist_.row(r).array(), Scalar(0));
      for (const auto& [i, j] : g_.edges()) {
        const Eigen::Index c = j - g_.n_rows();
        const Scalar d = dist_(i, c);
        if (d > Scalar(0)) lam_(i, c) += coef / d;
      }
    }

    gw_.noalias() = lam_ * wc_;
    rowsum_ = lam_.rowwise().sum();
#pragma omp parallel for schedule(static)
    for (Eigen::Index r = 0; r < nr; ++r) gw_.row(r) -= rowsum_(r) * w_.row(r);
    chain_softmax(w_, gw_, grad->logits);

    gwc_.noalias() = lam_.transpose() * w_;
    colsum_ = lam_.colwise().sum().transpose();
#pragma omp parallel for schedule(static)
    for (Eigen::Index c = 0; c < nc; ++c) gwc_.row(c) -= colsum_(c) * wc_.row(c);
    chain_softmax(wc_, gwc_, grad->logits_cols);
    return ll;
  }

  const Graph& g_;
  MatrixX<Scalar> dist_, lam_;
  MatrixX<Scalar> w_, wc_, gw_, gwc_;
  VectorX<Scalar> sq_, sqc_, rowsum_, colsum_;
};

// One-shot gradient of the log-likelihood (allocates its own scratch; use
// PairwiseEngine directly inside optimization loops).
template <class Scalar>
Gradient<Scalar> gradient(const ModelState<Scalar>& state, const Graph& g) {
  PairwiseEngine<Scalar> engine(g);
  Gradient<Scalar> grad;
  engine.evaluate(state, &grad);
  return grad;
}

}  // namespace hmldm
