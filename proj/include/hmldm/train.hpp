#pragma once

// Full-batch gradient-ascent training with restarts, the delta-grid sweep,
// and identifiability-based automatic delta selection.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hmldm/errors.hpp"
#include "hmldm/graph.hpp"
#include "hmldm/metrics.hpp"
#include "hmldm/model.hpp"
#include "hmldm/rng.hpp"
#include "hmldm/split.hpp"

namespace hmldm {

enum class Optimizer { adam, gradient_ascent };

struct TrainConfig {
  double learning_rate = 0.1;
  int iterations = 5000;
  Optimizer optimizer = Optimizer::adam;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  int restarts = 5;
  int log_every = 10;
  // Summation order is fixed and thread-count independent either way; the
  // flag is part of the interface for callers that rely on it explicitly.
  bool deterministic = true;

  void validate() const {
    if (!(learning_rate > 0.0)) throw ValidationError("learning rate must be positive");
    if (iterations < 1) throw ValidationError("iterations must be >= 1");
    if (restarts < 1) throw ValidationError("restarts must be >= 1");
    if (log_every < 1) throw ValidationError("log_every must be >= 1");
  }
};

template <class Scalar>
struct TrainedModel {
  ModelState<Scalar> state;                  // end-of-training parameters, best restart
  std::vector<std::pair<int, double>> trace;  // (iteration, log-likelihood) of that restart
  double best_ll = 0.0;                      // max over the trace
  double final_ll = 0.0;                     // log-likelihood at the returned state
  double wall_time_s = 0.0;
  int failed_restarts = 0;
  std::vector<std::string> diagnostics;      // one entry per aborted restart
};

namespace detail {

// Adam in ascent form; one instance per parameter tensor.
template <class Derived>
class AdamBuffer {
 public:
  void init(Eigen::Index rows, Eigen::Index cols) {
    m_.setZero(rows, cols);
    v_.setZero(rows, cols);
  }

  void step(Derived& param, const Derived& grad, const TrainConfig& c, int t) {
    using Scalar = typename Derived::Scalar;
    const Scalar b1 = static_cast<Scalar>(c.adam_beta1);
    const Scalar b2 = static_cast<Scalar>(c.adam_beta2);
    m_ = b1 * m_ + (Scalar(1) - b1) * grad;
    v_.array() = b2 * v_.array() + (Scalar(1) - b2) * grad.array().square();
    const Scalar corr1 = Scalar(1) - static_cast<Scalar>(std::pow(c.adam_beta1, t));
    const Scalar corr2 = Scalar(1) - static_cast<Scalar>(std::pow(c.adam_beta2, t));
    param.array() += static_cast<Scalar>(c.learning_rate) * (m_.array() / corr1) /
                     ((v_.array() / corr2).sqrt() + static_cast<Scalar>(c.adam_epsilon));
  }

 private:
  Derived m_, v_;
};

}  // namespace detail

// Maximizes the Poisson log-likelihood with `restarts` independently seeded
// runs and returns the run with the highest final log-likelihood. A restart
// that produces non-finite values is aborted and recorded; all restarts
// failing is an error. Bitwise reproducible for a fixed seed.
// `warm_start`, when given, replaces the random initialization of the first
// restart (used by sweeps that continue from the previous delta).
template <class Scalar = double>
TrainedModel<Scalar> fit(const Graph& g, const ModelConfig& mconfig, const TrainConfig& tconfig,
                         const ModelState<Scalar>* warm_start = nullptr) {
  mconfig.validate();
  tconfig.validate();
  if (g.n_edges() == 0) throw ValidationError("cannot fit an empty graph");

  const auto t0 = std::chrono::steady_clock::now();
  PairwiseEngine<Scalar> engine(g);
  Rng seed_stream(mconfig.seed);

  std::optional<TrainedModel<Scalar>> best;
  std::vector<std::string> diagnostics;
  int failed = 0;

  for (int r = 0; r < tconfig.restarts; ++r) {
    const std::uint64_t restart_seed = seed_stream.next_u64();
    ModelState<Scalar> state = init_state<Scalar>(mconfig, g, restart_seed);
    if (warm_start && r == 0) {
      state = *warm_start;
      state.config = mconfig;
    }

    detail::AdamBuffer<MatrixX<Scalar>> adam_logits, adam_logits_cols;
    detail::AdamBuffer<VectorX<Scalar>> adam_gamma, adam_gamma_cols;
    adam_logits.init(state.logits.rows(), state.logits.cols());
    adam_gamma.init(state.gamma.size(), 1);
    if (state.bipartite) {
      adam_logits_cols.init(state.logits_cols.rows(), state.logits_cols.cols());
      adam_gamma_cols.init(state.gamma_cols.size(), 1);
    }

    std::vector<std::pair<int, double>> trace;
    Gradient<Scalar> grad;
    bool aborted = false;

    for (int it = 0; it < tconfig.iterations; ++it) {
      const double ll = engine.evaluate(state, &grad);
      if (!std::isfinite(ll) || !grad.all_finite()) {
        diagnostics.push_back("restart " + std::to_string(r) + ": non-finite values at iteration " +
                              std::to_string(it));
        ++failed;
        aborted = true;
        break;
      }
      if (it % tconfig.log_every == 0) trace.emplace_back(it, ll);

      if (tconfig.optimizer == Optimizer::adam) {
        const int t = it + 1;
        adam_logits.step(state.logits, grad.logits, tconfig, t);
        adam_gamma.step(state.gamma, grad.gamma, tconfig, t);
        if (state.bipartite) {
          adam_logits_cols.step(state.logits_cols, grad.logits_cols, tconfig, t);
          adam_gamma_cols.step(state.gamma_cols, grad.gamma_cols, tconfig, t);
        }
      } else {
        const Scalar lr = static_cast<Scalar>(tconfig.learning_rate);
        state.logits += lr * grad.logits;
        state.gamma += lr * grad.gamma;
        if (state.bipartite) {
          state.logits_cols += lr * grad.logits_cols;
          state.gamma_cols += lr * grad.gamma_cols;
        }
      }
    }
    if (aborted) continue;

    const double final_ll = engine.evaluate(state, nullptr);
    if (!std::isfinite(final_ll) || !state.all_finite()) {
      diagnostics.push_back("restart " + std::to_string(r) + ": non-finite final state");
      ++failed;
      continue;
    }
    trace.emplace_back(tconfig.iterations, final_ll);

    if (!best || final_ll > best->final_ll) {
      double best_ll = trace.front().second;
      for (const auto& [_, v] : trace) best_ll = std::max(best_ll, v);
      best = TrainedModel<Scalar>{std::move(state), std::move(trace), best_ll, final_ll, 0.0, 0, {}};
    }
  }

  if (!best)
    throw NumericalError("all " + std::to_string(tconfig.restarts) +
                         " restarts produced non-finite values" +
                         (diagnostics.empty() ? "" : "; first: " + diagnostics.front()));
  best->failed_restarts = failed;
  best->diagnostics = std::move(diagnostics);
  best->wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return best.value();
}

// One sweep point: diagnostics of the model fitted at a given delta.
struct SweepRecord {
  double delta = 0.0;
  double champion_fraction = 0.0;
  bool identifiable = false;
  double final_ll = 0.0;
  std::optional<double> auc_roc;
  std::optional<double> auc_pr;
  bool failed = false;
  std::string error;
};

struct SweepOptions {
  double champion_tau = 0.99;
  // Start each fit's first restart from the previous delta's solution.
  bool warm_start = false;
};

namespace detail {

template <class Scalar>
SweepRecord sweep_point(const Graph& train, const ModelConfig& mconfig, const TrainConfig& tconfig,
                        double delta, const SweepOptions& opts,
                        std::optional<ModelState<Scalar>>& carry,
                        const TrainTestSplit* split) {
  SweepRecord rec;
  rec.delta = delta;
  if (!(delta > 0.0)) {
    rec.failed = true;
    rec.error = "delta must be positive";
    return rec;
  }
  ModelConfig cfg = mconfig;
  cfg.delta = delta;
  try {
    const ModelState<Scalar>* warm = (opts.warm_start && carry) ? &*carry : nullptr;
    TrainedModel<Scalar> model = fit<Scalar>(train, cfg, tconfig, warm);
    const ChampionReport report = champion_report(model.state, opts.champion_tau);
    rec.champion_fraction = report.champion_fraction;
    rec.identifiable = report.identifiable;
    rec.final_ll = model.final_ll;
    if (split) {
      const auto pos = score_pairs(model.state, split->test_positives);
      const auto neg = score_pairs(model.state, split->test_negatives);
      rec.auc_roc = auc_roc(pos.scores, neg.scores);
      rec.auc_pr = auc_pr(pos.scores, neg.scores);
    }
    if (opts.warm_start) carry = model.state;
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  return rec;
}

}  // namespace detail

// Fits one model per delta (grid given in descending order by convention) and
// records champion fraction, identifiability, and final log-likelihood.
// Per-point failures are recorded in the output, never propagated.
template <class Scalar = double>
std::vector<SweepRecord> sweep_delta(const Graph& g, const ModelConfig& mconfig,
                                     const TrainConfig& tconfig, const std::vector<double>& delta_grid,
                                     const SweepOptions& opts = {}) {
  if (delta_grid.empty()) throw ValidationError("delta grid must be non-empty");
  std::vector<SweepRecord> records;
  std::optional<ModelState<Scalar>> carry;
  for (double delta : delta_grid)
    records.push_back(detail::sweep_point<Scalar>(g, mconfig, tconfig, delta, opts, carry, nullptr));
  return records;
}

// Split overload: additionally scores the held-out positives against the
// sampled negatives after each fit (AUC-ROC / AUC-PR on the record).
template <class Scalar = double>
std::vector<SweepRecord> sweep_delta(const TrainTestSplit& split, const ModelConfig& mconfig,
                                     const TrainConfig& tconfig, const std::vector<double>& delta_grid,
                                     const SweepOptions& opts = {}) {
  if (delta_grid.empty()) throw ValidationError("delta grid must be non-empty");
  std::vector<SweepRecord> records;
  std::optional<ModelState<Scalar>> carry;
  for (double delta : delta_grid)
    records.push_back(detail::sweep_point<Scalar>(split.train, mconfig, tconfig, delta, opts, carry, &split));
  return records;
}

// Scanning from the largest delta downward, returns the first record whose
// solution is identifiable (every community holds at least one champion).
// Input order does not matter; records are ranked by descending delta.
inline SweepRecord auto_select_identifiable(std::vector<SweepRecord> records) {
  std::sort(records.begin(), records.end(),
            [](const SweepRecord& a, const SweepRecord& b) { return a.delta > b.delta; });
  for (const auto& rec : records)
    if (!rec.failed && rec.identifiable) return rec;
  throw ValidationError(
      "no delta in the sweep yields an identifiable solution; extend the grid toward smaller delta "
      "or refine it");
}

// delta^2 grid matching the usual sweep axes: powers of two from 1024 down to
// 1/16, returned as delta values in descending order.
inline std::vector<double> default_delta_grid() {
  std::vector<double> grid;
  for (double d2 = 1024.0; d2 >= 0.0625; d2 /= 2.0) grid.push_back(std::sqrt(d2));
  return grid;
}

}  // namespace hmldm
