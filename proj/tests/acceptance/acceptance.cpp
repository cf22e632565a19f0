// Acceptance suite: one check per release criterion, each printing a single
// PASS/FAIL/SKIP line. Run a single criterion by name (the ctest entries do)
// or `all`. Exit codes: 0 pass, 1 fail, 77 skip (dataset not present).
//
// The two collaboration-network checks need the SNAP ca-GrQc edge list on
// disk (this repository does not bundle or download datasets). Place it at
// $HMLDM_DATA_DIR/ca-GrQc.txt (default: ./data) to enable them.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "hmldm/hmldm.hpp"

using namespace hmldm;

namespace {

struct Outcome {
  enum Kind { pass, fail, skip } kind = fail;
  std::string detail;
};

Outcome ok(std::string detail) { return {Outcome::pass, std::move(detail)}; }
Outcome bad(std::string detail) { return {Outcome::fail, std::move(detail)}; }
Outcome skipped(std::string detail) { return {Outcome::skip, std::move(detail)}; }

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("HMLDM_DATA_DIR")) return env;
  return HMLDM_DEFAULT_DATA_DIR;
}

// ---------------------------------------------------------------------------
// GrQc link prediction (real-data checks, gated on the dataset file)
// ---------------------------------------------------------------------------

std::optional<Graph> load_grqc() {
  const auto path = data_dir() / "ca-GrQc.txt";
  std::ifstream in(path);
  if (!in) return std::nullopt;
  LoadOptions opts;
  opts.drop_self_loops = true;  // SNAP collaboration lists may carry self-pairs
  return load_edge_list(in, opts).graph;
}

TrainConfig grqc_train_config(int iterations) {
  TrainConfig t;
  t.iterations = iterations;
  t.restarts = 1;
  t.log_every = 100;
  return t;
}

// Full protocol for one seed: 50% connectivity-preserving holdout, sweep the
// delta^2 grid at D=8, pick the first identifiable record scanning from
// large delta down, report its held-out AUC-ROC.
double grqc_auto_delta_auc(const Graph& g, int p, std::uint64_t seed) {
  auto split = split_for_link_prediction(g, 0.5, seed);
  ModelConfig mcfg;
  mcfg.dimension = 8;
  mcfg.norm_power = p;
  mcfg.seed = seed;
  const std::vector<double> grid = {std::sqrt(1024.0), std::sqrt(256.0), std::sqrt(64.0),
                                    std::sqrt(16.0),   std::sqrt(4.0),   1.0};
  auto records = sweep_delta<float>(split, mcfg, grqc_train_config(2500), grid);
  auto selected = auto_select_identifiable(records);
  return selected.auc_roc.value();
}

Outcome c01_grqc_linkpred() {
  auto g = load_grqc();
  if (!g)
    return skipped("ca-GrQc.txt not found under " + data_dir().string() +
                   " (datasets are not bundled; fetch it from SNAP to enable this check)");
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  for (int p : {1, 2}) {
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) sum += grqc_auto_delta_auc(*g, p, seed);
    const double mean = sum / 5.0;
    detail += "p=" + std::to_string(p) + " mean AUC-ROC " + fmt(mean) + "  ";
    if (mean < 0.92) return bad(detail + "(threshold 0.92)");
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return ok(detail + "(threshold 0.92, 5 seeds each, " + fmt(secs) + "s)");
}

Outcome c02_grqc_ldm_limit() {
  auto g = load_grqc();
  if (!g)
    return skipped("ca-GrQc.txt not found under " + data_dir().string() +
                   " (datasets are not bundled; fetch it from SNAP to enable this check)");
  auto split = split_for_link_prediction(*g, 0.5, 1);
  ModelConfig mcfg;
  mcfg.dimension = 8;
  mcfg.norm_power = 1;
  mcfg.delta = std::sqrt(1000.0);
  mcfg.seed = 1;
  const auto t0 = std::chrono::steady_clock::now();
  auto model = fit<float>(split.train, mcfg, grqc_train_config(2500));
  auto pos = score_pairs(model.state, split.test_positives);
  auto neg = score_pairs(model.state, split.test_negatives);
  const double auc = auc_roc(pos.scores, neg.scores);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (auc < 0.94) return bad("p=1 delta^2=1000 AUC-ROC " + fmt(auc) + " < 0.94");
  return ok("p=1 delta^2=1000 AUC-ROC " + fmt(auc) + " (threshold 0.94, " + fmt(secs) + "s)");
}

// ---------------------------------------------------------------------------
// Champion phase behavior and community recovery on the planted benchmark
// ---------------------------------------------------------------------------

LabeledGraph planted_benchmark() { return generate_planted_partition(400, 4, 0.2, 0.01, 42); }

Outcome c03_champion_phase() {
  auto lg = planted_benchmark();
  ModelConfig mcfg;
  mcfg.dimension = 3;
  mcfg.seed = 7;
  TrainConfig tcfg;
  tcfg.iterations = 800;
  tcfg.restarts = 1;
  tcfg.log_every = 100;

  std::map<int, std::vector<SweepRecord>> curves;
  for (int p : {1, 2}) {
    mcfg.norm_power = p;
    curves[p] = sweep_delta(lg.graph, mcfg, tcfg, default_delta_grid());
    for (const auto& r : curves[p])
      if (r.failed) return bad("p=" + std::to_string(p) + " sweep point failed: " + r.error);
  }

  std::string detail;
  for (int p : {1, 2}) {
    const double at_small = curves[p].back().champion_fraction;   // delta^2 = 0.0625
    const double at_large = curves[p].front().champion_fraction;  // delta^2 = 1024
    detail += "p=" + std::to_string(p) + ": cf(0.0625)=" + fmt(at_small) +
              " cf(1024)=" + fmt(at_large) + "  ";
    if (at_small < 0.90) return bad(detail + "- champion fraction at the smallest delta^2 < 0.90");
    if (at_large > 0.10) return bad(detail + "- champion fraction at the largest delta^2 > 0.10");
  }

  // The p=2 curve sheds champions at smaller delta^2 than p=1: at a mid-grid
  // point the p=1 fraction must still dominate.
  const std::size_t mid = 7;  // delta^2 = 8
  const double p1_mid = curves[1][mid].champion_fraction;
  const double p2_mid = curves[2][mid].champion_fraction;
  detail += "mid delta^2=8: p1=" + fmt(p1_mid) + " p2=" + fmt(p2_mid);
  if (!(p1_mid > p2_mid)) return bad(detail + " - expected the p=1 fraction to dominate");
  return ok(detail);
}

Outcome c04_community_recovery() {
  const auto t0 = std::chrono::steady_clock::now();
  auto lg = planted_benchmark();
  ModelConfig mcfg;
  mcfg.dimension = 3;  // four simplex corners for four planted blocks
  mcfg.norm_power = 2;
  mcfg.delta = 1.0;
  mcfg.seed = 3;
  TrainConfig tcfg;
  tcfg.iterations = 1000;
  tcfg.restarts = 5;
  tcfg.log_every = 100;
  auto model = fit(lg.graph, mcfg, tcfg);
  auto part = hard_assignments(model.state);
  const double score_nmi = nmi(part, lg.labels);
  const double score_ari = ari(part, lg.labels);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string detail =
      "NMI " + fmt(score_nmi) + ", ARI " + fmt(score_ari) + ", " + fmt(secs) + "s";
  if (score_nmi < 0.95 || score_ari < 0.95) return bad(detail + " (thresholds 0.95)");
  return ok(detail);
}

// ---------------------------------------------------------------------------
// Numerical identities
// ---------------------------------------------------------------------------

Outcome c05_gradient_check() {
  Rng rng(2025);
  double worst = 0.0;
  const double step = 1e-5;
  int instance = 0;
  for (int p : {1, 2})
    for (double delta : {0.1, 1.0, 10.0}) {
      for (int rep = 0; rep < 4; ++rep) {
        if (instance >= 20) break;
        ++instance;
        const NodeId n = 5 + static_cast<NodeId>(rng.below(6));  // n <= 10
        const int dim = 1 + static_cast<int>(rng.below(3));      // D <= 3
        auto lg = generate_planted_partition(n, 2, 0.7, 0.3, rng.next_u64());
        ModelConfig cfg{dim, p, delta, 0};
        auto state = init_state<double>(cfg, lg.graph, rng.next_u64());
        for (Eigen::Index i = 0; i < state.gamma.size(); ++i) state.gamma(i) = rng.uniform(-0.5, 0.5);
        const Gradient<double> grad = gradient(state, lg.graph);

        auto fd = [&](double& param) {
          const double saved = param;
          param = saved + step;
          const double up = log_likelihood(state, lg.graph);
          param = saved - step;
          const double down = log_likelihood(state, lg.graph);
          param = saved;
          return (up - down) / (2.0 * step);
        };
        for (Eigen::Index i = 0; i < state.logits.rows(); ++i)
          for (Eigen::Index d = 0; d < state.logits.cols(); ++d) {
            const double numeric = fd(state.logits(i, d));
            worst = std::max(worst, std::abs(grad.logits(i, d) - numeric) / std::max(1.0, std::abs(numeric)));
          }
        for (Eigen::Index i = 0; i < state.gamma.size(); ++i) {
          const double numeric = fd(state.gamma(i));
          worst = std::max(worst, std::abs(grad.gamma(i) - numeric) / std::max(1.0, std::abs(numeric)));
        }
      }
    }
  const std::string detail = "max relative error " + fmt(worst) + " over 20 instances";
  if (worst >= 1e-4) return bad(detail + " (threshold 1e-4)");
  return ok(detail);
}

Outcome c06_eigenmodel_identity() {
  Rng rng(99);
  double worst = 0.0;
  for (int draw = 0; draw < 10000; ++draw) {
    const NodeId n = 4 + static_cast<NodeId>(rng.below(8));
    ModelConfig cfg{1 + static_cast<int>(rng.below(5)), 2, 0.05 + 8.0 * rng.uniform(), 0};
    auto state = init_state<double>(cfg, n, rng.next_u64());
    for (Eigen::Index i = 0; i < state.gamma.size(); ++i) state.gamma(i) = rng.uniform(-2.0, 2.0);
    NodeId a = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
    NodeId b = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
    if (a == b) b = (b + 1) % n;
    worst = std::max(worst, std::abs(log_rate(state, a, b) - eigenmodel_log_rate(state, a, b)));
  }
  const std::string detail = "max |difference| " + fmt(worst) + " over 10^4 draws";
  if (worst >= 1e-10) return bad(detail + " (threshold 1e-10)");
  return ok(detail);
}

Outcome c07_likelihood_oracle() {
  // Exhaustive: every graph on 2..6 nodes, against a term-by-term evaluation.
  double worst_rel = 0.0;
  std::size_t graphs = 0;
  for (NodeId n = 2; n <= 6; ++n) {
    ModelConfig cfg{2, (n % 2 == 0) ? 2 : 1, 0.9, 0};
    auto state = init_state<double>(cfg, n, 1000 + n);
    for (Eigen::Index i = 0; i < state.gamma.size(); ++i)
      state.gamma(i) = 0.05 * static_cast<double>(i) - 0.1;

    const MatrixX<double> w = embeddings(state);
    auto log_lambda = [&](NodeId i, NodeId j) {
      double d2 = 0.0;
      for (Eigen::Index d = 0; d < w.cols(); ++d) {
        const double t = w(i, d) - w(j, d);
        d2 += t * t;
      }
      const double dist = cfg.norm_power == 2 ? cfg.delta * cfg.delta * d2
                                              : cfg.delta * std::sqrt(d2);
      return state.gamma(i) + state.gamma(j) - dist;
    };

    std::vector<Edge> all_pairs;
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = i + 1; j < n; ++j) all_pairs.emplace_back(i, j);
    const std::size_t m = all_pairs.size();
    for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
      std::vector<Edge> edges;
      for (std::size_t b = 0; b < m; ++b)
        if (mask & (1ULL << b)) edges.push_back(all_pairs[b]);
      Graph g = Graph::unipartite(n, edges);
      double oracle = 0.0;
      for (const auto& [i, j] : g.edges()) oracle += log_lambda(i, j);
      for (const auto& [i, j] : all_pairs) oracle -= std::exp(log_lambda(i, j));
      const double got = log_likelihood(state, g);
      worst_rel = std::max(worst_rel, std::abs(got - oracle) / std::max(1e-300, std::abs(oracle)));
      ++graphs;
    }
  }
  const std::string detail =
      "max relative deviation " + fmt(worst_rel) + " over " + std::to_string(graphs) + " graphs";
  if (worst_rel >= 1e-12) return bad(detail + " (threshold 1e-12)");
  return ok(detail);
}

Outcome c08_permutation_identifiability() {
  // Bitwise invariance under corner relabeling.
  auto lg = generate_planted_partition(30, 3, 0.8, 0.05, 5);
  ModelConfig cfg{3, 2, 1.0, 11};
  auto state = init_state<double>(cfg, lg.graph, 17);
  const double base = log_likelihood(state, lg.graph);
  const std::vector<int> perm{2, 3, 1, 0};
  ModelState<double> permuted = state;
  for (int d = 0; d < 4; ++d)
    permuted.logits.col(d) = state.logits.col(perm[static_cast<std::size_t>(d)]);
  if (log_likelihood(permuted, lg.graph) != base)
    return bad("column-permuted logits changed the log-likelihood bits");

  // Two independent fits at an identifiable delta agree up to a permutation.
  auto strong = generate_planted_partition(200, 4, 0.5, 0.01, 9);
  ModelConfig mcfg{3, 2, 1.0, 0};
  TrainConfig tcfg;
  tcfg.iterations = 800;
  tcfg.restarts = 1;
  tcfg.log_every = 100;
  mcfg.seed = 101;
  auto run_a = fit(strong.graph, mcfg, tcfg);
  mcfg.seed = 202;
  auto run_b = fit(strong.graph, mcfg, tcfg);
  const auto report_a = champion_report(run_a.state, 0.99);
  const auto report_b = champion_report(run_b.state, 0.99);
  if (!report_a.identifiable || !report_b.identifiable)
    return bad("expected both runs identifiable at delta=1 on the strong-signal graph");
  const auto alignment = align_columns(embeddings(run_a.state), embeddings(run_b.state));
  const std::string detail = "bitwise permutation invariance holds; run correlation after "
                             "alignment " + fmt(alignment.correlation);
  if (alignment.correlation <= 0.95) return bad(detail + " (threshold 0.95)");
  return ok(detail);
}

Outcome c09_split_protocol() {
  Rng gen(77);
  std::vector<Edge> edges;
  const NodeId n = 60;
  for (NodeId v = 1; v < n; ++v)
    edges.emplace_back(static_cast<NodeId>(gen.below(static_cast<std::uint64_t>(v))), v);
  for (int extra = 0; extra < 120; ++extra) {
    NodeId a = static_cast<NodeId>(gen.below(n)), b = static_cast<NodeId>(gen.below(n));
    if (a != b) edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  Graph g = Graph::unipartite(n, edges);
  const std::size_t expect = g.n_edges() / 2;

  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto split = split_for_link_prediction(g, 0.5, seed);
    if (!is_connected(split.train)) return bad("seed " + std::to_string(seed) + ": residual disconnected");
    if (split.test_positives.size() != expect)
      return bad("seed " + std::to_string(seed) + ": wrong holdout count");
    if (split.test_negatives.size() != expect)
      return bad("seed " + std::to_string(seed) + ": wrong negative count");
    for (const auto& e : split.test_positives)
      if (split.train.has_edge(e.first, e.second))
        return bad("seed " + std::to_string(seed) + ": positive leaked into train");
    for (const auto& e : split.test_negatives)
      if (g.has_edge(e.first, e.second))
        return bad("seed " + std::to_string(seed) + ": negative collides with an edge");
  }
  return ok("1000 seeds: residual connected, counts exact, sets disjoint");
}

Outcome c10_metric_oracles() {
  Rng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> pos, neg;
    const std::size_t np = 1 + rng.below(15), nn = 1 + rng.below(15);
    for (std::size_t i = 0; i < np; ++i) pos.push_back(static_cast<double>(rng.below(6)) / 5.0);
    for (std::size_t i = 0; i < nn; ++i) neg.push_back(static_cast<double>(rng.below(6)) / 5.0);
    double wins = 0.0;
    for (double a : pos)
      for (double b : neg) wins += a > b ? 1.0 : (a == b ? 0.5 : 0.0);
    const double d = static_cast<double>(np * nn);
    const double oracle_auc =
        2.0 * wins == d ? 0.5 : (2.0 * wins < d ? wins / d : 1.0 - (d - wins) / d);
    if (auc_roc(pos, neg) != oracle_auc)
      return bad("AUC mismatch vs pair counting at trial " + std::to_string(trial));

    Partition x, y;
    for (int i = 0; i < 14; ++i) {
      x.push_back(static_cast<int>(rng.below(3)));
      y.push_back(static_cast<int>(rng.below(3)));
    }
    double ss = 0, sd = 0, ds = 0, dd = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = i + 1; j < x.size(); ++j) {
        const bool sx = x[i] == x[j], sy = y[i] == y[j];
        (sx && sy ? ss : sx ? sd : sy ? ds : dd) += 1.0;
      }
    const double den = (ss + sd) * (sd + dd) + (ss + ds) * (ds + dd);
    const double ari_pairs = den == 0.0 ? 1.0 : 2.0 * (ss * dd - sd * ds) / den;
    if (std::abs(ari(x, y) - ari_pairs) > 1e-12)
      return bad("ARI mismatch vs pair counting at trial " + std::to_string(trial));

    // Entropy-difference route for NMI.
    const double n = static_cast<double>(x.size());
    auto h = [&](const std::vector<double>& counts) {
      double acc = 0.0;
      for (double c : counts)
        if (c > 0) acc -= (c / n) * std::log(c / n);
      return acc;
    };
    std::vector<double> cx(3, 0.0), cy(3, 0.0), cxy(9, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      cx[static_cast<std::size_t>(x[i])] += 1;
      cy[static_cast<std::size_t>(y[i])] += 1;
      cxy[static_cast<std::size_t>(x[i] * 3 + y[i])] += 1;
    }
    const double ha = h(cx), hb = h(cy);
    const double oracle_nmi =
        ha + hb == 0.0 ? 1.0 : std::clamp((ha + hb - h(cxy)) / (0.5 * (ha + hb)), 0.0, 1.0);
    if (std::abs(nmi(x, y) - oracle_nmi) > 1e-12)
      return bad("NMI mismatch vs entropy difference at trial " + std::to_string(trial));
  }
  return ok("100 random instances: AUC exact, NMI/ARI within 1e-12 of oracles");
}

Outcome c11_bipartite_smoke() {
  auto bb = generate_bipartite_blocks(60, 80, 3, 0.5, 0.03, 33);
  ModelConfig mcfg{2, 2, 1.0, 8};
  TrainConfig tcfg;
  tcfg.iterations = 600;
  tcfg.restarts = 2;
  tcfg.log_every = 50;
  auto model = fit(bb.graph, mcfg, tcfg);
  if (!(model.final_ll > model.trace.front().second))
    return bad("training did not improve the bipartite likelihood");

  auto res = reorder_adjacency(bb.graph, hard_assignments(model.state),
                               hard_assignments_cols(model.state));
  double diag = 0.0, off = 0.0;
  int n_diag = 0, n_off = 0;
  for (std::size_t a = 0; a < res.block_density.size(); ++a)
    for (std::size_t b = 0; b < res.block_density[a].size(); ++b) {
      if (a == b) {
        diag += res.block_density[a][b];
        ++n_diag;
      } else {
        off += res.block_density[a][b];
        ++n_off;
      }
    }
  diag /= std::max(1, n_diag);
  off /= std::max(1, n_off);
  const std::string detail = "LL improved; diagonal density " + fmt(diag) +
                             " vs off-diagonal " + fmt(off);
  if (!(diag > 5.0 * off)) return bad(detail + " (need > 5x)");
  return ok(detail);
}

// Stand-in for the real-data pipeline that runs without external files: a
// planted benchmark with one community per simplex corner, the full
// split / sweep / auto-select / score chain at non-toy scale.
Outcome s01_surrogate_linkpred() {
  auto lg = generate_planted_partition(1200, 12, 0.25, 0.002, 7);
  ModelConfig mcfg;
  mcfg.dimension = 11;
  mcfg.norm_power = 1;
  TrainConfig tcfg;
  tcfg.iterations = 2500;
  tcfg.restarts = 1;
  tcfg.log_every = 250;
  const std::vector<double> grid = {std::sqrt(64.0), std::sqrt(16.0), std::sqrt(4.0), 1.0};
  double sum = 0.0;
  double selected_d2 = 0.0;
  for (std::uint64_t seed = 1; seed <= 2; ++seed) {
    auto split = split_for_link_prediction(lg.graph, 0.5, seed);
    mcfg.seed = seed;
    auto records = sweep_delta<float>(split, mcfg, tcfg, grid);
    auto selected = auto_select_identifiable(records);
    sum += selected.auc_roc.value();
    selected_d2 = selected.delta * selected.delta;
  }
  const double mean = sum / 2.0;
  const std::string detail = "mean AUC-ROC " + fmt(mean) + " over 2 seeds, last selected delta^2 " +
                             fmt(selected_d2) + " (synthetic surrogate)";
  if (mean < 0.85) return bad(detail + " (threshold 0.85)");
  return ok(detail);
}

using Check = std::function<Outcome()>;

const std::vector<std::pair<std::string, Check>>& registry() {
  static const std::vector<std::pair<std::string, Check>> checks = {
      {"c01_grqc_linkpred", c01_grqc_linkpred},
      {"c02_grqc_ldm_limit", c02_grqc_ldm_limit},
      {"c03_champion_phase", c03_champion_phase},
      {"c04_community_recovery", c04_community_recovery},
      {"c05_gradient_check", c05_gradient_check},
      {"c06_eigenmodel_identity", c06_eigenmodel_identity},
      {"c07_likelihood_oracle", c07_likelihood_oracle},
      {"c08_permutation_identifiability", c08_permutation_identifiability},
      {"c09_split_protocol", c09_split_protocol},
      {"c10_metric_oracles", c10_metric_oracles},
      {"c11_bipartite_smoke", c11_bipartite_smoke},
      {"s01_surrogate_linkpred", s01_surrogate_linkpred},
  };
  return checks;
}

int report(const std::string& name, const Outcome& outcome) {
  const char* tag = outcome.kind == Outcome::pass ? "PASS"
                    : outcome.kind == Outcome::fail ? "FAIL"
                                                    : "SKIP";
  std::cout << '[' << tag << "] " << name << ": " << outcome.detail << std::endl;
  return outcome.kind == Outcome::pass ? 0 : outcome.kind == Outcome::fail ? 1 : 77;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string target = argc > 1 ? argv[1] : "all";
  if (target == "all") {
    int failures = 0, skips = 0;
    for (const auto& [name, check] : registry()) {
      int rc = 1;
      try {
        rc = report(name, check());
      } catch (const std::exception& e) {
        rc = report(name, bad(std::string("exception: ") + e.what()));
      }
      if (rc == 1) ++failures;
      if (rc == 77) ++skips;
    }
    std::cout << registry().size() - failures - skips << " passed, " << failures << " failed, "
              << skips << " skipped" << std::endl;
    return failures > 0 ? 1 : 0;
  }
  for (const auto& [name, check] : registry()) {
    if (name != target) continue;
    try {
      return report(name, check());
    } catch (const std::exception& e) {
      return report(name, bad(std::string("exception: ") + e.what()));
    }
  }
  std::cerr << "unknown criterion '" << target << "'; available:\n";
  for (const auto& [name, _] : registry()) std::cerr << "  " << name << '\n';
  return 2;
}
