// hmldm command-line tool: training, link-prediction evaluation, community
// detection, delta sweeps, adjacency reordering, and synthetic benchmarks.
//
// Every command writes a run manifest next to its outputs. With a fixed
// --seed the result files (JSON/CSV/text) are byte-identical across reruns;
// the manifest additionally records wall time and input digests.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hmldm/hmldm.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

struct CommonOpts {
  std::string out_dir;
  std::uint64_t seed = 1;
  int dim = 8;
  int p = 2;
  double delta = 1.0;
  double delta_sq = 0.0;  // takes precedence when set
  double lr = 0.1;
  int iters = 5000;
  int restarts = 5;
  int log_every = 10;
  double tau = 0.99;
  bool bipartite = false;
  bool deterministic = true;
  bool float32 = false;
  bool drop_self_loops = false;

  double resolved_delta() const { return delta_sq > 0.0 ? std::sqrt(delta_sq) : delta; }

  hmldm::ModelConfig model_config() const {
    hmldm::ModelConfig cfg;
    cfg.dimension = dim;
    cfg.norm_power = p;
    cfg.delta = resolved_delta();
    cfg.seed = seed;
    return cfg;
  }

  hmldm::TrainConfig train_config() const {
    hmldm::TrainConfig t;
    t.learning_rate = lr;
    t.iterations = iters;
    t.restarts = restarts;
    t.log_every = log_every;
    t.deterministic = deterministic;
    return t;
  }
};

void add_model_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--dim,-D", o.dim, "Latent dimension D (the simplex has D+1 corners)")
      ->check(CLI::Range(1, 1024));
  cmd->add_option("--p", o.p, "Norm power, 1 or 2")->check(CLI::IsMember({1, 2}));
  auto* d = cmd->add_option("--delta", o.delta, "Simplex size delta")
                ->check(CLI::PositiveNumber);
  cmd->add_option("--delta-sq", o.delta_sq, "Simplex size given as delta^2")
      ->check(CLI::PositiveNumber)
      ->excludes(d);
  cmd->add_option("--lr", o.lr, "Learning rate")->check(CLI::PositiveNumber);
  cmd->add_option("--iters", o.iters, "Full-batch iterations")->check(CLI::Range(1, 10000000));
  cmd->add_option("--restarts", o.restarts, "Independent restarts, best final likelihood wins")
      ->check(CLI::Range(1, 1000));
  cmd->add_option("--log-every", o.log_every, "Trace logging stride")->check(CLI::Range(1, 1000000));
  cmd->add_option("--tau", o.tau, "Champion membership threshold")
      ->check(CLI::Range(0.500001, 1.0));
  cmd->add_flag("--bipartite", o.bipartite, "Expect a %bipartite edge list");
  cmd->add_flag("--float32", o.float32, "Train in single precision (large graphs)");
  cmd->add_flag("--drop-self-loops", o.drop_self_loops, "Drop self-loops instead of rejecting them");
  cmd->add_flag("--deterministic,!--no-deterministic", o.deterministic,
                "Fixed summation order (default on)");
}

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
  const char* env = std::getenv("HMLDM_OUT_DIR");
  o.out_dir = env ? env : ".";
  cmd->add_option("--out,-o", o.out_dir, "Output directory (default $HMLDM_OUT_DIR or .)");
  cmd->add_option("--seed,-s", o.seed, "Seed for all randomness in the run");
}

std::uint64_t fnv1a64_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

hmldm::LoadedGraph load_graph_file(const std::string& path, const CommonOpts& o) {
  std::ifstream in(path);
  if (!in) throw hmldm::ValidationError("cannot open edge list: " + path);
  hmldm::LoadOptions opts;
  opts.expected_mode = o.bipartite ? hmldm::GraphMode::bipartite : hmldm::GraphMode::unipartite;
  opts.drop_self_loops = o.drop_self_loops;
  return hmldm::load_edge_list(in, opts);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hmldm::ValidationError("cannot write " + path.string());
  out << content;
}

class RunWriter {
 public:
  RunWriter(std::string command, const CommonOpts& o)
      : command_(std::move(command)), out_dir_(o.out_dir), t0_(std::chrono::steady_clock::now()) {
    fs::create_directories(out_dir_);
    flags_["seed"] = o.seed;
    flags_["deterministic"] = o.deterministic;
  }

  void flag(const std::string& key, const json& value) { flags_[key] = value; }

  void input(const std::string& path) {
    inputs_.push_back({{"path", path}, {"fnv1a64", hex64(fnv1a64_file(path))}});
  }

  fs::path emit(const std::string& name, const std::string& content) {
    fs::path path = out_dir_ / name;
    write_file(path, content);
    outputs_.push_back(name);
    return path;
  }

  fs::path emit_json(const std::string& name, json j) {
    j["schema_version"] = kSchemaVersion;
    return emit(name, j.dump(2) + "\n");
  }

  void finish() {
    json manifest;
    manifest["schema_version"] = kSchemaVersion;
    manifest["tool"] = "hmldm";
    manifest["version"] = hmldm::kVersion;
    manifest["command"] = command_;
    manifest["flags"] = flags_;
    manifest["inputs"] = inputs_;
    manifest["outputs"] = outputs_;
    manifest["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    write_file(out_dir_ / "manifest.json", manifest.dump(2) + "\n");
  }

 private:
  std::string command_;
  fs::path out_dir_;
  json flags_ = json::object();
  json inputs_ = json::array();
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point t0_;
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json champion_json(const hmldm::ChampionReport& rep) {
  return json{{"tau", rep.tau},
              {"champion_fraction", rep.champion_fraction},
              {"n_champions", rep.n_champions},
              {"champions_per_community", rep.champions_per_community},
              {"identifiable", rep.identifiable}};
}

json model_flags_json(const CommonOpts& o) {
  return json{{"dim", o.dim},           {"p", o.p},
              {"delta", o.resolved_delta()}, {"lr", o.lr},
              {"iters", o.iters},       {"restarts", o.restarts},
              {"bipartite", o.bipartite}, {"float32", o.float32},
              {"tau", o.tau}};
}

std::string trace_csv(const std::vector<std::pair<int, double>>& trace) {
  std::ostringstream out;
  out << "iteration,log_likelihood\n";
  for (const auto& [it, ll] : trace) out << it << ',' << format_double(ll) << '\n';
  return out.str();
}

std::string sweep_csv(const std::vector<hmldm::SweepRecord>& records) {
  std::ostringstream out;
  out << "delta,delta_squared,champion_fraction,identifiable,final_ll,auc_roc,auc_pr,status\n";
  for (const auto& r : records) {
    out << format_double(r.delta) << ',' << format_double(r.delta * r.delta) << ',';
    if (r.failed) {
      std::string msg = r.error;
      for (char& c : msg)
        if (c == ',' || c == '\n') c = ';';
      out << ",,,,," << "error: " << msg << '\n';
      continue;
    }
    out << format_double(r.champion_fraction) << ',' << (r.identifiable ? 1 : 0) << ','
        << format_double(r.final_ll) << ',';
    if (r.auc_roc) out << format_double(*r.auc_roc);
    out << ',';
    if (r.auc_pr) out << format_double(*r.auc_pr);
    out << ",ok\n";
  }
  return out.str();
}

// Trains with the requested precision, returns a double-precision result.
hmldm::TrainedModel<double> fit_any(const hmldm::Graph& g, const hmldm::ModelConfig& mcfg,
                                    const hmldm::TrainConfig& tcfg, bool float32) {
  if (!float32) return hmldm::fit<double>(g, mcfg, tcfg);
  auto model32 = hmldm::fit<float>(g, mcfg, tcfg);
  hmldm::TrainedModel<double> out;
  out.state = model32.state.cast<double>();
  out.trace = std::move(model32.trace);
  out.best_ll = model32.best_ll;
  out.final_ll = model32.final_ll;
  out.wall_time_s = model32.wall_time_s;
  out.failed_restarts = model32.failed_restarts;
  out.diagnostics = std::move(model32.diagnostics);
  return out;
}

std::vector<hmldm::SweepRecord> sweep_any(const hmldm::TrainTestSplit& split,
                                          const hmldm::ModelConfig& mcfg,
                                          const hmldm::TrainConfig& tcfg,
                                          const std::vector<double>& grid,
                                          const hmldm::SweepOptions& opts, bool float32) {
  return float32 ? hmldm::sweep_delta<float>(split, mcfg, tcfg, grid, opts)
                 : hmldm::sweep_delta<double>(split, mcfg, tcfg, grid, opts);
}

std::vector<hmldm::SweepRecord> sweep_any(const hmldm::Graph& g, const hmldm::ModelConfig& mcfg,
                                          const hmldm::TrainConfig& tcfg,
                                          const std::vector<double>& grid,
                                          const hmldm::SweepOptions& opts, bool float32) {
  return float32 ? hmldm::sweep_delta<float>(g, mcfg, tcfg, grid, opts)
                 : hmldm::sweep_delta<double>(g, mcfg, tcfg, grid, opts);
}

std::vector<double> grid_from_delta_sq(std::vector<double> delta_sq_values) {
  if (delta_sq_values.empty()) return hmldm::default_delta_grid();
  std::sort(delta_sq_values.rbegin(), delta_sq_values.rend());
  std::vector<double> grid;
  for (double d2 : delta_sq_values) {
    if (!(d2 > 0.0)) throw hmldm::ValidationError("delta^2 grid values must be positive");
    grid.push_back(std::sqrt(d2));
  }
  return grid;
}

int run_train(const std::string& graph_path, const CommonOpts& o) {
  RunWriter run("train", o);
  run.flag("model", model_flags_json(o));
  auto loaded = load_graph_file(graph_path, o);
  run.input(graph_path);

  auto model = fit_any(loaded.graph, o.model_config(), o.train_config(), o.float32);
  auto report = hmldm::champion_report(model.state, o.tau);

  std::ostringstream checkpoint;
  hmldm::CheckpointMeta meta{o.iters, o.restarts, o.seed, model.final_ll, model.best_ll};
  hmldm::save_checkpoint(model.state, meta, checkpoint);
  run.emit("checkpoint.json", checkpoint.str());
  run.emit("trace.csv", trace_csv(model.trace));

  json metrics;
  metrics["command"] = "train";
  metrics["n_nodes"] = loaded.graph.n_nodes();
  metrics["n_edges"] = loaded.graph.n_edges();
  metrics["delta"] = o.resolved_delta();
  metrics["final_ll"] = model.final_ll;
  metrics["best_ll"] = model.best_ll;
  metrics["failed_restarts"] = model.failed_restarts;
  metrics["champions"] = champion_json(report);
  metrics["champion_fraction"] = report.champion_fraction;
  metrics["identifiable"] = report.identifiable;
  metrics["config"] = model_flags_json(o);
  run.emit_json("metrics.json", metrics);
  run.finish();
  return 0;
}

int run_linkpred(const std::string& graph_path, const CommonOpts& o, double fraction,
                 std::vector<double> sweep_grid_d2, bool do_sweep, bool warm_start) {
  RunWriter run("linkpred", o);
  run.flag("model", model_flags_json(o));
  run.flag("fraction", fraction);
  auto loaded = load_graph_file(graph_path, o);
  run.input(graph_path);

  const bool connected_input = hmldm::is_connected(loaded.graph);
  auto split = hmldm::split_for_link_prediction(loaded.graph, fraction, o.seed);

  json metrics;
  metrics["command"] = "linkpred";
  metrics["n_nodes"] = loaded.graph.n_nodes();
  metrics["n_edges"] = loaded.graph.n_edges();
  metrics["n_test_positives"] = split.test_positives.size();
  metrics["n_test_negatives"] = split.test_negatives.size();
  metrics["input_connected"] = connected_input;
  metrics["holdout_truncated"] = split.fewer_positives_than_requested;
  metrics["config"] = model_flags_json(o);
  metrics["fraction"] = fraction;

  if (split.test_positives.empty())
    throw hmldm::ValidationError("no removable edges: every edge of the input is a bridge");

  if (do_sweep) {
    hmldm::SweepOptions opts;
    opts.champion_tau = o.tau;
    opts.warm_start = warm_start;
    auto grid = grid_from_delta_sq(std::move(sweep_grid_d2));
    auto records = sweep_any(split, o.model_config(), o.train_config(), grid, opts, o.float32);
    run.emit("sweep.csv", sweep_csv(records));
    auto selected = hmldm::auto_select_identifiable(records);
    metrics["auc_roc"] = selected.auc_roc.value();
    metrics["auc_pr"] = selected.auc_pr.value();
    metrics["delta"] = selected.delta;
    metrics["champion_fraction"] = selected.champion_fraction;
    metrics["identifiable"] = selected.identifiable;
    metrics["selected"] = {{"delta", selected.delta},
                           {"delta_squared", selected.delta * selected.delta},
                           {"champion_fraction", selected.champion_fraction},
                           {"identifiable", selected.identifiable},
                           {"final_ll", selected.final_ll}};
  } else {
    auto model = fit_any(split.train, o.model_config(), o.train_config(), o.float32);
    auto pos = hmldm::score_pairs(model.state, split.test_positives, hmldm::PairLabel::positive);
    auto neg = hmldm::score_pairs(model.state, split.test_negatives, hmldm::PairLabel::negative);
    auto report = hmldm::champion_report(model.state, o.tau);
    metrics["auc_roc"] = hmldm::auc_roc(pos.scores, neg.scores);
    metrics["auc_pr"] = hmldm::auc_pr(pos.scores, neg.scores);
    metrics["delta"] = o.resolved_delta();
    metrics["final_ll"] = model.final_ll;
    metrics["champions"] = champion_json(report);
    metrics["champion_fraction"] = report.champion_fraction;
    metrics["identifiable"] = report.identifiable;
  }
  run.emit_json("metrics.json", metrics);
  run.finish();
  return 0;
}

int run_communities(const std::string& graph_path, const std::string& labels_path, CommonOpts o,
                    bool dim_given) {
  RunWriter run("communities", o);  // delta defaults to 1 for this command
  auto loaded = load_graph_file(graph_path, o);
  run.input(graph_path);
  std::ifstream labels_in(labels_path);
  if (!labels_in) throw hmldm::ValidationError("cannot open labels file: " + labels_path);
  auto truth = hmldm::load_labels(labels_in);
  run.input(labels_path);
  if (static_cast<hmldm::NodeId>(truth.size()) != loaded.graph.n_nodes())
    throw hmldm::ValidationError("labels file has " + std::to_string(truth.size()) +
                                 " entries but the graph has " +
                                 std::to_string(loaded.graph.n_nodes()) + " nodes");

  int k = 0;
  for (int l : truth) k = std::max(k, l + 1);
  if (!dim_given) o.dim = std::max(1, k - 1);  // communities = dimension + 1
  run.flag("model", model_flags_json(o));

  auto model = fit_any(loaded.graph, o.model_config(), o.train_config(), o.float32);
  auto part = hmldm::hard_assignments(model.state);
  auto report = hmldm::champion_report(model.state, o.tau);

  std::ostringstream part_text;
  hmldm::save_labels(part, part_text);
  run.emit("partition.txt", part_text.str());
  std::ostringstream checkpoint;
  hmldm::CheckpointMeta meta{o.iters, o.restarts, o.seed, model.final_ll, model.best_ll};
  hmldm::save_checkpoint(model.state, meta, checkpoint);
  run.emit("checkpoint.json", checkpoint.str());

  json metrics;
  metrics["command"] = "communities";
  metrics["n_nodes"] = loaded.graph.n_nodes();
  metrics["n_edges"] = loaded.graph.n_edges();
  metrics["k_true"] = k;
  metrics["nmi"] = hmldm::nmi(part, truth);
  metrics["ari"] = hmldm::ari(part, truth);
  metrics["delta"] = o.resolved_delta();
  metrics["final_ll"] = model.final_ll;
  metrics["champions"] = champion_json(report);
  metrics["champion_fraction"] = report.champion_fraction;
  metrics["identifiable"] = report.identifiable;
  metrics["config"] = model_flags_json(o);
  run.emit_json("metrics.json", metrics);
  run.finish();
  return 0;
}

int run_sweep(const std::string& graph_path, const CommonOpts& o, std::vector<double> grid_d2,
              double fraction, bool holdout, bool warm_start) {
  RunWriter run("sweep", o);
  run.flag("model", model_flags_json(o));
  run.flag("holdout", holdout);
  auto loaded = load_graph_file(graph_path, o);
  run.input(graph_path);

  hmldm::SweepOptions opts;
  opts.champion_tau = o.tau;
  opts.warm_start = warm_start;
  auto grid = grid_from_delta_sq(std::move(grid_d2));

  std::vector<hmldm::SweepRecord> records;
  if (holdout) {
    run.flag("fraction", fraction);
    auto split = hmldm::split_for_link_prediction(loaded.graph, fraction, o.seed);
    records = sweep_any(split, o.model_config(), o.train_config(), grid, opts, o.float32);
  } else {
    records = sweep_any(loaded.graph, o.model_config(), o.train_config(), grid, opts, o.float32);
  }
  run.emit("sweep.csv", sweep_csv(records));
  run.finish();
  const bool all_failed =
      std::all_of(records.begin(), records.end(), [](const auto& r) { return r.failed; });
  if (all_failed) {
    std::cerr << "every sweep point failed; see sweep.csv\n";
    return 1;
  }
  return 0;
}

int run_reorder(const std::string& checkpoint_path, const std::string& graph_path,
                const CommonOpts& o) {
  RunWriter run("reorder", o);
  auto loaded = load_graph_file(graph_path, o);
  run.input(graph_path);
  std::ifstream cp_in(checkpoint_path);
  if (!cp_in) throw hmldm::ValidationError("cannot open checkpoint: " + checkpoint_path);
  auto cp = hmldm::load_checkpoint(cp_in);
  run.input(checkpoint_path);

  if (cp.state.bipartite != loaded.graph.is_bipartite() ||
      (cp.state.bipartite
           ? (cp.state.n_rows() != loaded.graph.n_rows() || cp.state.n_cols() != loaded.graph.n_cols())
           : cp.state.n_rows() != loaded.graph.n_nodes()))
    throw hmldm::ValidationError("checkpoint and graph shapes do not match");

  hmldm::ReorderResult res;
  if (cp.state.bipartite) {
    res = hmldm::reorder_adjacency(loaded.graph, hmldm::hard_assignments(cp.state),
                                   hmldm::hard_assignments_cols(cp.state));
    std::ostringstream cols;
    for (auto v : res.col_order) cols << v << '\n';
    run.emit("permutation_cols.txt", cols.str());
  } else {
    res = hmldm::reorder_adjacency(loaded.graph, hmldm::hard_assignments(cp.state));
  }

  std::ostringstream perm;
  for (auto v : res.order) perm << v << '\n';
  run.emit("permutation.txt", perm.str());

  std::ostringstream coords;
  coords << "row,col\n";
  for (const auto& [a, b] : res.coords) coords << a << ',' << b << '\n';
  run.emit("coords.csv", coords.str());

  json blocks;
  blocks["command"] = "reorder";
  blocks["block_density"] = res.block_density;
  blocks["bipartite"] = cp.state.bipartite;
  run.emit_json("blocks.json", blocks);
  run.finish();
  return 0;
}

int run_synth(const CommonOpts& o, int n, int k, double p_in, double p_out) {
  RunWriter run("synth", o);
  run.flag("n", n);
  run.flag("k", k);
  run.flag("p_in", p_in);
  run.flag("p_out", p_out);
  auto lg = hmldm::generate_planted_partition(static_cast<hmldm::NodeId>(n), k, p_in, p_out, o.seed);
  std::ostringstream edges;
  hmldm::serialize_edge_list(lg.graph, edges);
  run.emit("edges.txt", edges.str());
  std::ostringstream labels;
  hmldm::save_labels(lg.labels, labels);
  run.emit("labels.txt", labels.str());
  run.finish();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid-membership latent distance model: simplex-constrained "
               "Poisson network embedding"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("hmldm ") + hmldm::kVersion);

  CommonOpts train_o, link_o, comm_o, sweep_o, reorder_o, synth_o;
  std::string train_graph, link_graph, comm_graph, comm_labels, sweep_graph, reorder_graph,
      reorder_checkpoint;

  auto* train = app.add_subcommand("train", "Fit the model to an edge list");
  train->add_option("graph", train_graph, "Edge list file")->required();
  add_common_flags(train, train_o);
  add_model_flags(train, train_o);

  auto* linkpred = app.add_subcommand("linkpred", "Holdout split, train, and score held-out links");
  linkpred->add_option("graph", link_graph, "Edge list file")->required();
  double fraction = 0.5;
  std::vector<double> link_grid;
  bool link_sweep = false, link_warm = false;
  linkpred->add_option("--fraction", fraction, "Fraction of edges to hold out")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  auto* sweep_flag = linkpred->add_flag("--delta-sweep", link_sweep,
                                        "Sweep delta^2 and auto-select the identifiable record");
  linkpred->add_option("--grid", link_grid, "delta^2 grid for the sweep (comma separated)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->needs(sweep_flag);
  linkpred->add_flag("--warm-start", link_warm, "Warm-start each sweep point from the previous");
  add_common_flags(linkpred, link_o);
  add_model_flags(linkpred, link_o);

  auto* communities = app.add_subcommand("communities", "Detect communities and score vs labels");
  communities->add_option("graph", comm_graph, "Edge list file")->required();
  communities->add_option("--labels", comm_labels, "Ground-truth labels, one per node")->required();
  add_common_flags(communities, comm_o);
  add_model_flags(communities, comm_o);

  auto* sweep = app.add_subcommand("sweep", "Champion-fraction and AUC curves over delta^2");
  sweep->add_option("graph", sweep_graph, "Edge list file")->required();
  std::vector<double> sweep_grid;
  double sweep_fraction = 0.5;
  bool sweep_no_holdout = false, sweep_warm = false;
  sweep->add_option("--grid", sweep_grid, "delta^2 grid (default: 1024 down to 0.0625)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sweep->add_option("--fraction", sweep_fraction, "Holdout fraction for AUC columns")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  sweep->add_flag("--no-holdout", sweep_no_holdout, "Sweep on the full graph (no AUC columns)");
  sweep->add_flag("--warm-start", sweep_warm, "Warm-start each point from the previous");
  add_common_flags(sweep, sweep_o);
  add_model_flags(sweep, sweep_o);

  auto* reorder = app.add_subcommand("reorder", "Reorder an adjacency by trained memberships");
  reorder->add_option("checkpoint", reorder_checkpoint, "Model checkpoint")->required();
  reorder->add_option("graph", reorder_graph, "Edge list file")->required();
  add_common_flags(reorder, reorder_o);
  reorder->add_flag("--bipartite", reorder_o.bipartite, "Expect a %bipartite edge list");
  reorder->add_flag("--drop-self-loops", reorder_o.drop_self_loops,
                    "Drop self-loops instead of rejecting them");

  auto* synth = app.add_subcommand("synth", "Generate a planted-partition benchmark");
  int synth_n = 0, synth_k = 0;
  double synth_pin = 0.0, synth_pout = 0.0;
  synth->add_option("--n", synth_n, "Nodes")->required()->check(CLI::Range(1, 100000000));
  synth->add_option("--k", synth_k, "Communities")->required()->check(CLI::Range(1, 100000000));
  synth->add_option("--p-in", synth_pin, "Within-block edge probability")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  synth->add_option("--p-out", synth_pout, "Cross-block edge probability")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  add_common_flags(synth, synth_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    if (train->parsed()) return run_train(train_graph, train_o);
    if (linkpred->parsed())
      return run_linkpred(link_graph, link_o, fraction, link_grid, link_sweep, link_warm);
    if (communities->parsed())
      return run_communities(comm_graph, comm_labels, comm_o, communities->count("--dim") > 0);
    if (sweep->parsed())
      return run_sweep(sweep_graph, sweep_o, sweep_grid, sweep_fraction, !sweep_no_holdout,
                       sweep_warm);
    if (reorder->parsed()) return run_reorder(reorder_checkpoint, reorder_graph, reorder_o);
    if (synth->parsed()) {
      if (synth_pout >= synth_pin) {
        std::cerr << "--p-out must be strictly below --p-in\n";
        return 2;
      }
      return run_synth(synth_o, synth_n, synth_k, synth_pin, synth_pout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
