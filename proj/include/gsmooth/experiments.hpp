#pragma once

#include "gsmooth/bounds.hpp"
#include "gsmooth/gcnsim.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gsmooth {

enum class WeightMode { Theorem, PaperExperiment };

/// Parameters of every experiment. `default_config` fills in the published
/// settings; `desk_config` scales them down to laptop size.
struct ExperimentConfig {
  std::string experiment = "verify";

  int num_nodes = 100;
  double p_intra = 0.8;
  double q_inter = 0.3;
  std::uint64_t seed = 0;

  double noise_std = 10.0;
  std::string mean_mode = "random";  // "random" | "ones"

  std::vector<std::string> filters{"gcn", "sym", "rw"};
  double filter_alpha = 0.75;
  std::vector<std::string> variants{"resgcn", "appnp", "gcnii"};
  double skip_alpha = 0.5;
  double skip_beta = 0.5;
  std::vector<double> surgery_a{1.0, 0.75, 0.5, 0.25};
  std::vector<int> table_depths{1, 5, 10, 20, 30, 40, 50};

  int depth = 50;
  double weight_frobenius = 10.0;
  WeightMode mode = WeightMode::PaperExperiment;
  int trials = 1;

  // verify
  int instances = 50;
  int min_nodes = 4;
  int max_nodes = 64;
  int max_order = 3;
  /// Multiplier on C_r inside the Jackson checks (1 = intact).
  double corrupt_cr = 1.0;

  // run environment (not echoed into output headers)
  int jobs = 1;
  std::filesystem::path out_dir = "out";
  bool svg = false;
  bool per_trial_csv = false;
};

/// Published parameters for `experiment` (verify, decay, surgery, skip,
/// histogram). Throws InvalidParameter for an unknown name.
ExperimentConfig default_config(const std::string& experiment);

/// Same as default_config with sizes reduced: decay N=200 / 50 trials,
/// surgery N=100 / 100 trials / K=30, skip and histogram 20 trials.
ExperimentConfig desk_config(const std::string& experiment);

/// Throws InvalidParameter describing the first inconsistent field.
void validate(const ExperimentConfig& config);

/// Experiment parameters as JSON (run-environment fields omitted unless
/// `include_runtime`).
std::string config_to_json(const ExperimentConfig& config, bool include_runtime = false);

/// Overlays the keys present in `text` on `base`. Throws ParseError.
ExperimentConfig config_from_json(const std::string& text, const ExperimentConfig& base);

std::string to_string(WeightMode mode);
WeightMode weight_mode_from_string(const std::string& text);

struct ConnectedGraph {
  Graph graph;
  std::uint64_t seed_used;
  int redraws;
};

/// SBM with balanced labels, redrawn with seed + 1, seed + 2, ... until
/// connected (at most `max_redraws` times, then NotConnected).
ConnectedGraph draw_connected_sbm(int num_nodes, double p, double q, std::uint64_t seed,
                                  int max_redraws = 1000);

/// Graph, labels and input features of one trial. The trial seed is
/// config.seed + trial; the graph, mean, noise and weight streams are
/// derive_seed(trial_seed, 0..3).
struct TrialInputs {
  ConnectedGraph graph;
  std::vector<int> labels;
  Matrix features;
  std::uint64_t weight_seed;
};

TrialInputs make_trial(const ExperimentConfig& config, int trial);

/// Mean and standard error of ln E_h per layer over the trials whose E_h is
/// above 1e-250 at that layer.
struct CurveStats {
  std::string label;
  std::vector<double> mean_ln;
  std::vector<double> stderr_ln;
  std::vector<int> count;
};

struct CurveExperimentResult {
  std::vector<CurveStats> curves;
  /// E_h and ||F^(k)||_F per [curve][trial][layer].
  std::vector<std::vector<std::vector<double>>> eh;
  std::vector<std::vector<std::vector<double>>> frobenius;
  /// Theorem-mode decay reports, one per curve (not applicable otherwise).
  std::vector<BoundCheckReport> reports;
  int total_redraws = 0;
};

/// Plain GCN with each classical filter (config.filters) on shared trials.
CurveExperimentResult run_decay(const ExperimentConfig& config);

/// Plain GCN with surgery filters a in config.surgery_a over the H_gcn
/// eigenbasis; trials are paired (same graph, features and weights).
CurveExperimentResult run_surgery(const ExperimentConfig& config);

struct SkipResult {
  std::vector<std::string> variants;
  std::vector<int> depths;
  /// ln E_h of the Frobenius-normalised F^(K): [variant][depth][trial].
  std::vector<std::vector<std::vector<double>>> ln_eh;
  /// Mean E_i fraction of the normalised F^(K) at K = config.depth:
  /// [variant][direction], direction 0 = h_1.
  std::vector<std::vector<double>> histogram;
  /// Mean filter eigenvalue per direction (descending).
  std::vector<double> eigenvalues;
  /// Direction lies in a numerically degenerate eigenvalue cluster in some trial.
  std::vector<bool> basis_dependent;
  int total_redraws = 0;

  double median(int variant, int depth_index) const;
};

/// ResGCN / APPNP / GCNII with H_gcn; every K in config.table_depths is a
/// separate K-layer network sharing the weight stream.
SkipResult run_skip(const ExperimentConfig& config);

struct VerifyResult {
  std::vector<BoundCheckReport> reports;
  bool violated() const;
};

/// Full bound suite on seeded random instances.
VerifyResult run_verify(const ExperimentConfig& config);

/// File writers; every file starts with `#` lines echoing version, config
/// and seed. Return the paths written.
std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& config,
                                                 const CurveExperimentResult& result,
                                                 const std::string& prefix);
std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& config,
                                                 const SkipResult& result, bool table,
                                                 bool histogram);
std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& config,
                                                 const VerifyResult& result);

/// Ordinary least squares of y on x: slope and coefficient of determination.
struct LinearFit {
  double slope;
  double intercept;
  double r_squared;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Random connected weighted graph used by the verify suite: a random
/// spanning path plus Erdos-Renyi edges, weights uniform in [0.1, 2].
Graph random_connected_graph(int num_nodes, std::uint64_t seed);

}  // namespace gsmooth
