#include "gsmooth/experiments.hpp"

#include "gsmooth/error.hpp"
#include "gsmooth/smoothness.hpp"
#include "gsmooth/synthgen.hpp"
#include "json.hpp"
#include "parallel.hpp"
#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace gsmooth {

namespace {

constexpr double kEnergyFloor = 1e-250;
const std::set<std::string> kExperiments{"verify", "decay", "surgery", "skip", "histogram"};
const std::set<std::string> kFilters{"gcn", "sym", "rw"};
const std::set<std::string> kVariants{"resgcn", "appnp", "gcnii"};

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::InvalidParameter, message);
}

Variant variant_from_string(const std::string& name) {
  if (name == "resgcn") return Variant::ResGcn;
  if (name == "appnp") return Variant::Appnp;
  if (name == "gcnii") return Variant::Gcnii;
  if (name == "plain") return Variant::Plain;
  throw Error(ErrorCode::InvalidParameter, "unknown variant '" + name + "'");
}

Filter filter_from_string(const std::string& name, const Graph& g, double alpha) {
  if (name == "gcn") return build_filter_gcn(g);
  if (name == "sym") return build_filter_sym(g, alpha);
  if (name == "rw") return build_filter_rw(g, alpha);
  throw Error(ErrorCode::InvalidParameter, "unknown filter '" + name + "'");
}

}  // namespace

std::string to_string(WeightMode mode) {
  return mode == WeightMode::Theorem ? "theorem" : "paper-experiment";
}

WeightMode weight_mode_from_string(const std::string& text) {
  if (text == "theorem") return WeightMode::Theorem;
  if (text == "paper-experiment") return WeightMode::PaperExperiment;
  throw Error(ErrorCode::InvalidParameter, "mode must be 'theorem' or 'paper-experiment'");
}

ExperimentConfig default_config(const std::string& experiment) {
  require(kExperiments.count(experiment) == 1, "unknown experiment '" + experiment + "'");
  ExperimentConfig c;
  c.experiment = experiment;
  if (experiment == "verify") {
    c.mode = WeightMode::Theorem;
    c.weight_frobenius = 1.0;
  } else if (experiment == "decay" || experiment == "surgery") {
    c.num_nodes = 1000;
    c.trials = 1000;
  }
  return c;
}

ExperimentConfig desk_config(const std::string& experiment) {
  ExperimentConfig c = default_config(experiment);
  if (experiment == "decay") {
    c.num_nodes = 200;
    c.trials = 50;
  } else if (experiment == "surgery") {
    c.num_nodes = 100;
    c.trials = 100;
    c.depth = 30;
  } else if (experiment == "skip" || experiment == "histogram") {
    c.trials = 20;
  }
  return c;
}

void validate(const ExperimentConfig& c) {
  require(kExperiments.count(c.experiment) == 1, "unknown experiment '" + c.experiment + "'");
  require(c.num_nodes >= 2, "num_nodes must be at least 2");
  require(c.q_inter >= 0.0 && c.p_intra <= 1.0 &&
              (c.q_inter < c.p_intra || (c.p_intra == 1.0 && c.q_inter == 1.0)),
          "need 0 <= q < p <= 1");
  require(c.noise_std > 0.0, "noise_std must be positive");
  require(c.mean_mode == "random" || c.mean_mode == "ones", "mean_mode must be random or ones");
  require(!c.filters.empty(), "filters must not be empty");
  for (const auto& f : c.filters) require(kFilters.count(f) == 1, "unknown filter '" + f + "'");
  require(c.filter_alpha > 0.0 && c.filter_alpha <= 1.0, "filter_alpha must lie in (0, 1]");
  require(!c.variants.empty(), "variants must not be empty");
  for (const auto& v : c.variants) require(kVariants.count(v) == 1, "unknown variant '" + v + "'");
  require(c.skip_alpha >= 0.0 && c.skip_alpha <= 1.0, "skip_alpha must lie in [0, 1]");
  require(c.skip_beta >= 0.0 && c.skip_beta <= 1.0, "skip_beta must lie in [0, 1]");
  require(!c.surgery_a.empty(), "surgery_a must not be empty");
  for (const double a : c.surgery_a) require(std::abs(a) <= 1.0, "surgery values need |a| <= 1");
  require(!c.table_depths.empty(), "table_depths must not be empty");
  for (const int k : c.table_depths) require(k >= 1, "table depths must be positive");
  require(c.depth >= 1, "depth must be positive");
  require(c.weight_frobenius > 0.0, "weight_frobenius must be positive");
  require(c.mode != WeightMode::Theorem || c.weight_frobenius <= 1.0,
          "theorem mode needs weight_frobenius <= 1");
  require(c.trials >= 1, "trials must be positive");
  require(c.instances >= 1, "instances must be positive");
  require(c.min_nodes >= 3 && c.min_nodes <= c.max_nodes, "need 3 <= min_nodes <= max_nodes");
  require(c.max_order >= 0, "max_order must be nonnegative");
  require(c.corrupt_cr > 0.0, "corrupt_cr must be positive");
  require(c.jobs >= 1, "jobs must be positive");
}

std::string config_to_json(const ExperimentConfig& c, bool include_runtime) {
  nlohmann::ordered_json j;
  j["experiment"] = c.experiment;
  j["num_nodes"] = c.num_nodes;
  j["p_intra"] = c.p_intra;
  j["q_inter"] = c.q_inter;
  j["seed"] = c.seed;
  j["noise_std"] = c.noise_std;
  j["mean_mode"] = c.mean_mode;
  j["filters"] = c.filters;
  j["filter_alpha"] = c.filter_alpha;
  j["variants"] = c.variants;
  j["skip_alpha"] = c.skip_alpha;
  j["skip_beta"] = c.skip_beta;
  j["surgery_a"] = c.surgery_a;
  j["table_depths"] = c.table_depths;
  j["depth"] = c.depth;
  j["weight_frobenius"] = c.weight_frobenius;
  j["mode"] = to_string(c.mode);
  j["trials"] = c.trials;
  j["instances"] = c.instances;
  j["min_nodes"] = c.min_nodes;
  j["max_nodes"] = c.max_nodes;
  j["max_order"] = c.max_order;
  j["corrupt_cr"] = c.corrupt_cr;
  if (include_runtime) {
    j["jobs"] = c.jobs;
    j["out_dir"] = c.out_dir.string();
    j["svg"] = c.svg;
    j["per_trial_csv"] = c.per_trial_csv;
  }
  return j.dump();
}

ExperimentConfig config_from_json(const std::string& text, const ExperimentConfig& base) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "config must be a JSON object");
  ExperimentConfig c = base;
  const std::set<std::string> known{
      "experiment", "num_nodes", "p_intra",    "q_inter",    "seed",        "noise_std",
      "mean_mode",  "filters",   "filter_alpha", "variants", "skip_alpha",  "skip_beta",
      "surgery_a",  "table_depths", "depth",   "weight_frobenius", "mode",  "trials",
      "instances",  "min_nodes", "max_nodes",  "max_order",  "corrupt_cr",  "jobs",
      "out_dir",    "svg",       "per_trial_csv"};
  try {
    for (const auto& [key, value] : j.items()) {
      if (known.count(key) == 0) throw Error(ErrorCode::ParseError, "unknown config key '" + key + "'");
    }
    const auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("experiment", c.experiment);
    get("num_nodes", c.num_nodes);
    get("p_intra", c.p_intra);
    get("q_inter", c.q_inter);
    get("seed", c.seed);
    get("noise_std", c.noise_std);
    get("mean_mode", c.mean_mode);
    get("filters", c.filters);
    get("filter_alpha", c.filter_alpha);
    get("variants", c.variants);
    get("skip_alpha", c.skip_alpha);
    get("skip_beta", c.skip_beta);
    get("surgery_a", c.surgery_a);
    get("table_depths", c.table_depths);
    get("depth", c.depth);
    get("weight_frobenius", c.weight_frobenius);
    if (j.contains("mode")) c.mode = weight_mode_from_string(j.at("mode").get<std::string>());
    get("trials", c.trials);
    get("instances", c.instances);
    get("min_nodes", c.min_nodes);
    get("max_nodes", c.max_nodes);
    get("max_order", c.max_order);
    get("corrupt_cr", c.corrupt_cr);
    get("jobs", c.jobs);
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    get("svg", c.svg);
    get("per_trial_csv", c.per_trial_csv);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return c;
}

ConnectedGraph draw_connected_sbm(int num_nodes, double p, double q, std::uint64_t seed,
                                  int max_redraws) {
  SbmParams params;
  params.num_nodes = num_nodes;
  params.p_intra = p;
  params.q_inter = q;
  params.labels = balanced_labels(num_nodes);
  for (int redraw = 0; redraw <= max_redraws; ++redraw) {
    params.seed = seed + static_cast<std::uint64_t>(redraw);
    Graph g = sample_sbm(params);
    if (is_connected(g)) return ConnectedGraph{std::move(g), params.seed, redraw};
  }
  throw Error(ErrorCode::NotConnected, "no connected SBM sample within the redraw budget");
}

TrialInputs make_trial(const ExperimentConfig& config, int trial) {
  const std::uint64_t trial_seed = config.seed + static_cast<std::uint64_t>(trial);
  const int n = config.num_nodes;
  ConnectedGraph graph =
      draw_connected_sbm(n, config.p_intra, config.q_inter, derive_seed(trial_seed, 0));
  std::vector<int> labels = balanced_labels(n);
  GmmParams gmm;
  gmm.mean = config.mean_mode == "ones" ? Vector(Vector::Ones(n)) : random_mean(n, derive_seed(trial_seed, 1));
  gmm.noise_std = config.noise_std;
  gmm.num_channels = n;
  gmm.seed = derive_seed(trial_seed, 2);
  Matrix features = sample_gmm_features(labels, gmm);
  return TrialInputs{std::move(graph), std::move(labels), std::move(features),
                     derive_seed(trial_seed, 3)};
}

namespace {

GcnConfig plain_config(const ExperimentConfig& config, std::uint64_t weight_seed) {
  GcnConfig gcn;
  gcn.variant = Variant::Plain;
  gcn.depth = config.depth;
  gcn.weight_frobenius = config.weight_frobenius;
  gcn.seed = weight_seed;
  gcn.keep_outputs = false;
  return gcn;
}

CurveStats summarize(const std::string& label, const std::vector<std::vector<double>>& eh) {
  CurveStats stats;
  stats.label = label;
  const std::size_t layers = eh.empty() ? 0 : eh.front().size();
  for (std::size_t k = 0; k < layers; ++k) {
    std::vector<double> logs;
    for (const auto& trial : eh) {
      if (trial[k] > kEnergyFloor) logs.push_back(std::log(trial[k]));
    }
    const double n = static_cast<double>(logs.size());
    double mean = std::numeric_limits<double>::quiet_NaN();
    double se = std::numeric_limits<double>::quiet_NaN();
    if (!logs.empty()) {
      mean = std::accumulate(logs.begin(), logs.end(), 0.0) / n;
      se = 0.0;
      if (logs.size() > 1) {
        double ss = 0.0;
        for (const double v : logs) ss += (v - mean) * (v - mean);
        se = std::sqrt(ss / (n - 1.0) / n);
      }
    }
    stats.mean_ln.push_back(mean);
    stats.stderr_ln.push_back(se);
    stats.count.push_back(static_cast<int>(logs.size()));
  }
  return stats;
}

struct TrialCurves {
  std::vector<std::vector<double>> eh;         // [curve][layer]
  std::vector<std::vector<double>> frobenius;  // [curve][layer]
  std::vector<BoundCheckReport> reports;       // [curve]
  int redraws = 0;
};

template <class BuildFilters>
CurveExperimentResult run_curves(const ExperimentConfig& config,
                                 const std::vector<std::string>& labels,
                                 BuildFilters&& build_filters) {
  validate(config);
  std::vector<TrialCurves> per_trial(config.trials);
  detail::parallel_for(config.trials, config.jobs, [&](int trial) {
    const TrialInputs inputs = make_trial(config, trial);
    const std::vector<Filter> filters = build_filters(inputs.graph.graph);
    TrialCurves& out = per_trial[trial];
    out.redraws = inputs.graph.redraws;
    for (const Filter& filter : filters) {
      const LayerTrace trace = forward(plain_config(config, inputs.weight_seed), filter, inputs.features);
      out.eh.push_back(trace.eh_per_layer);
      out.frobenius.push_back(trace.frobenius_norms);
      out.reports.push_back(check_decay_bound(trace, filter));
    }
  });

  CurveExperimentResult result;
  result.eh.assign(labels.size(), {});
  result.frobenius.assign(labels.size(), {});
  for (std::size_t c = 0; c < labels.size(); ++c) {
    BoundCheckReport merged("decay_bound");
    merged.note = labels[c];
    for (int trial = 0; trial < config.trials; ++trial) {
      result.eh[c].push_back(per_trial[trial].eh[c]);
      result.frobenius[c].push_back(per_trial[trial].frobenius[c]);
      const BoundCheckReport& rep = per_trial[trial].reports[c];
      merged.merge(rep);
      merged.applicable = merged.applicable && rep.applicable;
    }
    if (!merged.applicable) {
      merged.violated = false;
      merged.note = labels[c] + ": AssumptionViolated (weights exceed unit Frobenius norm)";
      merged.records.clear();
    }
    result.curves.push_back(summarize(labels[c], result.eh[c]));
    result.reports.push_back(std::move(merged));
  }
  for (const auto& t : per_trial) result.total_redraws += t.redraws;
  return result;
}

std::string format_a(double a) {
  std::ostringstream out;
  out << "a" << std::fixed << std::setprecision(2) << a;
  return out.str();
}

}  // namespace

CurveExperimentResult run_decay(const ExperimentConfig& config) {
  return run_curves(config, config.filters, [&](const Graph& g) {
    std::vector<Filter> filters;
    for (const auto& name : config.filters) {
      filters.push_back(filter_from_string(name, g, config.filter_alpha));
    }
    return filters;
  });
}

CurveExperimentResult run_surgery(const ExperimentConfig& config) {
  std::vector<std::string> labels;
  for (const double a : config.surgery_a) labels.push_back(format_a(a));
  return run_curves(config, labels, [&](const Graph& g) {
    const Filter base = build_filter_gcn(g);
    std::vector<Filter> filters;
    for (const double a : config.surgery_a) filters.push_back(build_filter_surgery(base, a));
    return filters;
  });
}

double SkipResult::median(int variant, int depth_index) const {
  std::vector<double> values = ln_eh.at(variant).at(depth_index);
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

SkipResult run_skip(const ExperimentConfig& config) {
  validate(config);
  const int nv = static_cast<int>(config.variants.size());
  const int nd = static_cast<int>(config.table_depths.size());
  const int n = config.num_nodes;

  struct TrialSkip {
    std::vector<std::vector<double>> ln_eh;      // [variant][depth]
    std::vector<std::vector<double>> histogram;  // [variant][direction]
    Vector eigenvalues;
    std::vector<bool> flags;
    int redraws = 0;
  };
  std::vector<TrialSkip> per_trial(config.trials);

  detail::parallel_for(config.trials, config.jobs, [&](int trial) {
    const TrialInputs inputs = make_trial(config, trial);
    const Filter filter = build_filter_gcn(inputs.graph.graph);
    TrialSkip& out = per_trial[trial];
    out.redraws = inputs.graph.redraws;
    out.eigenvalues = filter.decomposition.eigenvalues();
    out.flags = filter.decomposition.basis_dependent_directions();
    for (const auto& name : config.variants) {
      GcnConfig gcn;
      gcn.variant = variant_from_string(name);
      gcn.weight_frobenius = config.weight_frobenius;
      gcn.alpha.assign(1, config.skip_alpha);
      gcn.beta.assign(1, config.skip_beta);
      gcn.seed = inputs.weight_seed;
      gcn.keep_outputs = false;
      const auto run = [&](int depth) {
        gcn.depth = depth;
        gcn.alpha.assign(depth, config.skip_alpha);
        gcn.beta.assign(depth, config.skip_beta);
        return normalize_frobenius(forward(gcn, filter, inputs.features).final_output);
      };
      std::vector<double> row;
      Matrix at_hist_depth;
      for (const int depth : config.table_depths) {
        const Matrix normalized = run(depth);
        row.push_back(std::log(high_freq_energy(filter.decomposition, normalized)));
        if (depth == config.depth) at_hist_depth = normalized;
      }
      if (at_hist_depth.size() == 0) at_hist_depth = run(config.depth);
      out.ln_eh.push_back(std::move(row));
      const Vector energies = direction_energies(filter.decomposition, at_hist_depth);
      out.histogram.emplace_back(energies.data(), energies.data() + energies.size());
    }
  });

  SkipResult result;
  result.variants = config.variants;
  result.depths = config.table_depths;
  result.ln_eh.assign(nv, std::vector<std::vector<double>>(nd));
  result.histogram.assign(nv, std::vector<double>(n, 0.0));
  result.eigenvalues.assign(n, 0.0);
  result.basis_dependent.assign(n, false);
  for (const auto& t : per_trial) {
    result.total_redraws += t.redraws;
    for (int i = 0; i < n; ++i) {
      result.eigenvalues[i] += t.eigenvalues(i) / config.trials;
      if (t.flags[i]) result.basis_dependent[i] = true;
    }
    for (int v = 0; v < nv; ++v) {
      for (int d = 0; d < nd; ++d) result.ln_eh[v][d].push_back(t.ln_eh[v][d]);
      for (int i = 0; i < n; ++i) result.histogram[v][i] += t.histogram[v][i] / config.trials;
    }
  }
  return result;
}

Graph random_connected_graph(int num_nodes, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> order(num_nodes);
  std::iota(order.begin(), order.end(), 0);
  for (int i = num_nodes - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.uniform() * (i + 1));
    std::swap(order[i], order[std::min(j, i)]);
  }
  const auto weight = [&] { return 0.1 + 1.9 * rng.uniform(); };
  Matrix a = Matrix::Zero(num_nodes, num_nodes);
  for (int i = 0; i + 1 < num_nodes; ++i) {
    const double w = weight();
    a(order[i], order[i + 1]) = w;
    a(order[i + 1], order[i]) = w;
  }
  const double density = 0.1 + 0.5 * rng.uniform();
  for (int i = 0; i < num_nodes; ++i) {
    for (int j = i + 1; j < num_nodes; ++j) {
      const bool extra = rng.uniform() < density;
      if (extra && a(i, j) == 0.0) {
        const double w = weight();
        a(i, j) = w;
        a(j, i) = w;
      }
    }
  }
  return build_graph(std::move(a));
}

bool VerifyResult::violated() const {
  return std::any_of(reports.begin(), reports.end(), [](const BoundCheckReport& r) { return r.violated; });
}

namespace {

const std::vector<std::string> kVerifyReports{
    "modulus_properties", "jackson",     "equivalence_lemma2", "k_functional_oracle",
    "k_omega",            "k_omega_multichannel", "relu_projection", "filter_spectrum",
    "decay_bound",        "lower_bound"};

Vector normal_vector(Rng& rng, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

Matrix normal_matrix(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

// One verify instance; returns one partial report per family in kVerifyReports order.
std::vector<BoundCheckReport> verify_instance(const ExperimentConfig& config, int inst) {
  const std::uint64_t seed = derive_seed(config.seed, static_cast<std::uint64_t>(inst));
  Rng rng(derive_seed(seed, 100));
  const int span = config.max_nodes - config.min_nodes + 1;
  const int n = config.min_nodes + std::min(span - 1, static_cast<int>(rng.uniform() * span));
  const int r = inst % (config.max_order + 1);
  const double t = std::pow(10.0, -3.0 + 4.0 * rng.uniform());

  const Graph g = random_connected_graph(n, derive_seed(seed, 0));
  const bool normalized = inst % 2 == 1;
  const SpectralDecomposition d =
      psd_decompose(normalized ? normalized_laplacian(g) : combinatorial_laplacian(g));
  const Vector f = normal_vector(rng, n);
  const Vector h = normal_vector(rng, n);

  std::vector<BoundCheckReport> out;
  out.push_back(check_modulus_properties(d, f, h, r, t));

  JacksonOptions jackson;
  jackson.single_frequency_scale = config.corrupt_cr;
  const int jr = std::max(1, r);
  out.push_back(check_jackson(d, f, jr, jackson));

  BoundCheckReport lemma2("equivalence_lemma2");
  for (int k = 2; k <= n; ++k) lemma2.merge(check_equivalence_lemma2(d, f, r, k));
  lemma2.instances = 1;
  out.push_back(lemma2);

  // K-functional reduction against the direct oracle on a small graph.
  const int small_n = std::min(n, 4 + inst % 13);
  const Graph small = random_connected_graph(small_n, derive_seed(seed, 1));
  const SpectralDecomposition ds = psd_decompose(combinatorial_laplacian(small));
  const Vector fs = normal_vector(rng, small_n);
  BoundCheckReport oracle("k_functional_oracle");
  oracle.instances = 1;
  {
    const double k = k_functional(ds, r, t, fs).value;
    const double o = k_functional_oracle(ds, r, t, fs, seed);
    oracle.add("agreement", {{"n", double(small_n)}, {"r", double(r)}, {"t", t}}, std::abs(k - o),
               1e-6 * std::max(o, 1e-12));
  }
  out.push_back(oracle);

  const std::vector<double> t_grid{1e-3, 1e-2, 0.1, 1.0, t, 10.0};
  out.push_back(check_k_omega(d, f, r, t_grid));
  out.push_back(check_k_omega(d, normal_matrix(rng, n, 3), r, t_grid));

  BoundCheckReport relu("relu_projection");
  {
    const Vector flat = Vector::Constant(n, 1.0 / std::sqrt(double(n)));
    Vector perron = (g.degrees().array() + 1.0).sqrt();
    perron.normalize();
    relu.merge(check_relu_projection(flat, normal_matrix(rng, n, 100)));
    relu.merge(check_relu_projection(perron, normal_matrix(rng, n, 100)));
  }
  out.push_back(relu);

  // GCN-side checks on an SBM graph in theorem mode.
  const int sbm_n = std::max(16, n);
  const ConnectedGraph sbm = draw_connected_sbm(sbm_n, config.p_intra, config.q_inter, derive_seed(seed, 2));
  BoundCheckReport spectrum("filter_spectrum");
  BoundCheckReport decay("decay_bound");
  GmmParams gmm;
  gmm.mean = random_mean(sbm_n, derive_seed(seed, 3));
  gmm.noise_std = config.noise_std;
  gmm.num_channels = sbm_n;
  gmm.seed = derive_seed(seed, 4);
  const Matrix f0 = sample_gmm_features(balanced_labels(sbm_n), gmm);
  for (const auto& name : {"gcn", "sym", "rw"}) {
    const Filter filter = filter_from_string(name, sbm.graph, config.filter_alpha);
    spectrum.merge(check_filter_spectrum(sbm.graph, filter));
    GcnConfig gcn;
    gcn.depth = 30;
    gcn.weight_frobenius = std::min(1.0, config.weight_frobenius);
    gcn.seed = derive_seed(seed, 5);
    gcn.keep_outputs = false;
    decay.merge(check_decay_bound(forward(gcn, filter, f0), filter));
  }
  spectrum.instances = 1;
  decay.instances = 1;
  out.push_back(spectrum);
  out.push_back(decay);

  const ConnectedGraph lb_graph = draw_connected_sbm(16, config.p_intra, config.q_inter, derive_seed(seed, 6));
  const Filter lb_filter = build_filter_gcn(lb_graph.graph);
  GcnConfig lb;
  lb.depth = 20;
  lb.weight_frobenius = std::min(1.0, config.weight_frobenius);
  lb.seed = derive_seed(seed, 7);
  const Matrix lb_input = normal_matrix(rng, 16, 4) * config.noise_std;
  const LayerTrace lb_trace = forward(lb, lb_filter, lb_input);
  out.push_back(check_lower_bound(normal_matrix(rng, 16, 4), lb_trace, lb_filter, {0, 1, 2},
                                  {0.1, 1.0, 5.0}));
  return out;
}

}  // namespace

VerifyResult run_verify(const ExperimentConfig& config) {
  validate(config);
  std::vector<std::vector<BoundCheckReport>> per_instance(config.instances);
  detail::parallel_for(config.instances, config.jobs,
                       [&](int inst) { per_instance[inst] = verify_instance(config, inst); });
  VerifyResult result;
  for (std::size_t k = 0; k < kVerifyReports.size(); ++k) {
    BoundCheckReport merged(kVerifyReports[k]);
    for (const auto& reports : per_instance) merged.merge(reports[k]);
    result.reports.push_back(std::move(merged));
  }
  return result;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::InvalidParameter, "fit needs two or more paired points");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  const double r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return LinearFit{slope, my - slope * mx, r2};
}

// ---------------------------------------------------------------------------
// Output files

namespace {

std::ofstream open_output(const ExperimentConfig& config, const std::string& name,
                          std::vector<std::filesystem::path>& written) {
  std::filesystem::create_directories(config.out_dir);
  const auto path = config.out_dir / name;
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  written.push_back(path);
  return out;
}

void write_header(std::ostream& out, const ExperimentConfig& config) {
  out << "# gsmooth " << GSMOOTH_VERSION << '\n';
  out << "# experiment: " << config.experiment << '\n';
  out << "# seed: " << config.seed << '\n';
  out << "# config: " << config_to_json(config) << '\n';
}

nlohmann::ordered_json meta(const ExperimentConfig& config) {
  nlohmann::ordered_json m;
  m["version"] = GSMOOTH_VERSION;
  m["experiment"] = config.experiment;
  m["seed"] = config.seed;
  m["config"] = nlohmann::ordered_json::parse(config_to_json(config));
  return m;
}

void write_report(const ExperimentConfig& config, const BoundCheckReport& report,
                  const std::string& file, std::vector<std::filesystem::path>& written) {
  auto j = nlohmann::ordered_json::parse(to_json(report, -1));
  j["meta"] = meta(config);
  auto out = open_output(config, file, written);
  out << j.dump(1) << '\n';
}

void write_value(std::ostream& out, double v) {
  if (std::isnan(v)) {
    out << "nan";
  } else if (std::isinf(v)) {
    out << (v < 0 ? "-inf" : "inf");
  } else {
    out << v;
  }
}

}  // namespace

std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& config,
                                                 const CurveExperimentResult& result,
                                                 const std::string& prefix) {
  std::vector<std::filesystem::path> written;
  auto combined = open_output(config, prefix + "_all.csv", written);
  write_header(combined, config);
  combined << "curve,layer,mean_ln_Eh,stderr_ln_Eh,trials\n";
  std::vector<detail::Series> series;
  for (std::size_t c = 0; c < result.curves.size(); ++c) {
    const CurveStats& s = result.curves[c];
    auto out = open_output(config, prefix + "_" + s.label + ".csv", written);
    write_header(out, config);
    out << "layer,mean_ln_Eh,stderr_ln_Eh,trials\n";
    detail::Series line{s.label, {}, {}};
    for (std::size_t k = 0; k < s.mean_ln.size(); ++k) {
      for (std::ostream* o : {static_cast<std::ostream*>(&out), static_cast<std::ostream*>(&combined)}) {
        if (o == &combined) *o << s.label << ',';
        *o << k << ',';
        write_value(*o, s.mean_ln[k]);
        *o << ',';
        write_value(*o, s.stderr_ln[k]);
        *o << ',' << s.count[k] << '\n';
      }
      line.x.push_back(static_cast<double>(k));
      line.y.push_back(s.mean_ln[k]);
    }
    series.push_back(std::move(line));

    if (config.per_trial_csv) {
      for (std::size_t trial = 0; trial < result.eh[c].size(); ++trial) {
        auto t = open_output(config, prefix + "_" + s.label + "_trial" + std::to_string(trial) + ".csv",
                             written);
        write_header(t, config);
        t << "layer,Eh,ln_Eh,frobenius_norm\n";
        for (std::size_t k = 0; k < result.eh[c][trial].size(); ++k) {
          const double e = result.eh[c][trial][k];
          t << k << ',' << e << ',';
          write_value(t, e > 0.0 ? std::log(e) : -std::numeric_limits<double>::infinity());
          t << ',' << result.frobenius[c][trial][k] << '\n';
        }
      }
    }
    if (config.mode == WeightMode::Theorem && c < result.reports.size()) {
      write_report(config, result.reports[c], prefix + "_" + s.label + "_decay_bound.json", written);
    }
  }
  if (config.svg) {
    const auto path = config.out_dir / (prefix + ".svg");
    detail::write_line_plot(path, prefix + ": mean ln E_h per layer", "layer k", "mean ln E_h", series);
    written.push_back(path);
  }
  return written;
}

std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& config,
                                                 const SkipResult& result, bool table,
                                                 bool histogram) {
  std::vector<std::filesystem::path> written;
  if (table) {
    auto out = open_output(config, "skip_table.csv", written);
    write_header(out, config);
    out << "variant,K,median_ln_Eh,mean_ln_Eh,min_ln_Eh,max_ln_Eh,trials\n";
    std::vector<detail::Series> series;
    for (std::size_t v = 0; v < result.variants.size(); ++v) {
      detail::Series line{result.variants[v], {}, {}};
      for (std::size_t d = 0; d < result.depths.size(); ++d) {
        const auto& values = result.ln_eh[v][d];
        const double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
        const double med = result.median(static_cast<int>(v), static_cast<int>(d));
        out << result.variants[v] << ',' << result.depths[d] << ',';
        write_value(out, med);
        out << ',';
        write_value(out, mean);
        out << ',';
        write_value(out, *std::min_element(values.begin(), values.end()));
        out << ',';
        write_value(out, *std::max_element(values.begin(), values.end()));
        out << ',' << values.size() << '\n';
        line.x.push_back(result.depths[d]);
        line.y.push_back(med);
      }
      series.push_back(std::move(line));
    }
    if (config.svg) {
      const auto path = config.out_dir / "skip_table.svg";
      detail::write_line_plot(path, "median ln E_h of normalised output", "depth K", "ln E_h", series);
      written.push_back(path);
    }
  }
  if (histogram) {
    auto out = open_output(config, "skip_histogram.csv", written);
    write_header(out, config);
    out << "variant,direction,eigenvalue,energy_fraction,basis_dependent\n";
    for (std::size_t v = 0; v < result.variants.size(); ++v) {
      for (std::size_t i = 0; i < result.histogram[v].size(); ++i) {
        out << result.variants[v] << ',' << i + 1 << ',' << result.eigenvalues[i] << ','
            << result.histogram[v][i] << ',' << (result.basis_dependent[i] ? 1 : 0) << '\n';
      }
      if (config.svg) {
        const auto path = config.out_dir / ("skip_histogram_" + result.variants[v] + ".svg");
        detail::write_bar_plot(path, result.variants[v] + ": energy fraction per direction",
                               "direction i", "E_i", result.histogram[v]);
        written.push_back(path);
      }
    }
  }
  return written;
}

std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& config,
                                                 const VerifyResult& result) {
  std::vector<std::filesystem::path> written;
  nlohmann::ordered_json summary;
  summary["meta"] = meta(config);
  summary["violated"] = result.violated();
  auto& rows = summary["reports"] = nlohmann::ordered_json::array();
  for (const auto& report : result.reports) {
    write_report(config, report, report.name + ".json", written);
    nlohmann::ordered_json row;
    row["name"] = report.name;
    row["instances"] = report.instances;
    row["records"] = report.records.size();
    row["violations"] = report.violation_count();
    row["worst_margin"] = std::isfinite(report.worst_margin) ? nlohmann::ordered_json(report.worst_margin)
                                                            : nlohmann::ordered_json(nullptr);
    row["violated"] = report.violated;
    row["measurements"] = report.measurements;
    rows.push_back(std::move(row));
  }
  auto out = open_output(config, "verify_summary.json", written);
  out << summary.dump(1) << '\n';
  return written;
}

}  // namespace gsmooth
