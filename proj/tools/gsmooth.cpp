#include "gsmooth/error.hpp"
#include "gsmooth/experiments.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct Overrides {
  std::string config_file;
  bool full_scale = false;
  bool print_config = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out_dir;
  bool svg = false;
  bool per_trial_csv = false;
  std::optional<int> trials;
  std::optional<int> nodes;
  std::optional<int> depth;
  std::optional<double> weight_frobenius;
  std::optional<std::string> mode;
  std::optional<int> instances;
  std::optional<std::string> corrupt;
};

void add_common(CLI::App* cmd, Overrides& o, bool gcn_options) {
  cmd->add_option("--config", o.config_file, "JSON file overlaid on the preset");
  cmd->add_flag("--full-scale", o.full_scale, "start from the published sizes instead of the desk preset");
  cmd->add_flag("--print-config", o.print_config, "print the resolved configuration and exit");
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--jobs", o.jobs, "worker threads");
  cmd->add_option("--out-dir", o.out_dir, "output directory");
  cmd->add_flag("--svg", o.svg, "also render SVG plots");
  if (gcn_options) {
    cmd->add_option("--trials", o.trials, "independent trials");
    cmd->add_option("--nodes", o.nodes, "graph size N");
    cmd->add_option("--depth", o.depth, "number of layers K");
    cmd->add_option("--weight-frobenius", o.weight_frobenius, "Frobenius norm of every weight");
    cmd->add_option("--mode", o.mode, "theorem | paper-experiment");
    cmd->add_flag("--per-trial-csv", o.per_trial_csv, "write one CSV per trial");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gsmooth::Error(gsmooth::ErrorCode::ParseError, "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

double parse_corruption(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || text.substr(0, eq) != "Cr") {
    throw gsmooth::Error(gsmooth::ErrorCode::InvalidParameter, "expected --corrupt-constant Cr=<factor>");
  }
  std::size_t used = 0;
  const double value = std::stod(text.substr(eq + 1), &used);
  if (used != text.size() - eq - 1) {
    throw gsmooth::Error(gsmooth::ErrorCode::InvalidParameter, "bad factor in " + text);
  }
  return value;
}

gsmooth::ExperimentConfig resolve(const std::string& experiment, const Overrides& o) {
  using namespace gsmooth;
  ExperimentConfig c = o.full_scale ? default_config(experiment) : desk_config(experiment);
  if (!o.config_file.empty()) {
    c = config_from_json(read_file(o.config_file), c);
    if (c.experiment != experiment) {
      throw Error(ErrorCode::InvalidParameter,
                  "config file is for '" + c.experiment + "', not '" + experiment + "'");
    }
  }
  if (o.seed) c.seed = *o.seed;
  if (o.jobs) c.jobs = *o.jobs;
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.svg) c.svg = true;
  if (o.per_trial_csv) c.per_trial_csv = true;
  if (o.trials) c.trials = *o.trials;
  if (o.nodes) c.num_nodes = *o.nodes;
  if (o.depth) c.depth = *o.depth;
  if (o.mode) {
    c.mode = weight_mode_from_string(*o.mode);
    if (c.mode == WeightMode::Theorem && !o.weight_frobenius) c.weight_frobenius = 1.0;
  }
  if (o.weight_frobenius) c.weight_frobenius = *o.weight_frobenius;
  if (o.instances) c.instances = *o.instances;
  if (o.corrupt) c.corrupt_cr = parse_corruption(*o.corrupt);
  validate(c);
  return c;
}

void list_files(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
}

int report_status(const std::vector<gsmooth::BoundCheckReport>& reports) {
  int status = kOk;
  for (const auto& r : reports) {
    std::printf("%-22s records=%-6zu violations=%-4d worst_margin=%.3e%s\n", r.name.c_str(),
                r.records.size(), r.violation_count(), r.worst_margin,
                r.applicable ? "" : " (not applicable)");
    if (r.violated) status = kViolation;
  }
  return status;
}

int run(const std::string& experiment, const Overrides& o) {
  using namespace gsmooth;
  const ExperimentConfig c = resolve(experiment, o);
  if (o.print_config) {
    std::cout << config_to_json(c, true) << '\n';
    return kOk;
  }
  if (experiment == "verify") {
    const VerifyResult result = run_verify(c);
    const int status = report_status(result.reports);
    list_files(write_outputs(c, result));
    return status;
  }
  if (experiment == "decay" || experiment == "surgery") {
    const CurveExperimentResult result = experiment == "decay" ? run_decay(c) : run_surgery(c);
    if (result.total_redraws > 0) {
      std::cerr << "redrew disconnected SBM samples " << result.total_redraws << " times\n";
    }
    for (const auto& curve : result.curves) {
      std::printf("%-8s ln E_h: layer 0 %.3f, layer %zu %.3f\n", curve.label.c_str(), curve.mean_ln.front(),
                  curve.mean_ln.size() - 1, curve.mean_ln.back());
    }
    const int status = c.mode == WeightMode::Theorem ? report_status(result.reports) : kOk;
    list_files(write_outputs(c, result, experiment));
    return status;
  }
  const SkipResult result = run_skip(c);
  if (result.total_redraws > 0) {
    std::cerr << "redrew disconnected SBM samples " << result.total_redraws << " times\n";
  }
  if (experiment == "skip") {
    for (std::size_t v = 0; v < result.variants.size(); ++v) {
      std::printf("%-7s", result.variants[v].c_str());
      for (std::size_t d = 0; d < result.depths.size(); ++d) {
        std::printf("  K=%d: %.4f", result.depths[d], result.median(static_cast<int>(v), static_cast<int>(d)));
      }
      std::printf("\n");
    }
  }
  list_files(write_outputs(c, result, experiment == "skip", true));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph smoothness bounds and GCN over-smoothing experiments"};
  app.set_version_flag("--version", std::string(GSMOOTH_VERSION));
  app.require_subcommand(1);

  Overrides o;
  auto* verify = app.add_subcommand("verify", "check every inequality on seeded random instances");
  add_common(verify, o, false);
  verify->add_option("--instances", o.instances, "random instances");
  verify->add_option("--corrupt-constant", o.corrupt, "scale C_r, e.g. Cr=0.5 (harness check)");
  add_common(app.add_subcommand("decay", "E_h per layer for the classical filters"), o, true);
  add_common(app.add_subcommand("surgery", "E_h per layer for spectrally modified filters"), o, true);
  add_common(app.add_subcommand("skip", "ResGCN / APPNP / GCNII table and histogram"), o, true);
  add_common(app.add_subcommand("histogram", "per-direction energy of skip variants"), o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const std::string experiment = app.get_subcommands().front()->get_name();
  try {
    return run(experiment, o);
  } catch (const gsmooth::Error& e) {
    // Library errors here come from the inputs the user chose (e.g. an SBM too
    // sparse to ever be connected), so they share the configuration exit code.
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
