#include "doctest.h"

#include "gsmooth/error.hpp"
#include "gsmooth/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gsmooth;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("gsmooth_test_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig small(const std::string& experiment) {
  ExperimentConfig c = default_config(experiment);
  c.num_nodes = 24;
  c.trials = 3;
  c.depth = 6;
  c.instances = 2;
  c.min_nodes = 4;
  c.max_nodes = 8;
  c.table_depths = {1, 3};
  c.seed = 5;
  return c;
}

}  // namespace

TEST_CASE("published and reduced presets") {
  const auto decay = default_config("decay");
  CHECK(decay.num_nodes == 1000);
  CHECK(decay.trials == 1000);
  CHECK(decay.depth == 50);
  CHECK(decay.weight_frobenius == 10.0);
  CHECK(decay.noise_std == 10.0);
  CHECK(decay.filter_alpha == 0.75);
  CHECK(decay.mode == WeightMode::PaperExperiment);
  const auto verify = default_config("verify");
  CHECK(verify.mode == WeightMode::Theorem);
  CHECK(verify.weight_frobenius == 1.0);
  CHECK(default_config("skip").num_nodes == 100);
  CHECK(desk_config("decay").num_nodes == 200);
  CHECK(desk_config("surgery").depth == 30);
  CHECK(desk_config("histogram").trials == 20);
  CHECK_THROWS_AS(default_config("nope"), Error);
  for (const char* name : {"verify", "decay", "surgery", "skip", "histogram"}) {
    CHECK_NOTHROW(validate(default_config(name)));
    CHECK_NOTHROW(validate(desk_config(name)));
  }
}

TEST_CASE("validation rejects inconsistent fields") {
  auto c = default_config("decay");
  c.instances = 0;
  CHECK_THROWS_AS(validate(c), Error);
  c = default_config("decay");
  c.q_inter = 0.9;
  CHECK_THROWS_AS(validate(c), Error);
  c = default_config("decay");
  c.filters = {"gcn", "heat"};
  CHECK_THROWS_AS(validate(c), Error);
  c = default_config("verify");
  c.weight_frobenius = 2.0;
  CHECK_THROWS_AS(validate(c), Error);
  c = default_config("surgery");
  c.surgery_a = {1.5};
  CHECK_THROWS_AS(validate(c), Error);
}

TEST_CASE("config JSON round trip and overlay") {
  auto c = default_config("surgery");
  c.seed = 77;
  c.surgery_a = {0.9, 0.1};
  c.mode = WeightMode::Theorem;
  c.weight_frobenius = 1.0;
  const auto back = config_from_json(config_to_json(c), default_config("verify"));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(config_to_json(c).find("jobs") == std::string::npos);
  CHECK(config_to_json(c, true).find("\"jobs\"") != std::string::npos);

  const auto overlay = config_from_json(R"({"trials": 4, "jobs": 3})", c);
  CHECK(overlay.trials == 4);
  CHECK(overlay.jobs == 3);
  CHECK(overlay.seed == 77);
  CHECK_THROWS_AS(config_from_json(R"({"trails": 4})", c), Error);
  CHECK_THROWS_AS(config_from_json(R"({"trials": "four"})", c), Error);
  CHECK_THROWS_AS(config_from_json("[1]", c), Error);
  CHECK_THROWS_AS(config_from_json(R"({"mode": "fast"})", c), Error);
}

TEST_CASE("trial inputs are seeded and reproducible") {
  const auto c = small("decay");
  const auto a = make_trial(c, 1);
  const auto b = make_trial(c, 1);
  CHECK(a.graph.graph.adjacency() == b.graph.graph.adjacency());
  CHECK(a.features == b.features);
  CHECK(a.weight_seed == b.weight_seed);
  CHECK(a.features.rows() == 24);
  CHECK(a.features.cols() == 24);
  CHECK(make_trial(c, 2).features != a.features);
}

TEST_CASE("connected SBM redraws") {
  // Sparse blocks are often disconnected; the redraw seed advances by one each time.
  const auto g = draw_connected_sbm(30, 0.15, 0.01, 3);
  CHECK(g.seed_used == 3 + static_cast<std::uint64_t>(g.redraws));
  CHECK_THROWS_AS(draw_connected_sbm(30, 0.01, 0.0, 3, 2), Error);
}

TEST_CASE("decay runs are independent of thread count") {
  auto c = small("decay");
  const auto one = run_decay(c);
  c.jobs = 3;
  const auto three = run_decay(c);
  REQUIRE(one.curves.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(one.curves[i].label == c.filters[i]);
    CHECK(one.curves[i].mean_ln == three.curves[i].mean_ln);
    CHECK(one.curves[i].mean_ln.size() == 7);
  }
  CHECK(one.eh == three.eh);
}

TEST_CASE("output files are byte-identical across runs") {
  auto c = small("decay");
  c.per_trial_csv = true;
  c.svg = true;
  c.out_dir = scratch_dir("a");
  const auto first = write_outputs(c, run_decay(c), "decay");
  c.out_dir = scratch_dir("b");
  c.jobs = 2;
  const auto second = write_outputs(c, run_decay(c), "decay");
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].filename() == second[i].filename());
    CHECK(slurp(first[i]) == slurp(second[i]));
  }
  const std::string all = slurp(c.out_dir / "decay_all.csv");
  CHECK(all.rfind("# gsmooth ", 0) == 0);
  CHECK(all.find("# seed: 5\n") != std::string::npos);
  CHECK(all.find("curve,layer,mean_ln_Eh,stderr_ln_Eh,trials\n") != std::string::npos);
  CHECK(fs::exists(c.out_dir / "decay.svg"));
  CHECK(fs::exists(c.out_dir / "decay_gcn_trial2.csv"));
}

TEST_CASE("theorem-mode decay writes passing reports") {
  auto c = small("decay");
  c.mode = WeightMode::Theorem;
  c.weight_frobenius = 1.0;
  const auto result = run_decay(c);
  REQUIRE(result.reports.size() == 3);
  for (const auto& r : result.reports) {
    CHECK(r.applicable);
    CHECK_FALSE(r.violated);
  }
}

TEST_CASE("surgery curves are paired and labelled") {
  auto c = small("surgery");
  const auto result = run_surgery(c);
  REQUIRE(result.curves.size() == 4);
  CHECK(result.curves[0].label == "a1.00");
  CHECK(result.curves[1].label == "a0.75");
  // Identical inputs: E_h at layer 0 agrees across curves.
  CHECK(result.eh[0][0][0] == result.eh[3][0][0]);
}

TEST_CASE("skip table and histogram") {
  auto c = small("skip");
  c.trials = 2;
  const auto result = run_skip(c);
  CHECK(result.variants == c.variants);
  CHECK(result.depths == c.table_depths);
  CHECK(result.ln_eh[0][1].size() == 2);
  for (const auto& h : result.histogram) {
    double total = 0.0;
    for (double v : h) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(result.eigenvalues.front() == doctest::Approx(1.0));
  c.out_dir = scratch_dir("skip");
  const auto files = write_outputs(c, result, true, true);
  CHECK(files.size() == 2);
  const std::string table = slurp(c.out_dir / "skip_table.csv");
  CHECK(table.find("resgcn,3,") != std::string::npos);
}

TEST_CASE("verify suite on a few small instances") {
  auto c = small("verify");
  const auto result = run_verify(c);
  CHECK_FALSE(result.violated());
  CHECK(result.reports.size() == 10);
  c.out_dir = scratch_dir("verify");
  const auto files = write_outputs(c, result);
  CHECK(files.size() == 11);
  const std::string summary = slurp(c.out_dir / "verify_summary.json");
  CHECK(summary.find("\"violated\": false") != std::string::npos);

  c.corrupt_cr = 0.01;
  CHECK(run_verify(c).violated());
}

TEST_CASE("line fit") {
  const auto fit = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_line({1}, {2}), Error);
}

TEST_CASE("random verify graphs are connected") {
  for (int n = 3; n < 20; ++n) {
    const Graph g = random_connected_graph(n, static_cast<std::uint64_t>(n));
    CHECK(g.num_nodes() == n);
    CHECK(is_connected(g));
  }
}
