#include "doctest.h"
#include "oracles.hpp"

#include "gsmooth/bounds.hpp"
#include "gsmooth/error.hpp"
#include "gsmooth/smoothness.hpp"

#include <cmath>
#include <limits>

using namespace gsmooth;

TEST_CASE("violation threshold") {
  CHECK_FALSE(is_violation(1.0, 1.0));
  CHECK_FALSE(is_violation(1.0 + 1e-10, 1.0));
  CHECK(is_violation(1.0 + 1e-8, 1.0));
  CHECK(is_violation(1e6 * (1 + 1e-8), 1e6));
  CHECK_FALSE(is_violation(1e6 * (1 + 1e-10), 1e6));
}

TEST_CASE("report bookkeeping") {
  BoundCheckReport report("demo");
  CHECK(std::isinf(report.worst_margin));
  report.add("a", {{"k", 1}}, 1.0, 2.0);
  report.add("a", {{"k", 2}}, 3.0, 2.0);
  report.skip("b", {}, "SkippedDegenerate");
  CHECK(report.worst_margin == -1.0);
  CHECK(report.violated);
  CHECK(report.violation_count() == 1);
  CHECK(report.records[2].skipped);

  BoundCheckReport other("demo");
  other.instances = 2;
  other.add("a", {}, 0.0, 0.5);
  other.measurements["m"] = 4.0;
  report.measurements["m"] = 3.0;
  report.merge(other);
  CHECK(report.records.size() == 4);
  CHECK(report.measurements["m"] == 4.0);
  CHECK(report.violation_count() == 1);
}

TEST_CASE("JSON round trip") {
  Rng rng(6);
  const auto d = psd_decompose(combinatorial_laplacian(build_graph(oracle::random_adjacency(rng, 6))));
  BoundCheckReport report = check_equivalence_lemma2(d, oracle::random_vector(rng, 6), 2, 4);
  report.skip("ratio_lower", {{"n", 9}}, "SkippedDegenerate");
  const BoundCheckReport back = report_from_json(to_json(report));
  CHECK(back.name == report.name);
  CHECK(back.instances == report.instances);
  CHECK(back.violated == report.violated);
  CHECK(back.applicable == report.applicable);
  REQUIRE(back.records.size() == report.records.size());
  for (std::size_t i = 0; i < back.records.size(); ++i) {
    CHECK(back.records[i].label == report.records[i].label);
    CHECK(back.records[i].params == report.records[i].params);
    CHECK(back.records[i].lhs == report.records[i].lhs);
    CHECK(back.records[i].rhs == report.records[i].rhs);
    CHECK(back.records[i].skipped == report.records[i].skipped);
  }
  CHECK(back.worst_margin == report.worst_margin);
  CHECK(back.measurements == report.measurements);

  const BoundCheckReport empty = report_from_json(to_json(BoundCheckReport("none")));
  CHECK(std::isinf(empty.worst_margin));
  CHECK_THROWS_AS(report_from_json("{not json"), Error);
  CHECK_THROWS_AS(report_from_json("{\"name\": 3}"), Error);
}

TEST_CASE("Jackson rows on the two-node graph") {
  const auto d = psd_decompose(combinatorial_laplacian(build_graph(oracle::complete_adjacency(2))));
  const Vector f = Vector::Unit(2, 0);
  const auto report = check_jackson(d, f, 1);
  CHECK(report.violation_count() == 0);
  // n = 2 rows: E_2 = 0 and |f_hat(2)| = 1/sqrt2 against C_1 omega_1(f, 2^{-1/2}).
  const double omega = std::sqrt(2.0) * std::sin(0.5);
  for (const auto& rec : report.records) {
    if (rec.label == "single_frequency") {
      CHECK(rec.lhs == doctest::Approx(1 / std::sqrt(2.0)));
      CHECK(rec.rhs == doctest::Approx(omega / (2 * std::sin(0.5))));
    }
  }
}

TEST_CASE("bound families hold on random graphs") {
  Rng rng(123);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + 2 * trial;
    const auto d = psd_decompose(combinatorial_laplacian(build_graph(oracle::random_adjacency(rng, n))));
    const Vector f = oracle::random_vector(rng, n);
    for (int r = 0; r <= 3; ++r) {
      CHECK(check_jackson(d, f, r).violation_count() == 0);
      for (int m = 2; m <= n; ++m) CHECK(check_equivalence_lemma2(d, f, r, m).violation_count() == 0);
      const auto ko = check_k_omega(d, f, r, {0.1, 0.5, 1.0, 4.0});
      CHECK(ko.violation_count() == 0);
    }
    const Matrix signal = oracle::random_matrix(rng, n, 3);
    CHECK(check_k_omega(d, signal, 2, {0.3, 1.5}).violation_count() == 0);
  }
}

TEST_CASE("a corrupted constant is caught") {
  Rng rng(9);
  int flagged = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = psd_decompose(combinatorial_laplacian(build_graph(oracle::random_adjacency(rng, 12))));
    const Vector f = oracle::random_vector(rng, 12);
    JacksonOptions opts;
    opts.single_frequency_scale = 0.01;
    opts.jackson_scale = 0.01;
    if (check_jackson(d, f, 1, opts).violated) ++flagged;
  }
  CHECK(flagged == 10);
}

TEST_CASE("degenerate equivalence rows are skipped") {
  const auto d = psd_decompose(combinatorial_laplacian(build_graph(oracle::path_adjacency(5))));
  const auto report = check_equivalence_lemma2(d, Vector::Ones(5), 2, 3);
  int skipped = 0;
  for (const auto& rec : report.records) skipped += rec.skipped ? 1 : 0;
  CHECK(skipped == 2);
  CHECK_FALSE(report.violated);
  CHECK_THROWS_AS(check_equivalence_lemma2(d, Vector::Ones(5), 2, 1), Error);
}
