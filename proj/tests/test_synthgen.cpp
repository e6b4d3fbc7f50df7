#include "doctest.h"

#include "gsmooth/error.hpp"
#include "gsmooth/graph.hpp"
#include "gsmooth/synthgen.hpp"

#include <cmath>

using namespace gsmooth;

TEST_CASE("uniform and normal draws have the documented form") {
  Rng a(5), b(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u == b.uniform());
  }
  // Box-Muller pair: cosine branch first, sine branch from the cache.
  std::mt19937_64 engine(9);
  const double u1 = 1.0 - static_cast<double>(engine() >> 11) * 0x1.0p-53;
  const double u2 = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  Rng rng(9);
  CHECK(rng.normal() == doctest::Approx(radius * std::cos(2 * M_PI * u2)).epsilon(1e-15));
  CHECK(rng.normal() == doctest::Approx(radius * std::sin(2 * M_PI * u2)).epsilon(1e-15));
}

TEST_CASE("derived seeds separate streams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}

TEST_CASE("balanced labels put the larger half first") {
  const auto labels = balanced_labels(5);
  CHECK(labels == std::vector<int>{1, 1, 1, -1, -1});
}

TEST_CASE("SBM limiting cases") {
  SbmParams p;
  p.num_nodes = 6;
  p.labels = balanced_labels(6);
  p.p_intra = 1.0;
  p.q_inter = 1.0;
  const Graph complete = sample_sbm(p);
  CHECK(complete.adjacency().sum() == 30.0);
  p.q_inter = 0.0;
  const Graph cliques = sample_sbm(p);
  CHECK_FALSE(is_connected(cliques));
  CHECK(cliques.adjacency().sum() == 12.0);
  p.q_inter = 0.9;
  p.p_intra = 0.5;
  CHECK_THROWS_AS(sample_sbm(p), Error);
}

TEST_CASE("SBM is deterministic and matches edge probabilities") {
  SbmParams p;
  p.num_nodes = 100;
  p.labels = balanced_labels(100);
  p.seed = 3;
  CHECK(sample_sbm(p).adjacency() == sample_sbm(p).adjacency());

  double within = 0, between = 0, within_pairs = 0, between_pairs = 0;
  for (int trial = 0; trial < 200; ++trial) {
    p.seed = 1000 + trial;
    const Matrix a = sample_sbm(p).adjacency();
    for (int i = 0; i < 100; ++i) {
      for (int j = i + 1; j < 100; ++j) {
        if (p.labels[i] == p.labels[j]) {
          within += a(i, j);
          within_pairs += 1;
        } else {
          between += a(i, j);
          between_pairs += 1;
        }
      }
    }
  }
  const double se_p = std::sqrt(0.8 * 0.2 / within_pairs);
  const double se_q = std::sqrt(0.3 * 0.7 / between_pairs);
  CHECK(std::abs(within / within_pairs - 0.8) <= 3 * se_p);
  CHECK(std::abs(between / between_pairs - 0.3) <= 3 * se_q);
}

TEST_CASE("full-size SBM is connected with the expected within-class degree") {
  SbmParams p;
  p.num_nodes = 1000;
  p.labels = balanced_labels(1000);
  p.seed = 1;
  const Graph g = sample_sbm(p);
  CHECK(is_connected(g));
  const double within = g.adjacency().topLeftCorner(500, 500).sum() / 500.0;
  CHECK(within == doctest::Approx(0.8 * 499).epsilon(0.02));
}

TEST_CASE("GMM features") {
  const std::vector<int> labels{1, -1, 1};
  GmmParams g;
  g.mean = Vector::Unit(3, 0);
  g.noise_std = 1e-12;
  g.num_channels = 3;
  const Matrix f = sample_gmm_features(labels, g);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(std::abs(f(i, j) - (j == 0 ? labels[i] : 0.0)) <= 1e-10);
  }
  g.mean = Vector::Zero(2);
  CHECK_THROWS_AS(sample_gmm_features(labels, g), Error);

  // Noise column mean within five standard errors of zero.
  std::vector<int> many(100000, 1);
  GmmParams z;
  z.mean = Vector::Zero(1);
  z.noise_std = 10.0;
  z.num_channels = 1;
  z.seed = 4;
  const Matrix noise = sample_gmm_features(many, z);
  CHECK(std::abs(noise.mean()) <= 5 * 10.0 / std::sqrt(100000.0));
  const double var = (noise.array() - noise.mean()).square().sum() / (noise.size() - 1);
  CHECK(var == doctest::Approx(100.0).epsilon(0.02));
}

TEST_CASE("weights are rescaled to the exact Frobenius norm") {
  const Matrix one = sample_weight(1, 1, 1.0, 8);
  CHECK(std::abs(std::abs(one(0, 0)) - 1.0) <= 1e-15);
  CHECK(std::abs(sample_weight(100, 100, 10.0, 2).norm() - 10.0) <= 1e-12);
  CHECK(std::abs(sample_weight(100, 100, 1.0, 2).norm() - 1.0) <= 1e-12);
  CHECK(sample_weight(4, 3, 2.0, 5) == sample_weight(4, 3, 2.0, 5));
  CHECK_THROWS_AS(sample_weight(0, 3, 1.0, 0), Error);
  CHECK_THROWS_AS(sample_weight(2, 3, 0.0, 0), Error);
}
