#pragma once

#include "gsmooth/graph.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace gsmooth {

/// Portable pseudo-random stream.
///
/// Engine: std::mt19937_64 (its output sequence is fixed by the C++
/// standard). Uniforms take the top 53 bits of one engine draw, giving
/// k * 2^-53 in [0, 1). Normals use the Box-Muller transform on a pair of
/// uniforms (u1 mapped to (0, 1] as 1 - u); both variates of a pair are
/// used, cosine branch first.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finaliser applied to base + (stream + 1) * golden-ratio
/// constant. Gives independent sub-streams for graph, features and weights.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// First ceil(N/2) nodes labelled +1, the rest -1.
std::vector<int> balanced_labels(int num_nodes);

struct SbmParams {
  int num_nodes = 0;
  double p_intra = 0.8;
  double q_inter = 0.3;
  std::vector<int> labels;  // entries in {+1, -1}
  std::uint64_t seed = 0;
};

/// Two-class stochastic block model. Pairs (i, j), i < j, are visited in
/// row-major order and each consumes exactly one uniform draw.
Graph sample_sbm(const SbmParams& params);

struct GmmParams {
  Vector mean;  // length num_channels
  double noise_std = 10.0;
  int num_channels = 0;
  std::uint64_t seed = 0;
};

/// F_ij = y_i mu_j + eps_ij with eps_ij ~ N(0, sigma^2), drawn row-major.
Matrix sample_gmm_features(const std::vector<int>& labels, const GmmParams& params);

/// Vector of i.i.d. standard normal entries (the "random" mean mode).
Vector random_mean(int length, std::uint64_t seed);

/// rows x cols matrix of N(0,1) draws rescaled to Frobenius norm `target`.
Matrix sample_weight(int rows, int cols, double target_frobenius, std::uint64_t seed);

}  // namespace gsmooth
