#include "gsmooth/synthgen.hpp"

#include "gsmooth/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace gsmooth {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<int> balanced_labels(int num_nodes) {
  std::vector<int> labels(num_nodes, -1);
  for (int i = 0; i < (num_nodes + 1) / 2; ++i) labels[i] = 1;
  return labels;
}

namespace {

void check_labels(const std::vector<int>& labels) {
  for (int y : labels) {
    if (y != 1 && y != -1) {
      throw Error(ErrorCode::InvalidParameter, "labels must be +1 or -1");
    }
  }
}

}  // namespace

Graph sample_sbm(const SbmParams& params) {
  const int n = params.num_nodes;
  if (n < 2) throw Error(ErrorCode::TooSmall, "SBM needs at least 2 nodes");
  if (!(params.q_inter >= 0.0 && params.q_inter < params.p_intra && params.p_intra <= 1.0)) {
    // p = q = 1 is the one degenerate case the complete-graph example needs.
    if (!(params.p_intra == 1.0 && params.q_inter == 1.0)) {
      throw Error(ErrorCode::InvalidParameter, "need 0 <= q < p <= 1");
    }
  }
  if (static_cast<int>(params.labels.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "labels length must equal num_nodes");
  }
  check_labels(params.labels);

  Rng rng(params.seed);
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double prob = params.labels[i] == params.labels[j] ? params.p_intra : params.q_inter;
      if (rng.uniform() < prob) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  return build_graph(std::move(a));
}

Matrix sample_gmm_features(const std::vector<int>& labels, const GmmParams& params) {
  if (!(params.noise_std > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "noise_std must be positive");
  }
  if (params.num_channels < 1 || params.mean.size() != params.num_channels) {
    throw Error(ErrorCode::DimensionMismatch, "mean length must equal num_channels");
  }
  check_labels(labels);
  const auto n = static_cast<Eigen::Index>(labels.size());
  Rng rng(params.seed);
  Matrix features(n, params.num_channels);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < params.num_channels; ++j) {
      features(i, j) = labels[i] * params.mean(j) + params.noise_std * rng.normal();
    }
  }
  return features;
}

Vector random_mean(int length, std::uint64_t seed) {
  Rng rng(seed);
  Vector mean(length);
  for (int i = 0; i < length; ++i) mean(i) = rng.normal();
  return mean;
}

Matrix sample_weight(int rows, int cols, double target_frobenius, std::uint64_t seed) {
  if (rows < 1 || cols < 1) {
    throw Error(ErrorCode::InvalidParameter, "weight shape must be positive");
  }
  if (!(target_frobenius > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "target Frobenius norm must be positive");
  }
  for (std::uint64_t attempt = 0; attempt < 2; ++attempt) {
    Rng rng(attempt == 0 ? seed : derive_seed(seed, attempt));
    Matrix w(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) w(i, j) = rng.normal();
    }
    const double norm = w.norm();
    if (norm > 0.0) return w * (target_frobenius / norm);
  }
  throw Error(ErrorCode::DegenerateDraw, "all-zero weight draw twice");
}

}  // namespace gsmooth
