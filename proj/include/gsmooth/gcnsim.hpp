#pragma once

#include "gsmooth/spectral.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gsmooth {

enum class FilterKind { Gcn, Sym, Rw, Surgery, Custom };

std::string to_string(FilterKind kind);

/// A propagation operator H together with the orthonormal eigenpairs
/// (descending, h_1 first) of its symmetric form.
///
/// For H_rw the symmetric form is D^{1/2} H_rw D^{-1/2} = H_sym; `to_symmetric`
/// then holds the diagonal of D^{1/2} and every energy must be measured on
/// D^{1/2} F. For symmetric filters `to_symmetric` is empty.
struct Filter {
  FilterKind kind;
  Matrix matrix;
  SpectralDecomposition decomposition;
  double mu_high;
  Vector to_symmetric;
  Vector from_symmetric;
  /// Some eigenvalue sits at -1 within 1e-9 (e.g. alpha = 1 on a bipartite graph).
  bool boundary = false;

  bool conjugated() const { return to_symmetric.size() > 0; }
  int size() const { return decomposition.size(); }
  /// Q F, the coordinates in which the eigenvectors are orthonormal.
  Matrix symmetric_coordinates(const Matrix& signal) const;
};

/// (D+I)^{-1/2} (A+I) (D+I)^{-1/2}. Throws NotConnected.
Filter build_filter_gcn(const Graph& g);

/// I - alpha D^{-1/2} L D^{-1/2}, alpha in (0, 1].
/// Throws IsolatedNode, AlphaOutOfRange.
Filter build_filter_sym(const Graph& g, double alpha);

/// I - alpha D^{-1} L, stored with its D^{1/2} similarity to H_sym(alpha).
Filter build_filter_rw(const Graph& g, double alpha);

/// h_1 h_1^T + a (I - h_1 h_1^T) over the eigenbasis of a symmetric base
/// filter: eigenvalue 1 on h_1 and a on every other direction. h_1 is taken
/// from the base, so a = 1 does not trip the degeneracy check.
Filter build_filter_surgery(const Filter& base, double a);

/// Any symmetric matrix satisfying the filter invariants (spectrum in
/// (-1, 1], simple top eigenvalue 1, nonnegative top eigenvector).
Filter build_filter_custom(const Matrix& symmetric);

/// Sum_{i>=2} |mu_i| h_i h_i^T with its ascending decomposition (h_1 first,
/// eigenvalue 0). For a conjugated filter the operator lives in the
/// symmetric coordinates; pass require_symmetric = true to refuse instead
/// (NonSymmetricFilter).
struct HighPass {
  Matrix matrix;
  SpectralDecomposition decomposition;
  bool conjugated = false;
};

HighPass high_pass(const Filter& filter, bool require_symmetric = false);

enum class Variant { Plain, ResGcn, Appnp, Gcnii };

std::string to_string(Variant variant);

struct GcnConfig {
  Variant variant = Variant::Plain;
  int depth = 1;
  /// m_0..m_K. Empty means every layer keeps the input width.
  std::vector<int> widths;
  double weight_frobenius = 1.0;
  /// Per-layer alpha_k / beta_k; empty means 0.5 everywhere.
  std::vector<double> alpha;
  std::vector<double> beta;
  /// Plain variant only: ReLU on layer K as well.
  bool relu_final = true;
  std::uint64_t seed = 0;
  /// Keep F^(0..K) in the trace; off keeps only the final output.
  bool keep_outputs = true;
};

struct LayerTrace {
  Variant variant = Variant::Plain;
  /// F^(0..K) in node coordinates (empty unless keep_outputs).
  std::vector<Matrix> outputs;
  Matrix final_output;
  /// E_h(F^(k)) for k = 0..K, measured in the filter's symmetric coordinates.
  std::vector<double> eh_per_layer;
  /// ||F^(k)||_F for k = 0..K (node coordinates).
  std::vector<double> frobenius_norms;
  /// ||W^(k)||_F for k = 0..K-1.
  std::vector<double> weight_norms;
  /// ||Q F^(0)||_F^2.
  double input_energy = 0.0;
  bool conjugated = false;
};

/// Runs K layers of the chosen recursion. W^(k) is
/// sample_weight(m_k, m_{k+1}, weight_frobenius, derive_seed(seed, k)).
///
///   Plain:  F' = relu(H F W)                       (last ReLU iff relu_final)
///   ResGcn: F' = relu(H F W) + F
///   Appnp:  F' = (1 - a) H F + a F0 W
///   Gcnii:  F' = relu(((1 - a) H F + a F0)(b W + (1 - b) I))
///
/// The three skip variants drop the ReLU on the last layer.
LayerTrace forward(const GcnConfig& config, const Filter& filter, const Matrix& input);

/// F / ||F||_F; throws ZeroSignal.
Matrix normalize_frobenius(const Matrix& signal);

}  // namespace gsmooth
