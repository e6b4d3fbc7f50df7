#pragma once

#include <Eigen/Dense>

#include <filesystem>

namespace gsmooth {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Undirected weighted graph on N >= 2 nodes with dense adjacency.
///
/// The adjacency is validated on construction (exact symmetry, nonnegative
/// weights, empty diagonal) and never modified afterwards. Invalid input is
/// rejected, not repaired.
class Graph {
public:
  int num_nodes() const { return static_cast<int>(adjacency_.rows()); }
  const Matrix& adjacency() const { return adjacency_; }
  /// d_i = sum_j A_ij.
  const Vector& degrees() const { return degrees_; }

  friend Graph build_graph(Matrix adjacency);

private:
  explicit Graph(Matrix adjacency);

  Matrix adjacency_;
  Vector degrees_;
};

/// Throws Error{AsymmetricInput | NegativeWeight | NonzeroDiagonal | TooSmall}.
Graph build_graph(Matrix adjacency);

/// L = D - A.
Matrix combinatorial_laplacian(const Graph& g);

/// I - D^{-1/2} A D^{-1/2}; throws IsolatedNode when some degree is zero.
Matrix normalized_laplacian(const Graph& g);

bool is_connected(const Graph& g);

/// Loads either a whitespace-separated `i j w` edge list (0-based, one
/// undirected edge per line, `#` comments) or a dense comma-separated
/// adjacency matrix. The format is picked from the first data line.
Graph load_graph(const std::filesystem::path& path);

}  // namespace gsmooth
