#include "gsmooth/graph.hpp"

#include "gsmooth/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace gsmooth {

Graph::Graph(Matrix adjacency) : adjacency_(std::move(adjacency)) {
  degrees_ = adjacency_.rowwise().sum();
}

Graph build_graph(Matrix adjacency) {
  if (adjacency.rows() != adjacency.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "adjacency must be square");
  }
  const Eigen::Index n = adjacency.rows();
  if (n < 2) {
    throw Error(ErrorCode::TooSmall, "graph needs at least 2 nodes");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (adjacency(i, i) != 0.0) {
      throw Error(ErrorCode::NonzeroDiagonal, "self-loop at node " + std::to_string(i));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = adjacency(i, j);
      if (!std::isfinite(w)) {
        throw Error(ErrorCode::InvalidParameter, "non-finite weight");
      }
      if (w < 0.0) {
        throw Error(ErrorCode::NegativeWeight,
                    "A(" + std::to_string(i) + "," + std::to_string(j) + ") < 0");
      }
      if (w != adjacency(j, i)) {
        throw Error(ErrorCode::AsymmetricInput,
                    "A(" + std::to_string(i) + "," + std::to_string(j) + ") != A(" +
                        std::to_string(j) + "," + std::to_string(i) + ")");
      }
    }
  }
  return Graph(std::move(adjacency));
}

Matrix combinatorial_laplacian(const Graph& g) {
  Matrix lap = -g.adjacency();
  lap.diagonal() = g.degrees();
  return lap;
}

Matrix normalized_laplacian(const Graph& g) {
  const Vector& d = g.degrees();
  if ((d.array() <= 0.0).any()) {
    throw Error(ErrorCode::IsolatedNode, "normalized Laplacian needs positive degrees");
  }
  const Vector inv_sqrt = d.array().rsqrt();
  Matrix lap = -(inv_sqrt.asDiagonal() * g.adjacency() * inv_sqrt.asDiagonal());
  lap.diagonal().array() += 1.0;
  // The scaling above is symmetric up to rounding; restore exact symmetry.
  return (0.5 * (lap + lap.transpose())).eval();
}

bool is_connected(const Graph& g) {
  const int n = g.num_nodes();
  const Matrix& a = g.adjacency();
  std::vector<bool> seen(n, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v = 0; v < n; ++v) {
      if (!seen[v] && a(u, v) > 0.0) {
        seen[v] = true;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == n;
}

namespace {

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

Graph parse_csv(const std::vector<std::string>& lines) {
  std::vector<std::vector<double>> rows;
  for (const auto& line : lines) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad CSV cell '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n) {
      throw Error(ErrorCode::DimensionMismatch, "CSV adjacency is not square");
    }
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rows[i][j];
  }
  return build_graph(std::move(a));
}

Graph parse_edge_list(const std::vector<std::string>& lines) {
  std::map<std::pair<long, long>, double> weights;
  long max_index = -1;
  for (const auto& line : lines) {
    std::stringstream ss(line);
    long i = 0;
    long j = 0;
    double w = 0.0;
    if (!(ss >> i >> j >> w)) {
      throw Error(ErrorCode::ParseError, "expected 'i j w' in line '" + line + "'");
    }
    std::string extra;
    if (ss >> extra) {
      throw Error(ErrorCode::ParseError, "trailing tokens in line '" + line + "'");
    }
    if (i < 0 || j < 0) {
      throw Error(ErrorCode::IndexOutOfRange, "negative node index");
    }
    for (const auto& key : {std::pair{i, j}, std::pair{j, i}}) {
      auto [it, inserted] = weights.emplace(key, w);
      if (!inserted && it->second != w) {
        throw Error(ErrorCode::AsymmetricInput, "conflicting weights for edge " +
                                                    std::to_string(i) + "-" + std::to_string(j));
      }
    }
    max_index = std::max({max_index, i, j});
  }
  const Eigen::Index n = max_index + 1;
  Matrix a = Matrix::Zero(n, n);
  for (const auto& [key, w] : weights) a(key.first, key.second) = w;
  return build_graph(std::move(a));
}

}  // namespace

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    line = strip_comment(line);
    if (!blank(line)) lines.push_back(line);
  }
  if (lines.empty()) {
    throw Error(ErrorCode::TooSmall, "empty graph file " + path.string());
  }
  if (lines.front().find(',') != std::string::npos) return parse_csv(lines);
  return parse_edge_list(lines);
}

}  // namespace gsmooth
