#include "gsmooth/gcnsim.hpp"

#include "gsmooth/error.hpp"
#include "gsmooth/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gsmooth {

std::string to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::Gcn: return "gcn";
    case FilterKind::Sym: return "sym";
    case FilterKind::Rw: return "rw";
    case FilterKind::Surgery: return "surgery";
    case FilterKind::Custom: return "custom";
  }
  return "unknown";
}

std::string to_string(Variant variant) {
  switch (variant) {
    case Variant::Plain: return "plain";
    case Variant::ResGcn: return "resgcn";
    case Variant::Appnp: return "appnp";
    case Variant::Gcnii: return "gcnii";
  }
  return "unknown";
}

Matrix Filter::symmetric_coordinates(const Matrix& signal) const {
  if (signal.rows() != size()) {
    throw Error(ErrorCode::DimensionMismatch, "signal rows do not match filter size");
  }
  if (!conjugated()) return signal;
  return to_symmetric.asDiagonal() * signal;
}

namespace {

constexpr double kSpectrumTolerance = 1e-9;

double compute_mu_high(const Vector& values) {
  double mu = 0.0;
  for (Eigen::Index i = 1; i < values.size(); ++i) mu = std::max(mu, std::abs(values(i)));
  return mu;
}

bool touches_minus_one(const Vector& values) {
  return values.size() > 0 && values(values.size() - 1) <= -1.0 + kSpectrumTolerance;
}

// Validates the spectrum of a symmetric filter form and assembles the Filter.
Filter finish_filter(FilterKind kind, Matrix matrix, const Matrix& symmetric, Vector to_sym,
                     Vector from_sym) {
  SpectralDecomposition d = eigendecompose(symmetric, Ordering::DescendingValue);
  const Vector& mu = d.eigenvalues();
  if (mu(0) > 1.0 + kSpectrumTolerance || mu(mu.size() - 1) <= -1.0 - kSpectrumTolerance) {
    throw Error(ErrorCode::InvalidParameter, "filter spectrum leaves (-1, 1]");
  }
  if (std::abs(mu(0) - 1.0) > kSpectrumTolerance) {
    throw Error(ErrorCode::InvalidParameter,
                "top filter eigenvalue " + std::to_string(mu(0)) + " is not 1");
  }
  if (mu.size() > 1 && std::abs(mu(0) - mu(1)) <= kSpectrumTolerance) {
    throw Error(ErrorCode::AmbiguousLowFrequency, "top filter eigenvalue is not simple");
  }
  if (d.eigenvectors().col(0).minCoeff() < -1e-10) {
    throw Error(ErrorCode::InvalidParameter, "top eigenvector has negative entries");
  }
  const double mu_high = compute_mu_high(mu);
  const bool boundary = touches_minus_one(mu);
  return Filter{kind, std::move(matrix), std::move(d), mu_high, std::move(to_sym), std::move(from_sym),
                boundary};
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in (0, 1]");
  }
}

Matrix sym_matrix(const Graph& g, double alpha) {
  const Matrix lap = normalized_laplacian(g);
  Matrix h = -alpha * lap;
  h.diagonal().array() += 1.0;
  return h;
}

}  // namespace

Filter build_filter_gcn(const Graph& g) {
  if (!is_connected(g)) throw Error(ErrorCode::NotConnected, "H_gcn needs a connected graph");
  const int n = g.num_nodes();
  const Vector scale = (g.degrees().array() + 1.0).rsqrt();
  Matrix h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double a = g.adjacency()(i, j) + (i == j ? 1.0 : 0.0);
      h(i, j) = (scale(i) * scale(j)) * a;
    }
  }
  return finish_filter(FilterKind::Gcn, h, h, {}, {});
}

Filter build_filter_sym(const Graph& g, double alpha) {
  check_alpha(alpha);
  const Matrix h = sym_matrix(g, alpha);
  return finish_filter(FilterKind::Sym, h, h, {}, {});
}

Filter build_filter_rw(const Graph& g, double alpha) {
  check_alpha(alpha);
  const Matrix symmetric = sym_matrix(g, alpha);  // throws IsolatedNode
  const Vector& deg = g.degrees();
  Matrix h = -alpha * combinatorial_laplacian(g);
  for (int i = 0; i < g.num_nodes(); ++i) h.row(i) /= deg(i);
  h.diagonal().array() += 1.0;
  const Vector ones = Vector::Ones(g.num_nodes());
  if ((h * ones - ones).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorCode::InvalidParameter, "H_rw does not fix the constant vector");
  }
  return finish_filter(FilterKind::Rw, std::move(h), symmetric, deg.array().sqrt(),
                       deg.array().rsqrt());
}

Filter build_filter_surgery(const Filter& base, double a) {
  if (base.conjugated()) {
    throw Error(ErrorCode::NonSymmetricFilter, "surgery needs a symmetric base filter");
  }
  if (!(std::abs(a) <= 1.0)) throw Error(ErrorCode::InvalidParameter, "|a| must be at most 1");
  const Matrix& basis = base.decomposition.eigenvectors();
  const int n = base.size();
  Vector values = Vector::Constant(n, a);
  values(0) = 1.0;
  const auto h1 = basis.col(0);
  Matrix h = a * Matrix::Identity(n, n) + (1.0 - a) * h1 * h1.transpose();
  h = (0.5 * (h + h.transpose())).eval();
  SpectralDecomposition d(std::move(values), basis, Ordering::DescendingValue);
  return Filter{FilterKind::Surgery, std::move(h), std::move(d), std::abs(a), {}, {},
                a <= -1.0 + kSpectrumTolerance};
}

Filter build_filter_custom(const Matrix& symmetric) {
  return finish_filter(FilterKind::Custom, symmetric, symmetric, {}, {});
}

HighPass high_pass(const Filter& filter, bool require_symmetric) {
  if (require_symmetric && filter.conjugated()) {
    throw Error(ErrorCode::NonSymmetricFilter, "filter is only symmetric after conjugation");
  }
  const Vector& mu = filter.decomposition.eigenvalues();
  const Matrix& basis = filter.decomposition.eigenvectors();
  const int n = filter.size();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Vector magnitude = mu.cwiseAbs();
  magnitude(0) = 0.0;
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return magnitude(i) < magnitude(j); });

  Vector values(n);
  Matrix vectors(n, n);
  for (int k = 0; k < n; ++k) {
    values(k) = magnitude(order[k]);
    vectors.col(k) = basis.col(order[k]);
  }
  Matrix op = vectors * values.asDiagonal() * vectors.transpose();
  op = (0.5 * (op + op.transpose())).eval();
  return HighPass{std::move(op),
                  SpectralDecomposition(std::move(values), std::move(vectors),
                                        Ordering::AscendingValue),
                  filter.conjugated()};
}

namespace {

Matrix relu(const Matrix& m) { return m.cwiseMax(0.0); }

double layer_value(const std::vector<double>& values, int k) {
  if (values.empty()) return 0.5;
  if (static_cast<int>(values.size()) <= k) {
    throw Error(ErrorCode::DimensionMismatch, "alpha/beta schedule shorter than depth");
  }
  return values[k];
}

}  // namespace

LayerTrace forward(const GcnConfig& config, const Filter& filter, const Matrix& input) {
  const int depth = config.depth;
  if (depth < 0) throw Error(ErrorCode::InvalidParameter, "depth must be nonnegative");
  if (input.rows() != filter.size()) {
    throw Error(ErrorCode::DimensionMismatch, "input rows do not match filter size");
  }
  std::vector<int> widths = config.widths;
  if (widths.empty()) widths.assign(depth + 1, static_cast<int>(input.cols()));
  if (static_cast<int>(widths.size()) != depth + 1 || widths[0] != input.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "widths must list m_0..m_K with m_0 = input columns");
  }
  if (config.variant != Variant::Plain &&
      std::any_of(widths.begin(), widths.end(), [&](int w) { return w != widths[0]; })) {
    throw Error(ErrorCode::DimensionMismatch, "skip variants need constant width");
  }
  for (const double v : config.alpha) {
    if (v < 0.0 || v > 1.0) throw Error(ErrorCode::InvalidParameter, "alpha_k must lie in [0, 1]");
  }
  for (const double v : config.beta) {
    if (v < 0.0 || v > 1.0) throw Error(ErrorCode::InvalidParameter, "beta_k must lie in [0, 1]");
  }

  const SpectralDecomposition& d = filter.decomposition;
  const Matrix& h = filter.matrix;

  LayerTrace trace;
  trace.variant = config.variant;
  trace.conjugated = filter.conjugated();
  const auto record = [&](const Matrix& f) {
    trace.eh_per_layer.push_back(high_freq_energy(d, filter.symmetric_coordinates(f)));
    trace.frobenius_norms.push_back(f.norm());
    if (config.keep_outputs) trace.outputs.push_back(f);
  };

  trace.input_energy = filter.symmetric_coordinates(input).squaredNorm();
  record(input);

  Matrix current = input;
  for (int k = 0; k < depth; ++k) {
    const bool last = k == depth - 1;
    const Matrix w = sample_weight(widths[k], widths[k + 1], config.weight_frobenius,
                                   derive_seed(config.seed, static_cast<std::uint64_t>(k)));
    trace.weight_norms.push_back(w.norm());
    Matrix next;
    switch (config.variant) {
      case Variant::Plain: {
        next = h * current * w;
        if (!last || config.relu_final) next = relu(next);
        break;
      }
      case Variant::ResGcn: {
        next = h * current * w;
        if (!last) next = relu(next);
        next += current;
        break;
      }
      case Variant::Appnp: {
        const double a = layer_value(config.alpha, k);
        next = (1.0 - a) * (h * current) + a * (input * w);
        break;
      }
      case Variant::Gcnii: {
        const double a = layer_value(config.alpha, k);
        const double b = layer_value(config.beta, k);
        Matrix mix = b * w;
        mix.diagonal().array() += 1.0 - b;
        next = ((1.0 - a) * (h * current) + a * input) * mix;
        if (!last) next = relu(next);
        break;
      }
    }
    current = std::move(next);
    record(current);
  }
  trace.final_output = std::move(current);
  return trace;
}

Matrix normalize_frobenius(const Matrix& signal) {
  const double norm = signal.norm();
  if (!(norm > 0.0)) throw Error(ErrorCode::ZeroSignal, "cannot normalize a zero signal");
  return signal / norm;
}

}  // namespace gsmooth
