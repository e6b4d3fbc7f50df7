#include "gsmooth/spectral.hpp"

#include "gsmooth/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <string>

namespace gsmooth {

namespace {

constexpr double kPsdTolerance = 1e-10;

void apply_sign_convention(Matrix& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      const double mag = std::abs(vectors(i, j));
      if (mag > best) {
        best = mag;
        pivot = i;
      }
    }
    if (vectors(pivot, j) < 0.0) vectors.col(j) *= -1.0;
  }
}

void check_length(const SpectralDecomposition& d, Eigen::Index length) {
  if (length != d.size()) {
    throw Error(ErrorCode::DimensionMismatch, "signal length " + std::to_string(length) +
                                                  " does not match N = " + std::to_string(d.size()));
  }
}

}  // namespace

SpectralDecomposition::SpectralDecomposition(Vector eigenvalues, Matrix eigenvectors,
                                             Ordering ordering)
    : eigenvalues_(std::move(eigenvalues)),
      eigenvectors_(std::move(eigenvectors)),
      ordering_(ordering) {
  if (eigenvectors_.rows() != eigenvalues_.size() || eigenvectors_.cols() != eigenvalues_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "eigenvector matrix must be N x N");
  }
}

double SpectralDecomposition::gap_ratio() const {
  if (ordering_ != Ordering::AscendingValue) {
    throw Error(ErrorCode::InvalidParameter, "gap ratio needs ascending ordering");
  }
  if (size() < 3) {
    throw Error(ErrorCode::TooSmall, "gap ratio needs N >= 3");
  }
  double ratio = 0.0;
  for (int n = 2; n < size(); ++n) {
    const double prev = eigenvalues_(n - 1);
    if (prev <= 1e-12) {
      throw Error(ErrorCode::DisconnectedSpectrum,
                  "lambda_" + std::to_string(n) + " <= 1e-12; graph looks disconnected");
    }
    ratio = std::max(ratio, std::sqrt(eigenvalues_(n) / prev));
  }
  return ratio;
}

std::vector<bool> SpectralDecomposition::basis_dependent_directions() const {
  std::vector<bool> flags(size(), false);
  for (int i = 0; i + 1 < size(); ++i) {
    const double a = eigenvalues_(i);
    const double b = eigenvalues_(i + 1);
    if (std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a))) {
      flags[i] = true;
      flags[i + 1] = true;
    }
  }
  return flags;
}

SpectralDecomposition eigendecompose(const Matrix& op, Ordering ordering) {
  if (op.rows() != op.cols() || op.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "operator must be square and non-empty");
  }
  const double scale = op.cwiseAbs().maxCoeff();
  const double asym = (op - op.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw Error(ErrorCode::NotSymmetric, "max |S - S^T| = " + std::to_string(asym));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "symmetric eigensolver did not converge");
  }
  Vector values = solver.eigenvalues();
  Matrix vectors = solver.eigenvectors();
  if (ordering == Ordering::DescendingValue) {
    values = values.reverse().eval();
    vectors = vectors.rowwise().reverse().eval();
  }
  apply_sign_convention(vectors);
  return SpectralDecomposition(std::move(values), std::move(vectors), ordering);
}

SpectralDecomposition clamp_psd(const SpectralDecomposition& d) {
  if (d.ordering() != Ordering::AscendingValue) {
    throw Error(ErrorCode::InvalidParameter, "PSD clamp expects ascending ordering");
  }
  Vector values = d.eigenvalues();
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    if (values(j) < -kPsdTolerance) {
      throw Error(ErrorCode::NegativeEigenvalue,
                  "eigenvalue " + std::to_string(values(j)) + " below -1e-10");
    }
    if (std::abs(values(j)) <= kPsdTolerance) values(j) = 0.0;
  }
  return SpectralDecomposition(std::move(values), d.eigenvectors(), Ordering::AscendingValue);
}

SpectralDecomposition psd_decompose(const Matrix& op) {
  return clamp_psd(eigendecompose(op, Ordering::AscendingValue));
}

Vector gft(const SpectralDecomposition& d, const Vector& f) {
  check_length(d, f.size());
  return d.eigenvectors().transpose() * f;
}

CVector gft(const SpectralDecomposition& d, const CVector& f) {
  check_length(d, f.size());
  return d.eigenvectors().transpose().cast<std::complex<double>>() * f;
}

Vector igft(const SpectralDecomposition& d, const Vector& f_hat) {
  check_length(d, f_hat.size());
  return d.eigenvectors() * f_hat;
}

CVector igft(const SpectralDecomposition& d, const CVector& f_hat) {
  check_length(d, f_hat.size());
  return d.eigenvectors().cast<std::complex<double>>() * f_hat;
}

Vector project_pw(const SpectralDecomposition& d, int n, const Vector& f) {
  if (n < 1 || n > d.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "n must be in [1, N]");
  }
  check_length(d, f.size());
  const auto basis = d.eigenvectors().leftCols(n);
  return basis * (basis.transpose() * f);
}

double best_approx_error(const SpectralDecomposition& d, int n, const Vector& f) {
  if (n < 1 || n > d.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "n must be in [1, N]");
  }
  const Vector f_hat = gft(d, f);
  return f_hat.tail(d.size() - n).norm();
}

double high_freq_energy(const SpectralDecomposition& d, const Matrix& signal) {
  check_length(d, signal.rows());
  const auto h1 = d.eigenvectors().col(0);
  const Eigen::RowVectorXd coeffs = h1.transpose() * signal;
  return (signal - h1 * coeffs).squaredNorm();
}

double direction_energy(const SpectralDecomposition& d, int i, const Matrix& signal) {
  if (i < 1 || i > d.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "direction must be in [1, N]");
  }
  check_length(d, signal.rows());
  return (d.eigenvectors().col(i - 1).transpose() * signal).squaredNorm();
}

Vector direction_energies(const SpectralDecomposition& d, const Matrix& signal) {
  check_length(d, signal.rows());
  const Matrix coeffs = d.eigenvectors().transpose() * signal;
  return coeffs.rowwise().squaredNorm();
}

void write_decomposition_csv(const SpectralDecomposition& d, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "index,eigenvalue";
  for (int i = 0; i < d.size(); ++i) out << ",v_" << i;
  out << '\n';
  for (int j = 0; j < d.size(); ++j) {
    out << j << ',' << d.eigenvalues()(j);
    for (int i = 0; i < d.size(); ++i) out << ',' << d.eigenvectors()(i, j);
    out << '\n';
  }
}

}  // namespace gsmooth
