#pragma once

#include "gsmooth/graph.hpp"

#include <complex>
#include <filesystem>
#include <vector>

namespace gsmooth {

using CVector = Eigen::VectorXcd;

enum class Ordering { AscendingValue, DescendingValue };

/// Ordered orthonormal eigenpairs of a real symmetric operator.
///
/// Column j of eigenvectors() pairs with eigenvalues()(j). Each column is
/// scaled so that its entry of largest magnitude is positive (first such
/// entry on ties).
class SpectralDecomposition {
public:
  SpectralDecomposition(Vector eigenvalues, Matrix eigenvectors, Ordering ordering);

  int size() const { return static_cast<int>(eigenvalues_.size()); }
  const Vector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }
  Ordering ordering() const { return ordering_; }

  /// max_{n=3..N} sqrt(lambda_n / lambda_{n-1}); AscendingValue only.
  /// Throws DisconnectedSpectrum if some lambda_{n-1} <= 1e-12 for n >= 3.
  double gap_ratio() const;

  /// True for directions inside a cluster of numerically equal eigenvalues
  /// (|l_i - l_j| <= 1e-9 (1 + |l_i|)); per-direction quantities there
  /// depend on the arbitrary basis the solver picked.
  std::vector<bool> basis_dependent_directions() const;

private:
  Vector eigenvalues_;
  Matrix eigenvectors_;
  Ordering ordering_;
};

/// Full decomposition of a symmetric matrix.
/// Throws NotSymmetric when max|S - S^T| > 1e-12 max|S|, ConvergenceFailure
/// if the solver does not converge.
SpectralDecomposition eigendecompose(const Matrix& op, Ordering ordering);

/// Ascending decomposition of a positive semi-definite operator with
/// eigenvalues in [-1e-10, 0] clamped to exactly 0. Throws NegativeEigenvalue
/// below that.
SpectralDecomposition psd_decompose(const Matrix& op);

/// Clamps a decomposition's tiny negative eigenvalues to zero; same errors
/// as psd_decompose. Returns the input unchanged when nothing needs fixing.
SpectralDecomposition clamp_psd(const SpectralDecomposition& d);

/// Graph Fourier transform f_hat = U^* f and its inverse.
Vector gft(const SpectralDecomposition& d, const Vector& f);
CVector gft(const SpectralDecomposition& d, const CVector& f);
Vector igft(const SpectralDecomposition& d, const Vector& f_hat);
CVector igft(const SpectralDecomposition& d, const CVector& f_hat);

/// P_n f = sum_{j<=n} f_hat(j) u_j, 1 <= n <= N.
Vector project_pw(const SpectralDecomposition& d, int n, const Vector& f);

/// E_n(f) = ||f - P_n f||_2.
double best_approx_error(const SpectralDecomposition& d, int n, const Vector& f);

/// E_h(F) = ||F||_F^2 - sum_j <f_j, h_1>^2 with h_1 the first column.
/// Evaluated as the squared norm of F - h_1 h_1^T F, which keeps full
/// relative precision when almost all energy sits on h_1.
double high_freq_energy(const SpectralDecomposition& d, const Matrix& signal);

/// E_i(F) = sum_j <f_j, h_i>^2 for 1-based direction i.
double direction_energy(const SpectralDecomposition& d, int i, const Matrix& signal);

/// All E_i at once, index 0 holding E_1.
Vector direction_energies(const SpectralDecomposition& d, const Matrix& signal);

/// Debug dump: header row, then one row per eigenpair
/// (`index,eigenvalue,v_0,...,v_{N-1}`), in decomposition order.
void write_decomposition_csv(const SpectralDecomposition& d, const std::filesystem::path& path);

}  // namespace gsmooth
