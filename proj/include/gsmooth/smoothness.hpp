#pragma once

#include "gsmooth/spectral.hpp"

#include <cstdint>

namespace gsmooth {

// Every operation below accepts the ascending decomposition of any symmetric
// positive semi-definite operator (combinatorial or normalized Laplacian, or
// a filter's high-pass companion). Eigenvalues in [-1e-10, 0) are read as 0;
// anything lower raises NegativeEigenvalue. Powers use lambda^0 = 1, also
// for lambda = 0.

namespace constants {

/// (4/pi) (r+3)^r (r+1): best-approximation (Jackson) constant.
double jackson(int r);
/// (2 sin(1/2))^{-r}: single-frequency constant.
double single_frequency(int r);
/// (2/pi)^r: lower equivalence factor between differences and L^{r/2}.
double equivalence_lower(int r);
/// 2^{-r}: lower constant relating K_r to omega_r.
double equivalence_c1(int r);

}  // namespace constants

/// T_s f = U diag(exp(i s sqrt(lambda_j))) U^* f.
CVector translate(const SpectralDecomposition& d, double s, const CVector& f);
CVector translate(const SpectralDecomposition& d, double s, const Vector& f);

/// ||(T_s - I)^r f||_2 evaluated as sqrt(sum_j (4 sin^2(s sqrt(lambda_j)/2))^r |f_hat(j)|^2).
double difference_norm(const SpectralDecomposition& d, double s, int r, const Vector& f);

/// ||L^{p/2} f||_2 for integer p >= 0.
double operator_power_norm(const SpectralDecomposition& d, int p, const Vector& f);

/// L^{p/2} f for integer p >= 0.
Vector apply_operator_power(const SpectralDecomposition& d, int p, const Vector& f);

struct ModulusResult {
  double value = 0.0;     // omega_r(f, t)
  double argmax_s = 0.0;  // s in [0, t] attaining it
};

struct ModulusOptions {
  int grid_points = 4096;
  /// Number of best grid-local maxima refined by golden section.
  int refine_peaks = 8;
};

/// omega_r(f, t) = sup_{|s| <= t} ||(T_s - I)^r f||_2 via a uniform grid on
/// [0, t] followed by golden-section refinement around the best grid peaks.
ModulusResult modulus(const SpectralDecomposition& d, int r, double t, const Vector& f,
                      const ModulusOptions& options = {});

struct KFunctionalResult {
  double value = 0.0;
  /// Weight of the stationary family g_hat_j = f_hat(j) / (1 + mu lambda_j^r).
  double minimizer_mu = 0.0;
  bool mu_is_infinite = false;
  Vector minimizer_spectrum;
};

/// K_r(f, t) = min_g ||f - g||_2 + (t/2)^r ||L^{r/2} g||_2.
///
/// Searches the one-parameter stationary family over a log-spaced mu grid
/// spanning the full numerical range of mu * lambda^r, refines the best grid
/// minima by golden section in log mu, and compares against the boundary
/// candidates mu = 0 (g = f) and mu = inf (g = kernel projection of f).
KFunctionalResult k_functional(const SpectralDecomposition& d, int r, double t, const Vector& f);

/// Independent check of k_functional: minimises the same convex objective
/// directly over complex g (real and imaginary parts as 2N real unknowns) in
/// node coordinates, with a smoothed-norm Newton continuation from
/// `starts` random points plus the two boundary candidates. Meant for
/// N <= 32.
double k_functional_oracle(const SpectralDecomposition& d, int r, double t, const Vector& f,
                           std::uint64_t seed = 0, int starts = 10);

/// W_r(F, t) = sum_j omega_r(f_j, t).
double multichannel_modulus(const SpectralDecomposition& d, int r, double t, const Matrix& signal);

/// K_r(F, t) = sum_j K_r(f_j, t); the objective separates across channels.
double multichannel_k(const SpectralDecomposition& d, int r, double t, const Matrix& signal);

}  // namespace gsmooth
