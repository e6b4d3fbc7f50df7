#include "gsmooth/smoothness.hpp"

#include "golden.hpp"
#include "gsmooth/error.hpp"
#include "gsmooth/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace gsmooth {

namespace constants {

double jackson(int r) { return 4.0 / std::numbers::pi * std::pow(r + 3.0, r) * (r + 1.0); }
double single_frequency(int r) { return std::pow(2.0 * std::sin(0.5), -r); }
double equivalence_lower(int r) { return std::pow(2.0 / std::numbers::pi, r); }
double equivalence_c1(int r) { return std::pow(2.0, -r); }

}  // namespace constants

namespace {

constexpr double kPsdTolerance = 1e-10;

void check_order(int r) {
  if (r < 0) throw Error(ErrorCode::InvalidParameter, "order r must be nonnegative");
}

// Clamped eigenvalues of a PSD decomposition.
Vector psd_eigenvalues(const SpectralDecomposition& d) {
  if (d.ordering() != Ordering::AscendingValue) {
    throw Error(ErrorCode::InvalidParameter, "smoothness operations need ascending ordering");
  }
  Vector values = d.eigenvalues();
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    if (values(j) < -kPsdTolerance) {
      throw Error(ErrorCode::NegativeEigenvalue,
                  "eigenvalue " + std::to_string(values(j)) + " below -1e-10");
    }
    values(j) = std::max(values(j), 0.0);
  }
  return values;
}

// lambda^p with 0^0 = 1.
double int_power(double x, int p) { return p == 0 ? 1.0 : std::pow(x, p); }

// s -> ||(T_s - I)^r f||_2 from |f_hat|^2 and sqrt(lambda)/2.
class DifferenceProfile {
public:
  DifferenceProfile(const SpectralDecomposition& d, int r, const Vector& f) : r_(r) {
    const Vector values = psd_eigenvalues(d);
    half_freq_ = values.array().sqrt() * 0.5;
    weights_ = gft(d, f).array().square();
  }

  double operator()(double s) const {
    if (r_ == 0) return std::sqrt(weights_.sum());
    double total = 0.0;
    for (Eigen::Index j = 0; j < weights_.size(); ++j) {
      const double sine = std::sin(s * half_freq_(j));
      total += weights_(j) * int_power(4.0 * sine * sine, r_);
    }
    return std::sqrt(total);
  }

private:
  int r_;
  Vector half_freq_;
  Vector weights_;
};

}  // namespace

CVector translate(const SpectralDecomposition& d, double s, const CVector& f) {
  const Vector values = psd_eigenvalues(d);
  CVector f_hat = gft(d, f);
  for (Eigen::Index j = 0; j < f_hat.size(); ++j) {
    f_hat(j) *= std::polar(1.0, s * std::sqrt(values(j)));
  }
  return igft(d, f_hat);
}

CVector translate(const SpectralDecomposition& d, double s, const Vector& f) {
  return translate(d, s, CVector(f.cast<std::complex<double>>()));
}

double difference_norm(const SpectralDecomposition& d, double s, int r, const Vector& f) {
  check_order(r);
  return DifferenceProfile(d, r, f)(s);
}

double operator_power_norm(const SpectralDecomposition& d, int p, const Vector& f) {
  check_order(p);
  const Vector values = psd_eigenvalues(d);
  const Vector f_hat = gft(d, f);
  double total = 0.0;
  for (Eigen::Index j = 0; j < f_hat.size(); ++j) {
    total += int_power(values(j), p) * f_hat(j) * f_hat(j);
  }
  return std::sqrt(total);
}

Vector apply_operator_power(const SpectralDecomposition& d, int p, const Vector& f) {
  check_order(p);
  const Vector values = psd_eigenvalues(d);
  Vector f_hat = gft(d, f);
  for (Eigen::Index j = 0; j < f_hat.size(); ++j) {
    f_hat(j) *= p == 0 ? 1.0 : std::pow(values(j), 0.5 * p);
  }
  return igft(d, f_hat);
}

ModulusResult modulus(const SpectralDecomposition& d, int r, double t, const Vector& f,
                      const ModulusOptions& options) {
  check_order(r);
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidParameter, "modulus needs t > 0");
  if (options.grid_points < 2) throw Error(ErrorCode::InvalidParameter, "grid needs >= 2 points");

  const DifferenceProfile profile(d, r, f);
  if (r == 0) return {profile(t), t};

  const int g = options.grid_points;
  const double step = t / (g - 1);
  std::vector<double> grid(g);
  for (int k = 0; k < g; ++k) grid[k] = profile(k == g - 1 ? t : k * step);

  std::vector<int> peaks;
  for (int k = 0; k < g; ++k) {
    const bool left_ok = k == 0 || grid[k] >= grid[k - 1];
    const bool right_ok = k == g - 1 || grid[k] >= grid[k + 1];
    if (left_ok && right_ok) peaks.push_back(k);
  }
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return grid[a] > grid[b]; });
  if (static_cast<int>(peaks.size()) > options.refine_peaks) peaks.resize(options.refine_peaks);

  ModulusResult best{grid[peaks.front()], peaks.front() == g - 1 ? t : peaks.front() * step};
  const auto negated = [&](double s) { return -profile(s); };
  for (int k : peaks) {
    const double lo = std::max(0.0, (k - 1) * step);
    const double hi = std::min(t, (k + 1) * step);
    const auto refined = detail::golden_section_minimize(negated, lo, hi, 1e-12 * t);
    if (-refined.value > best.value) best = {-refined.value, refined.x};
  }
  return best;
}

namespace {

// phi(mu) for the stationary family g_hat_j = f_hat_j / (1 + mu p_j).
struct FamilyObjective {
  Vector weights;  // |f_hat_j|^2
  Vector powers;   // lambda_j^r
  double penalty;  // (t/2)^r

  double operator()(double mu) const {
    double fit = 0.0;
    double smooth = 0.0;
    for (Eigen::Index j = 0; j < weights.size(); ++j) {
      const double denom = 1.0 + mu * powers(j);
      const double shrink = mu * powers(j) / denom;
      fit += weights(j) * shrink * shrink;
      smooth += weights(j) * powers(j) / (denom * denom);
    }
    return std::sqrt(fit) + penalty * std::sqrt(smooth);
  }

  double at_zero() const { return penalty * std::sqrt(weights.dot(powers)); }

  double at_infinity() const {
    double fit = 0.0;
    for (Eigen::Index j = 0; j < weights.size(); ++j) {
      if (powers(j) > 0.0) fit += weights(j);
    }
    return std::sqrt(fit);
  }
};

}  // namespace

KFunctionalResult k_functional(const SpectralDecomposition& d, int r, double t, const Vector& f) {
  check_order(r);
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidParameter, "K-functional needs t >= 0");

  const Vector values = psd_eigenvalues(d);
  const Vector f_hat = gft(d, f);
  FamilyObjective phi;
  phi.weights = f_hat.array().square();
  phi.powers = values.unaryExpr([r](double x) { return int_power(x, r); });
  phi.penalty = int_power(t / 2.0, r);

  const auto spectrum_at = [&](double mu) {
    Vector g(f_hat.size());
    for (Eigen::Index j = 0; j < g.size(); ++j) g(j) = f_hat(j) / (1.0 + mu * phi.powers(j));
    return g;
  };

  KFunctionalResult result;
  result.value = phi.at_zero();
  result.minimizer_mu = 0.0;
  const double at_inf = phi.at_infinity();
  if (at_inf < result.value) {
    result.value = at_inf;
    result.mu_is_infinite = true;
  }

  double max_power = 0.0;
  double min_positive = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < phi.powers.size(); ++j) {
    if (phi.powers(j) > 0.0) {
      max_power = std::max(max_power, phi.powers(j));
      min_positive = std::min(min_positive, phi.powers(j));
    }
  }

  if (max_power > 0.0 && result.value > 0.0) {
    // mu * p spans [1e-12, 1e12] for every positive p on this range.
    const double log_lo = std::log(1e-12 / max_power);
    const double log_hi = std::log(1e12 / min_positive);
    const int per_decade = 40;
    const int count = std::max(2, static_cast<int>((log_hi - log_lo) / std::log(10.0) * per_decade));
    const double step = (log_hi - log_lo) / (count - 1);
    std::vector<double> grid(count);
    for (int k = 0; k < count; ++k) grid[k] = phi(std::exp(log_lo + k * step));

    std::vector<int> valleys;
    for (int k = 0; k < count; ++k) {
      const bool left_ok = k == 0 || grid[k] <= grid[k - 1];
      const bool right_ok = k == count - 1 || grid[k] <= grid[k + 1];
      if (left_ok && right_ok) valleys.push_back(k);
    }
    std::sort(valleys.begin(), valleys.end(), [&](int a, int b) { return grid[a] < grid[b]; });
    if (valleys.size() > 4) valleys.resize(4);

    const auto in_log = [&](double log_mu) { return phi(std::exp(log_mu)); };
    for (int k : valleys) {
      const double lo = log_lo + std::max(0, k - 1) * step;
      const double hi = log_lo + std::min(count - 1, k + 1) * step;
      const auto refined = detail::golden_section_minimize(in_log, lo, hi, 1e-10);
      double candidate_mu = std::exp(refined.x);
      double candidate = refined.value;
      if (grid[k] < candidate) {
        candidate = grid[k];
        candidate_mu = std::exp(log_lo + k * step);
      }
      if (candidate < result.value) {
        result.value = candidate;
        result.minimizer_mu = candidate_mu;
        result.mu_is_infinite = false;
      }
    }
  }

  if (result.mu_is_infinite) {
    result.minimizer_mu = std::numeric_limits<double>::infinity();
    result.minimizer_spectrum = f_hat;
    for (Eigen::Index j = 0; j < f_hat.size(); ++j) {
      if (phi.powers(j) > 0.0) result.minimizer_spectrum(j) = 0.0;
    }
  } else {
    result.minimizer_spectrum = spectrum_at(result.minimizer_mu);
  }
  return result;
}

namespace {

// Smoothed objective sqrt(|a - x|^2 + delta^2) + c sqrt(x^T Q x + delta^2)
// over x = (Re g, Im g) in node coordinates.
struct SmoothedObjective {
  const Vector& a;
  const Matrix& q;
  double c;
  double delta;

  double value(const Vector& x) const {
    return std::sqrt((a - x).squaredNorm() + delta * delta) +
           c * std::sqrt(x.dot(q * x) + delta * delta);
  }

  void derivatives(const Vector& x, Vector& grad, Matrix& hess) const {
    const Vector diff = x - a;
    const Vector qx = q * x;
    const double s1 = std::sqrt(diff.squaredNorm() + delta * delta);
    const double s2 = std::sqrt(x.dot(qx) + delta * delta);
    grad = diff / s1 + c * qx / s2;
    hess = Matrix::Identity(x.size(), x.size()) / s1 - diff * diff.transpose() / (s1 * s1 * s1);
    hess += c * (q / s2 - qx * qx.transpose() / (s2 * s2 * s2));
  }
};

double exact_objective(const Vector& a, const Matrix& q, double c, const Vector& x) {
  return (a - x).norm() + c * std::sqrt(std::max(0.0, x.dot(q * x)));
}

Vector newton_continuation(const Vector& a, const Matrix& q, double c, Vector x, double scale) {
  const Eigen::Index n = x.size();
  Vector grad;
  Matrix hess;
  for (double delta = scale; delta >= 1e-12 * scale; delta *= 0.1) {
    const SmoothedObjective obj{a, q, c, delta};
    for (int it = 0; it < 100; ++it) {
      obj.derivatives(x, grad, hess);
      if (grad.norm() <= 1e-14 * (1.0 + c)) break;
      const double ridge = 1e-14 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff());
      hess.diagonal().array() += ridge;
      const Vector step = -hess.ldlt().solve(grad);
      const double slope = grad.dot(step);
      const double f0 = obj.value(x);
      double alpha = 1.0;
      bool accepted = false;
      Vector trial(n);
      if (slope < 0.0) {
        for (int ls = 0; ls < 60; ++ls) {
          trial = x + alpha * step;
          if (obj.value(trial) <= f0 + 1e-4 * alpha * slope) {
            accepted = true;
            break;
          }
          alpha *= 0.5;
        }
      }
      if (!accepted) break;
      const double moved = (trial - x).norm();
      x = trial;
      if (moved <= 1e-15 * (1.0 + x.norm())) break;
    }
  }
  return x;
}

}  // namespace

double k_functional_oracle(const SpectralDecomposition& d, int r, double t, const Vector& f,
                           std::uint64_t seed, int starts) {
  check_order(r);
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidParameter, "K-functional needs t >= 0");
  const Vector values = psd_eigenvalues(d);
  if (f.size() != d.size()) throw Error(ErrorCode::DimensionMismatch, "signal length mismatch");

  const Eigen::Index n = f.size();
  const Matrix& v = d.eigenvectors();
  const Vector powers = values.unaryExpr([r](double x) { return int_power(x, r); });
  const Matrix q_real = v * powers.asDiagonal() * v.transpose();

  Matrix q = Matrix::Zero(2 * n, 2 * n);
  q.topLeftCorner(n, n) = q_real;
  q.bottomRightCorner(n, n) = q_real;
  Vector a = Vector::Zero(2 * n);
  a.head(n) = f;
  const double c = int_power(t / 2.0, r);
  const double f_norm = f.norm();
  if (f_norm == 0.0) return 0.0;

  // Boundary candidates: g = f and g = projection of f on the kernel of Q.
  Vector kernel_part = Vector::Zero(2 * n);
  {
    const Vector f_hat = v.transpose() * f;
    Vector kept = Vector::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (powers(j) == 0.0) kept(j) = f_hat(j);
    }
    kernel_part.head(n) = v * kept;
  }
  std::vector<Vector> initial = {a, kernel_part};
  Rng rng(derive_seed(seed, 0x4b));
  for (int s = 0; s < starts; ++s) {
    Vector x(2 * n);
    for (Eigen::Index i = 0; i < 2 * n; ++i) x(i) = rng.normal() * f_norm / std::sqrt(double(n));
    initial.push_back(std::move(x));
  }

  double best = std::min(exact_objective(a, q, c, a), exact_objective(a, q, c, kernel_part));
  for (const Vector& x0 : initial) {
    const Vector x = newton_continuation(a, q, c, x0, f_norm);
    best = std::min(best, exact_objective(a, q, c, x));
  }
  return best;
}

double multichannel_modulus(const SpectralDecomposition& d, int r, double t, const Matrix& signal) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < signal.cols(); ++j) total += modulus(d, r, t, signal.col(j)).value;
  return total;
}

double multichannel_k(const SpectralDecomposition& d, int r, double t, const Matrix& signal) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < signal.cols(); ++j) total += k_functional(d, r, t, signal.col(j)).value;
  return total;
}

}  // namespace gsmooth
