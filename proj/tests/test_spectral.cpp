#include "doctest.h"
#include "oracles.hpp"

#include "gsmooth/error.hpp"
#include "gsmooth/spectral.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace gsmooth;

namespace {

SpectralDecomposition k2() {
  Matrix a(2, 2);
  a << 0, 1, 1, 0;
  return psd_decompose(combinatorial_laplacian(build_graph(a)));
}

Vector vec(std::initializer_list<double> v) {
  Vector out(v.size());
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("K2 decomposition in closed form") {
  const auto d = k2();
  CHECK(d.eigenvalues()(0) == 0.0);
  CHECK(d.eigenvalues()(1) == doctest::Approx(2.0));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(d.eigenvectors()(0, 0) == doctest::Approx(s));
  CHECK(d.eigenvectors()(1, 0) == doctest::Approx(s));
  // Second vector (1,-1)/sqrt2 up to the tie rule: first largest entry positive.
  CHECK(d.eigenvectors()(0, 1) == doctest::Approx(s));
  CHECK(d.eigenvectors()(1, 1) == doctest::Approx(-s));
}

TEST_CASE("identity and K3 spectra") {
  const auto id = eigendecompose(Matrix::Identity(4, 4), Ordering::AscendingValue);
  CHECK((id.eigenvalues().array() - 1.0).abs().maxCoeff() <= 1e-14);
  const auto k3 = psd_decompose(combinatorial_laplacian(build_graph(oracle::complete_adjacency(3))));
  CHECK(k3.eigenvalues()(0) == 0.0);
  CHECK(k3.eigenvalues()(1) == doctest::Approx(3.0));
  CHECK(k3.eigenvalues()(2) == doctest::Approx(3.0));
  const auto flags = k3.basis_dependent_directions();
  CHECK_FALSE(flags[0]);
  CHECK(flags[1]);
  CHECK(flags[2]);
}

TEST_CASE("asymmetric operators are refused") {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 1) = 1e-3;
  CHECK_THROWS_AS(eigendecompose(m, Ordering::AscendingValue), Error);
  Matrix neg = -Matrix::Identity(2, 2);
  try {
    psd_decompose(neg);
    FAIL("expected NegativeEigenvalue");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeEigenvalue);
  }
}

TEST_CASE("decomposition invariants agree with an independent Jacobi solver") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial * 2;
    const Matrix lap = combinatorial_laplacian(build_graph(oracle::random_adjacency(rng, n)));
    const auto d = psd_decompose(lap);
    const Matrix& v = d.eigenvectors();
    CHECK((v.transpose() * v - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    for (int j = 0; j < n; ++j) {
      CHECK((lap * v.col(j) - d.eigenvalues()(j) * v.col(j)).norm() <=
            1e-8 * (1.0 + std::abs(d.eigenvalues()(j))));
      // Sign rule: the largest-magnitude entry is positive.
      Eigen::Index pivot;
      v.col(j).cwiseAbs().maxCoeff(&pivot);
      CHECK(v(pivot, j) > 0.0);
    }
    const double scale = 1.0 + d.eigenvalues().cwiseAbs().maxCoeff();
    CHECK((v * d.eigenvalues().asDiagonal() * v.transpose() - lap).cwiseAbs().maxCoeff() <= 1e-8 * scale);
    const Vector ref = oracle::jacobi(lap).values;
    CHECK((ref - d.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    CHECK(d.eigenvalues()(0) == 0.0);
    if (n >= 2) CHECK(d.eigenvalues()(1) > 1e-10);
  }
}

TEST_CASE("descending ordering reverses the pairs") {
  Rng rng(4);
  const Matrix lap = combinatorial_laplacian(build_graph(oracle::random_adjacency(rng, 6)));
  const auto up = eigendecompose(lap, Ordering::AscendingValue);
  const auto down = eigendecompose(lap, Ordering::DescendingValue);
  for (int j = 0; j < 6; ++j) CHECK(down.eigenvalues()(j) == up.eigenvalues()(5 - j));
}

TEST_CASE("GFT closed forms, Parseval and reconstruction") {
  const auto d = k2();
  const Vector f_hat = gft(d, vec({1, 0}));
  CHECK(f_hat(0) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(std::abs(f_hat(1)) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(gft(d, Vector(d.eigenvectors().col(0))).isApprox(vec({1, 0})));
  CHECK(gft(d, Vector(Vector::Zero(2))).isZero());
  CHECK_THROWS_AS(gft(d, Vector(Vector::Zero(3))), Error);

  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial;
    const auto dd = psd_decompose(combinatorial_laplacian(build_graph(oracle::random_adjacency(rng, n))));
    const Vector f = oracle::random_vector(rng, n);
    CHECK(std::abs(gft(dd, f).norm() - f.norm()) <= 1e-10 * f.norm());
    CHECK((igft(dd, gft(dd, f)) - f).norm() <= 1e-10 * f.norm());
    const CVector fc = f.cast<std::complex<double>>() * std::complex<double>(0.3, -1.2);
    CHECK((igft(dd, gft(dd, fc)) - fc).norm() <= 1e-10 * fc.norm());
  }
}

TEST_CASE("Paley-Wiener projections and best approximation") {
  const auto d = k2();
  CHECK(project_pw(d, 1, vec({1, 0})).isApprox(vec({0.5, 0.5})));
  CHECK(project_pw(d, 2, vec({1, 0})).isApprox(vec({1, 0})));
  CHECK(project_pw(d, 1, Vector(d.eigenvectors().col(1))).norm() <= 1e-15);
  CHECK(best_approx_error(d, 1, vec({1, 0})) == doctest::Approx(std::sqrt(0.5)));
  CHECK(best_approx_error(d, 2, vec({1, 0})) == 0.0);
  CHECK_THROWS_AS(project_pw(d, 0, vec({1, 0})), Error);
  CHECK_THROWS_AS(best_approx_error(d, 3, vec({1, 0})), Error);

  Rng rng(12);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + trial % 7;
    const auto dd = psd_decompose(combinatorial_laplacian(build_graph(oracle::random_adjacency(rng, n))));
    const Vector f = oracle::random_vector(rng, n);
    CHECK(best_approx_error(dd, 1, Vector::Constant(n, 2.5)) <= 1e-12);
    double previous = f.norm() + 1.0;
    for (int k = 1; k <= n; ++k) {
      const Vector p = project_pw(dd, k, f);
      CHECK((project_pw(dd, k, p) - p).norm() <= 1e-12 * (1 + f.norm()));
      CHECK(p.norm() <= f.norm() + 1e-12);
      // Least-squares fit on the first k eigenvectors as an independent minimiser.
      const Matrix basis = dd.eigenvectors().leftCols(k);
      const Vector coef = basis.colPivHouseholderQr().solve(f);
      const double e = best_approx_error(dd, k, f);
      CHECK(std::abs(e - (f - basis * coef).norm()) <= 1e-10 * (1 + f.norm()));
      CHECK(e <= previous + 1e-12);
      previous = e;
    }
    CHECK(best_approx_error(dd, n, f) <= 1e-12);
  }
}

TEST_CASE("frequency energies") {
  const auto d = k2();
  CHECK(high_freq_energy(d, Matrix(d.eigenvectors().col(0))) <= 1e-12);
  CHECK(high_freq_energy(d, Matrix(vec({1, 0}))) == doctest::Approx(0.5));

  Rng rng(2);
  const auto dd = psd_decompose(combinatorial_laplacian(build_graph(oracle::random_adjacency(rng, 9))));
  Matrix two(9, 2);
  two.col(0) = dd.eigenvectors().col(1);
  two.col(1) = dd.eigenvectors().col(2);
  CHECK(high_freq_energy(dd, two) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(direction_energy(dd, 1, Matrix(dd.eigenvectors().col(0))) == doctest::Approx(1.0));
  CHECK(direction_energy(dd, 2, Matrix(dd.eigenvectors().col(0))) <= 1e-20);
  CHECK_THROWS_AS(direction_energy(dd, 10, two), Error);

  Matrix f = oracle::random_matrix(rng, 9, 4);
  const Vector e = direction_energies(dd, f);
  CHECK(std::abs(e.sum() - f.squaredNorm()) <= 1e-10 * f.squaredNorm());
  CHECK(high_freq_energy(dd, f) == doctest::Approx(e.tail(8).sum()).epsilon(1e-12));
  f /= f.norm();
  CHECK(high_freq_energy(dd, f) == doctest::Approx(1.0 - direction_energy(dd, 1, f)).epsilon(1e-12));
}

TEST_CASE("residual-form energy keeps relative precision near the low-frequency vector") {
  Rng rng(6);
  const auto d = psd_decompose(combinatorial_laplacian(build_graph(oracle::random_adjacency(rng, 12))));
  const double tiny = 1e-12;
  const Matrix f = d.eigenvectors().col(0) + tiny * d.eigenvectors().col(5);
  CHECK(high_freq_energy(d, f) == doctest::Approx(tiny * tiny).epsilon(1e-6));
}

TEST_CASE("gap ratio") {
  const auto path = psd_decompose(combinatorial_laplacian(build_graph(oracle::path_adjacency(4))));
  double expected = 0.0;
  for (int n = 2; n < 4; ++n) {
    expected = std::max(expected, std::sqrt(path.eigenvalues()(n) / path.eigenvalues()(n - 1)));
  }
  CHECK(path.gap_ratio() == doctest::Approx(expected));
  CHECK_THROWS_AS(k2().gap_ratio(), Error);
  Matrix blocks = Matrix::Zero(4, 4);
  blocks(0, 1) = blocks(1, 0) = 1.0;
  blocks(2, 3) = blocks(3, 2) = 1.0;
  try {
    psd_decompose(combinatorial_laplacian(build_graph(blocks))).gap_ratio();
    FAIL("expected DisconnectedSpectrum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DisconnectedSpectrum);
  }
}

TEST_CASE("decomposition CSV dump") {
  const auto path = std::filesystem::temp_directory_path() / "gsmooth_k2_eigs.csv";
  write_decomposition_csv(k2(), path);
  std::ifstream in(path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "index,eigenvalue,v_0,v_1");
  CHECK(row.rfind("0,0,", 0) == 0);
}
