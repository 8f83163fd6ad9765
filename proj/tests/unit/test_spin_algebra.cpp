#include <doctest.h>

#include <random>

#include "pfspec/spin_algebra.hpp"

using namespace pfspec;

namespace {

// the displayed 4x4 matrices, written out entry by entry as the oracle
SpinMatrix displayed_el(int axis) {
  const Complex I(0, 1);
  SpinMatrix m = SpinMatrix::Zero();
  switch (axis) {
    case 1:
      m(0, 2) = m(1, 3) = m(2, 0) = m(3, 1) = 1;
      break;
    case 2:
      m(0, 2) = m(1, 3) = -I;
      m(2, 0) = m(3, 1) = I;
      break;
    case 3:
      m(0, 0) = m(1, 1) = 1;
      m(2, 2) = m(3, 3) = -1;
      break;
  }
  return m;
}

SpinMatrix displayed_n(int axis) {
  const Complex I(0, 1);
  SpinMatrix m = SpinMatrix::Zero();
  switch (axis) {
    case 1:
      m(0, 1) = m(1, 0) = m(2, 3) = m(3, 2) = 1;
      break;
    case 2:
      m(0, 1) = m(2, 3) = -I;
      m(1, 0) = m(3, 2) = I;
      break;
    case 3:
      m(0, 0) = m(2, 2) = 1;
      m(1, 1) = m(3, 3) = -1;
      break;
  }
  return m;
}

double max_abs(const SpinMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("pauli matrices match their displayed form") {
  for (int j = 1; j <= 3; ++j) {
    CHECK(max_abs(pauli_el(j) - displayed_el(j)) == 0.0);
    CHECK(max_abs(pauli_n(j) - displayed_n(j)) == 0.0);
  }
  CHECK(pauli_el(3).diagonal().real().isApprox(Eigen::Vector4d(1, 1, -1, -1)));
  CHECK(pauli_n(3).diagonal().real().isApprox(Eigen::Vector4d(1, -1, 1, -1)));
}

TEST_CASE("pauli matrices are hermitian, traceless, square to identity") {
  for (int j = 1; j <= 3; ++j) {
    for (const SpinMatrix& s : {pauli_el(j), pauli_n(j)}) {
      CHECK(max_abs(s - s.adjoint().eval()) == 0.0);
      CHECK(std::abs(s.trace()) == 0.0);
      CHECK(max_abs(s * s - SpinMatrix::Identity()) == 0.0);
    }
  }
}

TEST_CASE("electron and nucleus matrices commute across factors") {
  for (int j = 1; j <= 3; ++j)
    for (int k = 1; k <= 3; ++k)
      CHECK(max_abs(pauli_el(j) * pauli_n(k) - pauli_n(k) * pauli_el(j)) == 0.0);
}

TEST_CASE("axis index is validated") {
  CHECK_THROWS_AS(pauli_el(0), std::invalid_argument);
  CHECK_THROWS_AS(pauli_n(4), std::invalid_argument);
}

TEST_CASE("spin_dot reduces to a single matrix and squares to the coefficient sum") {
  CHECK(max_abs(spin_dot(CoeffVector(1, 0, 0), Species::electron) - pauli_el(1)) == 0.0);

  const SpinMatrix ones = spin_dot(CoeffVector(1, 1, 1), Species::electron);
  CHECK(max_abs(ones * ones - 3.0 * SpinMatrix::Identity()) < 1e-14);

  // complex coefficients use the plain square, not the modulus
  const SpinMatrix imag = spin_dot(CoeffVector(Complex(0, 1), 0, 0), Species::nucleus);
  CHECK(max_abs(imag * imag + SpinMatrix::Identity()) < 1e-14);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-2, 2);
  for (int trial = 0; trial < 1000; ++trial) {
    const CoeffVector a(Complex(uni(rng), uni(rng)), Complex(uni(rng), uni(rng)),
                        Complex(uni(rng), uni(rng)));
    const Complex a2 = a(0) * a(0) + a(1) * a(1) + a(2) * a(2);
    for (Species s : {Species::electron, Species::nucleus}) {
      const SpinMatrix d = spin_dot(a, s);
      CHECK(max_abs(d * d - a2 * SpinMatrix::Identity()) < 1e-12);
    }
  }
}

TEST_CASE("coupling matrix basics") {
  CHECK(max_abs(coupling_matrix(CoeffVector(0, 0, 0))) == 0.0);

  SpinMatrix expected = SpinMatrix::Zero();
  expected(0, 0) = 1;
  expected(1, 1) = -1;
  expected(2, 2) = -1;
  expected(3, 3) = 1;
  CHECK(max_abs(coupling_matrix(CoeffVector(0, 0, 1)) - expected) == 0.0);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const CoeffVector a(uni(rng), uni(rng), uni(rng));
    const SpinMatrix m = coupling_matrix(a);
    CHECK(max_abs(m - m.adjoint().eval()) < 1e-15);
    CHECK(std::abs(m.trace()) < 1e-14);
  }
  // trace vanishes for complex coefficients as well
  const SpinMatrix mc = coupling_matrix(CoeffVector(Complex(1, 2), Complex(0, -1), 3));
  CHECK(std::abs(mc.trace()) < 1e-14);
}

TEST_CASE("closed-form coupling spectrum") {
  const auto ev1 = coupling_eigenvalues(Eigen::Vector3d(1, 1, 1));
  CHECK(ev1 == std::array<double, 4>{-3, 1, 1, 1});
  const auto ev0 = coupling_eigenvalues(Eigen::Vector3d(0, 0, 0));
  CHECK(ev0 == std::array<double, 4>{0, 0, 0, 0});
  const auto ev123 = coupling_eigenvalues(Eigen::Vector3d(1, 2, 3));
  CHECK(ev123 == std::array<double, 4>{-6, 0, 2, 4});
}

TEST_CASE("closed-form spectrum matches the numerical eigendecomposition") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-5, 5);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Vector3d a(uni(rng), uni(rng), uni(rng));
    const auto predicted = coupling_eigenvalues(a);
    Eigen::SelfAdjointEigenSolver<SpinMatrix> es(coupling_matrix(a.cast<Complex>()));
    for (int i = 0; i < 4; ++i) CHECK(std::abs(predicted[i] - es.eigenvalues()(i)) < 1e-12);
  }
}

TEST_CASE("cluster sizes partition a sorted list") {
  Eigen::VectorXd values(6);
  values << 0.0, 1e-12, 2e-12, 0.5, 0.5 + 1e-11, 2.0;
  const auto sizes = cluster_sizes(values, 1e-10);
  CHECK(sizes == std::vector<int>{3, 2, 1});
  int total = 0;
  for (int s : sizes) total += s;
  CHECK(total == values.size());
}
