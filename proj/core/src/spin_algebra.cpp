#include "pfspec/spin_algebra.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace pfspec {

namespace {

Eigen::Matrix2cd pauli2(int axis) {
  const Complex I(0.0, 1.0);
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
  switch (axis) {
    case 1:
      s << 0, 1, 1, 0;
      break;
    case 2:
      s << 0, -I, I, 0;
      break;
    case 3:
      s << 1, 0, 0, -1;
      break;
    default:
      throw std::invalid_argument("pauli axis must be 1, 2 or 3");
  }
  return s;
}

SpinMatrix kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  SpinMatrix out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

}  // namespace

SpinMatrix pauli_el(int axis) { return kron2(pauli2(axis), Eigen::Matrix2cd::Identity()); }

SpinMatrix pauli_n(int axis) { return kron2(Eigen::Matrix2cd::Identity(), pauli2(axis)); }

SpinMatrix spin_dot(const CoeffVector& a, Species species) {
  SpinMatrix out = SpinMatrix::Zero();
  for (int j = 1; j <= 3; ++j)
    out += a(j - 1) * (species == Species::electron ? pauli_el(j) : pauli_n(j));
  return out;
}

SpinMatrix coupling_matrix(const CoeffVector& a) {
  SpinMatrix out = SpinMatrix::Zero();
  for (int j = 1; j <= 3; ++j) out += a(j - 1) * (pauli_el(j) * pauli_n(j));
  return out;
}

std::array<double, 4> coupling_eigenvalues(const Eigen::Vector3d& a) {
  std::array<double, 4> ev = {a(0) + a(1) - a(2), a(0) - a(1) + a(2), -a(0) + a(1) + a(2),
                              -a(0) - a(1) - a(2)};
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<int> cluster_sizes(const Eigen::VectorXd& sorted_values, double tol) {
  std::vector<int> sizes;
  for (Eigen::Index i = 0; i < sorted_values.size(); ++i) {
    if (i == 0 || sorted_values(i) - sorted_values(i - 1) > tol)
      sizes.push_back(1);
    else
      ++sizes.back();
  }
  return sizes;
}

}  // namespace pfspec
