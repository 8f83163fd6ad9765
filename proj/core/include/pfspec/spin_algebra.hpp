// Exact complex 4x4 algebra for the two spin-1/2 degrees of freedom:
// Pauli matrices acting on the electron and nucleus tensor factors,
// spin-vector contractions, and the diagonal spin-spin coupling matrix
// together with its closed-form spectrum.

#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace pfspec {

using Complex = std::complex<double>;
using SpinMatrix = Eigen::Matrix4cd;
using CoeffVector = Eigen::Vector3cd;

enum class Species { electron, nucleus };

// Pauli matrix of the electron (resp. nucleus) factor, axis in {1,2,3}.
// Basis order: |e+ n+>, |e+ n->, |e- n+>, |e- n->.
SpinMatrix pauli_el(int axis);
SpinMatrix pauli_n(int axis);

// sum_j a_j sigma_j on the chosen factor.  For any complex a,
// spin_dot(a,s)^2 = (a1^2 + a2^2 + a3^2) * Id (complex squares, not moduli).
SpinMatrix spin_dot(const CoeffVector& a, Species species);

// sum_j a_j sigma^el_j sigma^n_j
SpinMatrix coupling_matrix(const CoeffVector& a);

// Spectrum of coupling_matrix for real coefficients, sorted ascending:
// {a1+a2-a3, a1-a2+a3, -a1+a2+a3, -a1-a2-a3}.
std::array<double, 4> coupling_eigenvalues(const Eigen::Vector3d& a);

// Multiplicity pattern of a sorted eigenvalue list at the given tolerance.
std::vector<int> cluster_sizes(const Eigen::VectorXd& sorted_values, double tol);

}  // namespace pfspec
