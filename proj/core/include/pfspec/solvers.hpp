// Iterative solvers for the sparse Hermitian fiber operators: a block
// Davidson eigensolver with diagonal preconditioning and a projected
// preconditioned conjugate gradient for the Schur-complement solves.
// The dense Eigen decomposition is kept alongside as the small-dimension
// fallback and as the oracle for the iterative path.

#pragma once

#include <functional>

#include <Eigen/Dense>

#include "pfspec/spin_algebra.hpp"

namespace pfspec {

struct LinearOperator {
  std::size_t dim = 0;
  std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)> apply;
  Eigen::VectorXd diagonal;  // real diagonal used by the preconditioners
};

struct DavidsonOptions {
  int max_iterations = 400;
  int max_subspace = 0;  // 0: choose from the block size
  unsigned long seed = 12345;
  double tolerance = 1e-9;  // per-pair residual 2-norm
  Eigen::MatrixXcd initial;  // optional starting block (columns)
};

struct EigenSolveResult {
  Eigen::VectorXd values;     // ascending
  Eigen::MatrixXcd vectors;   // matching columns
  Eigen::VectorXd residuals;  // ||A v - lambda v||
  int iterations = 0;
  bool converged = false;
};

EigenSolveResult davidson_lowest(const LinearOperator& op, int n_pairs,
                                 const DavidsonOptions& options = {});

EigenSolveResult dense_lowest(const Eigen::MatrixXcd& matrix, int n_pairs);

struct PcgResult {
  Eigen::VectorXcd x;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Solve A x = b for Hermitian positive definite A.  `project`, when given,
// is applied to keep all iterates inside an invariant subspace of A.
PcgResult pcg_solve(const LinearOperator& op, const Eigen::VectorXcd& rhs, double tol,
                    int max_iterations,
                    const std::function<void(Eigen::VectorXcd&)>& project = {});

}  // namespace pfspec
