#include "pfspec/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pfspec {

namespace {

// twice-iterated modified Gram-Schmidt of `block` against basis and itself;
// returns the number of columns kept (rank-deficient ones are dropped)
int orthonormalize_against(const Eigen::MatrixXcd& basis, Eigen::MatrixXcd& block) {
  const double drop_tol = 1e-10;
  int kept = 0;
  for (int c = 0; c < block.cols(); ++c) {
    Eigen::VectorXcd v = block.col(c);
    for (int pass = 0; pass < 2; ++pass) {
      if (basis.cols() > 0) v -= basis * (basis.adjoint() * v);
      for (int k = 0; k < kept; ++k) v -= block.col(k) * block.col(k).dot(v);
    }
    const double norm = v.norm();
    if (norm < drop_tol) continue;
    block.col(kept) = v / norm;
    ++kept;
  }
  return kept;
}

Eigen::MatrixXcd random_block(std::size_t dim, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd block(dim, cols);
  for (int c = 0; c < cols; ++c)
    for (std::size_t i = 0; i < dim; ++i) block(static_cast<Eigen::Index>(i), c) = Complex(gauss(rng), gauss(rng));
  return block;
}

}  // namespace

EigenSolveResult davidson_lowest(const LinearOperator& op, int n_pairs,
                                 const DavidsonOptions& options) {
  if (n_pairs < 1) throw std::invalid_argument("davidson_lowest: need n_pairs >= 1");
  const std::size_t dim = op.dim;
  if (static_cast<std::size_t>(n_pairs) > dim)
    throw std::invalid_argument("davidson_lowest: more pairs than the dimension");

  const int block = std::min<std::size_t>(dim, std::max(n_pairs + 4, 8));
  const int max_subspace =
      options.max_subspace > 0
          ? options.max_subspace
          : static_cast<int>(std::min<std::size_t>(dim, std::max(8 * block, 64)));

  std::mt19937_64 rng(options.seed);
  Eigen::MatrixXcd basis(dim, max_subspace), image(dim, max_subspace);

  Eigen::MatrixXcd start(dim, block);
  int given = 0;
  if (options.initial.cols() > 0) {
    given = std::min<int>(block, static_cast<int>(options.initial.cols()));
    start.leftCols(given) = options.initial.leftCols(given);
  }
  if (given < block) start.rightCols(block - given) = random_block(dim, block - given, rng);
  int k = orthonormalize_against(Eigen::MatrixXcd(dim, 0), start);
  basis.leftCols(k) = start.leftCols(k);

  EigenSolveResult result;
  Eigen::VectorXcd tmp(dim);
  int applied = 0;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    for (; applied < k; ++applied) {
      op.apply(basis.col(applied), tmp);
      image.col(applied) = tmp;
    }

    const auto v = basis.leftCols(k);
    const auto av = image.leftCols(k);
    Eigen::MatrixXcd rayleigh = v.adjoint() * av;
    rayleigh = 0.5 * (rayleigh + rayleigh.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rayleigh);

    const int want = std::min(n_pairs, k);
    Eigen::MatrixXcd ritz_vecs = v * es.eigenvectors().leftCols(std::min(block, k));
    Eigen::MatrixXcd ritz_imgs = av * es.eigenvectors().leftCols(std::min(block, k));

    result.values = es.eigenvalues().head(want);
    result.vectors = ritz_vecs.leftCols(want);
    result.residuals.resize(want);
    result.iterations = iter + 1;

    Eigen::MatrixXcd corrections(dim, std::min(block, k));
    int n_corr = 0;
    bool all_converged = true;
    for (int i = 0; i < std::min(block, k); ++i) {
      const double theta = es.eigenvalues()(i);
      Eigen::VectorXcd residual = ritz_imgs.col(i) - theta * ritz_vecs.col(i);
      const double rnorm = residual.norm();
      if (i < want) result.residuals(i) = rnorm;
      if (rnorm <= options.tolerance) continue;
      if (i < want) all_converged = false;
      // diagonal (Jacobi) correction with a floored denominator
      const double floor = 1e-8 * std::max(1.0, std::abs(theta));
      for (std::size_t r = 0; r < dim; ++r) {
        double denom = op.diagonal(static_cast<Eigen::Index>(r)) - theta;
        if (std::abs(denom) < floor) denom = (denom < 0 ? -floor : floor);
        residual(static_cast<Eigen::Index>(r)) /= denom;
      }
      corrections.col(n_corr++) = residual;
    }

    if (all_converged) {
      result.converged = true;
      break;
    }

    if (k + n_corr > max_subspace) {
      // thick restart, keeping twice the block of Ritz vectors; the images
      // are recomputed afresh so cached rounding does not accumulate
      const int keep = std::min(2 * block, k);
      Eigen::MatrixXcd kept_vecs = v * es.eigenvectors().leftCols(keep);
      const int reorth = orthonormalize_against(Eigen::MatrixXcd(dim, 0), kept_vecs);
      basis.leftCols(reorth) = kept_vecs.leftCols(reorth);
      k = reorth;
      applied = 0;
    }

    Eigen::MatrixXcd fresh = corrections.leftCols(n_corr);
    int added = orthonormalize_against(basis.leftCols(k), fresh);
    if (added == 0) {
      fresh = random_block(dim, 2, rng);
      added = orthonormalize_against(basis.leftCols(k), fresh);
      if (added == 0) break;
    }
    basis.middleCols(k, added) = fresh.leftCols(added);
    k += added;
  }
  return result;
}

EigenSolveResult dense_lowest(const Eigen::MatrixXcd& matrix, int n_pairs) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("dense_lowest: square input");
  const int want = std::min<int>(n_pairs, static_cast<int>(matrix.rows()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix);
  EigenSolveResult result;
  result.values = es.eigenvalues().head(want);
  result.vectors = es.eigenvectors().leftCols(want);
  result.residuals.resize(want);
  for (int i = 0; i < want; ++i)
    result.residuals(i) =
        (matrix * result.vectors.col(i) - result.values(i) * result.vectors.col(i)).norm();
  result.converged = true;
  result.iterations = 1;
  return result;
}

PcgResult pcg_solve(const LinearOperator& op, const Eigen::VectorXcd& rhs, double tol,
                    int max_iterations, const std::function<void(Eigen::VectorXcd&)>& project) {
  PcgResult out;
  const std::size_t dim = op.dim;
  Eigen::VectorXd precond = op.diagonal;
  for (Eigen::Index i = 0; i < precond.size(); ++i)
    if (std::abs(precond(i)) < 1e-12) precond(i) = 1.0;

  Eigen::VectorXcd b = rhs;
  if (project) project(b);
  if (b.norm() == 0.0) {
    out.x = Eigen::VectorXcd::Zero(dim);
    out.converged = true;
    return out;
  }
  const double bnorm = b.norm();

  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd r = b;
  Eigen::VectorXcd z = r.cwiseQuotient(precond.cast<Complex>());
  if (project) project(z);
  Eigen::VectorXcd p = z;
  Complex rz = r.dot(z);
  Eigen::VectorXcd ap(dim);

  for (int it = 0; it < max_iterations; ++it) {
    op.apply(p, ap);
    if (project) project(ap);
    const Complex pap = p.dot(ap);
    if (pap.real() <= 0.0)
      throw std::runtime_error("pcg_solve: operator not positive definite on the subspace");
    const Complex alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    out.iterations = it + 1;
    out.residual = r.norm() / bnorm;
    if (out.residual <= tol) {
      out.converged = true;
      break;
    }
    z = r.cwiseQuotient(precond.cast<Complex>());
    if (project) project(z);
    const Complex rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  out.x = std::move(x);
  return out;
}

}  // namespace pfspec
