// Eigensolver driver with clustering and residual certification, the gap
// assertion, the infrared scan sigma_n = kappa^n sigma_0, photon-number and
// energy-ordering diagnostics, and vacuum-overlap reporting.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pfspec/feshbach_effective.hpp"
#include "pfspec/fock_hamiltonian.hpp"

namespace pfspec {

struct SolverOptions {
  double tolerance = 1e-9;
  int max_iterations = 500;
  int n_pairs = 8;
  int dense_threshold = 800;
  bool force_dense = false;
  unsigned long seed = 12345;
};

struct SpectrumResult {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXcd vectors;     // phase-fixed columns
  Eigen::VectorXd residuals;
  std::vector<int> cluster_sizes;
  double gap = 0.0;  // second distinct spectral point minus the lowest
  double cluster_tolerance = 0.0;
  bool converged = false;
  int iterations = 0;
};

// m lowest eigenpairs; dense decomposition below the threshold (or when
// forced), block Davidson above it.  Vacuum-sector unit vectors are used to
// seed the iterative block when a space is supplied.
SpectrumResult lowest_eigenpairs(const FiberOperator& op, int m, const SolverOptions& options,
                                 const FiberSpace* space = nullptr);

// partition the computed eigenvalues into clusters at the tolerance and
// derive the gap; stores both into the result
void apply_clustering(SpectrumResult& result, double tol);

double default_cluster_tolerance(double g, double delta_estimate);

struct GapAssertion {
  double g = 0.0;
  double p3 = 0.0;
  double sigma = 0.0;
  double eta = 0.0;
  bool simple = false;
  double gap_value = 0.0;
  bool holds = false;
};

// assembles K_{g,>=sigma}(P) on the space's grid, solves, clusters, and
// evaluates (i) simplicity of the lowest level and (ii) gap >= eta*sigma
GapAssertion gap_assertion(const FiberSpace& space, double g, double p3, double eta,
                           const SolverOptions& options,
                           std::size_t triplet_budget = kDefaultTripletBudget);

double photon_number_expectation(const FiberSpace& space, const Eigen::VectorXcd& state,
                                 const CutoffWindow& window);

double vacuum_overlap(const FiberSpace& space, const Eigen::VectorXcd& state);

struct EnergyBoundsRecord {
  double e0p = 0.0;
  double e_sigma = 0.0;
  double e_tau = 0.0;
  double c0_fit = 0.0;       // (E_0(P) - E_sigma)/g^2
  double c_shell_fit = 0.0;  // (E_sigma - E_tau)/(g^2 sigma^2)
  bool orderings_hold = false;
};

// verifies E_tau <= E_sigma <= E_0(P) and reports the fitted constants;
// throws std::runtime_error when an ordering fails beyond the tolerance
EnergyBoundsRecord energy_bounds_check(double g, double e0p, double e_sigma, double e_tau,
                                       double sigma, double tol);

struct ScanRow {
  int step = 0;
  double sigma = 0.0;
  double e_g = 0.0;
  double gap = 0.0;
  int cluster1 = 0;
  int cluster2 = 0;
  double n_ph = 0.0;
  double de_over_g2 = 0.0;  // (E_0(P) - E_g)/g^2
  double overlap = 0.0;
  bool holds = false;
  bool simple = false;
  double eta = 0.0;
  double shell_n_ph = 0.0;               // photons in [sigma_n, sigma_{n-1}]
  double e_monotonicity_residual = 0.0;  // E_n - E_{n-1}, <= solver tol
  double c_shell_fit = 0.0;
  bool solver_converged = false;
  std::string error;            // empty unless the row failed
  Eigen::VectorXd eigenvalues;  // the computed low levels (diagnostics/SVG)
  SplittingReport splitting;
};

struct ScanSettings {
  Masses masses;
  double g = 1e-2;
  double p3 = 0.0;
  double lambda_uv = 1.0;
  double beta_c1 = 6.4e-3;
  double sigma0 = 0.0;  // 0: g^2 / beta_c1
  double kappa = 0.5;
  int steps = 4;
  double eta = 0.0;  // 0: delta_lower_bound(p_c) * beta_c1
  double p_c = 0.5;
  bool snap_dyadic = true;
  int grid_radial = 1;
  int grid_polar = 2;
  int n_int = 1;
  int n_max_photons = 2;
  SolverOptions solver;
  std::size_t triplet_budget = kDefaultTripletBudget;
  int threads = 1;
};

std::vector<ScanRow> ir_scan(const ScanSettings& settings);

}  // namespace pfspec
