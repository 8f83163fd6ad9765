#include <doctest.h>

#include <sstream>

#include "pfspec/report.hpp"
#include "pfspec/spectral_scan.hpp"

using namespace pfspec;

namespace {
const Masses kEqualMasses{1.0, 1.0};
}

TEST_CASE("lowest eigenpairs of a diagonal test operator") {
  const std::size_t dim = 40;
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (std::size_t i = 0; i < dim; ++i)
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), 3.0 - 0.1 * i);
  SparseMatrixXcd m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  const FiberOperator op(std::move(m), 1, dim / 4, {});

  SolverOptions options;
  const SpectrumResult spectrum = lowest_eigenpairs(op, 3, options);
  CHECK(spectrum.eigenvalues(0) == doctest::Approx(3.0 - 0.1 * (dim - 1)).epsilon(1e-14));
  CHECK(spectrum.eigenvalues(1) == doctest::Approx(3.0 - 0.1 * (dim - 2)).epsilon(1e-14));
  CHECK(spectrum.residuals.maxCoeff() < 1e-12);
}

TEST_CASE("free operator spectrum: exact quadruple ground cluster") {
  const ModeGrid grid = build_grid({0.25, 1.0}, 1, 2);
  const FiberSpace space = make_fiber_space(grid, kEqualMasses, 2, 2);
  const FiberOperator k0 = assemble_K0(space, 0.2);

  SolverOptions options;
  options.n_pairs = 6;
  SpectrumResult spectrum = lowest_eigenpairs(k0, 6, options, &space);
  apply_clustering(spectrum, 1e-10);
  CHECK(spectrum.cluster_sizes.front() == 4);
  const double e0p = dispersion(space.internal.ground_energy(), 0.2, 2.0);
  CHECK(spectrum.eigenvalues(0) == doctest::Approx(e0p).epsilon(1e-12));
  CHECK(spectrum.gap > 0.0);
}

TEST_CASE("eigenvector phases are fixed deterministically") {
  const ModeGrid grid = build_grid({0.5, 1.0}, 1, 2);
  const FiberSpace space = make_fiber_space(grid, kEqualMasses, 1, 2);
  const FiberOperator k = assemble_K(space, 0.03, 0.0);
  SolverOptions options;
  options.n_pairs = 4;
  const SpectrumResult a = lowest_eigenpairs(k, 4, options, &space);
  const SpectrumResult b = lowest_eigenpairs(k, 4, options, &space);
  CHECK((a.vectors - b.vectors).cwiseAbs().maxCoeff() < 1e-8);
  // largest component real positive
  Eigen::Index imax = 0;
  a.vectors.col(0).cwiseAbs().maxCoeff(&imax);
  CHECK(a.vectors(imax, 0).imag() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(a.vectors(imax, 0).real() > 0.0);
}

TEST_CASE("gap assertion fails for the free and uncut cases") {
  // sigma >= Lambda: no interaction window, fourfold-degenerate ground level
  const ModeGrid empty = build_grid({1.0, 1.0}, 1, 2);
  const FiberSpace space0 = make_fiber_space(empty, kEqualMasses, 1, 2);
  SolverOptions options;
  options.n_pairs = 4;
  const GapAssertion uncut = gap_assertion(space0, 0.05, 0.0, 0.1, options);
  CHECK(!uncut.simple);
  CHECK(!uncut.holds);

  // g = 0 below Lambda: the quadruple persists
  const ModeGrid grid = build_grid({0.5, 1.0}, 1, 2);
  const FiberSpace space = make_fiber_space(grid, kEqualMasses, 1, 2);
  SolverOptions options6;
  options6.n_pairs = 6;
  const GapAssertion free_case = gap_assertion(space, 0.0, 0.0, 0.1, options6);
  CHECK(!free_case.simple);
  CHECK(!free_case.holds);
}

TEST_CASE("gap assertion holds in the interacting regime") {
  const double g = 0.02, sigma = 0.25;
  const ModeGrid grid = build_grid({sigma, 1.0}, 1, 2);
  const FiberSpace space = make_fiber_space(grid, kEqualMasses, 1, 2);
  const double delta_lit = delta_lower_bound(0.1, 1.0, kEqualMasses);
  const double beta = g * g / sigma;
  SolverOptions options;
  options.n_pairs = 6;
  const GapAssertion assertion = gap_assertion(space, g, 0.0, delta_lit * beta, options);
  CHECK(assertion.simple);
  CHECK(assertion.gap_value > 0.0);
  CHECK(assertion.holds);
}

TEST_CASE("photon number and vacuum overlap") {
  const ModeGrid grid = build_grid({0.5, 1.0}, 1, 2);
  const FiberSpace space = make_fiber_space(grid, kEqualMasses, 1, 2);

  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(space.dim());
  vac(static_cast<Eigen::Index>(space.index(0, 0, 2))) = 1.0;
  CHECK(photon_number_expectation(space, vac, grid.window()) == 0.0);
  CHECK(vacuum_overlap(space, vac) == 1.0);

  const FiberOperator k = assemble_K(space, 0.02, 0.0);
  SolverOptions options;
  options.n_pairs = 4;
  const SpectrumResult spectrum = lowest_eigenpairs(k, 4, options, &space);
  const double n_ph = photon_number_expectation(space, spectrum.vectors.col(0), grid.window());
  CHECK(n_ph > 0.0);
  CHECK(n_ph < 1e-2);
  const double overlap = vacuum_overlap(space, spectrum.vectors.col(0));
  CHECK(overlap > 0.999);
  CHECK(overlap <= 1.0 + 1e-12);
}

TEST_CASE("energy bound bookkeeping") {
  const EnergyBoundsRecord zero = energy_bounds_check(0.0, -0.25, -0.25, -0.25, 0.1, 1e-12);
  CHECK(zero.orderings_hold);
  CHECK(zero.c0_fit == 0.0);
  CHECK(zero.c_shell_fit == 0.0);

  const EnergyBoundsRecord record =
      energy_bounds_check(0.01, -0.25, -0.2501, -0.25011, 0.1, 1e-12);
  CHECK(record.orderings_hold);
  CHECK(record.c0_fit == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(record.c_shell_fit > 0.0);

  CHECK_THROWS_AS(energy_bounds_check(0.01, -0.25, -0.2501, -0.25, 0.1, 1e-12),
                  std::runtime_error);
}

TEST_CASE("infrared scan: two steps, persistence and emission") {
  ScanSettings settings;
  settings.masses = kEqualMasses;
  settings.g = 0.02;
  settings.beta_c1 = 6.4e-3;  // sigma_0 = 0.0625, already dyadic
  settings.steps = 1;
  settings.solver.n_pairs = 6;

  const std::vector<ScanRow> rows = ir_scan(settings);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].sigma == 0.0625);
  CHECK(rows[1].sigma == 0.03125);
  for (const ScanRow& row : rows) {
    CHECK(row.simple);
    CHECK(row.holds);
    CHECK(row.gap >= row.eta * row.sigma);
    CHECK(row.cluster1 == 1);
    CHECK(row.cluster2 == 3);
    CHECK(row.splitting.delta_sigma > 0.0);
  }
  // energy monotone non-increasing as the cutoff decreases
  CHECK(rows[1].e_g <= rows[0].e_g + 1e-11);
  CHECK(rows[1].shell_n_ph >= 0.0);
  // vacuum overlap stays 1 - O(g^2)
  for (const ScanRow& row : rows)
    CHECK(1.0 - row.overlap <= 1.0 * settings.g * settings.g);

  std::ostringstream csv;
  write_scan_csv(csv, rows);
  CHECK(csv.str().rfind("sigma,E_g,gap,cluster1,cluster2,n_ph,dE_over_g2,overlap,holds\n", 0) ==
        0);

  // deterministic re-run on two workers gives byte-identical output
  ScanSettings parallel = settings;
  parallel.threads = 2;
  const std::vector<ScanRow> rows2 = ir_scan(parallel);
  std::ostringstream csv2;
  write_scan_csv(csv2, rows2);
  CHECK(csv.str() == csv2.str());

  // non-dyadic start snaps down to a dyadic fraction
  ScanSettings snapped = settings;
  snapped.sigma0 = 0.07;
  snapped.steps = 0;
  const std::vector<ScanRow> rows3 = ir_scan(snapped);
  CHECK(rows3[0].sigma == 0.0625);

  ScanSettings bad = settings;
  bad.kappa = 1.5;
  CHECK_THROWS_AS(ir_scan(bad), std::invalid_argument);
  ScanSettings bad_eta = settings;
  bad_eta.eta = 0.9;  // violates 4 eta <= kappa
  CHECK_THROWS_AS(ir_scan(bad_eta), std::invalid_argument);

  // a row that cannot be assembled is flagged, the scan continues
  ScanSettings starved = snapped;
  starved.triplet_budget = 1;
  const std::vector<ScanRow> flagged = ir_scan(starved);
  REQUIRE(flagged.size() == 1);
  CHECK(!flagged[0].error.empty());
  CHECK(!flagged[0].holds);
  CHECK(!flagged[0].solver_converged);
}
