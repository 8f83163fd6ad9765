#include "pfspec/spectral_scan.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace pfspec {

namespace {

void fix_phases(Eigen::MatrixXcd& vectors) {
  for (int c = 0; c < vectors.cols(); ++c) {
    Eigen::Index imax = 0;
    vectors.col(c).cwiseAbs().maxCoeff(&imax);
    const Complex v = vectors(imax, c);
    if (std::abs(v) > 0.0) vectors.col(c) *= std::conj(v) / std::abs(v);
  }
}

}  // namespace

SpectrumResult lowest_eigenpairs(const FiberOperator& op, int m, const SolverOptions& options,
                                 const FiberSpace* space) {
  if (m < 1) throw std::invalid_argument("lowest_eigenpairs: need m >= 1");
  const std::size_t dim = op.dim();

  SpectrumResult result;
  if (options.force_dense || dim <= static_cast<std::size_t>(options.dense_threshold)) {
    const EigenSolveResult dense = dense_lowest(Eigen::MatrixXcd(op.matrix()), m);
    result.eigenvalues = dense.values;
    result.vectors = dense.vectors;
    result.residuals = dense.residuals;
    result.converged = true;
    result.iterations = dense.iterations;
  } else {
    LinearOperator lin;
    lin.dim = dim;
    lin.diagonal = op.real_diagonal();
    lin.apply = [&op](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { op.apply(x, y); };

    DavidsonOptions dopts;
    dopts.tolerance = options.tolerance;
    dopts.max_iterations = options.max_iterations;
    dopts.seed = options.seed;
    if (space != nullptr) {
      // vacuum-sector unit vectors seed the block
      const int cols = std::min<int>(4 * space->internal.size(), m + 4);
      dopts.initial = Eigen::MatrixXcd::Zero(dim, cols);
      int c = 0;
      for (int a = 0; a < space->internal.size() && c < cols; ++a)
        for (int s = 0; s < 4 && c < cols; ++s)
          dopts.initial(static_cast<Eigen::Index>(space->index(0, a, s)), c++) = 1.0;
    }

    const EigenSolveResult sol = davidson_lowest(lin, m, dopts);
    result.eigenvalues = sol.values;
    result.vectors = sol.vectors;
    result.residuals = sol.residuals;
    result.converged = sol.converged;
    result.iterations = sol.iterations;
    if (!sol.converged)
      throw std::runtime_error("lowest_eigenpairs: solver stalled, worst residual " +
                               std::to_string(sol.residuals.maxCoeff()));
  }
  fix_phases(result.vectors);
  return result;
}

void apply_clustering(SpectrumResult& result, double tol) {
  result.cluster_tolerance = tol;
  result.cluster_sizes = cluster_sizes(result.eigenvalues, tol);
  if (result.cluster_sizes.size() >= 2)
    result.gap = result.eigenvalues(result.cluster_sizes.front()) - result.eigenvalues(0);
  else
    result.gap = 0.0;
}

double default_cluster_tolerance(double g, double delta_estimate) {
  return std::max(1e-10, 1e-3 * g * g * std::abs(delta_estimate));
}

GapAssertion gap_assertion(const FiberSpace& space, double g, double p3, double eta,
                           const SolverOptions& options, std::size_t triplet_budget) {
  const CutoffWindow window = space.grid.window();

  GapAssertion assertion;
  assertion.g = g;
  assertion.p3 = p3;
  assertion.sigma = window.sigma_low;
  assertion.eta = eta;

  const FiberOperator k0 = assemble_K0(space, p3);
  const FiberOperator op =
      g != 0.0 ? k0 + assemble_W(space, g, p3, window, triplet_budget) : k0;

  SpectrumResult spectrum = lowest_eigenpairs(op, options.n_pairs, options, &space);
  const double delta_est =
      window.sigma_low < window.sigma_high
          ? gamma_b_sharp_matrix(p3, window, space.masses, space.grid).operator_gammas[1]
          : 0.0;
  apply_clustering(spectrum, default_cluster_tolerance(g, delta_est));

  assertion.simple = !spectrum.cluster_sizes.empty() && spectrum.cluster_sizes.front() == 1;
  assertion.gap_value = spectrum.gap;
  assertion.holds = assertion.simple && assertion.gap_value >= eta * assertion.sigma;
  return assertion;
}

double photon_number_expectation(const FiberSpace& space, const Eigen::VectorXcd& state,
                                 const CutoffWindow& window) {
  if (static_cast<std::size_t>(state.size()) != space.dim())
    throw std::invalid_argument("photon_number_expectation: state dimension mismatch");
  const std::size_t block = 4 * space.internal.size();
  double total = 0.0;
  for (std::size_t f = 0; f < space.fock.dim(); ++f) {
    int count = 0;
    for (std::uint32_t i : space.fock.states()[f])
      if (window.contains(space.grid.nodes()[i].k.norm())) ++count;
    if (count == 0) continue;
    total += count * state.segment(static_cast<Eigen::Index>(f * block), block).squaredNorm();
  }
  return total;
}

double vacuum_overlap(const FiberSpace& space, const Eigen::VectorXcd& state) {
  double norm2 = 0.0;
  for (int s = 0; s < 4; ++s) norm2 += std::norm(state(static_cast<Eigen::Index>(space.index(0, 0, s))));
  return std::sqrt(norm2);
}

EnergyBoundsRecord energy_bounds_check(double g, double e0p, double e_sigma, double e_tau,
                                       double sigma, double tol) {
  EnergyBoundsRecord record;
  record.e0p = e0p;
  record.e_sigma = e_sigma;
  record.e_tau = e_tau;
  if (g != 0.0) {
    record.c0_fit = (e0p - e_sigma) / (g * g);
    record.c_shell_fit = (e_sigma - e_tau) / (g * g * sigma * sigma);
  }
  record.orderings_hold = e_tau <= e_sigma + tol && e_sigma <= e0p + tol;
  if (!record.orderings_hold)
    throw std::runtime_error("energy ordering violated beyond the solver tolerance");
  return record;
}

namespace {

double snap_down_dyadic(double sigma0, double lambda_uv) {
  if (sigma0 >= lambda_uv) return lambda_uv;
  const int m = static_cast<int>(std::ceil(std::log2(lambda_uv / sigma0) - 1e-12));
  return lambda_uv * std::ldexp(1.0, -m);
}

ScanRow scan_row(const ScanSettings& s, int step, double sigma, double eta) {
  ScanRow row;
  row.step = step;
  row.sigma = sigma;
  row.eta = eta;

  const CutoffWindow window{sigma, s.lambda_uv};
  const ModeGrid grid = build_grid(window, s.grid_radial, s.grid_polar);
  const FiberSpace space = make_fiber_space(grid, s.masses, s.n_int, s.n_max_photons);

  const FiberOperator k0 = assemble_K0(space, s.p3);
  const FiberOperator op = k0 + assemble_W(space, s.g, s.p3, window, s.triplet_budget);

  SpectrumResult spectrum = lowest_eigenpairs(op, s.solver.n_pairs, s.solver, &space);
  row.solver_converged = spectrum.converged;

  // second-order prediction on the same modes and internal basis
  std::optional<ReducedResolvent> resolvent;
  if (space.internal.size() > 1)
    resolvent.emplace(space.internal, space.momenta,
                      RadialGrid::uniform(40.0 / space.internal.mu(), 6000));
  const auto [eff, report] =
      effective_matrix(s.g, s.p3, window, s.masses, grid,
                       resolvent ? &*resolvent : nullptr, ResolventBackend::basis_sum);
  row.splitting = report;
  apply_clustering(spectrum, default_cluster_tolerance(s.g, report.delta_sigma));

  row.eigenvalues = spectrum.eigenvalues;
  row.e_g = spectrum.eigenvalues(0);
  row.gap = spectrum.gap;
  row.cluster1 = spectrum.cluster_sizes.empty() ? 0 : spectrum.cluster_sizes[0];
  row.cluster2 = spectrum.cluster_sizes.size() > 1 ? spectrum.cluster_sizes[1] : 0;
  row.simple = row.cluster1 == 1;
  row.holds = row.simple && row.gap >= eta * sigma;

  const Eigen::VectorXcd ground = spectrum.vectors.col(0);
  row.n_ph = photon_number_expectation(space, ground, window);
  row.overlap = vacuum_overlap(space, ground);
  const double e0p =
      dispersion(space.internal.ground_energy(), s.p3, s.masses.total());
  row.de_over_g2 = (e0p - row.e_g) / (s.g * s.g);
  if (step > 0) {
    const CutoffWindow shell{sigma, sigma / s.kappa};
    row.shell_n_ph = photon_number_expectation(space, ground, shell);
  }
  return row;
}

}  // namespace

std::vector<ScanRow> ir_scan(const ScanSettings& settings) {
  if (!(settings.kappa > 0.0 && settings.kappa < 1.0))
    throw std::invalid_argument("ir_scan: kappa must lie in (0,1)");
  double sigma0 = settings.sigma0 > 0.0 ? settings.sigma0
                                        : settings.g * settings.g / settings.beta_c1;
  if (settings.snap_dyadic && settings.kappa == 0.5)
    sigma0 = snap_down_dyadic(sigma0, settings.lambda_uv);

  double eta = settings.eta;
  if (eta <= 0.0)
    eta = delta_lower_bound(settings.p_c, settings.lambda_uv, settings.masses) * settings.beta_c1;
  if (!(4.0 * eta <= settings.kappa))
    throw std::invalid_argument("ir_scan: regime requires 0 < 4 eta <= kappa < 1");

  std::vector<double> sigmas(settings.steps + 1);
  for (int n = 0; n <= settings.steps; ++n) sigmas[n] = sigma0 * std::pow(settings.kappa, n);

  std::vector<ScanRow> rows(sigmas.size());
  // a failed row is flagged and the scan continues
  const auto guarded_row = [&](std::size_t n) {
    try {
      rows[n] = scan_row(settings, static_cast<int>(n), sigmas[n], eta);
    } catch (const std::exception& err) {
      rows[n] = ScanRow{};
      rows[n].step = static_cast<int>(n);
      rows[n].sigma = sigmas[n];
      rows[n].eta = eta;
      rows[n].error = err.what();
    }
  };
  const int workers = std::max(1, settings.threads);
  if (workers == 1) {
    for (std::size_t n = 0; n < sigmas.size(); ++n) guarded_row(n);
  } else {
    std::vector<std::thread> pool;
    std::size_t next = 0;
    std::mutex mtx;
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&]() {
        while (true) {
          std::size_t n;
          {
            std::lock_guard<std::mutex> lock(mtx);
            if (next >= sigmas.size()) return;
            n = next++;
          }
          guarded_row(n);
        }
      });
    for (auto& th : pool) th.join();
  }

  for (std::size_t n = 1; n < rows.size(); ++n) {
    if (!rows[n].error.empty() || !rows[n - 1].error.empty()) continue;
    rows[n].e_monotonicity_residual = rows[n].e_g - rows[n - 1].e_g;
    const double denom = settings.g * settings.g * rows[n - 1].sigma * rows[n - 1].sigma;
    rows[n].c_shell_fit = denom > 0.0 ? (rows[n - 1].e_g - rows[n].e_g) / denom : 0.0;
  }
  return rows;
}

}  // namespace pfspec
