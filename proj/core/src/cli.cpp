#include "pfspec/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "pfspec/config.hpp"
#include "pfspec/report.hpp"

namespace pfspec {

namespace {

namespace fs = std::filesystem;

ReducedResolvent make_resolvent(const Config& config, const InternalBasis& basis,
                                const MomentumElements& elements) {
  const double mu = basis.mu();
  return ReducedResolvent(
      basis, elements,
      RadialGrid::uniform(config.internal.sternheimer_rmax / mu, config.internal.sternheimer_points));
}

int cmd_splitting(const Config& config) {
  const CutoffWindow window{config.sigma, config.lambda_uv};
  const ModeGrid quad = build_grid(window, config.quadrature.n_radial, config.quadrature.n_polar);
  const InternalBasis basis = InternalBasis::build(config.masses, config.internal.n_int);
  const MomentumElements elements = momentum_elements(basis);
  const ReducedResolvent resolvent = make_resolvent(config, basis, elements);

  const auto [eff, report] =
      effective_matrix(config.g, config.p3, window, config.masses, quad, &resolvent,
                       ResolventBackend::sternheimer);
  const std::string text = splitting_report_json(report);
  std::cout << text << "\n";
  fs::create_directories(config.output.dir);
  std::ofstream(fs::path(config.output.dir) / "splitting.json") << text << "\n";
  return 0;
}

int cmd_spectrum(const Config& config, const std::string& export_operator,
                 const std::string& export_grid) {
  const CutoffWindow window{config.sigma, config.lambda_uv};
  const ModeGrid grid = build_grid(window, config.grid.n_radial, config.grid.n_polar);
  const FiberSpace space =
      make_fiber_space(grid, config.masses, config.internal.n_int, config.n_max_photons);

  const FiberOperator op =
      assemble_K0(space, config.p3) +
      assemble_W(space, config.g, config.p3, window, config.triplet_budget);
  if (!export_operator.empty()) {
    std::ofstream out(export_operator);
    op.write_triplets(out);
  }
  if (!export_grid.empty()) {
    std::ofstream out(export_grid);
    grid.write_json(out);
  }

  SpectrumResult spectrum = lowest_eigenpairs(op, config.solver.n_pairs, config.solver, &space);
  const double delta_est =
      window.sigma_low < window.sigma_high
          ? gamma_b_sharp_matrix(config.p3, window, config.masses, grid).operator_gammas[1]
          : 0.0;
  apply_clustering(spectrum, default_cluster_tolerance(config.g, delta_est));

  const Eigen::VectorXcd ground = spectrum.vectors.col(0);
  const double n_ph = photon_number_expectation(space, ground, window);
  const double overlap = vacuum_overlap(space, ground);
  const std::string text = spectrum_json(spectrum, config.g, config.p3, window, n_ph, overlap);
  std::cout << text << "\n";
  fs::create_directories(config.output.dir);
  std::ofstream(fs::path(config.output.dir) / "spectrum.json") << text << "\n";
  return 0;
}

int cmd_scan(const Config& config) {
  const std::vector<ScanRow> rows = ir_scan(config.scan_settings());

  fs::create_directories(config.output.dir);
  {
    std::ofstream csv(fs::path(config.output.dir) / "scan.csv");
    write_scan_csv(csv, rows);
  }
  std::ofstream(fs::path(config.output.dir) / "scan.json") << scan_json(rows) << "\n";
  if (config.output.svg) {
    std::vector<Eigen::VectorXd> levels;
    levels.reserve(rows.size());
    for (const ScanRow& r : rows) levels.push_back(r.eigenvalues);
    std::ofstream svg(fs::path(config.output.dir) / "levels.svg");
    write_levels_svg(svg, rows, levels);
  }
  write_scan_csv(std::cout, rows);
  for (const ScanRow& r : rows)
    if (!r.solver_converged) return 1;
  return 0;
}

// ---------------------------------------------------------------------------
// `check`: fast invariant battery over every module
// ---------------------------------------------------------------------------

struct Checker {
  int failures = 0;

  void operator()(const std::string& name, bool ok) {
    std::cout << (ok ? "[ ok ] " : "[FAIL] ") << name << "\n";
    if (!ok) ++failures;
  }
};

bool check_spin_algebra() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Vector3d a(uni(rng), uni(rng), uni(rng));
    const auto predicted = coupling_eigenvalues(a);
    Eigen::SelfAdjointEigenSolver<SpinMatrix> es(coupling_matrix(a.cast<Complex>()));
    for (int i = 0; i < 4; ++i)
      if (std::abs(predicted[i] - es.eigenvalues()(i)) > 1e-12) return false;

    const CoeffVector c(Complex(uni(rng), uni(rng)), Complex(uni(rng), uni(rng)),
                        Complex(uni(rng), uni(rng)));
    const Complex c2 = c(0) * c(0) + c(1) * c(1) + c(2) * c(2);
    const SpinMatrix sq = spin_dot(c, Species::electron) * spin_dot(c, Species::electron);
    if ((sq - c2 * SpinMatrix::Identity()).cwiseAbs().maxCoeff() > 1e-12) return false;
  }
  return true;
}

bool check_polarization() {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::Vector3d k(gauss(rng), gauss(rng), gauss(rng));
    if (k.head<2>().norm() < 1e-6) continue;
    const auto [e1, e2] = polarization(k);
    const Eigen::Vector3d khat = k.normalized();
    if (std::abs(e1.norm() - 1.0) > 1e-13 || std::abs(e2.norm() - 1.0) > 1e-13) return false;
    if (std::abs(e1.dot(e2)) > 1e-13 || std::abs(e1.dot(khat)) > 1e-13 ||
        std::abs(e2.dot(khat)) > 1e-13)
      return false;
    // completeness: sum_l eps_i eps_j = delta_ij - khat_i khat_j
    Eigen::Matrix3d sum = e1 * e1.transpose() + e2 * e2.transpose() + khat * khat.transpose();
    if ((sum - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-13) return false;
    // transverse weights against the closed form
    const CutoffWindow w{0.0, 2.0 * k.norm()};
    const Eigen::Vector3d tw = transverse_weight(k, w);
    for (int j = 0; j < 3; ++j) {
      const double expected = k.norm() / (4.0 * M_PI * M_PI) * (1.0 - khat(j) * khat(j));
      if (std::abs(tw(j) - expected) > 1e-12 * std::max(1.0, expected)) return false;
    }
  }
  return true;
}

bool check_grid() {
  const CutoffWindow window{0.25, 1.0};
  const ModeGrid grid = build_grid(window, 2, 2);
  if (std::abs(grid.total_weight() - grid.analytic_volume()) > 1e-10) return false;
  const ModeGrid fine = build_grid({0.125, 1.0}, 2, 2);
  if (fine.size() <= grid.size()) return false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if ((fine.nodes()[i].k - grid.nodes()[i].k).norm() > 0.0) return false;
    if (fine.nodes()[i].weight != grid.nodes()[i].weight) return false;
  }
  for (const ModeNode& node : grid.nodes())
    if (node.k.head<2>().norm() == 0.0) return false;
  return true;
}

bool check_momentum_elements() {
  const InternalBasis basis = InternalBasis::build({1.0, 1.0}, 2);
  const MomentumElements elements = momentum_elements(basis);
  for (const auto& mat : elements.p)
    if ((mat - mat.adjoint().eval()).cwiseAbs().maxCoeff() > 1e-10) return false;
  // commutator route: <1s|p_z|2p0> = i mu (e_1s - e_2p) <1s|z|2p0>
  const double mu = basis.mu();
  const double de = -mu / 2.0 + mu / 8.0;
  const double expected = std::abs(mu * de * dipole_z_element(basis, 1, 2));
  int idx_2p0 = -1;
  for (int i = 0; i < basis.size(); ++i)
    if (basis.states()[i].n == 2 && basis.states()[i].l == 1 && basis.states()[i].m == 0)
      idx_2p0 = i;
  const double got = std::abs(elements.p[2](0, idx_2p0));
  return std::abs(got - expected) < 1e-10 * std::max(1.0, expected);
}

bool check_resolvent() {
  const InternalBasis basis = InternalBasis::build({1.0, 1.0}, 2);
  const MomentumElements elements = momentum_elements(basis);
  const ReducedResolvent resolvent(basis, elements, RadialGrid::uniform(80.0, 4000));
  double prev_b = 1e300, prev_s = 1e300;
  for (double w : {0.05, 0.2, 1.0, 5.0}) {
    const ResolventValue v = resolvent.quadratic_form(w);
    if (v.basis <= 0.0 || v.sternheimer <= 0.0) return false;
    if (v.basis >= prev_b || v.sternheimer >= prev_s) return false;
    if (v.sternheimer < v.basis * 0.999) return false;  // continuum adds weight
    prev_b = v.basis;
    prev_s = v.sternheimer;
  }
  return true;
}

bool check_k0_structure(const Masses& masses) {
  const ModeGrid grid = build_grid({0.25, 1.0}, 1, 2);
  const FiberSpace space = make_fiber_space(grid, masses, 2, 2);
  const FiberOperator k0 = assemble_K0(space, 0.3);
  const Eigen::VectorXd diag = k0.real_diagonal();
  const double e0p = dispersion(space.internal.ground_energy(), 0.3, masses.total());
  int mult = 0;
  double second = 1e300;
  double sigma_grid_min = 1e300;
  for (const ModeNode& node : grid.nodes()) sigma_grid_min = std::min(sigma_grid_min, node.k.norm());
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (std::abs(diag(i) - e0p) < 1e-12)
      ++mult;
    else
      second = std::min(second, diag(i));
  }
  if (mult != 4) return false;
  const double internal_gap = space.internal.energy(1) - space.internal.energy(0);
  const double margin =
      std::min((1.0 - 0.3 / masses.total()) * sigma_grid_min, internal_gap);
  if (second < e0p + margin - 1e-12) return false;

  // K0 - E0 >= (1 - |P|/M) H_ph as diagonal operators
  Eigen::VectorXd hph = Eigen::VectorXd::Zero(diag.size());
  for (std::size_t f = 0; f < space.fock.dim(); ++f) {
    double e = 0.0;
    for (std::uint32_t i : space.fock.states()[f]) e += space.grid.nodes()[i].k.norm();
    for (int a = 0; a < space.internal.size(); ++a)
      for (int s = 0; s < 4; ++s) hph(static_cast<Eigen::Index>(space.index(f, a, s))) = e;
  }
  const double min_gap =
      (diag.array() - e0p - (1.0 - 0.3 / masses.total()) * hph.array()).minCoeff();
  return min_gap >= -1e-10;
}

bool check_wick_and_blocks(const Masses& masses) {
  const ModeGrid grid = build_grid({0.5, 1.0}, 1, 2);
  const FiberSpace space = make_fiber_space(grid, masses, 2, 2);
  const FiberOperator w = assemble_W(space, 0.1, 0.0);
  if (w.hermiticity_error() > 1e-12) return false;
  // vacuum-sector expectation vanishes by Wick ordering
  const Eigen::MatrixXcd dense = Eigen::MatrixXcd(w.matrix());
  for (int a = 0; a < space.internal.size(); ++a)
    for (int s = 0; s < 4; ++s)
      for (int b = 0; b < space.internal.size(); ++b)
        for (int t = 0; t < 4; ++t)
          if (std::abs(dense(space.index(0, a, s), space.index(0, b, t))) > 1e-14) return false;
  // photon-number change at most 2
  for (std::size_t f = 0; f < space.fock.dim(); ++f)
    for (std::size_t h = 0; h < space.fock.dim(); ++h) {
      const int dn = std::abs(space.fock.total_photons(f) - space.fock.total_photons(h));
      if (dn <= 2) continue;
      for (int a = 0; a < space.internal.size(); ++a)
        for (int s = 0; s < 4; ++s)
          if (std::abs(dense(space.index(f, a, 0 /*any*/), space.index(h, a, s))) > 1e-14)
            return false;
    }
  return true;
}

bool check_shell_consistency(const Masses& masses) {
  const double g = 0.05;
  const ModeGrid fine = build_grid({0.25, 1.0}, 1, 2);
  const FiberSpace space = make_fiber_space(fine, masses, 1, 2);
  const FiberOperator whole = assemble_W(space, g, 0.0, {0.25, 1.0});
  const FiberOperator outer = assemble_W(space, g, 0.0, {0.5, 1.0});
  const FiberOperator shell = assemble_W_shell(space, g, 0.0, 0.25, 0.5);
  const SparseMatrixXcd diff = whole.matrix() - outer.matrix() - shell.matrix();
  double err = 0.0;
  for (int col = 0; col < diff.outerSize(); ++col)
    for (SparseMatrixXcd::InnerIterator it(diff, col); it; ++it)
      err = std::max(err, std::abs(it.value()));
  return err <= 1e-10;
}

bool check_gamma(const Masses& masses) {
  const CutoffWindow window{0.25, 1.0};
  const ModeGrid quad = build_grid(window, 8, 4);
  const GammaIntegrals g0 = gamma_integrals(0.0, window, masses, quad);
  if (std::abs(g0.sum()) > 1e-13) return false;
  if (std::abs(g0.gamma1 - g0.gamma2) > 1e-13 || std::abs(g0.gamma1 - g0.gamma3) > 1e-13)
    return false;
  // radial oracle at P=0
  const double m_total = masses.total();
  const auto antiderivative = [&](double r) {
    return 2.0 * m_total *
           (r * r / 2.0 - 2.0 * m_total * r +
            4.0 * m_total * m_total * std::log(2.0 * m_total + r));
  };
  // prefactor: (1/8 m_el m_n pi^2) * 4pi = 1/(2 pi m_el m_n)
  const double expected = -(antiderivative(window.sigma_high) - antiderivative(window.sigma_low)) /
                          (2.0 * M_PI * masses.m_el * masses.m_n);
  if (std::abs(g0.gamma0 - expected) > 1e-6 * std::abs(expected)) return false;
  return delta_lower_bound(0.2, 1.0, masses) > 0.0;
}

bool check_small_ed(const Masses& masses) {
  const double g = 0.02, sigma = 0.25;
  const CutoffWindow window{sigma, 1.0};
  const ModeGrid grid = build_grid(window, 1, 2);
  const FiberSpace space = make_fiber_space(grid, masses, 1, 2);
  const FiberOperator op = assemble_K(space, g, 0.0);

  SolverOptions options;
  SpectrumResult spectrum = lowest_eigenpairs(op, 6, options, &space);
  const auto [eff, report] = effective_matrix(g, 0.0, window, masses, grid);
  apply_clustering(spectrum, default_cluster_tolerance(g, report.delta_sigma));
  if (spectrum.cluster_sizes.size() < 2) return false;
  if (spectrum.cluster_sizes[0] != 1 || spectrum.cluster_sizes[1] != 3) return false;
  const double measured = spectrum.gap / (g * g);
  return std::abs(measured - report.delta_sigma) <= 0.25 * report.delta_sigma;
}

bool check_feshbach(const Masses& masses) {
  const double g = 0.02, sigma = 0.25;
  const CutoffWindow window{sigma, 1.0};
  const ModeGrid grid = build_grid(window, 1, 2);
  const FiberSpace space = make_fiber_space(grid, masses, 1, 2);
  const FiberOperator k0 = assemble_K0(space, 0.0);
  const FiberOperator w = assemble_W(space, g, 0.0);
  const FiberOperator op = k0 + w;

  SolverOptions options;
  const SpectrumResult spectrum = lowest_eigenpairs(op, 4, options, &space);
  const double e_ref = spectrum.eigenvalues(0);

  const FeshbachOperator fesh = feshbach_operator(space, k0, w, e_ref, 0.0);
  if (fesh.hermiticity_error > 1e-9) return false;

  // min eigenvalue of K - e_ref - Pi F Pi, via the sparse operator plus the
  // rank-16 ground-block correction
  std::array<std::size_t, 4> block{};
  for (int s = 0; s < 4; ++s) block[s] = space.index(0, 0, s);
  LinearOperator shifted;
  shifted.dim = space.dim();
  shifted.diagonal = op.real_diagonal().array() - e_ref;
  for (int s = 0; s < 4; ++s)
    shifted.diagonal(static_cast<Eigen::Index>(block[s])) -= fesh.matrix(s, s).real();
  shifted.apply = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
    y = op.matrix() * x - e_ref * x;
    for (int s = 0; s < 4; ++s)
      for (int t = 0; t < 4; ++t)
        y(static_cast<Eigen::Index>(block[s])) -=
            fesh.matrix(s, t) * x(static_cast<Eigen::Index>(block[t]));
  };
  DavidsonOptions dopts;
  dopts.tolerance = 1e-10;
  const EigenSolveResult low = davidson_lowest(shifted, 1, dopts);
  return low.values(0) >= -1e-9;
}

int cmd_check(const Config& config) {
  Checker check;
  check("spin algebra closed-form spectrum and (a.sigma)^2 identity", check_spin_algebra());
  check("polarization orthonormality, completeness, transverse weights", check_polarization());
  check("grid volume, dyadic nesting, axis avoidance", check_grid());
  check("momentum elements hermiticity and commutator route", check_momentum_elements());
  check("reduced resolvent backends (decay, continuum dominance)", check_resolvent());
  check("free-operator ground multiplicity and photon bound", check_k0_structure(config.masses));
  check("interaction Wick ordering and block pattern", check_wick_and_blocks(config.masses));
  check("shell decomposition consistency", check_shell_consistency(config.masses));
  check("splitting integrals: sum rule, isotropy, radial oracle", check_gamma(config.masses));
  check("small-instance diagonalization vs effective matrix", check_small_ed(config.masses));
  check("Feshbach operator inequality", check_feshbach(config.masses));
  if (check.failures == 0)
    std::cout << "all checks passed\n";
  else
    std::cout << check.failures << " check(s) failed\n";
  return check.failures == 0 ? 0 : 1;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"fixed-momentum spectral toolkit for the two-spin hydrogen atom coupled to "
               "quantized radiation"};
  app.require_subcommand(0, 1);

  std::string config_path, out_dir, export_operator, export_grid;
  int threads = 0;
  unsigned long seed = 0;
  bool dense = false;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--threads", threads, "worker threads (overrides config)");
  app.add_option("--seed", seed, "solver start-vector seed (overrides config)");
  app.add_flag("--dense", dense, "force the dense eigensolver fallback");

  CLI::App* sub_splitting =
      app.add_subcommand("splitting", "second-order splitting report for one (g, P, sigma)");
  CLI::App* sub_spectrum =
      app.add_subcommand("spectrum", "low-lying spectrum and clustering for one (g, P, sigma)");
  sub_spectrum->add_option("--export-operator", export_operator,
                           "write the assembled operator as triplet text");
  sub_spectrum->add_option("--export-grid", export_grid, "write the mode grid as JSON");
  CLI::App* sub_scan = app.add_subcommand("scan", "infrared scan sigma_n = kappa^n sigma_0");
  CLI::App* sub_check = app.add_subcommand("check", "run the invariant suite");
  for (CLI::App* sub : {sub_splitting, sub_spectrum, sub_scan, sub_check}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Config config;
  try {
    if (!config_path.empty()) config = config_from_file(config_path);
    if (!out_dir.empty()) config.output.dir = out_dir;
    if (app.count("--threads") > 0) config.threads = threads;
    if (app.count("--seed") > 0) config.solver.seed = seed;
    if (dense) config.solver.force_dense = true;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (sub_splitting->parsed()) return cmd_splitting(config);
    if (sub_spectrum->parsed()) return cmd_spectrum(config, export_operator, export_grid);
    if (sub_scan->parsed()) return cmd_scan(config);
    if (sub_check->parsed()) return cmd_check(config);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  std::cout << app.help();
  return 2;
}

}  // namespace pfspec
