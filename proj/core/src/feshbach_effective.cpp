#include "pfspec/feshbach_effective.hpp"

#include <cmath>
#include <stdexcept>

#include "pfspec/quadrature.hpp"

namespace pfspec {

namespace {

double denominator(const Eigen::Vector3d& k, double p3, const Masses& masses) {
  const double kn = k.norm();
  return kn - k(2) * p3 / masses.total() + kn * kn / (2.0 * masses.total());
}

void require_regime(double p3, const Masses& masses) {
  if (std::abs(p3) >= 0.5 * masses.total())
    throw std::domain_error("total momentum too large: |P| must stay below M/2");
}

}  // namespace

GammaIntegrals gamma_integrals(double p3, const CutoffWindow& window, const Masses& masses,
                               const ModeGrid& quad) {
  require_regime(p3, masses);
  const double pref = 1.0 / (8.0 * masses.m_el * masses.m_n * M_PI * M_PI);
  GammaIntegrals out;
  for (const ModeNode& node : quad.nodes()) {
    if (node.lambda != 1) continue;  // spatial integrals: one node per k
    const double kn = node.k.norm();
    if (!window.contains(kn)) continue;
    const double d = denominator(node.k, p3, masses);
    if (d <= 0.0) throw std::domain_error("non-positive energy denominator");
    const double common = pref * node.weight * kn / d;
    out.gamma0 -= common;
    const Eigen::Vector3d khat = node.k / kn;
    out.gamma1 += common * khat(0) * khat(0);
    out.gamma2 += common * khat(1) * khat(1);
    out.gamma3 += common * khat(2) * khat(2);
  }
  return out;
}

GammaIntegrals gamma_integrals(const Eigen::Vector3d& p, const CutoffWindow& window,
                               const Masses& masses, const ModeGrid& quad) {
  if (p(0) != 0.0 || p(1) != 0.0)
    throw std::invalid_argument("total momentum must point along the 3-axis");
  return gamma_integrals(p(2), window, masses, quad);
}

Eigen::Vector3d gamma_sharp_coefficients(double p3, const CutoffWindow& window,
                                         const Masses& masses, const ModeGrid& quad) {
  require_regime(p3, masses);
  const double pref = 1.0 / (2.0 * masses.m_el * masses.m_n);
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (const ModeNode& node : quad.nodes()) {
    if (node.lambda != 1) continue;
    const double kn = node.k.norm();
    if (!window.contains(kn)) continue;
    const double d = denominator(node.k, p3, masses);
    if (d <= 0.0) throw std::domain_error("non-positive energy denominator");
    c += (pref * node.weight / d) * transverse_weight(node.k, window);
  }
  return c;
}

SharpMatrix gamma_b_sharp_matrix(double p3, const CutoffWindow& window, const Masses& masses,
                                 const ModeGrid& quad) {
  SharpMatrix out;
  out.coefficients = gamma_sharp_coefficients(p3, window, masses, quad);
  out.matrix = coupling_matrix(out.coefficients.cast<Complex>());
  const Eigen::Vector3d& c = out.coefficients;
  out.operator_gammas = {-c(0) - c(1) - c(2), -c(0) + c(1) + c(2), c(0) - c(1) + c(2),
                         c(0) + c(1) - c(2)};
  return out;
}

double gamma_b_diag(double p3, const CutoffWindow& window, const Masses& masses,
                    const ModeGrid& quad) {
  require_regime(p3, masses);
  const double pref =
      1.0 / (4.0 * masses.m_el * masses.m_el) + 1.0 / (4.0 * masses.m_n * masses.m_n);
  double value = 0.0;
  for (const ModeNode& node : quad.nodes()) {
    if (node.lambda != 1) continue;
    const double kn = node.k.norm();
    if (!window.contains(kn)) continue;
    const double d = denominator(node.k, p3, masses);
    value += pref * node.weight * transverse_weight(node.k, window).sum() / d;
  }
  return value;
}

double gamma_a_diag(double p3, const CutoffWindow& window, const Masses& masses,
                    const ModeGrid& quad, const ReducedResolvent& resolvent,
                    ResolventBackend backend) {
  require_regime(p3, masses);
  const double mu = masses.reduced();
  const double amp2_pref = 1.0 / (4.0 * M_PI * M_PI);  // |h^A(0,k,lambda)|^2 = pref/|k|
  double value = 0.0;
  for (const ModeNode& node : quad.nodes()) {
    if (node.lambda != 1) continue;
    const double kn = node.k.norm();
    if (!window.contains(kn)) continue;
    const double shift = denominator(node.k, p3, masses);
    const ResolventValue rv = resolvent.quadratic_form(shift);
    const double form = backend == ResolventBackend::basis_sum ? rv.basis : rv.sternheimer;
    value += 2.0 * node.weight * amp2_pref / kn * form / (mu * mu);  // factor 2: both lambda
  }
  return value;
}

std::pair<EffectiveMatrix, SplittingReport> effective_matrix(double g, double p3,
                                                             const CutoffWindow& window,
                                                             const Masses& masses,
                                                             const ModeGrid& quad,
                                                             const ReducedResolvent* resolvent,
                                                             ResolventBackend backend) {
  const SharpMatrix sharp = gamma_b_sharp_matrix(p3, window, masses, quad);
  const double gb = gamma_b_diag(p3, window, masses, quad);
  const double ga = resolvent ? gamma_a_diag(p3, window, masses, quad, *resolvent, backend) : 0.0;

  const double mu = masses.reduced();
  const double e0p = dispersion(ground_state_energy(mu), p3, masses.total());

  EffectiveMatrix eff;
  eff.e0 = e0p;
  eff.d_diag = -(ga + gb);
  eff.sharp_coefficients = sharp.coefficients;
  eff.matrix = (e0p + g * g * eff.d_diag) * SpinMatrix::Identity() + g * g * sharp.matrix;

  SplittingReport report;
  report.gamma0 = sharp.operator_gammas[0];
  report.gamma1 = sharp.operator_gammas[1];
  report.gamma2 = sharp.operator_gammas[2];
  report.gamma3 = sharp.operator_gammas[3];
  report.delta_sigma =
      std::min({report.gamma1, report.gamma2, report.gamma3}) - report.gamma0;
  report.d_diag = eff.d_diag;
  report.e0_pred = e0p + g * g * (eff.d_diag + report.gamma0);
  report.window = window;
  report.masses = masses;
  report.p3 = p3;
  report.g = g;
  const GammaIntegrals literal = gamma_integrals(p3, window, masses, quad);
  report.gamma_matrix_ratio =
      std::abs(literal.gamma0) > 1e-300 ? report.gamma0 / literal.gamma0 : 0.0;
  return {eff, report};
}

double delta_lower_bound(double p_c, double lambda_uv, const Masses& masses) {
  if (p_c >= masses.total()) throw std::domain_error("p_c must stay below the total mass");
  if (lambda_uv <= 0.0) throw std::invalid_argument("ultraviolet cutoff must be positive");
  const double m_total = masses.total();
  const double pref = 1.0 / (2.0 * M_PI * M_PI * masses.m_el * masses.m_n);
  const auto integrand = [&](double r) {
    return r * r / ((1.0 + p_c / m_total) + r / (2.0 * m_total));
  };
  return pref * integrate(integrand, 0.5 * lambda_uv, lambda_uv);
}

FeshbachOperator feshbach_operator(const FiberSpace& space, const FiberOperator& k0,
                                   const FiberOperator& w, double e_ref, double p3,
                                   const FeshbachOptions& options) {
  const std::size_t dim = space.dim();
  if (k0.dim() != dim || w.dim() != dim)
    throw std::invalid_argument("feshbach_operator: operator dimensions must match the space");

  // ground block indices: vacuum Fock state, ground internal state, 4 spins
  std::array<std::size_t, 4> block{};
  for (int s = 0; s < 4; ++s) block[s] = space.index(0, 0, s);

  const auto project_out_block = [&block](Eigen::VectorXcd& v) {
    for (std::size_t idx : block) v(static_cast<Eigen::Index>(idx)) = Complex(0.0, 0.0);
  };

  const Eigen::VectorXd k0_diag = k0.real_diagonal();
  const Eigen::VectorXd w_diag = w.real_diagonal();

  // restricted operator (K0 - e_ref + Pbar W Pbar) on the complement of the
  // ground block; the block itself is pinned to a large positive shift so
  // that its directions never masquerade as the smallest eigenvalue
  const double pin = k0_diag.maxCoeff() + std::abs(e_ref) + 1.0;
  LinearOperator inner;
  inner.dim = dim;
  inner.diagonal = k0_diag.array() - e_ref + w_diag.array();
  for (std::size_t idx : block) inner.diagonal(static_cast<Eigen::Index>(idx)) = pin;
  inner.apply = [&, pin](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
    y = k0.matrix() * x - e_ref * x;
    Eigen::VectorXcd wx = w.matrix() * x;
    project_out_block(wx);
    y += wx;
    for (std::size_t idx : block) {
      const auto i = static_cast<Eigen::Index>(idx);
      y(i) = pin * x(i);
    }
  };

  FeshbachOperator out;
  if (options.check_inner_positivity) {
    DavidsonOptions dopts;
    dopts.tolerance = options.inner_check_tolerance;
    dopts.max_iterations = options.inner_check_iterations;
    dopts.seed = options.seed;
    const EigenSolveResult low = davidson_lowest(inner, 1, dopts);
    out.inner_min_eigenvalue = low.values(0);
    if (out.inner_min_eigenvalue <= 0.0)
      throw std::runtime_error("feshbach_operator: inner block not positive (min eigenvalue " +
                               std::to_string(out.inner_min_eigenvalue) + "), regime violated");
  }

  const double e0p =
      dispersion(space.internal.ground_energy(), p3, space.masses.total());

  SpinMatrix f = SpinMatrix::Zero();
  for (int s = 0; s < 4; ++s) {
    Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(dim);
    unit(static_cast<Eigen::Index>(block[s])) = 1.0;
    Eigen::VectorXcd rhs = w.matrix() * unit;
    project_out_block(rhs);

    const PcgResult solve =
        pcg_solve(inner, rhs, options.cg_tolerance, options.cg_max_iterations, project_out_block);
    out.solver_residual = std::max(out.solver_residual, solve.residual);

    const Eigen::VectorXcd back = w.matrix() * solve.x;
    for (int t = 0; t < 4; ++t)
      f(t, s) = (t == s ? Complex(e0p - e_ref, 0.0) : Complex(0.0, 0.0)) -
                back(static_cast<Eigen::Index>(block[t]));
  }

  out.hermiticity_error = (f - f.adjoint().eval()).cwiseAbs().maxCoeff();
  out.matrix = 0.5 * (f + f.adjoint().eval());
  return out;
}

}  // namespace pfspec
