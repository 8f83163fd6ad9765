// Second-order Feshbach-Schur analysis on the 4-dimensional ground block:
// splitting integrals, the spin-spin block and its closed-form spectrum,
// the scalar diagonal shifts, the effective matrix F^(2), the gap constant
// lower bound, and the full Schur-complement operator built from
// truncated-space linear solves.

#pragma once

#include <array>
#include <utility>

#include "pfspec/fock_hamiltonian.hpp"
#include "pfspec/hydrogen_internal.hpp"
#include "pfspec/photon_model.hpp"
#include "pfspec/solvers.hpp"
#include "pfspec/spin_algebra.hpp"

namespace pfspec {

struct GammaIntegrals {
  double gamma0 = 0.0;  // -(1/8 m_el m_n pi^2) int |k|/D
  double gamma1 = 0.0;  // +(1/8 m_el m_n pi^2) int |k| khat_j^2 / D
  double gamma2 = 0.0;
  double gamma3 = 0.0;

  double sum() const { return gamma0 + gamma1 + gamma2 + gamma3; }
};

// Literal splitting integrals with denominator D(k) = |k| - k.P/M + k^2/2M,
// evaluated on the spatial nodes of `quad` restricted to `window`.
// Requires |p3| < M/2 so that D stays positive.
GammaIntegrals gamma_integrals(double p3, const CutoffWindow& window, const Masses& masses,
                               const ModeGrid& quad);
// Validating overload: rejects momenta off the 3-axis.
GammaIntegrals gamma_integrals(const Eigen::Vector3d& p, const CutoffWindow& window,
                               const Masses& masses, const ModeGrid& quad);

// coefficients c_j of the spin-spin block sum_j c_j sigma^el_j sigma^n_j,
// assembled mechanically from the polarization-summed magnetic weights
Eigen::Vector3d gamma_sharp_coefficients(double p3, const CutoffWindow& window,
                                         const Masses& masses, const ModeGrid& quad);

struct SharpMatrix {
  SpinMatrix matrix;                       // sum_j c_j sigma^el_j sigma^n_j
  Eigen::Vector3d coefficients;
  std::array<double, 4> operator_gammas;   // its spectrum: gamma^(0), gamma^(1..3)
};

// Off-diagonal j != j' cross terms cancel under the symmetric angular grid
// when P is along the 3-axis; enforced by the p3-only interface.
SharpMatrix gamma_b_sharp_matrix(double p3, const CutoffWindow& window, const Masses& masses,
                                 const ModeGrid& quad);

// polarization-summed scalar diagonal shift of the magnetic coupling
double gamma_b_diag(double p3, const CutoffWindow& window, const Masses& masses,
                    const ModeGrid& quad);

enum class ResolventBackend { basis_sum, sternheimer };

// polarization-summed scalar diagonal shift of the p.A coupling, built on
// the reduced-resolvent quadratic form under the shift D(k)
double gamma_a_diag(double p3, const CutoffWindow& window, const Masses& masses,
                    const ModeGrid& quad, const ReducedResolvent& resolvent,
                    ResolventBackend backend);

struct SplittingReport {
  // spectrum of the assembled spin-spin operator (gamma1..3 ordered by axis)
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double delta_sigma = 0.0;  // min(gamma1..3) - gamma0
  double d_diag = 0.0;       // scalar shift, -(gamma_a_diag + gamma_b_diag)
  double e0_pred = 0.0;      // E_0(P) + g^2 (d_diag + gamma0)
  CutoffWindow window;
  Masses masses;
  double p3 = 0.0;
  double g = 0.0;
  // measured ratio between the operator gamma0 and the literal integral
  // gamma0 (the two normalizations differ by a constant; see README)
  double gamma_matrix_ratio = 0.0;
};

struct EffectiveMatrix {
  SpinMatrix matrix;  // F^(2) = (E_0(P) + g^2 d) Id + g^2 Gamma^{B,#}
  double e0 = 0.0;
  double d_diag = 0.0;
  Eigen::Vector3d sharp_coefficients;
};

std::pair<EffectiveMatrix, SplittingReport> effective_matrix(
    double g, double p3, const CutoffWindow& window, const Masses& masses, const ModeGrid& quad,
    const ReducedResolvent* resolvent = nullptr,
    ResolventBackend backend = ResolventBackend::basis_sum);

// positive lower bound for the splitting gap constant, uniform over
// sigma <= Lambda/2 and |P| <= p_c (literal-integral normalization)
double delta_lower_bound(double p_c, double lambda_uv, const Masses& masses);

struct FeshbachOptions {
  double cg_tolerance = 1e-12;
  int cg_max_iterations = 5000;
  bool check_inner_positivity = true;
  double inner_check_tolerance = 1e-6;
  int inner_check_iterations = 300;
  unsigned long seed = 12345;
};

struct FeshbachOperator {
  SpinMatrix matrix;                 // 4x4 Schur complement block
  double hermiticity_error = 0.0;
  double inner_min_eigenvalue = 0.0; // smallest eigenvalue of the inner block
  double solver_residual = 0.0;      // worst relative PCG residual
};

// Schur complement of (K0 + W - e_ref) with respect to the rank-4 ground
// projector.  Throws if the inner block fails its positivity check.
FeshbachOperator feshbach_operator(const FiberSpace& space, const FiberOperator& k0,
                                   const FiberOperator& w, double e_ref, double p3,
                                   const FeshbachOptions& options = {});

}  // namespace pfspec
