// Internal two-body Coulomb problem at reduced mass mu: hydrogenic bound
// states, momentum matrix elements between the low-lying s/p levels, and
// the reduced-resolvent quadratic form behind the diagonal second-order
// shift (finite-basis sum and radial Sternheimer backends).

#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "pfspec/spin_algebra.hpp"

namespace pfspec {

struct Masses {
  double m_el = 1.0;
  double m_n = 1.0;

  double total() const { return m_el + m_n; }
  double reduced() const;
};

double reduced_mass(double m_el, double m_n);

// lowest eigenvalue of p^2/2mu - 1/|r|
double ground_state_energy(double mu);

// E_0(P) = e_0 + P^2/2M for P along the 3-axis
double dispersion(double e0, double p3, double total_mass);

struct StateLabel {
  int n = 1;
  int l = 0;
  int m = 0;
};

// Bound states with n <= n_int, restricted to l <= 1.  Higher waves do not
// couple to the s-wave ground block through a single p_r insertion and are
// deliberately left out of the truncation.
class InternalBasis {
 public:
  static InternalBasis build(const Masses& masses, int n_int);

  int size() const { return static_cast<int>(states_.size()); }
  const std::vector<StateLabel>& states() const { return states_; }
  double energy(int index) const { return energies_[index]; }          // -mu/(2 n^2)
  double ground_energy() const { return energies_[0]; }
  double mu() const { return mu_; }
  int n_int() const { return n_int_; }

  // R_nl(r) and its radial derivative
  double radial(int n, int l, double r) const;
  double radial_derivative(int n, int l, double r) const;
  // polynomial part of R_nl: radial(r) = radial_poly(r) * exp(-mu r / n)
  double radial_poly(int n, int l, double r) const;
  double radial_poly_derivative(int n, int l, double r) const;

 private:
  std::vector<StateLabel> states_;
  std::vector<double> energies_;
  double mu_ = 0.5;
  int n_int_ = 2;
};

// Per-axis matrices <a| p_j |b> over the basis states (Hermitian).
struct MomentumElements {
  std::array<Eigen::MatrixXcd, 3> p;
};

// Radial integrals by scaled Gauss-Laguerre quadrature; exact for the
// polynomial-times-exponential hydrogenic integrands at quad_order high
// enough for the truncation (32 covers n_int <= 4 with a wide margin).
MomentumElements momentum_elements(const InternalBasis& basis, int quad_order = 32);

// Dipole matrix element <n'00| z |n1 0>; used by tests as an independent
// route to the p elements through the commutator with H_r.
double dipole_z_element(const InternalBasis& basis, int n_s, int n_p, int quad_order = 32);

struct RadialGrid {
  std::vector<double> radii;
  std::vector<double> weights;
  double r_max = 0.0;
  int count = 0;

  static RadialGrid uniform(double r_max, int count);
};

struct ResolventValue {
  double basis = 0.0;        // sum over the finite bound-state basis
  double sternheimer = 0.0;  // radial l=1 solve (includes the continuum)

  double difference() const { return sternheimer - basis; }
};

// Quadratic form <p_j phi0, [H_r - e0 + w]^-1 pbar_0 p_j phi0>, independent
// of the axis j by rotational symmetry of the ground state.
class ReducedResolvent {
 public:
  ReducedResolvent(const InternalBasis& basis, const MomentumElements& elements, RadialGrid grid);

  // w > 0 is the caller's energy shift; throws std::domain_error otherwise.
  ResolventValue quadratic_form(double w) const;

  const RadialGrid& grid() const { return grid_; }

 private:
  RadialGrid grid_;
  std::vector<double> source_;      // r * R'_10(r) on the grid
  std::vector<double> potential_;   // l=1 channel potential + centrifugal - e0
  double mu_ = 0.5;
  double e0_ = -0.25;
  std::vector<double> basis_numerators_;  // |<b|p_3|phi0>|^2 for l=1 states
  std::vector<double> basis_energies_;
};

}  // namespace pfspec
