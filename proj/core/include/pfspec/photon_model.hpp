// Momentum-space photon model: polarization vectors, the coupling
// amplitudes entering the quantized vector potential and magnetic field
// with sharp infrared/ultraviolet cutoffs, and the quadrature grids that
// discretize the mode continuum.
//
// Grids are product quadratures: Gauss-Legendre radial nodes inside dyadic
// shells [2^-m L, 2^-m+1 L] anchored at the ultraviolet cutoff, times a
// symmetric angular set (Gauss-Legendre in cos(theta), uniform half-offset
// azimuths) that avoids the polar axis and integrates quadratics in the
// direction exactly.  Dyadic windows with the same ultraviolet cutoff give
// nested node sets, coarser grid first.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pfspec/spin_algebra.hpp"

namespace pfspec {

struct CutoffWindow {
  double sigma_low = 0.0;   // infrared cutoff (>= 0)
  double sigma_high = 0.0;  // ultraviolet cutoff

  bool contains(double k_norm) const { return k_norm >= sigma_low && k_norm <= sigma_high; }
  bool valid() const { return sigma_low >= 0.0 && sigma_low <= sigma_high; }
};

struct ModeNode {
  Eigen::Vector3d k;
  int lambda = 1;        // polarization index, 1 or 2
  double weight = 0.0;   // momentum-space volume carried by the node
};

class ModeGrid {
 public:
  ModeGrid() = default;

  const std::vector<ModeNode>& nodes() const { return nodes_; }
  const CutoffWindow& window() const { return window_; }
  // shell boundaries, descending from sigma_high to sigma_low (empty grid: none)
  const std::vector<double>& shell_boundaries() const { return boundaries_; }
  std::size_t size() const { return nodes_.size(); }
  int radial_per_shell() const { return n_radial_; }
  int polar_count() const { return n_theta_; }

  double total_weight() const;
  // volume of the spherical shell {sigma_low <= |k| <= sigma_high}
  double analytic_volume() const;
  bool is_shell_boundary(double value, double rel_tol = 1e-12) const;

  void write_json(std::ostream& os) const;

  friend ModeGrid build_grid(const CutoffWindow& window, int n_radial, int n_angular);

 private:
  std::vector<ModeNode> nodes_;
  std::vector<double> boundaries_;
  CutoffWindow window_;
  int n_radial_ = 0;
  int n_theta_ = 0;
};

// Product quadrature over the window; n_angular is the polar node count
// (azimuthal count is 2*n_angular rounded up to a multiple of 4).
// Exact P=0 isotropy of quadratic direction integrands requires n_angular >= 2.
ModeGrid build_grid(const CutoffWindow& window, int n_radial, int n_angular);

// Transverse polarization pair (eps1, eps2) with eps2 = khat x eps1.
// Throws std::domain_error on the polar axis (k1 = k2 = 0).
std::pair<Eigen::Vector3d, Eigen::Vector3d> polarization(const Eigen::Vector3d& k);

// Coupling amplitude of the vector potential:
//   (1/2pi) |k|^{-1/2} eps^lambda(k) e^{-i k.x}, zero outside the window.
Eigen::Vector3cd vector_potential_amplitude(const Eigen::Vector3d& x, const Eigen::Vector3d& k,
                                            int lambda, const CutoffWindow& window);

// Coupling amplitude of the magnetic field:
//   -(i/2pi) |k|^{1/2} (khat x eps^lambda)(k) e^{-i k.x}, zero outside the window.
Eigen::Vector3cd magnetic_field_amplitude(const Eigen::Vector3d& x, const Eigen::Vector3d& k,
                                          int lambda, const CutoffWindow& window);

// Per-axis polarization-summed magnetic amplitude weights at x = 0:
// j-th entry is sum_lambda |B-amplitude_j(0,k,lambda)|^2.
Eigen::Vector3d transverse_weight(const Eigen::Vector3d& k, const CutoffWindow& window);

}  // namespace pfspec
