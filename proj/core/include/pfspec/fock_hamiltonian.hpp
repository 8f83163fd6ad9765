// Truncated Fock space over a ModeGrid and Wick-ordered assembly of the
// fixed-momentum fiber operators on  C^4 (spins) x C^Ni (internal) x Fock.
//
// Field arguments are evaluated at the internal origin (dipole form), so
// the neutral-atom (P - P_ph).A cross terms cancel exactly and the
// interaction reduces to
//   W = -(g/mu) p_r.A(0) + (g^2/2mu) :A(0)^2:
//       - (g/2m_el) sigma_el.B(0) + (g/2m_n) sigma_n.B(0),
// with the scalar Wick constant of the squared field subtracted.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include <Eigen/Sparse>

#include "pfspec/hydrogen_internal.hpp"
#include "pfspec/photon_model.hpp"
#include "pfspec/spin_algebra.hpp"

namespace pfspec {

using SparseMatrixXcd = Eigen::SparseMatrix<Complex>;

// Occupation basis over the grid modes with total photon number <= n_max.
// States are sorted mode-index lists with repetition; the vacuum has index 0
// and states are ordered by photon number, then lexicographically, so a grid
// whose modes extend another grid's mode list embeds the smaller basis as an
// index prefix within each photon sector.
class FockBasis {
 public:
  static FockBasis build(std::size_t mode_count, int n_max);

  std::size_t dim() const { return states_.size(); }
  std::size_t mode_count() const { return mode_count_; }
  int n_max() const { return n_max_; }
  const std::vector<std::vector<std::uint32_t>>& states() const { return states_; }
  int total_photons(std::size_t index) const { return static_cast<int>(states_[index].size()); }
  // index of a sorted occupation list; throws std::out_of_range if absent
  std::size_t index_of(const std::vector<std::uint32_t>& state) const;

 private:
  struct OccupationHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const {
      std::size_t h = 1469598103934665603ull;
      for (std::uint32_t x : v) h = (h ^ (x + 0x9e3779b9u)) * 1099511628211ull;
      return h;
    }
  };

  std::vector<std::vector<std::uint32_t>> states_;
  std::unordered_map<std::vector<std::uint32_t>, std::size_t, OccupationHash> index_;
  std::size_t mode_count_ = 0;
  int n_max_ = 0;
};

SparseMatrixXcd creator(const FockBasis& fock, std::size_t mode);
SparseMatrixXcd annihilator(const FockBasis& fock, std::size_t mode);

// Phi(h) = sum_i (s_i a_i^* + conj(s_i) a_i) with s_i the per-mode sample
// already folded with sqrt(weight_i).
SparseMatrixXcd field_phi(const FockBasis& fock, const Eigen::VectorXcd& samples);

struct OperatorStamp {
  double g = 0.0;
  double p3 = 0.0;
  CutoffWindow window;
};

class FiberOperator {
 public:
  FiberOperator() = default;
  FiberOperator(SparseMatrixXcd matrix, std::size_t internal_dim, std::size_t fock_dim,
                OperatorStamp stamp, double wick_constant = 0.0);

  const SparseMatrixXcd& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t internal_dim() const { return internal_dim_; }
  std::size_t fock_dim() const { return fock_dim_; }
  const OperatorStamp& stamp() const { return stamp_; }
  double wick_constant() const { return wick_constant_; }

  double hermiticity_error() const;        // max |H_ij - conj(H_ji)|
  Eigen::VectorXd real_diagonal() const;
  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const { y = matrix_ * x; }

  // text export, one "row col re im" line per stored entry
  void write_triplets(std::ostream& os) const;

  friend FiberOperator operator+(const FiberOperator& a, const FiberOperator& b);

 private:
  SparseMatrixXcd matrix_;
  std::size_t internal_dim_ = 1;
  std::size_t fock_dim_ = 1;
  OperatorStamp stamp_;
  double wick_constant_ = 0.0;
};

// Everything needed to place operators on the product space (immutable).
struct FiberSpace {
  ModeGrid grid;
  InternalBasis internal;
  MomentumElements momenta;
  FockBasis fock;
  Masses masses;

  std::size_t dim() const { return 4 * internal.size() * fock.dim(); }
  std::size_t index(std::size_t f, int a, int s) const {
    return (f * internal.size() + a) * 4 + s;
  }
};

FiberSpace make_fiber_space(const ModeGrid& grid, const Masses& masses, int n_int,
                            int n_max_photons);

// refuse assemblies whose estimated triplet count exceeds this (memory guard)
inline constexpr std::size_t kDefaultTripletBudget = 60'000'000;

// free part  H_r + (1/2M)(P - P_ph)^2 + H_ph, diagonal in this basis
FiberOperator assemble_K0(const FiberSpace& space, double p3);

// Wick-ordered interaction with coupling amplitudes restricted to `window`
// (pass the grid window for the plain operator).
FiberOperator assemble_W(const FiberSpace& space, double g, double p3, const CutoffWindow& window,
                         std::size_t triplet_budget = kDefaultTripletBudget);

inline FiberOperator assemble_W(const FiberSpace& space, double g, double p3) {
  return assemble_W(space, g, p3, space.grid.window());
}

FiberOperator assemble_K(const FiberSpace& space, double g, double p3);
FiberOperator assemble_K(const FiberSpace& space, double g, double p3,
                         const CutoffWindow& window);

// shell interaction between tau and sigma on a grid spanning [tau, Lambda]:
// linear and squared shell terms plus the cross term (g^2/mu):A_out.A_shell:
// with A_out supported on [sigma, Lambda].  tau and sigma must be shell
// boundaries of the grid.
FiberOperator assemble_W_shell(const FiberSpace& space, double g, double p3, double tau,
                               double sigma);

FiberOperator number_operator(const FiberSpace& space, const CutoffWindow& window);
FiberOperator vacuum_projector(const FiberSpace& space);
FiberOperator pi0_projector(const FiberSpace& space);

}  // namespace pfspec
