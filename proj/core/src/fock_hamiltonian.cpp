#include "pfspec/fock_hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace pfspec {

namespace {

using Triplets = std::vector<Eigen::Triplet<Complex>>;

int count_mode(const std::vector<std::uint32_t>& state, std::uint32_t mode) {
  const auto [lo, hi] = std::equal_range(state.begin(), state.end(), mode);
  return static_cast<int>(hi - lo);
}

std::vector<std::uint32_t> with_mode(const std::vector<std::uint32_t>& state, std::uint32_t mode) {
  std::vector<std::uint32_t> out = state;
  out.insert(std::upper_bound(out.begin(), out.end(), mode), mode);
  return out;
}

std::vector<std::uint32_t> without_mode(const std::vector<std::uint32_t>& state,
                                        std::uint32_t mode) {
  std::vector<std::uint32_t> out = state;
  out.erase(std::lower_bound(out.begin(), out.end(), mode));
  return out;
}

}  // namespace

FockBasis FockBasis::build(std::size_t mode_count, int n_max) {
  if (n_max < 0) throw std::invalid_argument("FockBasis: n_max must be >= 0");
  FockBasis basis;
  basis.mode_count_ = mode_count;
  basis.n_max_ = n_max;
  basis.states_.push_back({});
  if (mode_count > 0) {
    for (int n = 1; n <= n_max; ++n) {
      std::vector<std::uint32_t> s(n, 0);
      while (true) {
        basis.states_.push_back(s);
        int pos = n - 1;
        while (pos >= 0 && s[pos] == mode_count - 1) --pos;
        if (pos < 0) break;
        const std::uint32_t v = s[pos] + 1;
        for (int q = pos; q < n; ++q) s[q] = v;
      }
    }
  }
  basis.index_.reserve(basis.states_.size());
  for (std::size_t i = 0; i < basis.states_.size(); ++i) basis.index_.emplace(basis.states_[i], i);
  return basis;
}

std::size_t FockBasis::index_of(const std::vector<std::uint32_t>& state) const {
  const auto it = index_.find(state);
  if (it == index_.end()) throw std::out_of_range("FockBasis: state not in truncation");
  return it->second;
}

SparseMatrixXcd creator(const FockBasis& fock, std::size_t mode) {
  Triplets triplets;
  for (std::size_t f = 0; f < fock.dim(); ++f) {
    const auto& state = fock.states()[f];
    if (static_cast<int>(state.size()) >= fock.n_max()) continue;
    const int occ = count_mode(state, static_cast<std::uint32_t>(mode));
    const std::size_t target = fock.index_of(with_mode(state, static_cast<std::uint32_t>(mode)));
    triplets.emplace_back(static_cast<int>(target), static_cast<int>(f), std::sqrt(occ + 1.0));
  }
  SparseMatrixXcd out(fock.dim(), fock.dim());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

SparseMatrixXcd annihilator(const FockBasis& fock, std::size_t mode) {
  return SparseMatrixXcd(creator(fock, mode).adjoint());
}

SparseMatrixXcd field_phi(const FockBasis& fock, const Eigen::VectorXcd& samples) {
  if (static_cast<std::size_t>(samples.size()) != fock.mode_count())
    throw std::invalid_argument("field_phi: sample count must match mode count");
  Triplets triplets;
  for (std::size_t f = 0; f < fock.dim(); ++f) {
    const auto& state = fock.states()[f];
    if (static_cast<int>(state.size()) < fock.n_max()) {
      for (std::uint32_t i = 0; i < fock.mode_count(); ++i) {
        if (samples(i) == Complex(0.0, 0.0)) continue;
        const int occ = count_mode(state, i);
        const std::size_t t = fock.index_of(with_mode(state, i));
        triplets.emplace_back(static_cast<int>(t), static_cast<int>(f),
                              samples(i) * std::sqrt(occ + 1.0));
      }
    }
    std::uint32_t prev = UINT32_MAX;
    for (std::uint32_t i : state) {
      if (i == prev) continue;
      prev = i;
      if (samples(i) == Complex(0.0, 0.0)) continue;
      const int occ = count_mode(state, i);
      const std::size_t t = fock.index_of(without_mode(state, i));
      triplets.emplace_back(static_cast<int>(t), static_cast<int>(f),
                            std::conj(samples(i)) * std::sqrt(static_cast<double>(occ)));
    }
  }
  SparseMatrixXcd out(fock.dim(), fock.dim());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

FiberOperator::FiberOperator(SparseMatrixXcd matrix, std::size_t internal_dim,
                             std::size_t fock_dim, OperatorStamp stamp, double wick_constant)
    : matrix_(std::move(matrix)),
      internal_dim_(internal_dim),
      fock_dim_(fock_dim),
      stamp_(stamp),
      wick_constant_(wick_constant) {}

double FiberOperator::hermiticity_error() const {
  SparseMatrixXcd diff = SparseMatrixXcd(matrix_.adjoint()) - matrix_;
  double err = 0.0;
  for (int col = 0; col < diff.outerSize(); ++col)
    for (SparseMatrixXcd::InnerIterator it(diff, col); it; ++it)
      err = std::max(err, std::abs(it.value()));
  return err;
}

Eigen::VectorXd FiberOperator::real_diagonal() const {
  return matrix_.diagonal().real();
}

void FiberOperator::write_triplets(std::ostream& os) const {
  os << "# " << matrix_.rows() << " " << matrix_.cols() << " " << matrix_.nonZeros() << "\n";
  char buf[96];
  for (int col = 0; col < matrix_.outerSize(); ++col)
    for (SparseMatrixXcd::InnerIterator it(matrix_, col); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%ld %ld %.17g %.17g\n", static_cast<long>(it.row()),
                    static_cast<long>(it.col()), it.value().real(), it.value().imag());
      os << buf;
    }
}

FiberOperator operator+(const FiberOperator& a, const FiberOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator+: dimension mismatch");
  OperatorStamp stamp = a.stamp_;
  if (stamp.g == 0.0) stamp.g = b.stamp_.g;
  stamp.window.sigma_low = std::min(a.stamp_.window.sigma_low, b.stamp_.window.sigma_low);
  stamp.window.sigma_high = std::max(a.stamp_.window.sigma_high, b.stamp_.window.sigma_high);
  return FiberOperator(a.matrix_ + b.matrix_, a.internal_dim_, a.fock_dim_, stamp,
                       a.wick_constant_ + b.wick_constant_);
}

FiberSpace make_fiber_space(const ModeGrid& grid, const Masses& masses, int n_int,
                            int n_max_photons) {
  FiberSpace space{grid, InternalBasis::build(masses, n_int), MomentumElements{},
                   FockBasis::build(grid.size(), n_max_photons), masses};
  space.momenta = momentum_elements(space.internal);
  return space;
}

namespace {

// folded per-mode amplitudes inside the window; zero elsewhere
struct ModeAmplitudes {
  std::vector<Eigen::Vector3cd> a;   // sqrt(w) * vector-potential amplitude at x=0
  std::vector<Eigen::Vector3cd> b;   // sqrt(w) * magnetic amplitude at x=0
  std::vector<std::uint32_t> support;
};

ModeAmplitudes fold_amplitudes(const ModeGrid& grid, const CutoffWindow& window) {
  ModeAmplitudes amp;
  const std::size_t m = grid.size();
  amp.a.assign(m, Eigen::Vector3cd::Zero());
  amp.b.assign(m, Eigen::Vector3cd::Zero());
  const Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < m; ++i) {
    const ModeNode& node = grid.nodes()[i];
    if (!window.contains(node.k.norm())) continue;
    const double sw = std::sqrt(node.weight);
    amp.a[i] = sw * vector_potential_amplitude(origin, node.k, node.lambda, window);
    amp.b[i] = sw * magnetic_field_amplitude(origin, node.k, node.lambda, window);
    amp.support.push_back(static_cast<std::uint32_t>(i));
  }
  return amp;
}

class BlockWriter {
 public:
  BlockWriter(const FiberSpace& space, Triplets& triplets)
      : space_(space), triplets_(triplets), ni_(space.internal.size()) {}

  void scalar(std::size_t ft, std::size_t ff, Complex value) {
    for (int a = 0; a < ni_; ++a)
      for (int s = 0; s < 4; ++s)
        triplets_.emplace_back(static_cast<int>(space_.index(ft, a, s)),
                               static_cast<int>(space_.index(ff, a, s)), value);
  }

  void spin_block(std::size_t ft, std::size_t ff, const SpinMatrix& block) {
    for (int s = 0; s < 4; ++s)
      for (int sp = 0; sp < 4; ++sp) {
        const Complex v = block(s, sp);
        if (v == Complex(0.0, 0.0)) continue;
        for (int a = 0; a < ni_; ++a)
          triplets_.emplace_back(static_cast<int>(space_.index(ft, a, s)),
                                 static_cast<int>(space_.index(ff, a, sp)), v);
      }
  }

  void internal_block(std::size_t ft, std::size_t ff, const Eigen::MatrixXcd& block) {
    for (int a = 0; a < ni_; ++a)
      for (int b = 0; b < ni_; ++b) {
        const Complex v = block(a, b);
        if (v == Complex(0.0, 0.0)) continue;
        for (int s = 0; s < 4; ++s)
          triplets_.emplace_back(static_cast<int>(space_.index(ft, a, s)),
                                 static_cast<int>(space_.index(ff, b, s)), v);
      }
  }

 private:
  const FiberSpace& space_;
  Triplets& triplets_;
  int ni_;
};

// upper bound for the number of full-space triplets of one interaction assembly
std::size_t estimate_triplets(const FiberSpace& space, std::size_t support_size) {
  const std::size_t ni = space.internal.size();
  const std::size_t local = 4 * ni;
  std::size_t linear = 0, conserving = 0, pairs = 0;
  for (std::size_t f = 0; f < space.fock.dim(); ++f) {
    const auto& state = space.fock.states()[f];
    const int n = static_cast<int>(state.size());
    std::size_t distinct = 0;
    std::uint32_t prev = UINT32_MAX;
    for (std::uint32_t i : state)
      if (i != prev) {
        ++distinct;
        prev = i;
      }
    if (n < space.fock.n_max()) linear += support_size;
    linear += distinct;
    conserving += distinct * support_size;
    if (n <= space.fock.n_max() - 2) pairs += support_size * (support_size + 1);
  }
  return (linear * 2 + conserving + pairs) * local;
}

void append_linear_terms(const FiberSpace& space, const ModeAmplitudes& amp, double g,
                         BlockWriter& writer) {
  const double mu = space.masses.reduced();
  std::array<SpinMatrix, 3> spin_cover;
  for (int j = 1; j <= 3; ++j)
    spin_cover[j - 1] =
        -(g / (2.0 * space.masses.m_el)) * pauli_el(j) + (g / (2.0 * space.masses.m_n)) * pauli_n(j);

  const int ni = space.internal.size();
  const bool has_momentum = ni > 1;
  Eigen::MatrixXcd internal_combo(ni, ni);
  SpinMatrix spin_combo;

  auto emit = [&](std::size_t ft, std::size_t ff, const Eigen::Vector3cd& av,
                  const Eigen::Vector3cd& bv, double root) {
    if (has_momentum) {
      internal_combo.setZero();
      for (int j = 0; j < 3; ++j) internal_combo += (-g / mu * root * av(j)) * space.momenta.p[j];
      writer.internal_block(ft, ff, internal_combo);
    }
    spin_combo.setZero();
    for (int j = 0; j < 3; ++j) spin_combo += (root * bv(j)) * spin_cover[j];
    writer.spin_block(ft, ff, spin_combo);
  };

  for (std::size_t f = 0; f < space.fock.dim(); ++f) {
    const auto& state = space.fock.states()[f];
    if (static_cast<int>(state.size()) < space.fock.n_max()) {
      for (std::uint32_t i : amp.support) {
        const int occ = count_mode(state, i);
        const std::size_t t = space.fock.index_of(with_mode(state, i));
        emit(t, f, amp.a[i], amp.b[i], std::sqrt(occ + 1.0));
      }
    }
    std::uint32_t prev = UINT32_MAX;
    for (std::uint32_t i : state) {
      if (i == prev) continue;
      prev = i;
      if (amp.a[i].isZero(0.0) && amp.b[i].isZero(0.0)) continue;
      const int occ = count_mode(state, i);
      const std::size_t t = space.fock.index_of(without_mode(state, i));
      emit(t, f, amp.a[i].conjugate(), amp.b[i].conjugate(), std::sqrt(static_cast<double>(occ)));
    }
  }
}

// sum_l u_l v_l without conjugation
Complex plain_dot(const Eigen::Vector3cd& u, const Eigen::Vector3cd& v) {
  return (u.array() * v.array()).sum();
}

// sum_l u_l conj(v_l)
Complex herm_dot(const Eigen::Vector3cd& u, const Eigen::Vector3cd& v) { return v.dot(u); }

// :(Phi_vec(X) . Phi_vec(Y)): for identical or disjoint supports.
// Returns the Wick constant that was subtracted (nonzero only for X == Y).
double append_wick_product(const FiberSpace& space, const ModeAmplitudes& ampx,
                           const ModeAmplitudes& ampy, bool identical, Complex prefactor,
                           BlockWriter& writer) {
  const FockBasis& fock = space.fock;
  double wick = 0.0;
  if (identical)
    for (std::uint32_t i : ampx.support) wick += ampx.a[i].squaredNorm();

  for (std::size_t f = 0; f < fock.dim(); ++f) {
    const auto& state = fock.states()[f];
    const int n = static_cast<int>(state.size());

    // pair creation (and its adjoint)
    if (n <= fock.n_max() - 2) {
      if (identical) {
        for (std::size_t ii = 0; ii < ampx.support.size(); ++ii) {
          const std::uint32_t i = ampx.support[ii];
          for (std::size_t jj = ii; jj < ampx.support.size(); ++jj) {
            const std::uint32_t j = ampx.support[jj];
            Complex coeff = prefactor * plain_dot(ampx.a[i], ampx.a[j]);
            double root;
            std::vector<std::uint32_t> target = with_mode(state, i);
            if (i == j) {
              const int occ = count_mode(state, i);
              root = std::sqrt((occ + 1.0) * (occ + 2.0));
            } else {
              coeff *= 2.0;
              root = std::sqrt((count_mode(state, i) + 1.0) * (count_mode(state, j) + 1.0));
            }
            target = with_mode(target, j);
            const std::size_t t = fock.index_of(target);
            writer.scalar(t, f, coeff * root);
            writer.scalar(f, t, std::conj(coeff) * root);
          }
        }
      } else {
        for (std::uint32_t i : ampx.support)
          for (std::uint32_t j : ampy.support) {
            const Complex coeff = prefactor * plain_dot(ampx.a[i], ampy.a[j]);
            const double root =
                std::sqrt((count_mode(state, i) + 1.0) * (count_mode(state, j) + 1.0));
            const std::size_t t = fock.index_of(with_mode(with_mode(state, i), j));
            writer.scalar(t, f, coeff * root);
            writer.scalar(f, t, std::conj(coeff) * root);
          }
      }
    }

    // number-conserving part: lower a mode of Y's support, raise one of X's
    std::uint32_t prev = UINT32_MAX;
    for (std::uint32_t q : state) {
      if (q == prev) continue;
      prev = q;
      if (ampy.a[q].isZero(0.0)) continue;
      const double root_q = std::sqrt(static_cast<double>(count_mode(state, q)));
      const std::vector<std::uint32_t> inter = without_mode(state, q);
      for (std::uint32_t p : ampx.support) {
        const Complex cval =
            (identical ? 2.0 : 1.0) * prefactor * herm_dot(ampx.a[p], ampy.a[q]);
        const double root = root_q * std::sqrt(count_mode(inter, p) + 1.0);
        const std::size_t t = fock.index_of(with_mode(inter, p));
        writer.scalar(t, f, cval * root);
      }
    }
    if (!identical) {
      // adjoint flow: lower X, raise Y
      prev = UINT32_MAX;
      for (std::uint32_t q : state) {
        if (q == prev) continue;
        prev = q;
        if (ampx.a[q].isZero(0.0)) continue;
        const double root_q = std::sqrt(static_cast<double>(count_mode(state, q)));
        const std::vector<std::uint32_t> inter = without_mode(state, q);
        for (std::uint32_t p : ampy.support) {
          const Complex cval = prefactor * herm_dot(ampy.a[p], ampx.a[q]);
          const double root = root_q * std::sqrt(count_mode(inter, p) + 1.0);
          const std::size_t t = fock.index_of(with_mode(inter, p));
          writer.scalar(t, f, cval * root);
        }
      }
    }
  }
  return wick;
}

SparseMatrixXcd symmetrized(SparseMatrixXcd m) {
  SparseMatrixXcd adj = SparseMatrixXcd(m.adjoint());
  m = 0.5 * (m + adj);
  m.makeCompressed();
  return m;
}

}  // namespace

FiberOperator assemble_K0(const FiberSpace& space, double p3) {
  const Eigen::Vector3d p(0.0, 0.0, p3);
  const double total_mass = space.masses.total();
  Triplets triplets;
  triplets.reserve(space.dim());
  for (std::size_t f = 0; f < space.fock.dim(); ++f) {
    Eigen::Vector3d k_tot = Eigen::Vector3d::Zero();
    double ph_energy = 0.0;
    for (std::uint32_t i : space.fock.states()[f]) {
      k_tot += space.grid.nodes()[i].k;
      ph_energy += space.grid.nodes()[i].k.norm();
    }
    const double kinetic = (p - k_tot).squaredNorm() / (2.0 * total_mass) + ph_energy;
    for (int a = 0; a < space.internal.size(); ++a) {
      const double value = space.internal.energy(a) + kinetic;
      for (int s = 0; s < 4; ++s) {
        const int idx = static_cast<int>(space.index(f, a, s));
        triplets.emplace_back(idx, idx, value);
      }
    }
  }
  SparseMatrixXcd matrix(space.dim(), space.dim());
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  return FiberOperator(std::move(matrix), space.internal.size(), space.fock.dim(),
                       {0.0, p3, space.grid.window()});
}

FiberOperator assemble_W(const FiberSpace& space, double g, double p3, const CutoffWindow& window,
                         std::size_t triplet_budget) {
  const ModeAmplitudes amp = fold_amplitudes(space.grid, window);
  const std::size_t estimate = estimate_triplets(space, amp.support.size());
  if (estimate > triplet_budget)
    throw std::runtime_error("assemble_W: estimated " + std::to_string(estimate) +
                             " triplets exceeds the budget; reduce the grid or raise the budget");

  Triplets triplets;
  triplets.reserve(estimate);
  BlockWriter writer(space, triplets);
  append_linear_terms(space, amp, g, writer);
  const double mu = space.masses.reduced();
  const double wick =
      g * g / (2.0 * mu) *
      append_wick_product(space, amp, amp, /*identical=*/true, g * g / (2.0 * mu), writer);

  SparseMatrixXcd matrix(space.dim(), space.dim());
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  Triplets().swap(triplets);
  matrix = symmetrized(std::move(matrix));
  return FiberOperator(std::move(matrix), space.internal.size(), space.fock.dim(),
                       {g, p3, window}, wick);
}

FiberOperator assemble_K(const FiberSpace& space, double g, double p3,
                         const CutoffWindow& window) {
  return assemble_K0(space, p3) + assemble_W(space, g, p3, window);
}

FiberOperator assemble_K(const FiberSpace& space, double g, double p3) {
  return assemble_K(space, g, p3, space.grid.window());
}

FiberOperator assemble_W_shell(const FiberSpace& space, double g, double p3, double tau,
                               double sigma) {
  const CutoffWindow grid_window = space.grid.window();
  if (!(tau <= sigma) || tau < grid_window.sigma_low || sigma > grid_window.sigma_high ||
      !space.grid.is_shell_boundary(tau) || !space.grid.is_shell_boundary(sigma))
    throw std::invalid_argument(
        "assemble_W_shell: tau and sigma must be nested shell boundaries of the grid");

  const CutoffWindow shell{tau, sigma};
  const CutoffWindow outer{sigma, grid_window.sigma_high};

  const ModeAmplitudes amp_shell = fold_amplitudes(space.grid, shell);
  const ModeAmplitudes amp_outer = fold_amplitudes(space.grid, outer);

  Triplets triplets;
  BlockWriter writer(space, triplets);
  append_linear_terms(space, amp_shell, g, writer);
  const double mu = space.masses.reduced();
  const double wick =
      g * g / (2.0 * mu) *
      append_wick_product(space, amp_shell, amp_shell, /*identical=*/true, g * g / (2.0 * mu),
                          writer);
  append_wick_product(space, amp_outer, amp_shell, /*identical=*/false, g * g / mu, writer);

  SparseMatrixXcd matrix(space.dim(), space.dim());
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  Triplets().swap(triplets);
  matrix = symmetrized(std::move(matrix));
  return FiberOperator(std::move(matrix), space.internal.size(), space.fock.dim(),
                       {g, p3, shell}, wick);
}

FiberOperator number_operator(const FiberSpace& space, const CutoffWindow& window) {
  Triplets triplets;
  for (std::size_t f = 0; f < space.fock.dim(); ++f) {
    double count = 0.0;
    for (std::uint32_t i : space.fock.states()[f])
      if (window.contains(space.grid.nodes()[i].k.norm())) count += 1.0;
    if (count == 0.0) continue;
    for (int a = 0; a < space.internal.size(); ++a)
      for (int s = 0; s < 4; ++s) {
        const int idx = static_cast<int>(space.index(f, a, s));
        triplets.emplace_back(idx, idx, count);
      }
  }
  SparseMatrixXcd matrix(space.dim(), space.dim());
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  return FiberOperator(std::move(matrix), space.internal.size(), space.fock.dim(),
                       {0.0, 0.0, window});
}

FiberOperator vacuum_projector(const FiberSpace& space) {
  Triplets triplets;
  for (int a = 0; a < space.internal.size(); ++a)
    for (int s = 0; s < 4; ++s) {
      const int idx = static_cast<int>(space.index(0, a, s));
      triplets.emplace_back(idx, idx, 1.0);
    }
  SparseMatrixXcd matrix(space.dim(), space.dim());
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  return FiberOperator(std::move(matrix), space.internal.size(), space.fock.dim(), {});
}

FiberOperator pi0_projector(const FiberSpace& space) {
  Triplets triplets;
  for (int s = 0; s < 4; ++s) {
    const int idx = static_cast<int>(space.index(0, 0, s));
    triplets.emplace_back(idx, idx, 1.0);
  }
  SparseMatrixXcd matrix(space.dim(), space.dim());
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  return FiberOperator(std::move(matrix), space.internal.size(), space.fock.dim(), {});
}

}  // namespace pfspec
