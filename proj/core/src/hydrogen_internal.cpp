#include "pfspec/hydrogen_internal.hpp"

#include <cmath>
#include <stdexcept>

#include "pfspec/quadrature.hpp"

namespace pfspec {

double Masses::reduced() const { return reduced_mass(m_el, m_n); }

double reduced_mass(double m_el, double m_n) {
  if (m_el <= 0.0 || m_n <= 0.0) throw std::invalid_argument("masses must be positive");
  return m_el * m_n / (m_el + m_n);
}

double ground_state_energy(double mu) {
  if (mu <= 0.0) throw std::invalid_argument("reduced mass must be positive");
  return -0.5 * mu;
}

double dispersion(double e0, double p3, double total_mass) {
  return e0 + p3 * p3 / (2.0 * total_mass);
}

namespace {

// generalized Laguerre L^alpha_k by the three-term recurrence
double laguerre(int k, int alpha, double x) {
  double l0 = 1.0;
  if (k == 0) return l0;
  double l1 = 1.0 + alpha - x;
  for (int i = 1; i < k; ++i) {
    const double l2 = ((2.0 * i + 1.0 + alpha - x) * l1 - (i + alpha) * l0) / (i + 1.0);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

double laguerre_derivative(int k, int alpha, double x) {
  if (k == 0) return 0.0;
  return -laguerre(k - 1, alpha + 1, x);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double radial_norm(int n, int l, double mu) {
  const double na = n / mu;  // n * Bohr radius
  const double c = 2.0 / na;
  return std::sqrt(c * c * c * factorial(n - l - 1) / (2.0 * n * factorial(n + l)));
}

}  // namespace

InternalBasis InternalBasis::build(const Masses& masses, int n_int) {
  if (n_int < 1) throw std::invalid_argument("internal basis needs n_int >= 1");
  InternalBasis basis;
  basis.mu_ = masses.reduced();
  basis.n_int_ = n_int;
  for (int n = 1; n <= n_int; ++n) {
    basis.states_.push_back({n, 0, 0});
    basis.energies_.push_back(-basis.mu_ / (2.0 * n * n));
    if (n >= 2) {
      for (int m = -1; m <= 1; ++m) {
        basis.states_.push_back({n, 1, m});
        basis.energies_.push_back(-basis.mu_ / (2.0 * n * n));
      }
    }
  }
  return basis;
}

double InternalBasis::radial_poly(int n, int l, double r) const {
  const double x = 2.0 * mu_ * r / n;
  return radial_norm(n, l, mu_) * std::pow(x, l) * laguerre(n - l - 1, 2 * l + 1, x);
}

double InternalBasis::radial(int n, int l, double r) const {
  return radial_poly(n, l, r) * std::exp(-mu_ * r / n);
}

double InternalBasis::radial_poly_derivative(int n, int l, double r) const {
  const double c = 2.0 * mu_ / n;
  const double x = c * r;
  const double norm = radial_norm(n, l, mu_);
  const double lag = laguerre(n - l - 1, 2 * l + 1, x);
  const double dlag = laguerre_derivative(n - l - 1, 2 * l + 1, x);
  double poly_dr = norm * c * (std::pow(x, l) * dlag);
  if (l > 0) poly_dr += norm * c * l * std::pow(x, l - 1) * lag;
  return poly_dr;
}

double InternalBasis::radial_derivative(int n, int l, double r) const {
  const double rate = mu_ / n;
  return (radial_poly_derivative(n, l, r) - rate * radial_poly(n, l, r)) * std::exp(-rate * r);
}

namespace {

// spherical unit vectors carrying the p-state angular dependence:
// psi_{n1m} = sqrt(3/4pi) (R_n1(r)/r) (u_m . r)
Eigen::Vector3cd p_state_direction(int m) {
  const Complex I(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  switch (m) {
    case -1:
      return Eigen::Vector3cd(s, -I * s, 0.0);
    case 0:
      return Eigen::Vector3cd(0.0, 0.0, 1.0);
    case 1:
      return Eigen::Vector3cd(-s, -I * s, 0.0);
    default:
      throw std::invalid_argument("p-state m must be -1, 0 or 1");
  }
}

// integral of poly(r) e^{-rate r} over [0, inf) via scaled Gauss-Laguerre
template <typename F>
double laguerre_integral(F&& poly, double rate, int order) {
  const QuadratureRule rule = gauss_laguerre(order);
  double sum = 0.0;
  for (int i = 0; i < order; ++i) sum += rule.weights[i] * poly(rule.nodes[i] / rate);
  return sum / rate;
}

}  // namespace

MomentumElements momentum_elements(const InternalBasis& basis, int quad_order) {
  const int n_states = basis.size();
  MomentumElements out;
  for (auto& mat : out.p) mat = Eigen::MatrixXcd::Zero(n_states, n_states);

  const Complex I(0.0, 1.0);
  const double mu = basis.mu();
  for (int a = 0; a < n_states; ++a) {
    const StateLabel& sa = basis.states()[a];
    for (int b = 0; b < n_states; ++b) {
      const StateLabel& sb = basis.states()[b];
      if (sa.l + sb.l != 1) continue;  // only s<->p elements are nonzero

      if (sa.l == 0) {
        // <n'00| p |n1m> = -(i/sqrt(3)) (2 integral_I + integral_J) u_m
        const int ns = sa.n, np = sb.n;
        const double rate = mu * (1.0 / ns + 1.0 / np);
        const double integral_i = laguerre_integral(
            [&](double r) { return basis.radial_poly(ns, 0, r) * basis.radial_poly(np, 1, r) * r; },
            rate, quad_order);
        const double integral_j = laguerre_integral(
            [&](double r) {
              const double dpoly =
                  basis.radial_poly_derivative(np, 1, r) - mu / np * basis.radial_poly(np, 1, r);
              return basis.radial_poly(ns, 0, r) * dpoly * r * r;
            },
            rate, quad_order);
        const Eigen::Vector3cd u = p_state_direction(sb.m);
        const Complex amp = -I / std::sqrt(3.0) * (2.0 * integral_i + integral_j);
        for (int j = 0; j < 3; ++j) out.p[j](a, b) = amp * u(j);
      } else {
        // <n1m| p |n'00> = -(i/sqrt(3)) integral_K conj(u_m)
        const int np = sa.n, ns = sb.n;
        const double rate = mu * (1.0 / ns + 1.0 / np);
        const double integral_k = laguerre_integral(
            [&](double r) {
              const double dpoly =
                  basis.radial_poly_derivative(ns, 0, r) - mu / ns * basis.radial_poly(ns, 0, r);
              return basis.radial_poly(np, 1, r) * dpoly * r * r;
            },
            rate, quad_order);
        const Eigen::Vector3cd u = p_state_direction(sa.m);
        const Complex amp = -I / std::sqrt(3.0) * integral_k;
        for (int j = 0; j < 3; ++j) out.p[j](a, b) = amp * std::conj(u(j));
      }
    }
  }
  return out;
}

double dipole_z_element(const InternalBasis& basis, int n_s, int n_p, int quad_order) {
  const double mu = basis.mu();
  const double rate = mu * (1.0 / n_s + 1.0 / n_p);
  const double radial = laguerre_integral(
      [&](double r) {
        return basis.radial_poly(n_s, 0, r) * basis.radial_poly(n_p, 1, r) * r * r * r;
      },
      rate, quad_order);
  return radial / std::sqrt(3.0);
}

RadialGrid RadialGrid::uniform(double r_max, int count) {
  if (r_max <= 0.0 || count < 2) throw std::invalid_argument("invalid radial grid");
  RadialGrid grid;
  grid.r_max = r_max;
  grid.count = count;
  const double h = r_max / (count + 1);
  grid.radii.resize(count);
  grid.weights.assign(count, h);
  for (int i = 0; i < count; ++i) grid.radii[i] = h * (i + 1);
  return grid;
}

ReducedResolvent::ReducedResolvent(const InternalBasis& basis, const MomentumElements& elements,
                                   RadialGrid grid)
    : grid_(std::move(grid)), mu_(basis.mu()), e0_(basis.ground_energy()) {
  const int n = grid_.count;
  source_.resize(n);
  potential_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double r = grid_.radii[i];
    source_[i] = r * basis.radial_derivative(1, 0, r);
    potential_[i] = 1.0 / (mu_ * r * r) - 1.0 / r - e0_;
  }
  for (int b = 0; b < basis.size(); ++b) {
    if (basis.states()[b].l != 1) continue;
    const Complex el = elements.p[2](b, 0);
    if (std::norm(el) == 0.0) continue;
    basis_numerators_.push_back(std::norm(el));
    basis_energies_.push_back(basis.energy(b));
  }
}

ResolventValue ReducedResolvent::quadratic_form(double w) const {
  if (w <= 0.0) throw std::domain_error("reduced resolvent: shift must be positive");

  ResolventValue value;
  for (std::size_t b = 0; b < basis_numerators_.size(); ++b)
    value.basis += basis_numerators_[b] / (basis_energies_[b] - e0_ + w);

  // l=1 Sternheimer solve on u(r) = r f(r): tridiagonal Thomas sweep
  const int n = grid_.count;
  const double h = grid_.radii[1] - grid_.radii[0];
  const double off = -1.0 / (2.0 * mu_ * h * h);
  std::vector<double> diag(n), rhs(source_);
  for (int i = 0; i < n; ++i) diag[i] = 1.0 / (mu_ * h * h) + potential_[i] + w;

  std::vector<double> c(n, 0.0);
  c[0] = off / diag[0];
  rhs[0] /= diag[0];
  for (int i = 1; i < n; ++i) {
    const double m = diag[i] - off * c[i - 1];
    c[i] = off / m;
    rhs[i] = (rhs[i] - off * rhs[i - 1]) / m;
  }
  for (int i = n - 2; i >= 0; --i) rhs[i] -= c[i] * rhs[i + 1];

  double form = 0.0;
  for (int i = 0; i < n; ++i) form += grid_.weights[i] * source_[i] * rhs[i];
  value.sternheimer = form / 3.0;
  return value;
}

}  // namespace pfspec
