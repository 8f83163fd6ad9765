#include "pfspec/photon_model.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "pfspec/quadrature.hpp"

namespace pfspec {

namespace {
constexpr double kTwoPiInv = 1.0 / (2.0 * M_PI);

void append_number(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << buf;
}
}  // namespace

std::pair<Eigen::Vector3d, Eigen::Vector3d> polarization(const Eigen::Vector3d& k) {
  const double rho2 = k(0) * k(0) + k(1) * k(1);
  if (k.norm() == 0.0 || rho2 == 0.0)
    throw std::domain_error("polarization: k on the polar axis; grids must avoid it");
  const double rho = std::sqrt(rho2);
  const Eigen::Vector3d eps1(k(1) / rho, -k(0) / rho, 0.0);
  const Eigen::Vector3d eps2 = k.normalized().cross(eps1);
  return {eps1, eps2};
}

Eigen::Vector3cd vector_potential_amplitude(const Eigen::Vector3d& x, const Eigen::Vector3d& k,
                                            int lambda, const CutoffWindow& window) {
  if (lambda != 1 && lambda != 2) throw std::invalid_argument("polarization index must be 1 or 2");
  const double kn = k.norm();
  if (!window.contains(kn)) return Eigen::Vector3cd::Zero();
  const auto [eps1, eps2] = polarization(k);
  const Eigen::Vector3d& eps = (lambda == 1) ? eps1 : eps2;
  const Complex phase = std::exp(Complex(0.0, -k.dot(x)));
  return (kTwoPiInv / std::sqrt(kn)) * phase * eps.cast<Complex>();
}

Eigen::Vector3cd magnetic_field_amplitude(const Eigen::Vector3d& x, const Eigen::Vector3d& k,
                                          int lambda, const CutoffWindow& window) {
  if (lambda != 1 && lambda != 2) throw std::invalid_argument("polarization index must be 1 or 2");
  const double kn = k.norm();
  if (!window.contains(kn)) return Eigen::Vector3cd::Zero();
  const auto [eps1, eps2] = polarization(k);
  // khat x eps1 = eps2, khat x eps2 = -eps1
  const Eigen::Vector3d cross = (lambda == 1) ? eps2 : Eigen::Vector3d(-eps1);
  const Complex phase = std::exp(Complex(0.0, -k.dot(x)));
  return Complex(0.0, -kTwoPiInv) * std::sqrt(kn) * phase * cross.cast<Complex>();
}

Eigen::Vector3d transverse_weight(const Eigen::Vector3d& k, const CutoffWindow& window) {
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  if (!window.contains(k.norm())) return out;
  for (int lambda = 1; lambda <= 2; ++lambda) {
    const Eigen::Vector3cd amp = magnetic_field_amplitude(Eigen::Vector3d::Zero(), k, lambda, window);
    for (int j = 0; j < 3; ++j) out(j) += std::norm(amp(j));
  }
  return out;
}

ModeGrid build_grid(const CutoffWindow& window, int n_radial, int n_angular) {
  if (!window.valid()) throw std::invalid_argument("build_grid: invalid cutoff window");
  if (n_radial < 1 || n_angular < 1) throw std::invalid_argument("build_grid: counts must be >= 1");

  ModeGrid grid;
  grid.window_ = window;
  grid.n_radial_ = n_radial;
  grid.n_theta_ = n_angular;
  if (window.sigma_low == window.sigma_high) return grid;  // empty shell
  if (window.sigma_low <= 0.0)
    throw std::invalid_argument("build_grid: dyadic shells require sigma_low > 0");

  const int n_phi = 4 * ((2 * n_angular + 3) / 4);
  const QuadratureRule polar = gauss_legendre(n_angular);
  const double phi_weight = 2.0 * M_PI / n_phi;

  grid.boundaries_.push_back(window.sigma_high);
  double hi = window.sigma_high;
  while (hi > window.sigma_low) {
    double lo = 0.5 * hi;
    if (lo < window.sigma_low) lo = window.sigma_low;
    grid.boundaries_.push_back(lo);

    const QuadratureRule radial = gauss_legendre(n_radial, lo, hi);
    // radial nodes descending keeps coarser dyadic grids as index prefixes
    for (int ir = n_radial - 1; ir >= 0; --ir) {
      const double r = radial.nodes[ir];
      const double wr = radial.weights[ir] * r * r;
      for (int it = 0; it < n_angular; ++it) {
        const double ct = polar.nodes[it];
        const double st = std::sqrt(1.0 - ct * ct);
        for (int ip = 0; ip < n_phi; ++ip) {
          const double phi = 2.0 * M_PI * (ip + 0.5) / n_phi;
          const Eigen::Vector3d khat(st * std::cos(phi), st * std::sin(phi), ct);
          const double w = wr * polar.weights[it] * phi_weight;
          for (int lambda = 1; lambda <= 2; ++lambda)
            grid.nodes_.push_back(ModeNode{r * khat, lambda, w});
        }
      }
    }
    hi = lo;
  }
  return grid;
}

double ModeGrid::total_weight() const {
  double sum = 0.0;
  for (const ModeNode& node : nodes_)
    if (node.lambda == 1) sum += node.weight;
  return sum;
}

double ModeGrid::analytic_volume() const {
  const double a = window_.sigma_low, b = window_.sigma_high;
  return 4.0 * M_PI / 3.0 * (b * b * b - a * a * a);
}

bool ModeGrid::is_shell_boundary(double value, double rel_tol) const {
  const double scale = std::max(1.0, window_.sigma_high);
  for (double b : boundaries_)
    if (std::abs(b - value) <= rel_tol * scale) return true;
  return false;
}

void ModeGrid::write_json(std::ostream& os) const {
  os << "{\n  \"window\": {\"sigma_low\": ";
  append_number(os, window_.sigma_low);
  os << ", \"sigma_high\": ";
  append_number(os, window_.sigma_high);
  os << "},\n  \"n_radial\": " << n_radial_ << ",\n  \"n_polar\": " << n_theta_
     << ",\n  \"shell_boundaries\": [";
  for (std::size_t i = 0; i < boundaries_.size(); ++i) {
    if (i) os << ", ";
    append_number(os, boundaries_[i]);
  }
  os << "],\n  \"nodes\": [\n";
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const ModeNode& n = nodes_[i];
    os << "    {\"k\": [";
    append_number(os, n.k(0));
    os << ", ";
    append_number(os, n.k(1));
    os << ", ";
    append_number(os, n.k(2));
    os << "], \"lambda\": " << n.lambda << ", \"weight\": ";
    append_number(os, n.weight);
    os << "}" << (i + 1 < nodes_.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
}

}  // namespace pfspec
