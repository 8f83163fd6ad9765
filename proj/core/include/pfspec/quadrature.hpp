// 1-D quadrature rules shared by the grid builder and the radial integrals.

#pragma once

#include <utility>
#include <vector>

namespace pfspec {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre on [-1, 1].
QuadratureRule gauss_legendre(int n);

// Gauss-Legendre mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

// Gauss-Laguerre for weight e^{-x} on [0, inf).
QuadratureRule gauss_laguerre(int n);

// integral of f over [a, b] by composite Gauss-Legendre (panels x order).
template <typename F>
double integrate(F&& f, double a, double b, int panels = 8, int order = 16) {
  double total = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const QuadratureRule rule = gauss_legendre(order, a + p * h, a + (p + 1) * h);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) total += rule.weights[i] * f(rule.nodes[i]);
  }
  return total;
}

}  // namespace pfspec
