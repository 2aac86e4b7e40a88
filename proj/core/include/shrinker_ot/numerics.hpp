#pragma once

#include <functional>
#include <vector>

namespace shrinker_ot::numerics {

/// A one-dimensional quadrature rule: sum_i weights[i] * g(nodes[i]).
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre on [-1, 1].
Rule gauss_legendre(int count);

/// Gauss-Legendre mapped affinely to [lo, hi].
Rule gauss_legendre(int count, double lo, double hi);

/// Gauss-Hermite for the weight exp(-x^2) on the real line.
Rule gauss_hermite(int count);

/// Gauss-Jacobi for the symmetric weight (1 - t^2)^alpha on [-1, 1], alpha > -1.
Rule gauss_jacobi_symmetric(int count, double alpha);

/// Area of the unit sphere S^dim embedded in R^{dim+1}; sphere_area(0) == 2.
double sphere_area(int dim);

struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on [lo, hi].
IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double lo,
                                     double hi, double rel_tol = 1e-12,
                                     double abs_tol = 0.0, int max_intervals = 4000);

}  // namespace shrinker_ot::numerics
