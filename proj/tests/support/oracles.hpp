#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>

#include "shrinker_ot/measure.hpp"

namespace oracle {

/// Minimum of sum pi_ij c_ij over the vertices of the transportation polytope,
/// found by enumerating every spanning tree of the bipartite support graph.
/// Intended for at most 4 atoms per side.
double brute_force_transport(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             const Eigen::MatrixXd& cost);

/// int_s^inf r^k e^{-r^2/4 + a r} dr by boost tanh-sinh / exp-sinh quadrature.
double gamma_integral_boost(double s, int k, double a);

/// k = 0 closed form: sqrt(pi) e^{a^2} erfc((s - 2a)/2).
double gamma_integral_k0(double s, double a);

/// Random probability measure on [-1, 1]^dim with `atoms` atoms and weights in (0.05, 1].
shrinker_ot::DiscreteMeasure random_measure(std::mt19937_64& rng, int atoms, int dim);

/// Squared W2 on the line from the closed-form quantile integral.
double quantile_w2(const Eigen::VectorXd& x, const Eigen::VectorXd& a, const Eigen::VectorXd& y,
                   const Eigen::VectorXd& b);

}  // namespace oracle
