#include "oracles.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

namespace oracle {
namespace {

// Flows on a tree support, by peeling leaves. Returns false if the cell set is
// not a spanning tree or a flow comes out negative.
bool tree_flows(const std::vector<int>& cells, int n1, int n2, const Eigen::VectorXd& a,
                const Eigen::VectorXd& b, std::vector<double>& flow) {
  const int nodes = n1 + n2;
  std::vector<double> supply(static_cast<std::size_t>(nodes));
  for (int i = 0; i < n1; ++i) supply[static_cast<std::size_t>(i)] = a[i];
  for (int j = 0; j < n2; ++j) supply[static_cast<std::size_t>(n1 + j)] = b[j];
  std::vector<int> degree(static_cast<std::size_t>(nodes), 0);
  for (int c : cells) {
    ++degree[static_cast<std::size_t>(c / n2)];
    ++degree[static_cast<std::size_t>(n1 + c % n2)];
  }
  std::vector<bool> used(cells.size(), false);
  flow.assign(cells.size(), 0.0);
  for (std::size_t step = 0; step < cells.size(); ++step) {
    bool found = false;
    for (std::size_t e = 0; e < cells.size() && !found; ++e) {
      if (used[e]) continue;
      const int row = cells[e] / n2;
      const int col = n1 + cells[e] % n2;
      for (int leaf : {row, col}) {
        if (degree[static_cast<std::size_t>(leaf)] != 1) continue;
        const int other = leaf == row ? col : row;
        const double f = supply[static_cast<std::size_t>(leaf)];
        flow[e] = f;
        supply[static_cast<std::size_t>(other)] -= f;
        supply[static_cast<std::size_t>(leaf)] = 0.0;
        --degree[static_cast<std::size_t>(leaf)];
        --degree[static_cast<std::size_t>(other)];
        used[e] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;  // a cycle
  }
  for (double f : flow) {
    if (f < -1e-12) return false;
  }
  return true;
}

}  // namespace

double brute_force_transport(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             const Eigen::MatrixXd& cost) {
  const int n1 = static_cast<int>(a.size());
  const int n2 = static_cast<int>(b.size());
  const int total = n1 * n2;
  const int pick = n1 + n2 - 1;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> mask(static_cast<std::size_t>(total), 0);
  std::fill(mask.end() - pick, mask.end(), 1);
  std::vector<double> flow;
  do {
    std::vector<int> cells;
    for (int c = 0; c < total; ++c) {
      if (mask[static_cast<std::size_t>(c)]) cells.push_back(c);
    }
    if (!tree_flows(cells, n1, n2, a, b, flow)) continue;
    double value = 0.0;
    for (std::size_t e = 0; e < cells.size(); ++e) {
      value += flow[e] * cost(cells[e] / n2, cells[e] % n2);
    }
    best = std::min(best, value);
  } while (std::next_permutation(mask.begin(), mask.end()));
  return best;
}

double gamma_integral_boost(double s, int k, double a) {
  const auto g = [k, a](double r) {
    if (r <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (!std::isfinite(r)) return 0.0;
    return std::exp(k * std::log(r) - 0.25 * r * r + a * r);
  };
  const double lo = std::max(s, 0.0);
  const double split = lo + 2.0 * std::abs(a) + 8.0;
  boost::math::quadrature::tanh_sinh<double> finite;
  boost::math::quadrature::exp_sinh<double> tail;
  const double head = finite.integrate(g, lo, split, 1e-14);
  const double rest = tail.integrate([&](double t) { return g(split + t); }, 0.0,
                                     std::numeric_limits<double>::infinity(), 1e-14);
  return head + rest;
}

double gamma_integral_k0(double s, double a) {
  return std::sqrt(std::numbers::pi) * std::exp(a * a) * std::erfc((std::max(s, 0.0) - 2.0 * a) / 2.0);
}

shrinker_ot::DiscreteMeasure random_measure(std::mt19937_64& rng, int atoms, int dim) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> mass(0.05, 1.0);
  Eigen::MatrixXd points(atoms, dim);
  Eigen::VectorXd weights(atoms);
  for (int i = 0; i < atoms; ++i) {
    for (int j = 0; j < dim; ++j) points(i, j) = coord(rng);
    weights[i] = mass(rng);
  }
  weights /= weights.sum();
  return shrinker_ot::DiscreteMeasure(std::move(points), std::move(weights));
}

double quantile_w2(const Eigen::VectorXd& x, const Eigen::VectorXd& a, const Eigen::VectorXd& y,
                   const Eigen::VectorXd& b) {
  std::vector<int> ix(static_cast<std::size_t>(x.size())), iy(static_cast<std::size_t>(y.size()));
  std::iota(ix.begin(), ix.end(), 0);
  std::iota(iy.begin(), iy.end(), 0);
  std::sort(ix.begin(), ix.end(), [&](int p, int q) { return x[p] < x[q]; });
  std::sort(iy.begin(), iy.end(), [&](int p, int q) { return y[p] < y[q]; });
  // Integrate (F^-1 - G^-1)^2 over t in [0, 1] between consecutive breakpoints.
  std::vector<double> fa{0.0}, fb{0.0};
  for (int i : ix) fa.push_back(fa.back() + a[i] / a.sum());
  for (int j : iy) fb.push_back(fb.back() + b[j] / b.sum());
  std::vector<double> cuts(fa.begin(), fa.end());
  cuts.insert(cuts.end(), fb.begin(), fb.end());
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double lo = std::min(cuts[c], 1.0);
    const double hi = std::min(cuts[c + 1], 1.0);
    if (hi <= lo) continue;
    const double mid = 0.5 * (lo + hi);
    const auto pa = std::min<std::size_t>(
        static_cast<std::size_t>(std::upper_bound(fa.begin(), fa.end(), mid) - fa.begin()) - 1,
        ix.size() - 1);
    const auto pb = std::min<std::size_t>(
        static_cast<std::size_t>(std::upper_bound(fb.begin(), fb.end(), mid) - fb.begin()) - 1,
        iy.size() - 1);
    const double d = x[ix[pa]] - y[iy[pb]];
    total += (hi - lo) * d * d;
  }
  return total;
}

}  // namespace oracle
