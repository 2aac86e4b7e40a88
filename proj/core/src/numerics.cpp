#include "shrinker_ot/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>

#include "shrinker_ot/error.hpp"

namespace shrinker_ot::numerics {
namespace {

void require_count(int count) {
  if (count < 1) throw Error(ErrorCode::Precondition, "quadrature rule needs at least one node");
}

// Off-diagonal entry j of the Jacobi matrix, extended by one past the end.
double sub_at(const Eigen::VectorXd& sub, int j, double last) {
  return j < sub.size() ? sub[j] : last;
}

// Golub-Welsch for a symmetric weight: zero diagonal, off-diagonal sqrt(beta_j).
Rule golub_welsch(int count, const std::function<double(int)>& beta, double mu0) {
  require_count(count);
  Rule rule;
  if (count == 1) {
    rule.nodes = {0.0};
    rule.weights = {mu0};
    return rule;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(count);
  Eigen::VectorXd sub(count - 1);
  for (int j = 1; j < count; ++j) sub[j - 1] = std::sqrt(beta(j));
  const double last = std::sqrt(beta(count));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  rule.nodes.resize(count);
  rule.weights.resize(count);
  // Eigenvector weights lose relative accuracy where they are tiny; polish each
  // node by Newton on the orthonormal recurrence and use Christoffel weights.
  for (int i = 0; i < count; ++i) {
    double x = solver.eigenvalues()[i];
    double christoffel = 0.0;
    for (int iter = 0; iter < 4; ++iter) {
      double p_prev = 0.0, p = 1.0 / std::sqrt(mu0);
      double d_prev = 0.0, d = 0.0;
      christoffel = 0.0;
      for (int j = 0; j < count; ++j) {
        christoffel += p * p;
        const double b_next = sub_at(sub, j, last);
        const double b_here = j > 0 ? sub_at(sub, j - 1, last) : 0.0;
        const double p_next = (x * p - b_here * p_prev) / b_next;
        const double d_next = (p + x * d - b_here * d_prev) / b_next;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
      }
      if (iter == 3 || d == 0.0) break;
      x -= p / d;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / christoffel;
  }
  // Symmetrize: the weight is even, so the rule must be too.
  for (int i = 0; i < count / 2; ++i) {
    const int j = count - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (count % 2 == 1) rule.nodes[count / 2] = 0.0;
  return rule;
}

}  // namespace

Rule gauss_legendre(int count) {
  require_count(count);
  Rule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= count; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) p0 = 1.0;
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int j = 2; j <= count; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = count * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[count - 1 - i] = x;
    rule.weights[i] = rule.weights[count - 1 - i] = w;
  }
  if (count % 2 == 1) rule.nodes[count / 2] = 0.0;
  if (count == 1) rule.weights[0] = 2.0;
  return rule;
}

Rule gauss_legendre(int count, double lo, double hi) {
  Rule rule = gauss_legendre(count);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

Rule gauss_hermite(int count) {
  return golub_welsch(count, [](int j) { return 0.5 * j; }, std::sqrt(std::numbers::pi));
}

Rule gauss_jacobi_symmetric(int count, double alpha) {
  if (!(alpha > -1.0)) throw Error(ErrorCode::Precondition, "Jacobi exponent must exceed -1");
  if (alpha == 0.0) return gauss_legendre(count);
  const double mu0 = std::exp((2.0 * alpha + 1.0) * std::log(2.0) +
                              2.0 * std::lgamma(alpha + 1.0) - std::lgamma(2.0 * alpha + 2.0));
  return golub_welsch(
      count,
      [alpha](int j) {
        if (j == 1) return 1.0 / (2.0 * alpha + 3.0);
        const double s = 2.0 * j + 2.0 * alpha;
        return j * (j + 2.0 * alpha) / ((s + 1.0) * (s - 1.0));
      },
      mu0);
}

double sphere_area(int dim) {
  if (dim < 0) throw Error(ErrorCode::Precondition, "sphere dimension must be nonnegative");
  const double half = 0.5 * (dim + 1);
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo, hi, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const std::function<double(double)>& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  const double value = kronrod * half;
  const double error = std::abs((kronrod - gauss) * half);
  if (!std::isfinite(value)) throw Error(ErrorCode::Numeric, "non-finite integrand in adaptive quadrature");
  return {lo, hi, value, error};
}

}  // namespace

IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double lo,
                                     double hi, double rel_tol, double abs_tol,
                                     int max_intervals) {
  if (hi == lo) return {};
  if (hi < lo) {
    IntegrationResult flipped = integrate_adaptive(f, hi, lo, rel_tol, abs_tol, max_intervals);
    flipped.value = -flipped.value;
    return flipped;
  }
  std::priority_queue<Segment> queue;
  queue.push(kronrod15(f, lo, hi));
  double total = queue.top().value;
  double error = queue.top().error;
  while (static_cast<int>(queue.size()) < max_intervals &&
         error > std::max(abs_tol, rel_tol * std::abs(total))) {
    const Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (mid <= worst.lo || mid >= worst.hi) {
      queue.push(worst);
      break;
    }
    const Segment left = kronrod15(f, worst.lo, mid);
    const Segment right = kronrod15(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  // Re-sum from the segments to shed accumulated cancellation in the running totals.
  IntegrationResult result;
  result.intervals = static_cast<int>(queue.size());
  while (!queue.empty()) {
    result.value += queue.top().value;
    result.error += queue.top().error;
    queue.pop();
  }
  return result;
}

}  // namespace shrinker_ot::numerics
