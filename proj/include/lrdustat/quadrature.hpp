#ifndef LRDUSTAT_QUADRATURE_HPP
#define LRDUSTAT_QUADRATURE_HPP

#include <Eigen/Dense>

#include <functional>

namespace lrdustat {

/// Gauss-Hermite rule for the standard normal weight (probabilists'
/// convention): sum_i weights[i] * f(nodes[i]) approximates E[f(xi)].
/// Weights sum to one.
struct GaussHermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  int size() const { return static_cast<int>(nodes.size()); }

  template <typename F>
  double expectation(F&& f) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

/// n-point rule. Golub-Welsch initial nodes from the Jacobi matrix, then
/// Newton-polished on the orthonormal recurrence with Christoffel weights.
/// Rules are memoized; the returned reference stays valid for the process
/// lifetime.
const GaussHermiteRule& gauss_hermite(int n);

struct AdaptiveResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

/// Adaptive Gauss-Kronrod (7/15) on the finite interval [a, b].
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol = 1e-13, double rel_tol = 1e-12,
                                  int max_depth = 40);

}  // namespace lrdustat

#endif  // LRDUSTAT_QUADRATURE_HPP
