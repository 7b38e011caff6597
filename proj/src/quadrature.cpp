#include "lrdustat/quadrature.hpp"

#include "lrdustat/errors.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace lrdustat {

namespace {

// Orthonormal Hermite values psi_k(x) = He_k(x) / sqrt(k!) for k = 0..n, in place.
void orthonormal_hermite(int n, double x, Eigen::VectorXd& psi) {
  psi.resize(n + 1);
  psi[0] = 1.0;
  if (n >= 1) psi[1] = x;
  for (int k = 1; k < n; ++k) {
    psi[k + 1] = (x * psi[k] - std::sqrt(static_cast<double>(k)) * psi[k - 1]) /
                 std::sqrt(static_cast<double>(k + 1));
  }
}

GaussHermiteRule build_rule(int n) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(static_cast<double>(k));

  GaussHermiteRule rule;
  if (n == 1) {
    rule.nodes = Eigen::VectorXd::Zero(1);
    rule.weights = Eigen::VectorXd::Ones(1);
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(n);

  Eigen::VectorXd psi;
  for (int i = 0; i < n; ++i) {
    double x = rule.nodes[i];
    for (int it = 0; it < 8; ++it) {
      orthonormal_hermite(n, x, psi);
      const double step = psi[n] / (std::sqrt(static_cast<double>(n)) * psi[n - 1]);
      x -= step;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) break;
    }
    orthonormal_hermite(n - 1, x, psi);
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / psi.squaredNorm();
  }
  // Symmetrize to remove the last ulp of asymmetry.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  rule.weights /= rule.weights.sum();
  return rule;
}

// Kronrod 15-point nodes / weights and embedded Gauss 7-point weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double value;
  double error;
};

Segment kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    const double fsum = f(center - dx) + f(center + dx);
    kronrod += kWgk[static_cast<std::size_t>(j)] * fsum;
    if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * fsum;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

void adapt(const std::function<double(double)>& f, double a, double b, double abs_tol,
           double rel_tol, int depth, AdaptiveResult& out) {
  const Segment s = kronrod15(f, a, b);
  out.evaluations += 15;
  if (s.error <= std::max(abs_tol, rel_tol * std::abs(s.value)) || depth <= 0) {
    out.value += s.value;
    out.error_estimate += s.error;
    return;
  }
  const double mid = 0.5 * (a + b);
  adapt(f, a, mid, 0.5 * abs_tol, rel_tol, depth - 1, out);
  adapt(f, mid, b, 0.5 * abs_tol, rel_tol, depth - 1, out);
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int n) {
  if (n < 1) throw ParameterError("Gauss-Hermite order must be >= 1");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::make_unique<GaussHermiteRule>(build_rule(n))).first;
  }
  return *it->second;
}

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, double rel_tol, int max_depth) {
  AdaptiveResult out;
  if (a == b) return out;
  if (b < a) {
    out = integrate_adaptive(f, b, a, abs_tol, rel_tol, max_depth);
    out.value = -out.value;
    return out;
  }
  adapt(f, a, b, abs_tol, rel_tol, max_depth, out);
  return out;
}

}  // namespace lrdustat
