#include "lrdustat/hermite.hpp"

#include "lrdustat/errors.hpp"
#include "lrdustat/parallel.hpp"
#include "lrdustat/quadrature.hpp"
#include "lrdustat/rng.hpp"
#include "lrdustat/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lrdustat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kClassBound = 40.0;

void check_degree(int Q) {
  if (Q < 1) throw ParameterError("maximum total degree Q must be >= 1");
}

Eigen::MatrixXd empty_table(int Q) { return Eigen::MatrixXd::Constant(Q + 1, Q + 1, kNaN); }

// sqrt(k! l!) without overflow for large k, l.
double sqrt_factorials(int k, int l) { return std::exp(0.5 * (log_factorial(k) + log_factorial(l))); }

std::optional<int> find_rank(const Eigen::MatrixXd& entries, int Q, double tol) {
  for (int q = 1; q <= Q; ++q) {
    for (int k = 0; k <= q; ++k) {
      if (std::abs(entries(k, q - k)) > tol) return q;
    }
  }
  return std::nullopt;
}

}  // namespace

Eigen::ArrayXd hermite_eval(int k, const Eigen::Ref<const Eigen::ArrayXd>& x) {
  if (k <= 0) return Eigen::ArrayXd::Ones(x.size());
  Eigen::ArrayXd prev = Eigen::ArrayXd::Ones(x.size());
  Eigen::ArrayXd cur = x;
  for (int j = 1; j < k; ++j) {
    Eigen::ArrayXd next = x * cur - static_cast<double>(j) * prev;
    prev.swap(cur);
    cur.swap(next);
  }
  return cur;
}

std::string to_string(CoeffSource source) {
  switch (source) {
    case CoeffSource::Quadrature:
      return "quadrature";
    case CoeffSource::ClosedForm:
      return "closed-form";
    case CoeffSource::MonteCarlo:
      return "monte-carlo";
  }
  return "unknown";
}

double HermiteCoeffTable::normalizing_factor() const {
  const double var = second_moment - a00() * a00();
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

HermiteCoeffTable coeffs_2d(const Kernel& h, int Q, int quad_order, double tol) {
  check_degree(Q);
  if (quad_order < Q + 1) throw ParameterError("quadrature order must be at least Q + 1");
  const GaussHermiteRule& rule = gauss_hermite(quad_order);
  const Eigen::Index n = rule.size();

  // Orthonormal Hermite values psi_k(x_i) = H_k(x_i) / sqrt(k!), scaled by weights.
  Eigen::MatrixXd weighted(n, Q + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = rule.nodes[i];
    double prev = 1.0;
    double cur = x;
    weighted(i, 0) = 1.0;
    if (Q >= 1) weighted(i, 1) = x;
    for (int k = 1; k < Q; ++k) {
      const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                          std::sqrt(static_cast<double>(k + 1));
      prev = cur;
      cur = next;
      weighted(i, k + 1) = next;
    }
  }
  weighted = rule.weights.asDiagonal() * weighted;

  Eigen::MatrixXd values(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = h(rule.nodes[i], rule.nodes[j]);
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "kernel '" << h.name << "' is not finite at (" << rule.nodes[i] << ", "
            << rule.nodes[j] << ")";
        throw NumericError(msg.str());
      }
      values(i, j) = v;
    }
  }
  const Eigen::MatrixXd normalized = weighted.transpose() * values * weighted;

  HermiteCoeffTable table;
  table.max_total_degree = Q;
  table.entries = empty_table(Q);
  for (int k = 0; k <= Q; ++k) {
    for (int l = 0; k + l <= Q; ++l) table.entries(k, l) = normalized(k, l) * sqrt_factorials(k, l);
  }
  table.quadrature_order = quad_order;
  table.source = CoeffSource::Quadrature;
  table.second_moment = rule.weights.dot(values.cwiseAbs2() * rule.weights);
  table.tolerance = tol > 0.0 ? tol : 1e-8 * std::sqrt(1.0 + table.second_moment);
  table.rank = find_rank(table.entries, Q, table.tolerance);
  table.kernel_name = h.name;
  if (h.has(KernelTag::Discontinuous)) {
    table.warnings.push_back("quadrature-unreliable: kernel '" + h.name +
                             "' is discontinuous; use a closed-form or Monte Carlo source");
  }
  return table;
}

HermiteCoeffTable coeffs_closed_form(const Kernel& h, int Q, double tol) {
  check_degree(Q);
  if (!h.has_closed_form()) {
    throw UnsupportedError("kernel '" + h.name + "' has no closed-form Hermite coefficients");
  }
  HermiteCoeffTable table;
  table.max_total_degree = Q;
  table.entries = empty_table(Q);
  for (int k = 0; k <= Q; ++k) {
    for (int l = 0; k + l <= Q; ++l) table.entries(k, l) = h.coeff_provider(k, l);
  }
  table.source = CoeffSource::ClosedForm;
  table.tolerance = tol;
  table.rank = find_rank(table.entries, Q, tol);
  table.kernel_name = h.name;
  return table;
}

HermiteCoeffTable coeffs_monte_carlo(const Kernel& h, int Q, std::int64_t pairs,
                                     std::uint64_t seed, double tol) {
  check_degree(Q);
  if (pairs < 2) throw ParameterError("Monte Carlo coefficients need at least two pairs");
  constexpr std::int64_t kBlock = 1 << 18;
  const std::int64_t blocks = (pairs + kBlock - 1) / kBlock;
  const int width = Q + 1;
  std::vector<Eigen::MatrixXd> sums(static_cast<std::size_t>(blocks));
  std::vector<Eigen::MatrixXd> squares(static_cast<std::size_t>(blocks));
  std::vector<double> h_squares(static_cast<std::size_t>(blocks), 0.0);

  parallel_for(static_cast<std::size_t>(blocks), [&](std::size_t b) {
    Rng rng = Rng::for_replication(seed, b);
    const std::int64_t begin = static_cast<std::int64_t>(b) * kBlock;
    const std::int64_t end = std::min(pairs, begin + kBlock);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(width, width);
    Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(width, width);
    double hh = 0.0;
    Eigen::VectorXd hx;
    Eigen::VectorXd hy;
    for (std::int64_t p = begin; p < end; ++p) {
      const double x = rng.normal();
      const double y = rng.normal();
      const double v = h(x, y);
      hh += v * v;
      hermite_all(Q, x, hx);
      hermite_all(Q, y, hy);
      for (int k = 0; k <= Q; ++k) {
        const double vk = v * hx[k];
        for (int l = 0; k + l <= Q; ++l) {
          const double term = vk * hy[l];
          s(k, l) += term;
          s2(k, l) += term * term;
        }
      }
    }
    sums[b] = std::move(s);
    squares[b] = std::move(s2);
    h_squares[b] = hh;
  });

  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(width, width);
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(width, width);
  double hh = 0.0;
  for (std::size_t b = 0; b < sums.size(); ++b) {
    s += sums[b];
    s2 += squares[b];
    hh += h_squares[b];
  }
  const double count = static_cast<double>(pairs);
  HermiteCoeffTable table;
  table.max_total_degree = Q;
  table.entries = empty_table(Q);
  table.std_errors = empty_table(Q);
  double max_se = 0.0;
  for (int k = 0; k <= Q; ++k) {
    for (int l = 0; k + l <= Q; ++l) {
      const double mean = s(k, l) / count;
      const double var = std::max(0.0, (s2(k, l) / count - mean * mean) * count / (count - 1.0));
      table.entries(k, l) = mean;
      table.std_errors(k, l) = std::sqrt(var / count);
      if (k + l >= 1) max_se = std::max(max_se, table.std_errors(k, l));
    }
  }
  table.source = CoeffSource::MonteCarlo;
  table.second_moment = hh / count;
  table.tolerance = tol > 0.0 ? tol : 5.0 * max_se;
  table.rank = find_rank(table.entries, Q, table.tolerance);
  table.kernel_name = h.name;
  return table;
}

HermiteCoeffTable coeffs_auto(const Kernel& h, int Q, std::uint64_t seed) {
  if (h.has_closed_form()) return coeffs_closed_form(h, Q);
  if (h.has(KernelTag::Discontinuous)) return coeffs_monte_carlo(h, Q, 1'000'000, seed);
  return coeffs_2d(h, Q);
}

double wilcoxon_coeff_closed_form(int k, int l) {
  if (k < 0 || l < 0) throw ParameterError("Hermite indices must be nonnegative");
  const int q = k + l;
  if (q == 0) return 0.5;
  if (q % 2 == 0) return 0.0;
  const int exponent = (l + 3 * k - 1) / 2;
  const double sign = (exponent % 2 == 0) ? 1.0 : -1.0;
  return sign * gamma_lanczos(0.5 * q) / (2.0 * kPi);
}

int rank_2d(const HermiteCoeffTable& table, double tol) {
  if (table.max_total_degree < 1) throw ParameterError("table must be populated to degree >= 1");
  const auto rank = find_rank(table.entries, table.max_total_degree, tol);
  if (!rank) throw RankNotFound(table.max_total_degree);
  return *rank;
}

double ClassCoeffs::interpolate(int k, double x) const {
  const Eigen::Index n = grid.size();
  if (n == 0 || x < grid[0] || x > grid[n - 1]) return 0.0;
  const double* begin = grid.data();
  const double* it = std::upper_bound(begin, begin + n, x);
  Eigen::Index hi = it - begin;
  if (hi >= n) return values(k - 1, n - 1);
  const Eigen::Index lo = hi - 1;
  const double t = (x - grid[lo]) / (grid[hi] - grid[lo]);
  return values(k - 1, lo) + t * (values(k - 1, hi) - values(k - 1, lo));
}

ClassCoeffs class_coeffs(const Subordinator& g, int k_max, const Eigen::VectorXd& grid, double tol) {
  if (k_max < 1) throw ParameterError("k_max must be >= 1");
  if (grid.size() == 0) throw ParameterError("class grid is empty");
  for (Eigen::Index i = 1; i < grid.size(); ++i) {
    if (grid[i] < grid[i - 1]) throw ParameterError("class grid must be sorted");
  }
  const bool increasing = g.monotonicity() == Subordinator::Monotonicity::Increasing;
  const Eigen::Index n = grid.size();

  // Thresholds t(x) clamped to the integration window; monotone in x.
  Eigen::VectorXd t(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t[i] = std::clamp(g.threshold(grid[i]), -kClassBound, kClassBound);
  }

  ClassCoeffs cc;
  cc.grid = grid;
  cc.values.resize(k_max, n);
  cc.tolerance = tol;
  for (int k = 1; k <= k_max; ++k) {
    auto integrand = [k](double s) { return hermite_eval(k, s) * normal_pdf(s); };
    // Cumulative F_k(t) = int_{-bound}^{t} H_k phi, visiting thresholds in ascending order.
    Eigen::VectorXd cumulative(n);
    double acc = 0.0;
    double prev = -kClassBound;
    for (Eigen::Index step = 0; step < n; ++step) {
      const Eigen::Index i = increasing ? step : n - 1 - step;
      acc += integrate_adaptive(integrand, prev, t[i], 1e-15, 1e-13).value;
      prev = t[i];
      cumulative[i] = acc;
    }
    const double total = acc + integrate_adaptive(integrand, prev, kClassBound, 1e-15, 1e-13).value;
    for (Eigen::Index i = 0; i < n; ++i) {
      cc.values(k - 1, i) = increasing ? cumulative[i] : total - cumulative[i];
    }
  }
  for (int k = 1; k <= k_max; ++k) {
    if (cc.values.row(k - 1).cwiseAbs().maxCoeff() > tol) {
      cc.rank = k;
      return cc;
    }
  }
  throw RankNotFound(k_max);
}

Eigen::VectorXd default_class_grid(const Subordinator& g, Eigen::Index points) {
  if (points < 2) throw ParameterError("class grid needs at least two points");
  const auto [dom_lo, dom_hi] = g.domain();
  const double a = std::max(-8.5, dom_lo);
  const double b = std::min(8.5, dom_hi);
  const double lo = std::min(g(a), g(b));
  const double hi = std::max(g(a), g(b));
  const double pad = 1e-3 * (hi - lo);
  return Eigen::VectorXd::LinSpaced(points, lo - pad, hi + pad);
}

double class_integral_dF(const ClassCoeffs& cc, const Subordinator& g, int k) {
  if (k < 1 || k > cc.k_max()) throw ParameterError("class coefficient index out of range");
  const GaussHermiteRule& rule = gauss_hermite(kDefaultQuadOrder);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    double x = 0.0;
    try {
      x = g(rule.nodes[i]);
    } catch (const ExtrapolationError&) {
      continue;
    }
    acc += rule.weights[i] * cc.interpolate(k, x);
  }
  return acc;
}

std::string to_string(SummabilityClass c) {
  switch (c) {
    case SummabilityClass::ConvergentLikely:
      return "ConvergentLikely";
    case SummabilityClass::DivergentLikely:
      return "DivergentLikely";
    case SummabilityClass::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

SummabilityReport summability_diagnostic(const CoeffProvider& provider, std::vector<int> Q_list) {
  if (Q_list.empty()) throw ParameterError("summability diagnostic needs at least one Q");
  std::sort(Q_list.begin(), Q_list.end());
  Q_list.erase(std::unique(Q_list.begin(), Q_list.end()), Q_list.end());
  if (Q_list.front() < 1) throw ParameterError("Q values must be >= 1");

  SummabilityReport report;
  report.Q_list = Q_list;
  double running = 0.0;
  int done = 0;
  for (int Q : Q_list) {
    for (int q = done + 1; q <= Q; ++q) {
      for (int k = 0; k <= q; ++k) {
        const int l = q - k;
        running += std::abs(provider(k, l)) / sqrt_factorials(k, l);
      }
    }
    done = Q;
    report.partial_sums.push_back(running);
  }
  for (std::size_t j = 1; j < Q_list.size(); ++j) {
    const double dlog = std::log(static_cast<double>(Q_list[j]) / Q_list[j - 1]);
    report.log_slopes.push_back((report.partial_sums[j] - report.partial_sums[j - 1]) / dlog);
  }

  const double scale = std::max(report.partial_sums.back(), 1e-300);
  if (report.log_slopes.empty()) {
    report.classification = SummabilityClass::Inconclusive;
  } else if (report.log_slopes.back() <= 1e-9 * scale) {
    report.classification = SummabilityClass::ConvergentLikely;
  } else if (report.log_slopes.size() >= 2 && report.log_slopes[report.log_slopes.size() - 2] > 0.0) {
    const double ratio =
        report.log_slopes.back() / report.log_slopes[report.log_slopes.size() - 2];
    if (ratio < 0.5) {
      report.classification = SummabilityClass::ConvergentLikely;
    } else if (ratio >= 0.75) {
      report.classification = SummabilityClass::DivergentLikely;
    } else {
      report.classification = SummabilityClass::Inconclusive;
    }
  }
  return report;
}

CoeffProvider provider_from_table(const HermiteCoeffTable& table) {
  return [table](int k, int l) {
    if (k + l > table.max_total_degree) {
      throw ParameterError("coefficient table does not reach the requested degree");
    }
    return table.entries(k, l);
  };
}

double hermite_variance_constant(double D, int m) {
  if (m == 0) return 1.0;
  const double dm = D * m;
  return 2.0 * factorial(m) / ((1.0 - dm) * (2.0 - dm));
}

double spectral_constant(double D) { return 2.0 * gamma_lanczos(D) * std::cos(D * kPi / 2.0); }

ScalingConstants scaling(double D, int m, double n, double L_at_n) {
  if (m < 1) throw ParameterError("Hermite rank m must be >= 1");
  if (!(D > 0.0 && D < 1.0)) throw ParameterError("D must lie in (0,1)");
  if (D * m >= 1.0) {
    std::ostringstream msg;
    msg << "reduction regime violated: m*D = " << D * m << " >= 1";
    throw RegimeError(msg.str());
  }
  if (n < 1.0) throw ParameterError("n must be >= 1");
  if (!(L_at_n > 0.0)) throw ParameterError("L(n) must be positive");
  ScalingConstants sc;
  sc.D = D;
  sc.m = m;
  sc.n = n;
  sc.c_m = hermite_variance_constant(D, m);
  sc.d_n_prime = std::sqrt(std::pow(n, 2.0 - m * D) * std::pow(L_at_n, m));
  sc.d_n = std::sqrt(sc.c_m) * sc.d_n_prime;
  sc.H = 1.0 - D * m / 2.0;
  sc.K_const = spectral_constant(D);
  return sc;
}

}  // namespace lrdustat
