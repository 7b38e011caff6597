#include "lrdustat/verify.hpp"

#include "lrdustat/errors.hpp"
#include "lrdustat/parallel.hpp"
#include "lrdustat/quadrature.hpp"
#include "lrdustat/rng.hpp"
#include "lrdustat/special.hpp"
#include "lrdustat/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace lrdustat {

double ReportRow::get(const std::string& key) const {
  for (const auto& [k, v] : columns) {
    if (k == key) return v;
  }
  throw StateError("report row has no column '" + key + "'");
}

void ReportRow::set(const std::string& key, double value) {
  for (auto& [k, v] : columns) {
    if (k == key) {
      v = value;
      return;
    }
  }
  columns.emplace_back(key, value);
}

const ReportRow& ExperimentReport::row(Eigen::Index n) const {
  for (const auto& r : rows) {
    if (r.n == n) return r;
  }
  throw StateError("report has no row for n = " + std::to_string(n));
}

double ExperimentReport::summary_value(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  throw StateError("report has no summary value '" + key + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_double(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

std::string join_sizes(const std::vector<Eigen::Index>& n_list) {
  std::ostringstream out;
  for (std::size_t i = 0; i < n_list.size(); ++i) out << (i ? "," : "") << n_list[i];
  return out.str();
}

void check_sizes(const std::vector<Eigen::Index>& n_list, Eigen::Index min_n) {
  if (n_list.empty()) throw ParameterError("n-list is empty");
  for (Eigen::Index n : n_list) {
    if (n < min_n) throw ParameterError("every n must be >= " + std::to_string(min_n));
  }
}

double hermite_sum(int k, const Eigen::VectorXd& xi) {
  CompensatedSum total;
  for (Eigen::Index i = 0; i < xi.size(); ++i) total += hermite_eval(k, xi[i]);
  return total.value();
}

int kernel_rank(const HermiteCoeffTable& table) {
  if (!table.rank) throw RankNotFound(table.max_total_degree);
  return *table.rank;
}

}  // namespace

double exact_hermite_sum_variance(int k, const Eigen::VectorXd& gamma, Eigen::Index n) {
  if (k < 1) throw ParameterError("Hermite order k must be >= 1");
  if (n < 1) throw ParameterError("n must be >= 1");
  if (gamma.size() < n) throw ParameterError("covariance table shorter than n");
  CompensatedSum total;
  total += static_cast<double>(n);
  for (Eigen::Index d = 1; d < n; ++d) {
    total += 2.0 * static_cast<double>(n - d) * std::pow(gamma[d], k);
  }
  return factorial(k) * total.value();
}

double short_range_constant(int k, const LrdParams& params, Eigen::Index lags) {
  params.validate();
  const double dk = params.D * k;
  if (dk <= 1.0) throw RegimeError("covariance powers are not summable for D*k <= 1");
  const Eigen::VectorXd gamma = build_covariance(params, lags);
  CompensatedSum total;
  total += 1.0;
  for (Eigen::Index d = 1; d <= lags; ++d) total += 2.0 * std::pow(gamma[d], k);
  const double L = asymptotic_L(params, static_cast<double>(lags));
  const double edge = static_cast<double>(lags) + 0.5;
  total += 2.0 * std::pow(L, k) * std::pow(edge, 1.0 - dk) / (dk - 1.0);
  return total.value();
}

ExperimentReport check_variance(int k, const LrdParams& params, const std::vector<Eigen::Index>& n_list,
                                Eigen::Index reps, std::uint64_t seed) {
  const auto start = Clock::now();
  params.validate();
  if (k < 1) throw ParameterError("Hermite order k must be >= 1");
  if (reps < 100) throw ParameterError("check_variance needs reps >= 100");
  check_sizes(n_list, 1);
  const double dk = params.D * k;
  if (std::abs(dk - 1.0) < 1e-12) throw ParameterError("D*k = 1 is the logarithmic boundary case");
  const bool long_range = dk < 1.0;

  ExperimentReport report;
  report.name = "variance";
  report.params = {{"k", std::to_string(k)},
                   {"family", to_string(params.family)},
                   {"D", format_double(params.D)},
                   {"n_list", join_sizes(n_list)},
                   {"reps", std::to_string(reps)},
                   {"regime", long_range ? "lrd" : "srd"}};
  report.seeds = {seed};

  const Eigen::Index n_max = *std::max_element(n_list.begin(), n_list.end());
  const Eigen::VectorXd gamma = build_covariance(params, std::max<Eigen::Index>(n_max, 1));
  const double srd_constant = long_range ? 0.0 : short_range_constant(k, params);

  for (Eigen::Index n : n_list) {
    ReportRow row;
    row.n = n;
    const double exact = exact_hermite_sum_variance(k, gamma, n);
    const double nd = static_cast<double>(n);
    const double asymptote =
        long_range ? hermite_variance_constant(params.D, k) * std::pow(nd, 2.0 - dk) *
                         std::pow(asymptotic_L(params, nd), k)
                   : factorial(k) * srd_constant * nd;

    std::vector<double> sums(static_cast<std::size_t>(reps));
    if (n == 1) {
      parallel_for(sums.size(), [&](std::size_t r) {
        Rng rng = Rng::for_replication(seed, r);
        sums[r] = hermite_eval(k, rng.normal());
      });
    } else {
      const CirculantEmbedding embedding = CirculantEmbedding::for_model(params, n);
      for (const auto& w : embedding.warnings()) report.warnings.push_back(w);
      parallel_for(sums.size(), [&](std::size_t r) {
        Rng rng = Rng::for_replication(seed, r);
        sums[r] = hermite_sum(k, embedding.sample(n, rng));
      });
    }
    const SampleMoments moments = sample_moments(sums);
    const double se = variance_std_error(sums);
    const double z = se > 0.0 ? (moments.variance - exact) / se : 0.0;

    row.set("exact_variance", exact);
    row.set("asymptote", asymptote);
    row.set("ratio", exact / asymptote);
    row.set("variance_over_n", exact / nd);
    row.set("mc_variance", moments.variance);
    row.set("mc_std_error", se);
    row.set("mc_z", z);
    row.set("mc_within_4se", std::abs(z) <= 4.0 ? 1.0 : 0.0);
    report.rows.push_back(std::move(row));
  }

  std::sort(report.rows.begin(), report.rows.end(),
            [](const ReportRow& a, const ReportRow& b) { return a.n < b.n; });
  const ReportRow& last = report.rows.back();
  report.summary.emplace_back("last_ratio", last.get("ratio"));
  if (long_range) {
    report.tolerance = "|exact / asymptote - 1| <= 0.1 at the largest n";
    report.pass = std::abs(last.get("ratio") - 1.0) <= 0.1;
  } else if (report.rows.size() >= 2) {
    const ReportRow& prev = report.rows[report.rows.size() - 2];
    const double change = std::abs(last.get("variance_over_n") / prev.get("variance_over_n") - 1.0);
    report.summary.emplace_back("slope_change", change);
    report.tolerance = "Var/n changes by at most 5% between the two largest n";
    report.pass = change <= 0.05;
  }
  bool mc_ok = true;
  for (const auto& r : report.rows) mc_ok = mc_ok && r.get("mc_within_4se") == 1.0;
  report.summary.emplace_back("mc_consistent", mc_ok ? 1.0 : 0.0);
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

Eigen::VectorXd hermite_projection_path(const Eigen::Ref<const Eigen::VectorXd>& xi,
                                        const std::vector<CoeffEntry>& coeffs) {
  const Eigen::Index n = xi.size();
  if (n < 2) throw ParameterError("projection needs n >= 2");
  int m = 0;
  for (const auto& e : coeffs) m = std::max(m, std::max(e.k, e.l));
  // prefix(a, k) = sum_{i <= k} H_a(xi_i)
  Eigen::MatrixXd prefix(m + 1, n + 1);
  prefix.col(0).setZero();
  Eigen::VectorXd h;
  for (Eigen::Index i = 0; i < n; ++i) {
    hermite_all(m, xi[i], h);
    prefix.col(i + 1) = prefix.col(i) + h;
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n - 1);
  for (const auto& e : coeffs) {
    if (e.a == 0.0) continue;
    const double weight = e.a / (factorial(e.k) * factorial(e.l));
    for (Eigen::Index k = 1; k < n; ++k) {
      out[k - 1] += weight * prefix(e.k, k) * (prefix(e.l, n) - prefix(e.l, k));
    }
  }
  return out;
}

ExperimentReport check_reduction(const Kernel& h, const LrdParams& params,
                                 const std::vector<Eigen::Index>& n_list, Eigen::Index reps,
                                 std::uint64_t seed) {
  const auto start = Clock::now();
  params.validate();
  if (reps < 1) throw ParameterError("check_reduction needs reps >= 1");
  check_sizes(n_list, 2);

  const HermiteCoeffTable table = coeffs_auto(h, 8, seed);
  const int m = kernel_rank(table);
  if (m * params.D >= 1.0) throw RegimeError("reduction regime violated: m*D >= 1");
  const std::vector<CoeffEntry> coeffs = degree_entries(table, m);

  ExperimentReport report;
  report.name = "reduction";
  report.params = {{"kernel", h.name},
                   {"family", to_string(params.family)},
                   {"D", format_double(params.D)},
                   {"m", std::to_string(m)},
                   {"n_list", join_sizes(n_list)},
                   {"reps", std::to_string(reps)},
                   {"coeff_source", to_string(table.source)}};
  report.seeds = {seed};
  report.warnings = table.warnings;

  for (Eigen::Index n : n_list) {
    const CirculantEmbedding embedding = CirculantEmbedding::for_model(params, n);
    const double nd = static_cast<double>(n);
    const ScalingConstants sc = scaling(params.D, m, nd, asymptotic_L(params, nd));
    const double divisor = sc.d_n_prime * nd;
    std::vector<double> discrepancy(static_cast<std::size_t>(reps));
    parallel_for(discrepancy.size(), [&](std::size_t r) {
      Rng rng = Rng::for_replication(seed, r);
      const Eigen::VectorXd xi = embedding.sample(n, rng);
      const UStatPath path = ustat_compute(xi, h);
      const Eigen::VectorXd projection = hermite_projection_path(xi, coeffs);
      double sup = 0.0;
      for (Eigen::Index k = 1; k < n; ++k) {
        const double centered =
            path.raw[k - 1] - static_cast<double>(k) * static_cast<double>(n - k) * table.a00();
        sup = std::max(sup, std::abs(centered - projection[k - 1]));
      }
      discrepancy[r] = sup / divisor;
    });
    const SampleMoments moments = sample_moments(discrepancy);
    ReportRow row;
    row.n = n;
    row.set("mean_discrepancy", moments.mean);
    row.set("std_error", moments.std_error);
    row.set("divisor", divisor);
    report.rows.push_back(std::move(row));
  }

  bool decreasing = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    decreasing = decreasing && report.rows[i].get("mean_discrepancy") <=
                                   report.rows[i - 1].get("mean_discrepancy");
  }
  const double first = report.rows.front().get("mean_discrepancy");
  const double last = report.rows.back().get("mean_discrepancy");
  report.summary.emplace_back("last_over_first", first > 0.0 ? last / first : 0.0);
  report.summary.emplace_back("monotone", decreasing ? 1.0 : 0.0);
  report.tolerance = "mean discrepancy non-increasing along the n-list";
  report.pass = decreasing;
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

std::vector<double> sup_statistics(const Kernel& h, const LrdParams& params, Eigen::Index n,
                                   Eigen::Index reps, std::uint64_t seed,
                                   const SupSampleOptions& options) {
  params.validate();
  if (n < 2) throw ParameterError("n must be >= 2");
  if (reps < 1) throw ParameterError("reps must be >= 1");
  if (options.normalization == Normalization::None) {
    throw ParameterError("sup statistics need a Thm1 or Thm2 normalization");
  }

  std::optional<HermiteCoeffTable> table;
  if (!options.rank || (!options.center && !options.subordinator)) table = coeffs_auto(h, 8, seed);
  const int m = options.rank ? *options.rank : kernel_rank(*table);
  double center = 0.0;
  if (options.center) {
    center = *options.center;
  } else if (options.subordinator) {
    const GaussHermiteRule& rule = gauss_hermite(kDefaultQuadOrder);
    const Subordinator& g = *options.subordinator;
    const auto [lo, hi] = g.domain();
    center = rule.expectation([&](double s) { return h_tilde(h, g, g(std::clamp(s, lo, hi))); });
  } else {
    center = table->a00();
  }

  const double nd = static_cast<double>(n);
  const ScalingConstants sc = scaling(params.D, m, nd, asymptotic_L(params, nd));
  const CirculantEmbedding embedding = CirculantEmbedding::for_model(params, n);
  std::vector<double> sups(static_cast<std::size_t>(reps));
  parallel_for(sups.size(), [&](std::size_t r) {
    Rng rng = Rng::for_replication(seed, r);
    Eigen::VectorXd data = embedding.sample(n, rng);
    if (options.subordinator) data = subordinate(data, *options.subordinator);
    const UStatPath path = normalize(ustat_compute(data, h), sc, options.normalization, center);
    sups[r] = changepoint_statistic(path).statistic;
  });
  return sups;
}

ExperimentReport check_weak_convergence(const Kernel& h, const LrdParams& params, Eigen::Index n,
                                        Eigen::Index reps, const LimitEnsemble& limit,
                                        std::uint64_t seed, double tolerance,
                                        const SupSampleOptions& options) {
  const auto start = Clock::now();
  params.validate();
  if (limit.descriptor.kind != ProcessDescriptor::Kind::Functional) {
    throw ParameterError("mismatched descriptors: the limit must be a U-process functional");
  }
  if (std::abs(limit.descriptor.D - params.D) > 1e-12) {
    throw ParameterError("mismatched descriptors: limit D differs from the data D");
  }
  SupSampleOptions resolved = options;
  if (!resolved.rank) {
    if (resolved.subordinator) throw ParameterError("subordinated data need an explicit rank");
    resolved.rank = kernel_rank(coeffs_auto(h, 8, seed));
  }
  if (*resolved.rank != limit.descriptor.m) {
    throw ParameterError("mismatched descriptors: limit order differs from the kernel rank");
  }

  const std::vector<double> sample = sup_statistics(h, params, n, reps, seed, resolved);
  const Eigen::VectorXd limit_sup = limit.sup_abs();
  const std::vector<double> reference(limit_sup.data(), limit_sup.data() + limit_sup.size());
  const double ks = ks_two_sample(sample, reference);

  ExperimentReport report;
  report.name = "weak";
  report.params = {{"kernel", h.name},
                   {"family", to_string(params.family)},
                   {"D", format_double(params.D)},
                   {"n", std::to_string(n)},
                   {"reps", std::to_string(reps)},
                   {"normalization", to_string(resolved.normalization)},
                   {"limit", limit.descriptor.label()},
                   {"limit_reps", std::to_string(limit.reps())}};
  report.seeds = {seed, limit.seed};
  report.warnings = limit.warnings;
  ReportRow row;
  row.n = n;
  row.set("ks_distance", ks);
  row.set("sample_size", static_cast<double>(sample.size()));
  row.set("limit_size", static_cast<double>(reference.size()));
  row.set("mean_sup", sample_moments(sample).mean);
  row.set("limit_mean_sup", sample_moments(reference).mean);
  report.rows.push_back(std::move(row));
  report.summary.emplace_back("ks_distance", ks);
  std::ostringstream tol;
  tol << "KS distance <= " << tolerance;
  report.tolerance = tol.str();
  report.pass = ks <= tolerance;
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

}  // namespace lrdustat
