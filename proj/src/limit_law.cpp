#include "lrdustat/limit_law.hpp"

#include "lrdustat/errors.hpp"
#include "lrdustat/parallel.hpp"
#include "lrdustat/quadrature.hpp"
#include "lrdustat/rng.hpp"
#include "lrdustat/special.hpp"
#include "lrdustat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lrdustat {

std::string ProcessDescriptor::label() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::FBM:
      out << "FBM(H=" << H << ")";
      break;
    case Kind::HermiteApprox:
      out << "HermiteApprox(m=" << m << ",D=" << D << ",N_aux=" << n_aux << ")";
      break;
    case Kind::Functional: {
      out << "Functional(" << name;
      for (const auto& c : components) out << "," << c;
      out << ")";
      break;
    }
  }
  return out.str();
}

Eigen::VectorXd LimitEnsemble::sup_abs() const {
  if (paths.cols() == 0) return Eigen::VectorXd::Zero(paths.rows());
  return paths.cwiseAbs().rowwise().maxCoeff();
}

Eigen::VectorXd uniform_grid(Eigen::Index cells) {
  if (cells < 1) throw ParameterError("grid needs at least one cell");
  return Eigen::VectorXd::LinSpaced(cells + 1, 0.0, 1.0);
}

namespace {

void check_grid(const Eigen::VectorXd& grid) {
  if (grid.size() == 0) throw ParameterError("lambda grid is empty");
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) throw ParameterError("lambda grid must lie in [0,1]");
    if (i > 0 && grid[i] < grid[i - 1]) throw ParameterError("lambda grid must be sorted");
  }
}

void check_ends_at_one(const Eigen::VectorXd& grid) {
  if (grid.size() == 0 || std::abs(grid[grid.size() - 1] - 1.0) > 1e-12) {
    throw ParameterError("limit functionals need a lambda grid ending at 1");
  }
}

std::vector<Eigen::Index> grid_indices(const Eigen::VectorXd& grid, Eigen::Index resolution) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(grid.size()));
  for (Eigen::Index g = 0; g < grid.size(); ++g) {
    const double scaled = grid[g] * static_cast<double>(resolution);
    idx[static_cast<std::size_t>(g)] =
        std::min<Eigen::Index>(resolution, static_cast<Eigen::Index>(std::floor(scaled + 1e-9)));
  }
  return idx;
}

}  // namespace

LimitEnsemble simulate_fbm(double H, const Eigen::VectorXd& grid, Eigen::Index reps,
                           std::uint64_t seed, Eigen::Index resolution) {
  if (!(H >= 0.5 && H < 1.0)) throw ParameterError("fBm Hurst index must lie in [1/2, 1)");
  if (reps < 1) throw ParameterError("reps must be >= 1");
  check_grid(grid);
  if (resolution <= 0) {
    const Eigen::Index wanted = std::max<Eigen::Index>(2048, 8 * (grid.size() - 1));
    resolution = 1;
    while (resolution < wanted) resolution *= 2;
  }
  const Eigen::VectorXd gamma = fgn_autocovariance(H, std::max<Eigen::Index>(resolution, 2));
  std::ostringstream label;
  label << "fgn(H=" << H << ")";
  const CirculantEmbedding embedding(
      std::span<const double>(gamma.data(), static_cast<std::size_t>(gamma.size())), label.str());
  const auto idx = grid_indices(grid, resolution);
  const double scale = std::pow(static_cast<double>(resolution), -H);

  LimitEnsemble ens;
  ens.grid = grid;
  ens.paths.resize(reps, grid.size());
  ens.descriptor.kind = ProcessDescriptor::Kind::FBM;
  ens.descriptor.H = H;
  ens.descriptor.m = 1;
  ens.descriptor.D = 2.0 - 2.0 * H;
  ens.descriptor.n_aux = resolution;
  ens.descriptor.name = "fbm";
  ens.seed = seed;
  ens.warnings = embedding.warnings();

  parallel_for(static_cast<std::size_t>(reps), [&](std::size_t r) {
    Rng rng = Rng::for_replication(seed, r);
    const Eigen::VectorXd noise = embedding.sample(resolution, rng);
    Eigen::VectorXd cumulative(resolution + 1);
    cumulative[0] = 0.0;
    for (Eigen::Index i = 0; i < resolution; ++i) cumulative[i + 1] = cumulative[i] + noise[i];
    for (Eigen::Index g = 0; g < grid.size(); ++g) {
      ens.paths(static_cast<Eigen::Index>(r), g) = scale * cumulative[idx[static_cast<std::size_t>(g)]];
    }
  });
  return ens;
}

std::vector<LimitEnsemble> simulate_hermite_joint(int m, double D, const Eigen::VectorXd& grid,
                                                  Eigen::Index reps, Eigen::Index n_aux,
                                                  std::uint64_t seed) {
  if (m < 1) throw ParameterError("Hermite order m must be >= 1");
  if (!(D > 0.0 && D < 1.0)) throw ParameterError("D must lie in (0,1)");
  if (m * D >= 1.0) {
    std::ostringstream msg;
    msg << "Hermite process needs m*D < 1; got m*D = " << m * D;
    throw RegimeError(msg.str());
  }
  if (n_aux < (Eigen::Index{1} << 12)) throw ParameterError("N_aux must be >= 2^12");
  if (reps < 1) throw ParameterError("reps must be >= 1");
  check_grid(grid);

  const LrdParams params{D, CovarianceFamily::FGN};
  const CirculantEmbedding embedding = CirculantEmbedding::for_model(params, n_aux);
  const double L = asymptotic_L(params, static_cast<double>(n_aux));
  std::vector<double> d_n(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k) {
    d_n[static_cast<std::size_t>(k - 1)] = scaling(D, k, static_cast<double>(n_aux), L).d_n;
  }
  const auto idx = grid_indices(grid, n_aux);

  std::vector<LimitEnsemble> out(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k) {
    LimitEnsemble& e = out[static_cast<std::size_t>(k - 1)];
    e.grid = grid;
    e.paths.resize(reps, grid.size());
    e.descriptor.kind = ProcessDescriptor::Kind::HermiteApprox;
    e.descriptor.m = k;
    e.descriptor.D = D;
    e.descriptor.H = 1.0 - D * k / 2.0;
    e.descriptor.n_aux = n_aux;
    e.descriptor.name = "hermite";
    e.seed = seed;
    e.warnings = embedding.warnings();
  }

  parallel_for(static_cast<std::size_t>(reps), [&](std::size_t r) {
    Rng rng = Rng::for_replication(seed, r);
    const Eigen::VectorXd zeta = embedding.sample(n_aux, rng);
    Eigen::MatrixXd cumulative(m, n_aux + 1);
    cumulative.col(0).setZero();
    Eigen::VectorXd h;
    for (Eigen::Index i = 0; i < n_aux; ++i) {
      hermite_all(m, zeta[i], h);
      cumulative.col(i + 1) = cumulative.col(i) + h.tail(m);
    }
    for (int k = 1; k <= m; ++k) {
      LimitEnsemble& e = out[static_cast<std::size_t>(k - 1)];
      const double inv = 1.0 / d_n[static_cast<std::size_t>(k - 1)];
      for (Eigen::Index g = 0; g < grid.size(); ++g) {
        e.paths(static_cast<Eigen::Index>(r), g) =
            inv * cumulative(k - 1, idx[static_cast<std::size_t>(g)]);
      }
    }
  });
  return out;
}

LimitEnsemble simulate_hermite(int m, double D, const Eigen::VectorXd& grid, Eigen::Index reps,
                               Eigen::Index n_aux, std::uint64_t seed) {
  auto joint = simulate_hermite_joint(m, D, grid, reps, n_aux, seed);
  return std::move(joint.back());
}

std::vector<CoeffEntry> degree_entries(const HermiteCoeffTable& table, int m) {
  if (m < 1 || m > table.max_total_degree) throw ParameterError("degree outside the table");
  std::vector<CoeffEntry> out;
  for (int k = 0; k <= m; ++k) out.push_back({k, m - k, table.entries(k, m - k)});
  return out;
}

LimitEnsemble limit_thm1(const std::vector<CoeffEntry>& coeffs, double D,
                         const std::vector<LimitEnsemble>& components, std::string name) {
  if (components.empty()) throw ParameterError("limit_thm1 needs at least the Z_1 component");
  const LimitEnsemble& first = components.front();
  check_ends_at_one(first.grid);
  for (const auto& c : components) {
    if (c.grid.size() != first.grid.size() || c.reps() != first.reps() || c.seed != first.seed) {
      throw ParameterError("limit components must share grid, replications and seed");
    }
  }
  int m = -1;
  for (const auto& e : coeffs) {
    if (e.k < 0 || e.l < 0) throw ParameterError("negative Hermite index");
    if (m < 0) m = e.k + e.l;
    if (e.k + e.l != m || m < 1) {
      throw ParameterError("limit_thm1 accepts only entries on one diagonal k + l = m >= 1");
    }
    if (e.a != 0.0 && std::max(e.k, e.l) > static_cast<int>(components.size())) {
      throw ParameterError("missing Hermite process component of order " +
                           std::to_string(std::max(e.k, e.l)));
    }
  }
  if (m >= 1 && D * m >= 1.0) throw RegimeError("limit_thm1 needs m*D < 1");

  const Eigen::Index reps = first.reps();
  const Eigen::Index cols = first.grid.size();
  const Eigen::Index last = cols - 1;
  const Eigen::RowVectorXd lambda = first.grid.transpose();

  LimitEnsemble out;
  out.grid = first.grid;
  out.paths = Eigen::MatrixXd::Zero(reps, cols);
  out.seed = first.seed;
  out.descriptor.kind = ProcessDescriptor::Kind::Functional;
  out.descriptor.m = std::max(m, 1);
  out.descriptor.D = D;
  out.descriptor.H = 1.0 - D * out.descriptor.m / 2.0;
  out.descriptor.n_aux = first.descriptor.n_aux;
  out.descriptor.name = name.empty() ? "thm1" : std::move(name);
  for (const auto& c : components) out.descriptor.components.push_back(c.descriptor.label());
  out.warnings = first.warnings;

  auto component = [&](int order) -> Eigen::MatrixXd {
    if (order == 0) return lambda.replicate(reps, 1);
    return components[static_cast<std::size_t>(order - 1)].paths;
  };
  for (const auto& e : coeffs) {
    if (e.a == 0.0) continue;
    const double weight = e.a / (factorial(e.k) * factorial(e.l)) *
                          std::sqrt(hermite_variance_constant(D, e.k) *
                                    hermite_variance_constant(D, e.l));
    const Eigen::MatrixXd zk = component(e.k);
    const Eigen::MatrixXd zl = component(e.l);
    const Eigen::MatrixXd increment = zl.col(last).replicate(1, cols) - zl;
    out.paths += weight * zk.cwiseProduct(increment);
  }
  return out;
}

double h_tilde(const Kernel& h, const Subordinator& g, double x) {
  const auto [lo, hi] = g.domain();
  if (h.has(KernelTag::Discontinuous)) {
    // Gauss-Hermite nodes resolve a jump only to the node spacing; the
    // adaptive rule bisects down to it.
    const double a = std::max(lo, -12.0);
    const double b = std::min(hi, 12.0);
    auto integrand = [&](double s) { return h(x, g(s)) * normal_pdf(s); };
    double value = integrate_adaptive(integrand, a, b, 1e-12, 1e-10).value;
    if (a > -12.0) value += h(x, g(a)) * normal_cdf(a);
    if (b < 12.0) value += h(x, g(b)) * normal_sf(b);
    return value;
  }
  const GaussHermiteRule& rule = gauss_hermite(kDefaultQuadOrder);
  return rule.expectation([&](double s) { return h(x, g(std::clamp(s, lo, hi))); });
}

Thm2Constants thm2_constants(const Kernel& h, const Subordinator& g, const ClassCoeffs& cc) {
  const int m = cc.rank;
  if (m < 1 || m > cc.k_max()) throw ParameterError("class coefficients carry no valid rank");
  const Eigen::VectorXd& x = cc.grid;
  const Eigen::Index cells = x.size() - 1;
  if (cells < 1) throw ParameterError("class grid needs at least two points");
  Eigen::VectorXd j_mid(cells);
  for (Eigen::Index c = 0; c < cells; ++c) j_mid[c] = 0.5 * (cc.values(m - 1, c) + cc.values(m - 1, c + 1));

  const GaussHermiteRule& rule = gauss_hermite(kDefaultQuadOrder);
  const auto [lo, hi] = g.domain();
  CompensatedSum a_sum;
  CompensatedSum b_sum;
  for (Eigen::Index q = 0; q < rule.size(); ++q) {
    const double v = g(std::clamp(rule.nodes[q], lo, hi));
    double inner_a = 0.0;  // int J(x) d_x h(x, v)
    double inner_b = 0.0;  // int J(y) d_y h(v, y)
    double prev_a = h(x[0], v);
    double prev_b = h(v, x[0]);
    for (Eigen::Index c = 0; c < cells; ++c) {
      const double next_a = h(x[c + 1], v);
      const double next_b = h(v, x[c + 1]);
      inner_a += j_mid[c] * (next_a - prev_a);
      inner_b += j_mid[c] * (next_b - prev_b);
      prev_a = next_a;
      prev_b = next_b;
    }
    a_sum += rule.weights[q] * inner_a;
    b_sum += rule.weights[q] * inner_b;
  }
  Thm2Constants out;
  out.A = a_sum.value();
  out.B = b_sum.value();
  if (!std::isfinite(out.A) || !std::isfinite(out.B)) {
    throw NumericError("Theorem-2 integrals are not finite for kernel '" + h.name + "'");
  }
  out.warnings = probe_total_variation(h).warnings;
  return out;
}

LimitEnsemble limit_thm2(const Kernel& h, const Subordinator& g, const ClassCoeffs& cc,
                         const LimitEnsemble& hermite_m) {
  check_ends_at_one(hermite_m.grid);
  if (hermite_m.descriptor.kind == ProcessDescriptor::Kind::Functional ||
      hermite_m.descriptor.m != cc.rank) {
    throw ParameterError("limit_thm2 needs the Hermite process whose order equals the class rank");
  }
  const Thm2Constants consts = thm2_constants(h, g, cc);
  const Eigen::Index reps = hermite_m.reps();
  const Eigen::Index cols = hermite_m.grid.size();
  const Eigen::MatrixXd z = hermite_m.paths / factorial(cc.rank);
  const Eigen::RowVectorXd lambda = hermite_m.grid.transpose();
  const Eigen::MatrixXd lam = lambda.replicate(reps, 1);
  const Eigen::MatrixXd z_one = z.col(cols - 1).replicate(1, cols);

  LimitEnsemble out;
  out.grid = hermite_m.grid;
  out.paths = -consts.A * (1.0 - lam.array()).matrix().cwiseProduct(z) -
              consts.B * lam.cwiseProduct(z_one - z);
  out.seed = hermite_m.seed;
  out.descriptor.kind = ProcessDescriptor::Kind::Functional;
  out.descriptor.m = cc.rank;
  out.descriptor.D = hermite_m.descriptor.D;
  out.descriptor.H = hermite_m.descriptor.H;
  out.descriptor.n_aux = hermite_m.descriptor.n_aux;
  out.descriptor.name = h.name.empty() ? "thm2" : h.name;
  out.descriptor.components = {hermite_m.descriptor.label(), g.name()};
  out.warnings = hermite_m.warnings;
  out.warnings.insert(out.warnings.end(), consts.warnings.begin(), consts.warnings.end());
  return out;
}

CriticalValueTable critical_values_from_sample(std::vector<double> sups,
                                               const std::vector<double>& levels,
                                               std::string kernel_name, double D, int m,
                                               Eigen::Index grid_size) {
  if (static_cast<Eigen::Index>(sups.size()) < kMinCriticalReps) {
    throw ParameterError("critical values need at least 100 replications");
  }
  for (double level : levels) {
    if (!(level > 0.0 && level < 1.0)) throw ParameterError("quantile levels must lie in (0,1)");
  }
  std::sort(sups.begin(), sups.end());
  CriticalValueTable table;
  table.kernel_name = std::move(kernel_name);
  table.D = D;
  table.m = m;
  table.levels = levels;
  for (double level : levels) table.values.push_back(quantile_sorted(sups, level));
  table.reps = static_cast<Eigen::Index>(sups.size());
  table.grid_size = grid_size;
  return table;
}

CriticalValueTable critical_values(const LimitEnsemble& ensemble, const std::vector<double>& levels) {
  const Eigen::VectorXd sups = ensemble.sup_abs();
  return critical_values_from_sample(std::vector<double>(sups.data(), sups.data() + sups.size()),
                                     levels, ensemble.descriptor.name, ensemble.descriptor.D,
                                     ensemble.descriptor.m, ensemble.grid.size());
}

}  // namespace lrdustat
