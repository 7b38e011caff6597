#include "cli.hpp"

#include "detect.hpp"

#include "lrdustat/errors.hpp"
#include "lrdustat/hermite.hpp"
#include "lrdustat/io.hpp"
#include "lrdustat/kernel.hpp"
#include "lrdustat/limit_law.hpp"
#include "lrdustat/lrd_sim.hpp"
#include "lrdustat/parallel.hpp"
#include "lrdustat/ustat.hpp"
#include "lrdustat/verify.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace lrdustat::tools {

namespace {

using io::json;

/// Offset xor-ed into the seed of limit ensembles so they never share
/// replication streams with the datasets of the same run.
constexpr std::uint64_t kLimitSeedOffset = 0x9E3779B97F4A7C15ULL;

struct Common {
  std::uint64_t seed = 1;
  long long reps = -1;
  unsigned threads = 0;
  std::string levels = "0.90,0.95,0.99";
  std::string output;
  std::string sidecar;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Base seed; replication r uses seed xor r");
  app->add_option("--reps", c.reps, "Monte Carlo replications");
  app->add_option("--threads", c.threads, "Worker thread cap (0 = hardware)");
  app->add_option("--levels", c.levels, "Comma-separated quantile levels");
  app->add_option("-o,--output", c.output, "Output file");
  app->add_option("--sidecar", c.sidecar, "Run-config sidecar (default <output>.run.json)");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

Subordinator parse_transform(const std::string& spec) {
  if (spec == "identity") return Subordinator::identity();
  if (spec == "exponential") return Subordinator::quantile_transform(TargetDistribution::standard_exponential());
  if (spec == "uniform") return Subordinator::quantile_transform(TargetDistribution::uniform01());
  if (spec.rfind("pareto:", 0) == 0) {
    double alpha = 0.0;
    try {
      alpha = std::stod(spec.substr(7));
    } catch (const std::exception&) {
      throw ParameterError("pareto transform needs a numeric tail index: '" + spec + "'");
    }
    return Subordinator::quantile_transform(TargetDistribution::pareto(alpha));
  }
  throw ParameterError("unknown transform '" + spec + "' (identity, exponential, uniform, pareto:<alpha>)");
}

LrdParams make_params(double D, const std::string& family) {
  LrdParams params{D, parse_family(family)};
  params.validate();
  return params;
}

Eigen::Index reps_or(const Common& c, Eigen::Index fallback) {
  if (c.reps < 0) return fallback;
  if (c.reps == 0) throw ParameterError("--reps must be positive");
  return static_cast<Eigen::Index>(c.reps);
}

void write_sidecar(const Common& c, const std::string& subcommand, const std::vector<std::string>& args,
                   json config) {
  std::string file = c.sidecar;
  if (file.empty() && !c.output.empty()) file = c.output + ".run.json";
  if (file.empty()) return;
  config["seed"] = c.seed;
  config["threads"] = c.threads;
  io::write_json(file, json{{"tool", "lrdustat"}, {"subcommand", subcommand}, {"argv", args},
                            {"config", std::move(config)}});
}

void emit_json(const Common& c, const json& value, std::ostream& out) {
  if (c.output.empty()) {
    out << value.dump(2) << '\n';
  } else {
    io::write_json(c.output, value);
  }
}

void write_report(const Common& c, const ExperimentReport& report, std::ostream& out) {
  const std::string text = io::report_text(report);
  out << text;
  if (!c.output.empty()) {
    io::write_json(c.output + ".json", io::report_json(report));
    io::write_text(c.output + ".txt", text);
  }
}

std::vector<Eigen::Index> to_index_list(const std::string& text) {
  std::vector<Eigen::Index> out;
  for (long long v : parse_sizes(text)) out.push_back(static_cast<Eigen::Index>(v));
  return out;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParameterError*>(&e) || dynamic_cast<const InputError*>(&e) ||
      dynamic_cast<const RegimeError*>(&e) || dynamic_cast<const RankNotFound*>(&e) ||
      dynamic_cast<const ExtrapolationError*>(&e) || dynamic_cast<const UnsupportedError*>(&e)) {
    return kExitUsage;
  }
  return kExitInternal;
}

}  // namespace

std::vector<double> parse_levels(const std::string& text) {
  std::vector<double> levels;
  for (const auto& part : split(text, ',')) {
    std::size_t used = 0;
    double level = 0.0;
    try {
      level = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size() || !(level > 0.0 && level < 1.0)) {
      throw ParameterError("quantile level '" + part + "' must be a number in (0,1)");
    }
    levels.push_back(level);
  }
  if (levels.empty()) throw ParameterError("--levels is empty");
  return levels;
}

std::vector<long long> parse_sizes(const std::string& text) {
  std::vector<long long> sizes;
  for (const auto& part : split(text, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size() || v < 1) throw ParameterError("size '" + part + "' must be a positive integer");
    sizes.push_back(v);
  }
  if (sizes.empty()) throw ParameterError("size list is empty");
  return sizes;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-sample U-statistic processes under long-range dependence", "lrdustat"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "lrdustat 0.1.0");

  // simulate
  Common sim_c;
  std::string sim_family = "fgn";
  std::optional<double> sim_D;
  long long sim_n = 0;
  std::string sim_format = "auto";
  std::string sim_transform = "identity";
  auto* sim = app.add_subcommand("simulate", "Simulate an LRD Gaussian or subordinated path");
  add_common(sim, sim_c);
  sim->add_option("--family", sim_family, "fgn or tweaked");
  sim->add_option("--D", sim_D, "Dependence index D in (0,1)")->required();
  sim->add_option("--n", sim_n, "Path length")->required();
  sim->add_option("--format", sim_format, "csv, bin or auto (by extension)");
  sim->add_option("--transform", sim_transform, "identity, exponential, uniform, pareto:<alpha>");

  // ustat
  Common us_c;
  std::string us_input;
  std::string us_kernel = "wilcoxon";
  std::optional<double> us_D;
  std::string us_family = "fgn";
  std::string us_norm = "none";
  std::optional<double> us_center;
  auto* us = app.add_subcommand("ustat", "Compute the U-statistic process of a data file");
  add_common(us, us_c);
  us->add_option("-i,--input", us_input, "Data file (CSV column 'value' or binary path)")->required();
  us->add_option("--kernel", us_kernel, "Kernel spec");
  us->add_option("--D", us_D, "Dependence index D (needed for normalization)");
  us->add_option("--family", us_family, "fgn or tweaked");
  us->add_option("--normalization", us_norm, "none, thm1 or thm2");
  us->add_option("--center", us_center, "Kernel mean to subtract (default a00)");

  // coeffs
  Common co_c;
  std::string co_kernel = "cusum";
  int co_Q = 4;
  std::string co_source = "auto";
  long long co_pairs = 1000000;
  double co_tol = 0.0;
  int co_order = kDefaultQuadOrder;
  std::string co_summability;
  auto* co = app.add_subcommand("coeffs", "Hermite coefficients of a kernel");
  add_common(co, co_c);
  co->add_option("--kernel", co_kernel, "Kernel spec");
  co->add_option("--Q", co_Q, "Maximal total degree");
  co->add_option("--source", co_source, "auto, quadrature, closed or mc");
  co->add_option("--pairs", co_pairs, "Monte Carlo pairs (source mc)");
  co->add_option("--tol", co_tol, "Rank tolerance (0 = source default)");
  co->add_option("--quad-order", co_order, "Gauss-Hermite nodes per axis");
  co->add_option("--summability", co_summability, "Q-list for the summability diagnostic, e.g. 8,16,32");

  // limit
  Common li_c;
  std::string li_kernel = "wilcoxon";
  std::optional<double> li_D;
  long long li_grid = 256;
  long long li_aux = kDefaultAuxLength;
  int li_theorem = 1;
  std::string li_transform = "identity";
  std::string li_csv;
  std::string li_ensemble_csv;
  auto* li = app.add_subcommand("limit", "Simulate a limit process and tabulate critical values");
  add_common(li, li_c);
  li->add_option("--kernel", li_kernel, "Kernel spec");
  li->add_option("--D", li_D, "Dependence index D in (0,1)")->required();
  li->add_option("--grid", li_grid, "Number of lambda cells");
  li->add_option("--n-aux", li_aux, "Auxiliary length for Hermite processes of order >= 2");
  li->add_option("--theorem", li_theorem, "1 (Gaussian data) or 2 (subordinated data)");
  li->add_option("--transform", li_transform, "Transform G for --theorem 2");
  li->add_option("--csv", li_csv, "Also write the quantiles as CSV");
  li->add_option("--ensemble-csv", li_ensemble_csv, "Also write the simulated paths as CSV");

  // detect
  Common de_c;
  DetectConfig de_cfg;
  std::string de_input;
  std::string de_family = "fgn";
  long long de_grid = 256;
  bool de_no_cache = false;
  std::string de_cache_dir;
  std::string de_path_csv;
  auto* de = app.add_subcommand("detect", "Sup-type change-point test");
  add_common(de, de_c);
  de->add_option("-i,--input", de_input, "Data file")->required();
  de->add_option("--kernel", de_cfg.kernel, "Kernel spec");
  de->add_option("--D", de_cfg.D, "Dependence index D in (0,1); required");
  de->add_option("--family", de_family, "Covariance family used for L(n)");
  de->add_option("--grid", de_grid, "Number of lambda cells of the limit ensemble");
  de->add_option("--cache-dir", de_cache_dir, "Critical-value cache directory");
  de->add_flag("--no-cache", de_no_cache, "Do not read or write the cache");
  de->add_option("--path-csv", de_path_csv, "Also write the normalized path as CSV");

  // verify
  auto* ve = app.add_subcommand("verify", "Monte Carlo checks of the limit theorems");
  ve->require_subcommand(1);
  Common vv_c;
  int vv_k = 1;
  double vv_D = 0.0;
  std::string vv_family = "fgn";
  std::string vv_n;
  auto* vv = ve->add_subcommand("variance", "Variance of Hermite partial sums");
  add_common(vv, vv_c);
  vv->add_option("--k", vv_k, "Hermite order")->required();
  vv->add_option("--D", vv_D, "Dependence index")->required();
  vv->add_option("--family", vv_family, "fgn or tweaked");
  vv->add_option("--n", vv_n, "Comma-separated sample sizes")->required();

  Common vr_c;
  std::string vr_kernel = "bump";
  double vr_D = 0.0;
  std::string vr_family = "fgn";
  std::string vr_n = "500,1000,2000,4000";
  auto* vr = ve->add_subcommand("reduction", "Reduction-principle discrepancy");
  add_common(vr, vr_c);
  vr->add_option("--kernel", vr_kernel, "Kernel spec");
  vr->add_option("--D", vr_D, "Dependence index")->required();
  vr->add_option("--family", vr_family, "fgn or tweaked");
  vr->add_option("--n", vr_n, "Comma-separated sample sizes");

  Common vw_c;
  std::string vw_kernel = "wilcoxon";
  double vw_D = 0.0;
  std::string vw_family = "fgn";
  long long vw_n = 2000;
  long long vw_limit_reps = 5000;
  long long vw_grid = 256;
  std::optional<double> vw_limit_H;
  double vw_tol = 0.1;
  auto* vw = ve->add_subcommand("weak", "KS distance to the simulated limit");
  add_common(vw, vw_c);
  vw->add_option("--kernel", vw_kernel, "Kernel spec");
  vw->add_option("--D", vw_D, "Dependence index")->required();
  vw->add_option("--family", vw_family, "fgn or tweaked");
  vw->add_option("--n", vw_n, "Sample size");
  vw->add_option("--limit-reps", vw_limit_reps, "Replications of the limit ensemble");
  vw->add_option("--grid", vw_grid, "Number of lambda cells");
  vw->add_option("--limit-H", vw_limit_H, "Drive the limit with fBm of this Hurst index (negative control)");
  vw->add_option("--tol", vw_tol, "KS tolerance");

  // rerun
  std::string rr_sidecar;
  std::string rr_output;
  auto* rr = app.add_subcommand("rerun", "Replay a run from its sidecar");
  rr->add_option("sidecar", rr_sidecar, "Sidecar JSON")->required();
  rr->add_option("-o,--output", rr_output, "Replace the output path of the original run");

  std::vector<const char*> argv{"lrdustat"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (const Common* c : {&sim_c, &us_c, &co_c, &li_c, &de_c, &vv_c, &vr_c, &vw_c}) {
      if (c->threads != 0) set_max_threads(c->threads);
    }

    if (sim->parsed()) {
      const LrdParams params = make_params(*sim_D, sim_family);
      if (sim_n < 2) throw ParameterError("--n must be >= 2");
      const Subordinator g = parse_transform(sim_transform);
      GaussianPath path = simulate_gaussian(params, static_cast<Eigen::Index>(sim_n), sim_c.seed);
      Eigen::VectorXd values = sim_transform == "identity" ? path.values : subordinate(path.values, g);
      for (const auto& w : path.warnings) err << "warning: " << w << '\n';
      const bool binary = sim_format == "bin" ||
                          (sim_format == "auto" && sim_c.output.size() > 4 &&
                           sim_c.output.substr(sim_c.output.size() - 4) == ".bin");
      if (sim_format != "auto" && sim_format != "csv" && sim_format != "bin") {
        throw ParameterError("--format must be csv, bin or auto");
      }
      if (sim_c.output.empty()) {
        out << std::setprecision(17) << "value\n";
        for (Eigen::Index i = 0; i < values.size(); ++i) out << values[i] << '\n';
      } else if (binary) {
        io::write_path_binary(sim_c.output, values);
      } else {
        io::write_path_csv(sim_c.output, values);
      }
      json config = io::params_json(params, static_cast<Eigen::Index>(sim_n), sim_c.seed);
      config["transform"] = sim_transform;
      config["format"] = binary ? "bin" : "csv";
      config["output"] = sim_c.output;
      write_sidecar(sim_c, "simulate", args, config);
      return kExitOk;
    }

    if (us->parsed()) {
      const Kernel h = kernels::from_spec(us_kernel);
      const Eigen::VectorXd data = io::read_path(us_input);
      if (data.size() < 2) throw InputError("input needs at least 2 observations");
      const Normalization mode = parse_normalization(us_norm);
      UStatPath path = ustat_compute(data, h);
      json config{{"input", us_input}, {"kernel", us_kernel}, {"normalization", us_norm}};
      if (mode != Normalization::None) {
        if (!us_D) throw ParameterError("--D is required for normalized paths");
        const LrdParams params = make_params(*us_D, us_family);
        const HermiteCoeffTable table = coeffs_auto(h, 8, us_c.seed);
        if (!table.rank) throw RankNotFound(table.max_total_degree);
        const double nd = static_cast<double>(data.size());
        const ScalingConstants sc = scaling(params.D, *table.rank, nd, asymptotic_L(params, nd));
        const double center = us_center ? *us_center : table.a00();
        path = normalize(path, sc, mode, center);
        config["D"] = params.D;
        config["family"] = to_string(params.family);
        config["center"] = center;
        config["rank"] = *table.rank;
      }
      const ChangePoint cp = changepoint_statistic(path);
      out << std::setprecision(10) << "n = " << path.n << "  sup = " << cp.statistic
          << "  k* = " << cp.k_star << '\n';
      if (!us_c.output.empty()) io::write_ustat_csv(us_c.output, path);
      config["output"] = us_c.output;
      write_sidecar(us_c, "ustat", args, config);
      return kExitOk;
    }

    if (co->parsed()) {
      const Kernel h = kernels::from_spec(co_kernel);
      if (co_Q < 1) throw ParameterError("--Q must be >= 1");
      HermiteCoeffTable table;
      if (co_source == "auto") {
        table = coeffs_auto(h, co_Q, co_c.seed);
      } else if (co_source == "quadrature") {
        table = coeffs_2d(h, co_Q, co_order, co_tol);
      } else if (co_source == "closed") {
        table = co_tol > 0.0 ? coeffs_closed_form(h, co_Q, co_tol) : coeffs_closed_form(h, co_Q);
      } else if (co_source == "mc") {
        table = coeffs_monte_carlo(h, co_Q, co_pairs, co_c.seed, co_tol);
      } else {
        throw ParameterError("--source must be auto, quadrature, closed or mc");
      }
      json result = io::coeffs_json(table);
      if (!co_summability.empty()) {
        std::vector<int> q_list;
        for (long long q : parse_sizes(co_summability)) q_list.push_back(static_cast<int>(q));
        const CoeffProvider provider = h.has_closed_form() ? h.coeff_provider : provider_from_table(table);
        result["summability"] = io::summability_json(summability_diagnostic(provider, q_list));
      }
      emit_json(co_c, result, out);
      write_sidecar(co_c, "coeffs", args,
                    json{{"kernel", co_kernel}, {"Q", co_Q}, {"source", co_source}, {"tol", co_tol},
                         {"output", co_c.output}});
      return kExitOk;
    }

    if (li->parsed()) {
      const Kernel h = kernels::from_spec(li_kernel);
      const double D = *li_D;
      LrdParams{D, CovarianceFamily::FGN}.validate();
      const Eigen::Index reps = reps_or(li_c, kDefaultReps);
      const std::vector<double> levels = parse_levels(li_c.levels);
      if (li_grid < 1) throw ParameterError("--grid must be >= 1");
      LimitEnsemble ensemble;
      if (li_theorem == 1) {
        const HermiteCoeffTable table = coeffs_auto(h, 8, li_c.seed);
        if (!table.rank) throw RankNotFound(table.max_total_degree);
        if (*table.rank * D >= 1.0) throw RegimeError("reduction regime violated: m*D >= 1");
        ensemble = thm1_limit_ensemble(h, D, *table.rank, reps, static_cast<Eigen::Index>(li_grid),
                                       li_c.seed, static_cast<Eigen::Index>(li_aux));
      } else if (li_theorem == 2) {
        const Subordinator g = parse_transform(li_transform);
        const ClassCoeffs cc = class_coeffs(g, 4, default_class_grid(g));
        if (cc.rank * D >= 1.0) throw RegimeError("reduction regime violated: m*D >= 1");
        const Eigen::VectorXd grid = uniform_grid(static_cast<Eigen::Index>(li_grid));
        const LimitEnsemble z =
            cc.rank == 1 ? simulate_fbm(1.0 - D / 2.0, grid, reps, li_c.seed)
                         : simulate_hermite(cc.rank, D, grid, reps, static_cast<Eigen::Index>(li_aux), li_c.seed);
        ensemble = limit_thm2(h, g, cc, z);
      } else {
        throw ParameterError("--theorem must be 1 or 2");
      }
      for (const auto& w : ensemble.warnings) err << "warning: " << w << '\n';
      const CriticalValueTable table = critical_values(ensemble, levels);
      emit_json(li_c, io::critical_values_json(ensemble, table), out);
      if (!li_csv.empty()) io::write_critical_values_csv(li_csv, table);
      if (!li_ensemble_csv.empty()) io::write_ensemble_csv(li_ensemble_csv, ensemble);
      write_sidecar(li_c, "limit", args,
                    json{{"kernel", li_kernel}, {"D", D}, {"reps", reps}, {"levels", levels},
                         {"grid", li_grid}, {"theorem", li_theorem}, {"transform", li_transform},
                         {"n_aux", li_aux}, {"output", li_c.output}});
      return kExitOk;
    }

    if (de->parsed()) {
      if (!de_cfg.D) {
        throw ParameterError("--D is required: the dependence index D must be supplied (it is not estimated)");
      }
      de_cfg.family = parse_family(de_family);
      de_cfg.levels = parse_levels(de_c.levels);
      de_cfg.reps = reps_or(de_c, kDefaultReps);
      de_cfg.grid_cells = static_cast<Eigen::Index>(de_grid);
      de_cfg.seed = de_c.seed;
      de_cfg.use_cache = !de_no_cache;
      if (!de_cache_dir.empty()) de_cfg.cache_dir = de_cache_dir;
      const Eigen::VectorXd data = io::read_path(de_input);
      const DetectResult result = detect(data, de_cfg);

      json decisions = json::array();
      out << std::setprecision(10) << "n = " << result.n << "  kernel = " << de_cfg.kernel
          << "  m = " << result.rank << '\n'
          << "statistic = " << result.statistic << "  k* = " << result.k_star
          << "  k*/n = " << static_cast<double>(result.k_star) / static_cast<double>(result.n) << '\n';
      for (std::size_t i = 0; i < result.table.levels.size(); ++i) {
        out << "level " << result.table.levels[i] << ": critical value " << result.table.values[i]
            << (result.reject[i] ? "  reject" : "  accept") << '\n';
        decisions.push_back(json{{"level", result.table.levels[i]},
                                 {"critical_value", result.table.values[i]},
                                 {"reject", static_cast<bool>(result.reject[i])}});
      }
      json report{{"n", result.n}, {"kernel", de_cfg.kernel}, {"D", *de_cfg.D},
                  {"family", to_string(de_cfg.family)}, {"rank", result.rank},
                  {"center", result.center}, {"statistic", result.statistic},
                  {"k_star", result.k_star}, {"decisions", decisions},
                  {"limit_reps", result.table.reps}, {"cache_hit", result.from_cache},
                  {"cache_file", result.cache_file}};
      if (!de_c.output.empty()) io::write_json(de_c.output, report);
      if (!de_path_csv.empty()) io::write_ustat_csv(de_path_csv, result.path);
      write_sidecar(de_c, "detect", args,
                    json{{"input", de_input}, {"kernel", de_cfg.kernel}, {"D", *de_cfg.D},
                         {"family", to_string(de_cfg.family)}, {"levels", de_cfg.levels},
                         {"reps", de_cfg.reps}, {"grid", de_grid}, {"cache", de_cfg.use_cache},
                         {"output", de_c.output}});
      return kExitOk;
    }

    if (vv->parsed()) {
      const LrdParams params = make_params(vv_D, vv_family);
      const ExperimentReport report =
          check_variance(vv_k, params, to_index_list(vv_n), reps_or(vv_c, 200), vv_c.seed);
      write_report(vv_c, report, out);
      write_sidecar(vv_c, "verify variance", args,
                    json{{"k", vv_k}, {"D", vv_D}, {"family", vv_family}, {"n", vv_n},
                         {"reps", reps_or(vv_c, 200)}, {"output", vv_c.output}});
      return kExitOk;
    }

    if (vr->parsed()) {
      const LrdParams params = make_params(vr_D, vr_family);
      const ExperimentReport report = check_reduction(kernels::from_spec(vr_kernel), params,
                                                      to_index_list(vr_n), reps_or(vr_c, 100), vr_c.seed);
      write_report(vr_c, report, out);
      write_sidecar(vr_c, "verify reduction", args,
                    json{{"kernel", vr_kernel}, {"D", vr_D}, {"family", vr_family}, {"n", vr_n},
                         {"reps", reps_or(vr_c, 100)}, {"output", vr_c.output}});
      return kExitOk;
    }

    if (vw->parsed()) {
      const LrdParams params = make_params(vw_D, vw_family);
      const Kernel h = kernels::from_spec(vw_kernel);
      const HermiteCoeffTable table = coeffs_auto(h, 8, vw_c.seed);
      if (!table.rank) throw RankNotFound(table.max_total_degree);
      const int m = *table.rank;
      if (vw_limit_reps < kMinCriticalReps) throw ParameterError("--limit-reps must be >= 100");
      const std::uint64_t limit_seed = vw_c.seed ^ kLimitSeedOffset;
      const Eigen::VectorXd grid = uniform_grid(static_cast<Eigen::Index>(vw_grid));
      LimitEnsemble limit;
      if (vw_limit_H) {
        if (m != 1) throw ParameterError("--limit-H applies to kernels of rank 1");
        limit = limit_thm1(degree_entries(table, 1), params.D,
                           {simulate_fbm(*vw_limit_H, grid, vw_limit_reps, limit_seed)}, h.name);
      } else {
        limit = thm1_limit_ensemble(h, params.D, m, vw_limit_reps, static_cast<Eigen::Index>(vw_grid),
                                    limit_seed);
      }
      const ExperimentReport report = check_weak_convergence(
          h, params, static_cast<Eigen::Index>(vw_n), reps_or(vw_c, 1000), limit, vw_c.seed, vw_tol);
      write_report(vw_c, report, out);
      json config{{"kernel", vw_kernel}, {"D", vw_D}, {"family", vw_family}, {"n", vw_n},
                  {"reps", reps_or(vw_c, 1000)}, {"limit_reps", vw_limit_reps}, {"grid", vw_grid},
                  {"tol", vw_tol}, {"output", vw_c.output}};
      if (vw_limit_H) config["limit_H"] = *vw_limit_H;
      write_sidecar(vw_c, "verify weak", args, config);
      return kExitOk;
    }

    if (rr->parsed()) {
      const json sidecar = io::read_json(rr_sidecar);
      if (!sidecar.contains("argv") || !sidecar["argv"].is_array()) {
        throw InputError("'" + rr_sidecar + "' has no argv record");
      }
      std::vector<std::string> replay = sidecar["argv"].get<std::vector<std::string>>();
      if (replay.empty() || replay.front() == "rerun") throw InputError("sidecar does not describe a run");
      if (!rr_output.empty()) {
        bool replaced = false;
        for (std::size_t i = 0; i + 1 < replay.size(); ++i) {
          if (replay[i] == "-o" || replay[i] == "--output") {
            replay[i + 1] = rr_output;
            replaced = true;
          }
        }
        if (!replaced) {
          replay.push_back("-o");
          replay.push_back(rr_output);
        }
      }
      return run_cli(replay, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitOk;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace lrdustat::tools
