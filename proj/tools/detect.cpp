#include "detect.hpp"

#include "lrdustat/errors.hpp"
#include "lrdustat/hermite.hpp"
#include "lrdustat/io.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <sstream>

namespace lrdustat::tools {

namespace {

namespace fs = std::filesystem;

struct KernelModel {
  Kernel kernel;
  HermiteCoeffTable table;
  int rank = 1;
};

double required_D(const DetectConfig& config) {
  if (!config.D) {
    throw ParameterError("--D is required: the dependence index D must be supplied (it is not estimated)");
  }
  LrdParams{*config.D, config.family}.validate();
  return *config.D;
}

KernelModel kernel_model(const DetectConfig& config) {
  KernelModel model{kernels::from_spec(config.kernel), {}, 1};
  model.table = coeffs_auto(model.kernel, 8, config.seed);
  if (!model.table.rank) throw RankNotFound(model.table.max_total_degree);
  model.rank = *model.table.rank;
  return model;
}

std::string canonical_key(const DetectConfig& config, int m) {
  std::ostringstream key;
  key << std::setprecision(17) << "kernel=" << config.kernel << ";family=" << to_string(config.family)
      << ";D=" << *config.D << ";m=" << m << ";R=" << config.reps << ";grid=" << config.grid_cells
      << ";seed=" << config.seed;
  return key.str();
}

}  // namespace

std::string cache_key(const DetectConfig& config, int m) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_key(config, m)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << hash;
  return out.str();
}

std::string resolve_cache_dir(const DetectConfig& config) {
  if (config.cache_dir && !config.cache_dir->empty()) return *config.cache_dir;
  if (const char* env = std::getenv("LRDUSTAT_CACHE_DIR"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home) {
    return (fs::path(home) / ".cache" / "lrdustat").string();
  }
  return (fs::temp_directory_path() / "lrdustat-cache").string();
}

LimitEnsemble thm1_limit_ensemble(const Kernel& h, double D, int m, Eigen::Index reps,
                                  Eigen::Index grid_cells, std::uint64_t seed, Eigen::Index n_aux) {
  const HermiteCoeffTable table = coeffs_auto(h, std::max(8, m), seed);
  const Eigen::VectorXd grid = uniform_grid(grid_cells);
  std::vector<LimitEnsemble> components;
  if (m == 1) {
    components.push_back(simulate_fbm(1.0 - D / 2.0, grid, reps, seed));
  } else {
    components = simulate_hermite_joint(m, D, grid, reps, n_aux, seed);
  }
  return limit_thm1(degree_entries(table, m), D, components, h.name);
}

std::vector<double> limit_sup_sample(const Kernel& h, double D, int m, Eigen::Index reps,
                                     Eigen::Index grid_cells, std::uint64_t seed) {
  const LimitEnsemble limit = thm1_limit_ensemble(h, D, m, reps, grid_cells, seed);
  const Eigen::VectorXd sups = limit.sup_abs();
  return std::vector<double>(sups.data(), sups.data() + sups.size());
}

CriticalValueTable detector_table(const DetectConfig& config, bool* from_cache,
                                  std::string* cache_file) {
  const double D = required_D(config);
  const KernelModel model = kernel_model(config);
  if (model.rank * D >= 1.0) throw RegimeError("reduction regime violated: m*D >= 1");
  if (from_cache) *from_cache = false;

  fs::path file;
  if (config.use_cache) {
    file = fs::path(resolve_cache_dir(config)) / ("limit-" + cache_key(config, model.rank) + ".json");
    if (cache_file) *cache_file = file.string();
    std::error_code ec;
    if (fs::exists(file, ec)) {
      try {
        const io::json cached = io::read_json(file.string());
        if (cached.at("key").get<std::string>() == canonical_key(config, model.rank)) {
          if (from_cache) *from_cache = true;
          return critical_values_from_sample(cached.at("sups").get<std::vector<double>>(),
                                             config.levels, model.kernel.name, D, model.rank,
                                             config.grid_cells + 1);
        }
      } catch (const std::exception&) {
        // unreadable cache entries are recomputed and overwritten
      }
    }
  }

  std::vector<double> sups =
      limit_sup_sample(model.kernel, D, model.rank, config.reps, config.grid_cells, config.seed);
  if (config.use_cache) {
    std::error_code ec;
    fs::create_directories(file.parent_path(), ec);
    try {
      io::write_json(file.string(), io::json{{"key", canonical_key(config, model.rank)}, {"sups", sups}});
    } catch (const std::exception&) {
      if (cache_file) cache_file->clear();
    }
  }
  return critical_values_from_sample(std::move(sups), config.levels, model.kernel.name, D,
                                     model.rank, config.grid_cells + 1);
}

DetectResult detect_with_table(const Eigen::Ref<const Eigen::VectorXd>& data,
                               const DetectConfig& config, const CriticalValueTable& table) {
  const double D = required_D(config);
  const Eigen::Index n = data.size();
  if (n < 2) throw InputError("detection needs n >= 2 observations (no admissible split)");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(data[i])) throw InputError("input contains non-finite values");
  }
  const KernelModel model = kernel_model(config);
  const LrdParams params{D, config.family};
  const double nd = static_cast<double>(n);
  const ScalingConstants sc = scaling(D, model.rank, nd, asymptotic_L(params, nd));

  DetectResult result;
  result.n = n;
  result.rank = model.rank;
  result.center = model.table.a00();
  result.path = normalize(ustat_compute(data, model.kernel), sc, Normalization::Thm1, result.center);
  const ChangePoint cp = changepoint_statistic(result.path);
  result.statistic = cp.statistic;
  result.k_star = cp.k_star;
  result.table = table;
  for (double value : table.values) result.reject.push_back(result.statistic > value);
  return result;
}

DetectResult detect(const Eigen::Ref<const Eigen::VectorXd>& data, const DetectConfig& config) {
  required_D(config);
  if (data.size() < 2) throw InputError("detection needs n >= 2 observations (no admissible split)");
  bool cached = false;
  std::string file;
  const CriticalValueTable table = detector_table(config, &cached, &file);
  DetectResult result = detect_with_table(data, config, table);
  result.from_cache = cached;
  result.cache_file = file;
  return result;
}

}  // namespace lrdustat::tools
