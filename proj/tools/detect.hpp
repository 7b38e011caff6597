#ifndef LRDUSTAT_TOOLS_DETECT_HPP
#define LRDUSTAT_TOOLS_DETECT_HPP

#include "lrdustat/kernel.hpp"
#include "lrdustat/limit_law.hpp"
#include "lrdustat/lrd_sim.hpp"
#include "lrdustat/ustat.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lrdustat::tools {

struct DetectConfig {
  std::string kernel = "wilcoxon";
  /// Required: the detector never estimates D.
  std::optional<double> D;
  CovarianceFamily family = CovarianceFamily::FGN;
  std::vector<double> levels{0.90, 0.95, 0.99};
  /// Replications of the limit ensemble behind the critical values.
  Eigen::Index reps = kDefaultReps;
  Eigen::Index grid_cells = 256;
  std::uint64_t seed = 1;
  /// Cache directory; LRDUSTAT_CACHE_DIR or ~/.cache/lrdustat when empty.
  std::optional<std::string> cache_dir;
  bool use_cache = true;
};

struct DetectResult {
  double statistic = 0.0;
  Eigen::Index k_star = 0;
  Eigen::Index n = 0;
  int rank = 1;
  double center = 0.0;
  CriticalValueTable table;
  /// reject[i] is true when the statistic exceeds table.values[i].
  std::vector<bool> reject;
  bool from_cache = false;
  std::string cache_file;
  UStatPath path;
};

/// Critical values of sup |Theorem-1 limit| for the configured kernel,
/// loaded from or stored into the cache when enabled.
CriticalValueTable detector_table(const DetectConfig& config, bool* from_cache = nullptr,
                                  std::string* cache_file = nullptr);

/// Theorem-1 limit ensemble of a kernel of rank m: exact fBm for m = 1,
/// the finite-N Hermite approximation otherwise.
LimitEnsemble thm1_limit_ensemble(const Kernel& h, double D, int m, Eigen::Index reps,
                                  Eigen::Index grid_cells, std::uint64_t seed,
                                  Eigen::Index n_aux = kDefaultAuxLength);

/// Sample of sup |limit| used by detector_table.
std::vector<double> limit_sup_sample(const Kernel& h, double D, int m, Eigen::Index reps,
                                     Eigen::Index grid_cells, std::uint64_t seed);

/// Normalized sup-statistic, its argmax and the test decisions.
DetectResult detect(const Eigen::Ref<const Eigen::VectorXd>& data, const DetectConfig& config);

/// Same with precomputed critical values (for repeated detections).
DetectResult detect_with_table(const Eigen::Ref<const Eigen::VectorXd>& data,
                               const DetectConfig& config, const CriticalValueTable& table);

/// FNV-1a hash of the canonical cache key.
std::string cache_key(const DetectConfig& config, int m);

/// Directory used for cached tables under `config`.
std::string resolve_cache_dir(const DetectConfig& config);

}  // namespace lrdustat::tools

#endif  // LRDUSTAT_TOOLS_DETECT_HPP
