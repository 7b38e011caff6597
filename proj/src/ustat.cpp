#include "lrdustat/ustat.hpp"

#include "lrdustat/errors.hpp"
#include "lrdustat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace lrdustat {

std::string to_string(Normalization mode) {
  switch (mode) {
    case Normalization::None:
      return "none";
    case Normalization::Thm1:
      return "thm1";
    case Normalization::Thm2:
      return "thm2";
  }
  return "none";
}

Normalization parse_normalization(const std::string& name) {
  if (name == "none") return Normalization::None;
  if (name == "thm1") return Normalization::Thm1;
  if (name == "thm2") return Normalization::Thm2;
  throw ParameterError("unknown normalization '" + name + "' (expected none, thm1, thm2)");
}

double UStatPath::at(double lambda) const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ParameterError("lambda must lie in [0,1]");
  const auto k = static_cast<Eigen::Index>(std::floor(lambda * static_cast<double>(n)));
  if (k <= 0 || k >= n) return 0.0;
  return values[k - 1];
}

namespace {

void check_data(const Eigen::Ref<const Eigen::VectorXd>& data) {
  if (data.size() < 2) throw InputError("U-statistic path needs at least two observations");
  if (!data.allFinite()) throw InputError("data contain non-finite values");
}

UStatPath make_path(Eigen::VectorXd raw, Eigen::Index n, std::string name) {
  UStatPath path;
  path.values = raw;
  path.raw = std::move(raw);
  path.n = n;
  path.kernel_name = std::move(name);
  return path;
}

}  // namespace

UStatPath ustat_naive(const Eigen::Ref<const Eigen::VectorXd>& data, const Kernel& h) {
  check_data(data);
  const Eigen::Index n = data.size();
  Eigen::VectorXd raw(n - 1);
  for (Eigen::Index k = 1; k < n; ++k) {
    CompensatedSum acc;
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = k; j < n; ++j) acc += h(data[i], data[j]);
    }
    raw[k - 1] = acc.value();
  }
  return make_path(std::move(raw), n, h.name);
}

UStatPath ustat_incremental(const Eigen::Ref<const Eigen::VectorXd>& data, const Kernel& h) {
  check_data(data);
  const Eigen::Index n = data.size();
  Eigen::VectorXd raw(n - 1);
  CompensatedSum u;
  for (Eigen::Index j = 1; j < n; ++j) u += h(data[0], data[j]);
  raw[0] = u.value();
  for (Eigen::Index k = 1; k < n - 1; ++k) {
    // Observation k (0-based) moves from the second sample to the first.
    const double x = data[k];
    CompensatedSum leaving;
    for (Eigen::Index i = 0; i < k; ++i) leaving += h(data[i], x);
    CompensatedSum joining;
    for (Eigen::Index j = k + 1; j < n; ++j) joining += h(x, data[j]);
    u += -leaving.value();
    u += joining.value();
    raw[k] = u.value();
  }
  return make_path(std::move(raw), n, h.name);
}

UStatPath ustat_cusum(const Eigen::Ref<const Eigen::VectorXd>& data, int sign) {
  check_data(data);
  const Eigen::Index n = data.size();
  Eigen::VectorXd prefix(n + 1);
  prefix[0] = 0.0;
  CompensatedSum s;
  for (Eigen::Index i = 0; i < n; ++i) {
    s += data[i];
    prefix[i + 1] = s.value();
  }
  const double total = prefix[n];
  Eigen::VectorXd raw(n - 1);
  for (Eigen::Index k = 1; k < n; ++k) {
    const double nk = static_cast<double>(n - k);
    const double kk = static_cast<double>(k);
    raw[k - 1] = static_cast<double>(sign) * (nk * prefix[k] - kk * (total - prefix[k]));
  }
  return make_path(std::move(raw), n, sign > 0 ? "cusum" : "cusum:flip");
}

namespace {

class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
  void add(std::size_t index, std::int64_t delta) {
    for (std::size_t i = index + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }
  /// Sum over indices [0, index].
  std::int64_t prefix(std::size_t index) const {
    std::int64_t s = 0;
    for (std::size_t i = index + 1; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

 private:
  std::vector<std::int64_t> tree_;
};

}  // namespace

UStatPath ustat_wilcoxon(const Eigen::Ref<const Eigen::VectorXd>& data) {
  check_data(data);
  const Eigen::Index n = data.size();
  const auto un = static_cast<std::size_t>(n);

  std::vector<double> sorted(data.data(), data.data() + n);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::size_t> rank(un);
  for (std::size_t i = 0; i < un; ++i) {
    rank[i] = static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), data[static_cast<Eigen::Index>(i)]) -
        sorted.begin());
  }
  const std::size_t levels = sorted.size();

  // Counts by rank over the whole sample, and over the current prefix.
  Fenwick all(levels);
  for (std::size_t r : rank) all.add(r, 1);
  Fenwick prefix(levels);

  auto at_least = [&](const Fenwick& f, std::size_t r, std::int64_t size) {
    return size - (r == 0 ? 0 : f.prefix(r - 1));
  };

  // U(1): suffix elements >= X_1.
  prefix.add(rank[0], 1);
  std::int64_t u = at_least(all, rank[0], static_cast<std::int64_t>(un)) -
                   at_least(prefix, rank[0], 1);
  Eigen::VectorXd raw(n - 1);
  raw[0] = static_cast<double>(u);
  for (std::size_t k = 1; k + 1 < un; ++k) {
    // X_{k+1} (0-based k) leaves the suffix and joins the prefix.
    const std::size_t r = rank[k];
    const auto prefix_size = static_cast<std::int64_t>(k);
    const std::int64_t prefix_le = prefix.prefix(r);
    const std::int64_t suffix_ge = at_least(all, r, static_cast<std::int64_t>(un)) -
                                   at_least(prefix, r, prefix_size) - 1;
    u += suffix_ge - prefix_le;
    prefix.add(r, 1);
    raw[static_cast<Eigen::Index>(k)] = static_cast<double>(u);
  }
  return make_path(std::move(raw), n, "wilcoxon");
}

UStatPath ustat_compute(const Eigen::Ref<const Eigen::VectorXd>& data, const Kernel& h) {
  UStatPath path;
  if (h.has(KernelTag::FastCusum)) {
    path = ustat_cusum(data, h.sign);
  } else if (h.has(KernelTag::FastWilcoxon)) {
    path = ustat_wilcoxon(data);
  } else {
    return ustat_incremental(data, h);
  }
  path.kernel_name = h.name;
  return path;
}

UStatPath normalize(const UStatPath& path, const ScalingConstants& sc, Normalization mode,
                    double center) {
  if (path.normalization != Normalization::None) {
    throw StateError("path is already normalized (" + to_string(path.normalization) + ")");
  }
  if (mode != Normalization::None && static_cast<Eigen::Index>(std::llround(sc.n)) != path.n) {
    throw ParameterError("scaling constants were computed for a different n");
  }
  UStatPath out = path;
  out.normalization = mode;
  out.centering = center;
  const double n = static_cast<double>(path.n);
  switch (mode) {
    case Normalization::None:
      out.divisor = 1.0;
      break;
    case Normalization::Thm1:
      out.divisor = sc.d_n_prime * n;
      break;
    case Normalization::Thm2:
      out.divisor = sc.d_n * n;
      break;
  }
  for (Eigen::Index k = 1; k < path.n; ++k) {
    const double kk = static_cast<double>(k);
    out.values[k - 1] = (path.raw[k - 1] - kk * (n - kk) * center) / out.divisor;
  }
  return out;
}

ChangePoint changepoint_statistic(const Eigen::Ref<const Eigen::VectorXd>& values) {
  if (values.size() == 0) throw InputError("empty path");
  ChangePoint cp;
  cp.statistic = std::abs(values[0]);
  cp.k_star = 1;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    const double v = std::abs(values[i]);
    if (v > cp.statistic) {
      cp.statistic = v;
      cp.k_star = i + 1;
    }
  }
  return cp;
}

ChangePoint changepoint_statistic(const UStatPath& path) { return changepoint_statistic(path.values); }

}  // namespace lrdustat
