#ifndef LRDUSTAT_KERNEL_HPP
#define LRDUSTAT_KERNEL_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lrdustat {

enum class KernelTag : std::uint32_t {
  None = 0,
  Discontinuous = 1u << 0,
  FastCusum = 1u << 1,
  FastWilcoxon = 1u << 2,
  RobustScore = 1u << 3,
};

constexpr KernelTag operator|(KernelTag a, KernelTag b) {
  return static_cast<KernelTag>(static_cast<std::uint32_t>(a) | static_cast<std::uint32_t>(b));
}
constexpr bool has_tag(KernelTag set, KernelTag tag) {
  return (static_cast<std::uint32_t>(set) & static_cast<std::uint32_t>(tag)) != 0;
}

/// A two-argument kernel h(x, y) together with what is known about it.
///
/// Tagged fast paths rely on exact identities: FastCusum means
/// eval(x, y) == sign * (x - y), FastWilcoxon means eval(x, y) == 1{x <= y}.
struct Kernel {
  std::string name;
  std::function<double(double, double)> eval;
  KernelTag tags = KernelTag::None;
  /// Sign of the CUSUM kernel: +1 for x - y, -1 for y - x.
  int sign = 1;
  /// Uniform bound on the total variation in each argument, when known.
  std::optional<double> tv_bound;
  /// Closed-form Hermite coefficient a_{kl}, when known.
  std::function<double(int, int)> coeff_provider;
  /// Score function for kernels of the form Psi(x - y).
  std::function<double(double)> psi;

  double operator()(double x, double y) const { return eval(x, y); }
  bool has(KernelTag tag) const { return has_tag(tags, tag); }
  bool has_closed_form() const { return static_cast<bool>(coeff_provider); }
};

namespace kernels {

/// x - y (sign = +1) or y - x (sign = -1).
Kernel cusum(int sign = 1);
/// 1{x <= y}.
Kernel wilcoxon();
/// 1{x > y}; complement of the Wilcoxon kernel, evaluated by the general path.
Kernel wilcoxon_complement();
/// exp(-x^2 - y^2).
Kernel gaussian_bump();
/// Psi(x - y) with Huber score clamp(t, -delta, delta).
Kernel huber(double delta);
/// Psi(x - y) with Tukey biweight t (1 - (t/c)^2)^2 on |t| <= c.
Kernel tukey_biweight(double c);
/// Psi(x - y) for a user score; throws ParameterError if Psi looks unbounded.
Kernel robust_score(std::string name, std::function<double(double)> psi,
                    std::optional<double> tv_bound = std::nullopt);
/// H_k(x) H_l(y).
Kernel hermite_product(int k, int l);
/// H_1(x) - H_1(y) written generically (no fast path).
Kernel hermite_difference();
Kernel constant(double value);
Kernel zero();
/// c * h, carrying tags that survive scaling and the scaled coefficients.
Kernel scaled(const Kernel& h, double c);
/// Arbitrary user kernel without extra knowledge.
Kernel custom(std::string name, std::function<double(double, double)> eval);

/// Resolves names used on the command line: cusum, cusum:flip, wilcoxon,
/// bump, huber:<delta>, tukey:<c>, hermite:<k>,<l>, zero.
Kernel from_spec(const std::string& spec);

}  // namespace kernels

/// Result of probing the total variation of h(., y) and h(x, .) on grids.
struct TvProbe {
  double max_tv_first = 0.0;   // sup_y TV(h(., y)) on the wide grid
  double max_tv_second = 0.0;  // sup_x TV(h(x, .)) on the wide grid
  double growth = 1.0;         // wide / narrow ratio; ~1 for bounded variation
  bool bounded_likely = true;
  std::vector<std::string> warnings;
};

/// Probes TV on [-8, 8] and [-64, 64] at a handful of fixed second arguments.
/// Violations are reported, never thrown.
TvProbe probe_total_variation(const Kernel& h);

}  // namespace lrdustat

#endif  // LRDUSTAT_KERNEL_HPP
