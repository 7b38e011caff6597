#ifndef LRDUSTAT_RNG_HPP
#define LRDUSTAT_RNG_HPP

#include <cstdint>
#include <limits>

namespace lrdustat {

/// SplitMix64 step; used to expand a 64-bit seed into generator state.
std::uint64_t splitmix64(std::uint64_t& state);

/// xoshiro256++ seeded through SplitMix64. Replication r of an experiment
/// with seed s draws from Rng(s ^ r), so every replication is reproducible
/// on its own and independent of scheduling.
///
/// Normal variates use the Marsaglia polar method implemented here rather
/// than std::normal_distribution, so streams are identical across standard
/// libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static Rng for_replication(std::uint64_t seed, std::uint64_t rep) { return Rng(seed ^ rep); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal.
  double normal();

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lrdustat

#endif  // LRDUSTAT_RNG_HPP
