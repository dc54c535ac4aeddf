#pragma once

#include <cstdint>
#include <random>

namespace critpair {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for trial `trial` at degree `n` of a campaign with `base_seed`.
/// Depends only on its arguments, so results do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t n, std::uint64_t trial) noexcept;

/// Random stream owned by a single trial.
///
/// Uniform variates are produced from the raw 64-bit engine output rather than
/// through std::uniform_real_distribution, whose algorithm is
/// implementation-defined; this keeps samples identical across standard
/// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;

  std::uint64_t raw() noexcept { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace critpair
