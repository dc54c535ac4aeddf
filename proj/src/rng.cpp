#include "critpair/rng.hpp"

namespace critpair {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t n, std::uint64_t trial) noexcept {
  std::uint64_t h = splitmix64(base_seed);
  h = splitmix64(h ^ (n * 0xD1B54A32D192ED03ULL));
  h = splitmix64(h ^ (trial * 0xABC98388FB8FAC03ULL));
  return h;
}

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
  if (bound <= 1) return 0;
  // Rejection sampling keeps the result unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t r = engine_();
  while (r >= limit) r = engine_();
  return r % bound;
}

}  // namespace critpair
