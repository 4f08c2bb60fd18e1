#ifndef MGFWA_RNG_HPP
#define MGFWA_RNG_HPP

#include <cstdint>
#include <stdexcept>

namespace mgfwa {

/// Sampling role. Every consumer of randomness owns one stream so that no
/// two sampling sites can ever collide on a key within the same run.
enum class RngStream : std::uint64_t {
  kInit = 1,     // firework initialization
  kExplode = 2,  // explosion spark offsets
  kMapping = 3,  // out-of-bounds repair of explosion sparks
  kGuide = 4,    // out-of-bounds repair of guiding sparks
  kReinit = 5,   // loser reinitialization
  kWeights = 6,  // black-box weight sampling
};

/// Fully addressed draw: (seed, stream, iteration, b, n, k, d).
/// The value derived from a key is a pure function of the key, independent
/// of scheduling, worker count, or evaluation order.
struct RngKey {
  std::uint64_t seed = 0;
  RngStream stream = RngStream::kInit;
  std::uint64_t iteration = 0;
  std::uint64_t b = 0;  // batch
  std::uint64_t n = 0;  // individual
  std::uint64_t k = 0;  // spark / guide / layer-local index
  std::uint64_t d = 0;  // dimension
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Absorbs the key fields one by one through the mixer. Chained absorption
/// (rather than a flat xor of products) keeps distinct tuples from
/// cancelling each other out.
inline constexpr std::uint64_t key_hash(const RngKey& key) {
  std::uint64_t h = splitmix64(key.seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(key.stream));
  h = splitmix64(h ^ key.iteration);
  h = splitmix64(h ^ key.b);
  h = splitmix64(h ^ key.n);
  h = splitmix64(h ^ key.k);
  h = splitmix64(h ^ key.d);
  return h;
}

/// Uniform draw in [0, 1) with full 53-bit mantissa resolution.
inline constexpr double unit_uniform(const RngKey& key) {
  return static_cast<double>(key_hash(key) >> 11) * 0x1.0p-53;
}

/// Uniform draw in [lo, hi). Degenerate intervals (lo == hi) return lo.
inline double uniform_sample(const RngKey& key, double lo, double hi) {
  if (!(lo <= hi)) {
    throw std::invalid_argument("uniform_sample: lo must be <= hi");
  }
  return lo + unit_uniform(key) * (hi - lo);
}

}  // namespace mgfwa

#endif  // MGFWA_RNG_HPP
