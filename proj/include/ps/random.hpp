#pragma once

#include <cstdint>
#include <random>

namespace ps {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of substream `stream` for agent `index` under `master`.
///
///   substream_seed(m, i, s) = splitmix64(splitmix64(m ^ splitmix64(i)) + s)
///
/// This mixing function is part of the reproducibility contract: changing it
/// changes every experiment output.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index,
                                       std::uint64_t stream = 0) noexcept {
  return splitmix64(splitmix64(master ^ splitmix64(index)) + stream);
}

/// Random stream used by agents and environments.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard, and
/// converts words to doubles by hand so that results do not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t uniform_index(std::uint64_t bound) {
    // Lemire's multiply-shift with rejection; exact and portable.
    while (true) {
      const std::uint64_t x = engine_();
      const unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
      const auto low = static_cast<std::uint64_t>(m);
      if (low >= bound || low >= (0 - bound) % bound) {
        return static_cast<std::uint64_t>(m >> 64);
      }
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ps
